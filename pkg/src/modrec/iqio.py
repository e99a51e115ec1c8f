"""Raw IQ export: binary sample file plus a JSON sidecar of the draws.

File layout (little-endian):

    bytes 0-3   magic "MRIQ"
    bytes 4-5   format version, u16 (currently 1)
    bytes 6-7   reserved, u16 (zero)
    bytes 8-15  sample count, u64
    then        interleaved float32 real/imaginary pairs

The sidecar (written next to the sample file as ``<name>.json``) records
every per-realization draw, so the stored seed regenerates the exact same
samples through the pipeline.
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .harness import RealizationParams

MAGIC = b"MRIQ"
VERSION = 1
_HEADER = struct.Struct("<4sHHQ")


def write_iq(path, samples) -> None:
    samples = np.asarray(samples, dtype=np.complex128)
    interleaved = np.empty(2 * samples.size, dtype="<f4")
    interleaved[0::2] = samples.real
    interleaved[1::2] = samples.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, 0, samples.size))
        fh.write(interleaved.tobytes())


def read_iq(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, _, count = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        payload = np.frombuffer(fh.read(), dtype="<f4")
    if payload.size != 2 * count:
        raise ValueError(f"{path}: sample count {count} does not match "
                         f"payload of {payload.size} floats")
    return payload[0::2].astype(np.complex128) + 1j * payload[1::2]


def sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def write_sidecar(path, info: RealizationParams) -> None:
    with open(sidecar_path(path), "w") as fh:
        json.dump(asdict(info), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sidecar(path) -> RealizationParams:
    with open(sidecar_path(path)) as fh:
        return RealizationParams(**json.load(fh))


def export_realization(path, samples, info: RealizationParams) -> None:
    """Write the sample file and its metadata sidecar."""
    write_iq(path, samples)
    write_sidecar(path, info)
