"""Binary classifiers trained from scratch: linear SVM, logistic regression,
and a 3-10-1 neural network, sharing a standardize/train/predict interface.

Labels are 0 (linear modulation) and 1 (CPFSK) for logistic regression and
the network; the SVM trains on -1/+1.  Scores at exactly the decision
threshold resolve to the linear-modulation side.

All trainers are deterministic functions of (data, config, seed).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Union

import numpy as np


# ---------------------------------------------------------------------------
# Standardization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-score parameters fit on training data only."""

    mean: np.ndarray
    std: np.ndarray

    def transform(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x - self.mean) / self.std


def fit_standardizer(x) -> Standardizer:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("standardizer needs a 2-D array with >= 2 rows")
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1)
    for j, s in enumerate(std):
        if s <= 0.0:
            raise ValueError(f"feature column {j} is constant")
    return Standardizer(mean=mean, std=std)


# ---------------------------------------------------------------------------
# Shared numerics
# ---------------------------------------------------------------------------

def _sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable sigmoid with exact sign symmetry.

    Built so that sigmoid(-z) == 1 - sigmoid(z) bit-for-bit, which makes the
    label-flip symmetry of logistic regression exact in floating point.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    out[~pos] = 1.0 - 1.0 / (1.0 + np.exp(z[~pos]))
    return out


def _check_binary(y: np.ndarray, values: tuple[int, int]) -> None:
    present = set(np.unique(y).tolist())
    if not present <= set(values):
        raise ValueError(f"labels must take values in {values}")
    if len(present) < 2:
        raise ValueError("training data must contain both labels")


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogRegConfig:
    max_iter: int = 10000
    grad_tol: float = 1e-6
    step0: float = 1.0
    backtrack: float = 0.5
    min_step: float = 1e-12


@dataclass
class LogRegModel:
    theta0: float
    theta: np.ndarray
    n_iter: int = 0
    converged: bool = False


def logreg_loglik(x, y, theta0: float, theta) -> float:
    """Log-likelihood sum_i y_i log h + (1-y_i) log(1-h).

    Computed as -sum softplus(s_i z_i) with s_i = 1-2y_i, which is both
    stable and exactly antisymmetric under (y, theta) -> (1-y, -theta).
    """
    x = np.asarray(x, dtype=float)
    z = theta0 + x @ np.asarray(theta, dtype=float)
    s = 1.0 - 2.0 * np.asarray(y, dtype=float)
    return float(-np.sum(np.logaddexp(0.0, s * z)))


def logreg_grad(x, y, theta0: float, theta) -> np.ndarray:
    """Gradient of the log-likelihood w.r.t. (theta0, theta)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = theta0 + x @ np.asarray(theta, dtype=float)
    r = y - _sigmoid(z)
    return np.concatenate(([r.sum()], x.T @ r))


def train_logreg(x, y, config: LogRegConfig = LogRegConfig()) -> LogRegModel:
    """Full-batch gradient ascent with backtracking step control.

    Stops when the gradient max-norm drops to ``grad_tol``, when no step as
    small as ``min_step`` still improves the log-likelihood, or at the
    iteration cap (``converged`` reports which).  The log-likelihood is
    non-decreasing across accepted steps by construction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.shape[0] != y.shape[0] or x.shape[0] < 2:
        raise ValueError("need matching x/y with at least 2 rows")
    _check_binary(y, (0, 1))

    theta = np.zeros(1 + x.shape[1])
    ll = logreg_loglik(x, y, theta[0], theta[1:])
    step = config.step0
    n_iter = 0
    converged = False
    for n_iter in range(1, config.max_iter + 1):
        g = logreg_grad(x, y, theta[0], theta[1:])
        if np.max(np.abs(g)) <= config.grad_tol:
            converged = True
            n_iter -= 1
            break
        # warm-started step: retry the last accepted scale doubled, then
        # backtrack; the log-likelihood never decreases across iterations
        step = min(2.0 * step, config.step0 * 2.0 ** 40)
        improved = False
        while step >= config.min_step:
            cand = theta + step * g
            ll_cand = logreg_loglik(x, y, cand[0], cand[1:])
            if ll_cand > ll:
                theta, ll = cand, ll_cand
                improved = True
                break
            step *= config.backtrack
        if not improved:
            converged = True
            break
    return LogRegModel(theta0=float(theta[0]), theta=theta[1:].copy(),
                       n_iter=n_iter, converged=converged)


# ---------------------------------------------------------------------------
# Linear soft-margin SVM
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SvmConfig:
    # Heavy-tailed fading features need strong violation weighting before
    # the hinge boundary matches the other classifiers at high SNR.
    c: float = 100.0
    max_epochs: int = 10000
    tol: float = 1e-8
    probes: int = 8
    max_probes: int = 512
    probe_seed: int = 0


@dataclass
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    c: float
    n_epochs: int = 0
    converged: bool = False


def svm_objective(x, y, w, b: float, c: float) -> float:
    """Primal objective 0.5*||w||^2 + C * sum hinge(y*(x.w + b))."""
    margins = np.asarray(y, dtype=float) * (np.asarray(x) @ w + b)
    return float(0.5 * w @ w + c * np.sum(np.maximum(0.0, 1.0 - margins)))


def _svm_subgrad(x, y, w, b: float, c: float):
    y = np.asarray(y, dtype=float)
    margins = y * (x @ w + b)
    active = margins < 1.0
    ya = y[active]
    gw = w - c * (ya @ x[active])
    gb = -c * ya.sum()
    return gw, gb


def _svm_exact_line_min(m, d, a1: float, a2: float, c: float) -> float:
    """argmin over eta of the objective along one direction.

    Along a direction the objective is convex piecewise quadratic: the
    regularizer contributes a1*eta + a2*eta^2/2; each sample's hinge is
    active while m_i + eta*d_i < 1.  Crossing a breakpoint in increasing
    eta raises the slope by c*|d_i|, so the minimizer is the single
    segment whose quadratic root falls inside it (or a breakpoint where
    the slope changes sign when a2 = 0).
    """
    nz = d != 0.0
    if not nz.any():
        return -a1 / a2 if a2 > 0 else 0.0
    dd = d[nz]
    etas = (1.0 - m[nz]) / dd
    order = np.argsort(etas)
    etas = etas[order]
    dd = dd[order]
    s0 = dd[dd > 0].sum()
    s = np.concatenate(([s0], s0 - np.cumsum(np.abs(dd))))
    lo = np.concatenate(([-np.inf], etas))
    hi = np.concatenate((etas, [np.inf]))
    if a2 > 0:
        roots = (c * s - a1) / a2
        ok = (roots >= lo) & (roots <= hi)
        idx = int(np.argmax(ok))
        if ok[idx]:
            return float(roots[idx])
        # No segment contains its own root: the slope changes sign across a
        # breakpoint, which is then the exact minimizer.
        start_slope = a1 + a2 * lo - c * s
        start_slope[0] = -np.inf  # slope at eta -> -inf
        non_negative = start_slope >= 0
        if not non_negative.any():
            return float(etas[-1])
        k = int(np.argmax(non_negative))
        return float(lo[k]) if k > 0 else 0.0
    non_negative = a1 - c * s >= 0
    if not non_negative.any():
        return float(etas[-1])
    k = int(np.argmax(non_negative))
    return float(lo[k]) if k > 0 else 0.0


def train_svm(x, y, config: SvmConfig = SvmConfig()) -> LinearSvmModel:
    """Primal descent with exact line searches on the hinge objective.

    Each epoch line-searches (exactly, via the piecewise-quadratic
    structure) along the negative subgradient, the coordinate axes, and a
    seeded batch of random probe directions, accepting every improvement,
    so the objective is monotone non-increasing across epochs.  Plain
    subgradient steps stall on the hinge kinks; at a non-optimal kink a
    convex objective still improves along a positive fraction of random
    directions, so failed passes escalate the probe count before training
    stops with an objective decrease below ``tol`` (or at the epoch cap).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.shape[0] != y.shape[0] or x.shape[0] < 2:
        raise ValueError("need matching x/y with at least 2 rows")
    _check_binary(y, (-1, 1))

    dims = x.shape[1]
    yf = y.astype(float)
    w = np.zeros(dims)
    b = 0.0
    scores = np.zeros(x.shape[0])  # x @ w + b, maintained incrementally
    obj = svm_objective(x, y, w, b, config.c)
    rng = np.random.default_rng(config.probe_seed)
    probes = config.probes
    n_epochs = 0
    converged = False
    eye = np.eye(dims)
    for n_epochs in range(1, config.max_epochs + 1):
        start_obj = obj
        margins = yf * scores
        active = margins < 1.0
        gw = w - config.c * (yf[active] @ x[active])
        gb = -config.c * yf[active].sum()
        directions = [(-gw, -gb)]
        directions += [(eye[j], 0.0) for j in range(dims)]
        directions += [(np.zeros(dims), 1.0)]
        if probes:
            rnd = rng.standard_normal((probes, dims + 1))
            directions += [(r[:dims], float(r[dims])) for r in rnd]
        for dw, db in directions:
            if dw @ dw + db * db == 0.0:
                continue
            dscore = x @ dw + db
            eta = _svm_exact_line_min(yf * scores, yf * dscore,
                                      float(w @ dw), float(dw @ dw),
                                      config.c)
            if not np.isfinite(eta) or eta == 0.0:
                continue
            cand_scores = scores + eta * dscore
            cand_w = w + eta * dw
            hinge = np.maximum(0.0, 1.0 - yf * cand_scores).sum()
            cand_obj = 0.5 * cand_w @ cand_w + config.c * hinge
            if cand_obj < obj:
                w, b = cand_w, b + eta * db
                scores, obj = cand_scores, cand_obj
                if start_obj - obj > 1e-3 * (1.0 + abs(start_obj)):
                    break  # good progress; restart the pass from here
        if start_obj - obj < config.tol:
            if probes < config.max_probes:
                probes = max(8 * probes, 8)
                continue
            converged = True
            break
        probes = config.probes
    return LinearSvmModel(weights=w, bias=float(b), c=config.c,
                          n_epochs=n_epochs, converged=converged)


# ---------------------------------------------------------------------------
# 3-10-1 neural network
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MlpConfig:
    hidden: int = 10
    learning_rate: float = 0.05
    lr_decay: float = 1.0
    batch_size: int = 32
    epochs: int = 200
    val_fraction: float = 0.1
    seed: int = 0


@dataclass
class MlpModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    activation: str = "tanh"
    best_epoch: int = 0
    val_loss: float = float("nan")


def mlp_init(n_inputs: int, config: MlpConfig,
             rng: np.random.Generator) -> tuple:
    """Symmetric-uniform init scaled by fan-in; biases start at zero."""
    lim1 = 1.0 / np.sqrt(n_inputs)
    lim2 = 1.0 / np.sqrt(config.hidden)
    w1 = rng.uniform(-lim1, lim1, size=(config.hidden, n_inputs))
    b1 = np.zeros(config.hidden)
    w2 = rng.uniform(-lim2, lim2, size=config.hidden)
    b2 = 0.0
    return w1, b1, w2, b2


def mlp_forward(params: tuple, x) -> np.ndarray:
    w1, b1, w2, b2 = params
    a1 = np.tanh(np.asarray(x, dtype=float) @ w1.T + b1)
    return _sigmoid(a1 @ w2 + b2)


def mlp_loss_and_grads(params: tuple, x, y) -> tuple[float, tuple]:
    """Mean binary cross-entropy and its gradients by backpropagation."""
    w1, b1, w2, b2 = params
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]

    z1 = x @ w1.T + b1
    a1 = np.tanh(z1)
    z2 = a1 @ w2 + b2
    # mean BCE: mean(softplus(z2) - y*z2)
    loss = float(np.mean(np.logaddexp(0.0, z2) - y * z2))

    dz2 = (_sigmoid(z2) - y) / n
    gw2 = a1.T @ dz2
    gb2 = float(dz2.sum())
    dz1 = np.outer(dz2, w2) * (1.0 - a1 ** 2)
    gw1 = dz1.T @ x
    gb1 = dz1.sum(axis=0)
    return loss, (gw1, gb1, gw2, gb2)


def train_mlp(x, y, config: MlpConfig = MlpConfig()) -> MlpModel:
    """Mini-batch gradient descent on the cross-entropy.

    A validation split (seeded, from the config) selects the epoch with the
    lowest validation loss; the returned parameters are from that epoch.
    With ``val_fraction`` 0 the final parameters are returned.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.shape[0] != y.shape[0] or x.shape[0] < 2:
        raise ValueError("need matching x/y with at least 2 rows")
    _check_binary(y, (0, 1))

    rng = np.random.default_rng(config.seed)
    n = x.shape[0]
    perm = rng.permutation(n)
    n_val = int(round(config.val_fraction * n))
    n_val = min(n_val, n - 2)
    val_idx, train_idx = perm[:n_val], perm[n_val:]
    xt, yt = x[train_idx], y[train_idx].astype(float)
    params = mlp_init(x.shape[1], config, rng)

    best = tuple(np.copy(p) if isinstance(p, np.ndarray) else p
                 for p in params)
    best_loss = np.inf
    best_epoch = 0
    n_train = xt.shape[0]
    for epoch in range(1, config.epochs + 1):
        lr = config.learning_rate * config.lr_decay ** (epoch - 1)
        order = rng.permutation(n_train)
        for start in range(0, n_train, config.batch_size):
            batch = order[start:start + config.batch_size]
            _, grads = mlp_loss_and_grads(params, xt[batch], yt[batch])
            params = tuple(p - lr * g for p, g in zip(params, grads))
        if n_val > 0:
            val_loss, _ = mlp_loss_and_grads(params, x[val_idx],
                                             y[val_idx].astype(float))
            if val_loss < best_loss:
                best_loss = val_loss
                best_epoch = epoch
                best = tuple(np.copy(p) if isinstance(p, np.ndarray) else p
                             for p in params)
    if n_val == 0:
        best = params
        best_epoch = config.epochs
        best_loss = float("nan")
    w1, b1, w2, b2 = best
    return MlpModel(w1=w1, b1=b1, w2=w2, b2=float(b2),
                    best_epoch=best_epoch, val_loss=float(best_loss))


# ---------------------------------------------------------------------------
# Prediction and scoring
# ---------------------------------------------------------------------------

Model = Union[LogRegModel, LinearSvmModel, MlpModel]


def predict(model: Model, x):
    """(label, score) for standardized input(s).

    Logistic regression and the network threshold the sigmoid output at
    0.5; the SVM thresholds the affine score at 0 and labels in -1/+1.
    Exact threshold values fall to the linear-modulation side (0 or -1).
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("prediction input must be finite")
    single = x.ndim == 1
    xm = np.atleast_2d(x)

    if isinstance(model, LogRegModel):
        score = _sigmoid(model.theta0 + xm @ model.theta)
        label = (score > 0.5).astype(int)
    elif isinstance(model, LinearSvmModel):
        score = xm @ model.weights + model.bias
        label = np.where(score > 0.0, 1, -1)
    elif isinstance(model, MlpModel):
        score = mlp_forward((model.w1, model.b1, model.w2, model.b2), xm)
        label = (score > 0.5).astype(int)
    else:
        raise TypeError(f"unknown model type {type(model).__name__}")

    if single:
        return int(label[0]), float(score[0])
    return label, score


def accuracy(predictions, labels) -> float:
    """Exact fraction of matching entries."""
    p = np.asarray(predictions)
    t = np.asarray(labels)
    if p.shape != t.shape:
        raise ValueError("predictions and labels must have the same length")
    if p.size == 0:
        raise ValueError("cannot score empty predictions")
    return float(np.mean(p == t))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_KIND_TO_CONFIG = {"SVM": SvmConfig, "LR": LogRegConfig, "NN": MlpConfig}


@dataclass
class TrainedClassifier:
    """A trained model bundled with its input standardizer.

    ``predict`` takes raw (unstandardized) feature rows and returns labels
    in {0, 1} regardless of the underlying model's internal label set.
    """

    kind: str  # "SVM", "LR" or "NN"
    model: Model
    standardizer: Standardizer
    config: object
    seed: int | None = None
    metadata: dict = field(default_factory=dict)

    def predict(self, x_raw):
        z = self.standardizer.transform(x_raw)
        label, score = predict(self.model, z)
        if self.kind == "SVM":
            label = (np.asarray(label) > 0).astype(int)
            if np.ndim(score) == 0:
                label = int(label)
        return label, score


def _model_parameters(kind: str, model: Model) -> dict:
    if kind == "LR":
        return {"theta0": model.theta0, "theta": model.theta.tolist(),
                "n_iter": model.n_iter, "converged": model.converged}
    if kind == "SVM":
        return {"weights": model.weights.tolist(), "bias": model.bias,
                "c": model.c, "n_epochs": model.n_epochs,
                "converged": model.converged}
    if kind == "NN":
        return {"w1": model.w1.tolist(), "b1": model.b1.tolist(),
                "w2": model.w2.tolist(), "b2": model.b2,
                "activation": model.activation,
                "best_epoch": model.best_epoch, "val_loss": model.val_loss}
    raise ValueError(f"unknown classifier kind {kind!r}")


def _model_from_parameters(kind: str, p: dict) -> Model:
    if kind == "LR":
        return LogRegModel(theta0=p["theta0"], theta=np.asarray(p["theta"]),
                           n_iter=p.get("n_iter", 0),
                           converged=p.get("converged", False))
    if kind == "SVM":
        return LinearSvmModel(weights=np.asarray(p["weights"]),
                              bias=p["bias"], c=p["c"],
                              n_epochs=p.get("n_epochs", 0),
                              converged=p.get("converged", False))
    if kind == "NN":
        return MlpModel(w1=np.asarray(p["w1"]), b1=np.asarray(p["b1"]),
                        w2=np.asarray(p["w2"]), b2=p["b2"],
                        activation=p.get("activation", "tanh"),
                        best_epoch=p.get("best_epoch", 0),
                        val_loss=p.get("val_loss", float("nan")))
    raise ValueError(f"unknown classifier kind {kind!r}")


def save_model(path, trained: TrainedClassifier) -> None:
    doc = {
        "model_type": trained.kind,
        "standardizer": {"mean": trained.standardizer.mean.tolist(),
                         "std": trained.standardizer.std.tolist()},
        "parameters": _model_parameters(trained.kind, trained.model),
        "config": asdict(trained.config),
        "seed": trained.seed,
        "metadata": trained.metadata,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> TrainedClassifier:
    with open(path) as fh:
        doc = json.load(fh)
    kind = doc["model_type"]
    if kind not in _KIND_TO_CONFIG:
        raise ValueError(f"unknown model type {kind!r} in {path}")
    standardizer = Standardizer(
        mean=np.asarray(doc["standardizer"]["mean"], dtype=float),
        std=np.asarray(doc["standardizer"]["std"], dtype=float))
    config = _KIND_TO_CONFIG[kind](**doc["config"])
    model = _model_from_parameters(kind, doc["parameters"])
    return TrainedClassifier(kind=kind, model=model,
                             standardizer=standardizer, config=config,
                             seed=doc.get("seed"),
                             metadata=doc.get("metadata", {}))
