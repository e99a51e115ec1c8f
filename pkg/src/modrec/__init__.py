"""Lag-product modulation recognition toolkit.

Synthesizes RRC-shaped linear (PSK/QAM) and continuous-phase FSK baseband
signals under block fading, carrier offset, timing asynchrony and AWGN;
extracts three lag-product features; trains linear SVM, logistic regression
and a small neural network from scratch; and verifies the feature statistics
against closed-form expressions.
"""

from .channel import (ChannelParams, SnrSpec, apply_channel, draw_channel,
                      measure_snr)
from .classifiers import (LinearSvmModel, LogRegConfig, LogRegModel,
                          MlpConfig, MlpModel, Standardizer, SvmConfig,
                          TrainedClassifier, accuracy, fit_standardizer,
                          load_model, predict, save_model, train_logreg,
                          train_mlp, train_svm)
from .features import (FeatureVector, extract_features, feature_matrix,
                       lag_product, read_features_csv, shift_center,
                       write_features_csv)
from .harness import (ALL_MODULATIONS, CPFSK_MODULATIONS, ExperimentConfig,
                      LINEAR_MODULATIONS, PRESETS, RealizationParams,
                      SweepResult, SweepRow, generate_dataset,
                      make_realization, preset_config, realization_seed,
                      run_sweep, train_classifier)
from .iqio import export_realization, read_iq, read_sidecar, write_iq
from .oracle import (ConstellationMoments, OracleCheckRow, PulseCorrSums,
                     constellation_moments, mean_im_bfsk, mean_im_linear,
                     pulse_corr_sums, q_integral, run_oracle_checks,
                     time_average_prediction, var_im_bfsk, var_im_bpsk,
                     var_im_qampsk, write_oracle_report)
from .waveform import (CpfskScheme, LinearScheme, RrcPulse, SymbolTiming,
                       cpfsk_scheme, draw_symbols, draw_tones, linear_scheme,
                       modulate_cpfsk, modulate_linear, modulation_index,
                       rrc_eval)

__version__ = "0.1.0"
