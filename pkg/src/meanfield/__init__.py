"""Mean-field activations, small analytic-backprop networks and Hessian spectra."""
from .activations import (
    ActivationKind,
    NoiseParam,
    activate,
    activate_dbeta,
    activate_dh,
    expected_gate,
    limit_check,
    log_partition,
)
from .config import RunConfig
from .datasets import Dataset, gen_linear, gen_nonlinear, load_digits_csv, split
from .losses import bce_loss, bernoulli_nll_oracle, residual_report, saddle_point_lambda
from .network import (
    Network,
    backward,
    column_normalize,
    flatten_params,
    forward,
    init_network,
    predict_accuracy,
    unflatten_params,
)
from .spectrum import SpectrumReport, eig_histogram, eigenvalues_symmetric, hessian_fd, spectral_indices
from .training import adam_step, compare_runs, train_run

__version__ = "0.1.0"
