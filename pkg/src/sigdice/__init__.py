"""sigdice: structure-aware signal similarity.

Signal Dice similarity coefficient (exact and sigmoid-smoothed), its
loss and hybrid-loss forms with analytic gradients, baseline distances
(MSE, MAE, DTW, soft-DTW), perturbation fixtures, paired-sample
statistics, and a table-reconstruction harness with a CLI.
"""

from .errors import (
    ConfigError,
    LengthMismatchError,
    NonFiniteError,
    ParseError,
    SigdiceError,
)
from .gradients import (
    GradientReport,
    finite_difference,
    grad_hybrid,
    grad_mae,
    grad_mse,
    grad_sdsc_loss,
    sensitivity_table,
)
from .metrics import (
    AdaptiveWeights,
    FixedWeights,
    HeavisideMode,
    LossConfig,
    MetricReport,
    PanelConfig,
    dice,
    dtw,
    hybrid_loss,
    mae,
    metric_panel,
    mse,
    sdsc,
    sdsc_loss,
    soft_dtw,
)
from .signals import (
    BaseSignalSpec,
    PerturbationSpec,
    Signal,
    add_noise,
    generate,
    invert,
    jitter,
    load_csv,
    perturb,
    save_csv,
    scale,
    shift,
    zero,
)
from .stats import (
    PairedSample,
    band_stats,
    iqr,
    load_pairs,
    pearson,
    quantile,
    save_pairs,
    sdsc_histogram,
    synthetic_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveWeights",
    "BaseSignalSpec",
    "ConfigError",
    "FixedWeights",
    "GradientReport",
    "HeavisideMode",
    "LengthMismatchError",
    "LossConfig",
    "MetricReport",
    "NonFiniteError",
    "PairedSample",
    "PanelConfig",
    "ParseError",
    "PerturbationSpec",
    "Signal",
    "SigdiceError",
    "add_noise",
    "band_stats",
    "dice",
    "dtw",
    "finite_difference",
    "generate",
    "grad_hybrid",
    "grad_mae",
    "grad_mse",
    "grad_sdsc_loss",
    "hybrid_loss",
    "invert",
    "iqr",
    "jitter",
    "load_csv",
    "load_pairs",
    "mae",
    "metric_panel",
    "mse",
    "pearson",
    "perturb",
    "quantile",
    "save_csv",
    "save_pairs",
    "scale",
    "sdsc",
    "sdsc_histogram",
    "sdsc_loss",
    "sensitivity_table",
    "shift",
    "soft_dtw",
    "synthetic_pairs",
    "zero",
    "__version__",
]
