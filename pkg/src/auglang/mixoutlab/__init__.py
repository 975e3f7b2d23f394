"""Numerical lab for mixout regularization and tangent-kernel regression."""

from .krr import krr_predict, krr_solve
from .linearized import (
    LinearFeatureModel,
    PairedTanhHead,
    finite_difference_features,
    ntk_features,
    ntk_gram,
    zero_init_head,
)
from .mixture import (
    IdentityCheck,
    MixoutConfig,
    ParamVector,
    apply_mixout,
    expected_quadratic_mixout_loss,
    expected_separable_mixout_loss,
    monte_carlo_mixout_loss,
    quadratic_identity_check,
    quadratic_loss,
    sample_masks,
)
from .training import (
    GdResult,
    ProbeResult,
    ProbeRow,
    noise_robustness_probe,
    ones_mask_params,
    predict_linearized,
    train_linearized_ridge,
    train_mixout_stochastic,
)
from .verify import Check, run_verification

__all__ = [
    "Check",
    "GdResult",
    "IdentityCheck",
    "LinearFeatureModel",
    "MixoutConfig",
    "PairedTanhHead",
    "ParamVector",
    "ProbeResult",
    "ProbeRow",
    "apply_mixout",
    "expected_quadratic_mixout_loss",
    "expected_separable_mixout_loss",
    "finite_difference_features",
    "krr_predict",
    "krr_solve",
    "monte_carlo_mixout_loss",
    "noise_robustness_probe",
    "ntk_features",
    "ntk_gram",
    "ones_mask_params",
    "predict_linearized",
    "quadratic_identity_check",
    "quadratic_loss",
    "run_verification",
    "sample_masks",
    "train_linearized_ridge",
    "train_mixout_stochastic",
    "zero_init_head",
]
