"""Finite-dimensional numerics for relative entropy, hypothesis testing and quantum channel recovery."""

__version__ = "0.1.0"

from . import divergences, hypothesis, linalg, quantum, recovery
from .divergences import (
    QuadratureSpec,
    d_max,
    divergence_report,
    frenkel_integrand,
    relative_entropy_integral,
    relative_entropy_spectral,
)
from .errors import QsuffError
from .hypothesis import (
    bayes_error_of_test,
    check_dpi_pointwise,
    default_grid,
    deficiency_epsilon,
    optimal_bayes_error,
    optimal_test,
    sweep_curves,
)
from .quantum import (
    ChoiMatrix,
    QuantumChannel,
    apply_adjoint,
    apply_channel,
    apply_via_choi,
    channel_compose,
    fidelity,
    kraus_to_choi,
)
from .recovery import (
    cocycles,
    petz_map,
    recovery_report,
    rotated_petz,
    sufficiency_report,
    universal_recovery,
)
