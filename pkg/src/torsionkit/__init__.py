"""Metric connections with parallel torsion: finite-dimensional models.

Modules: ``exterior`` (forms), ``torsion`` (T1/T2/T3 split), ``lie``
(metric Lie algebras), ``tau`` (3-forms inducing Lie brackets),
``symmetric`` (type II/IV pairs), ``warped`` (frame checks on ``N x R``),
``io`` and ``cli``.
"""

from .exterior import KForm, wedge, contract, derivation_action, four_form_sum
from .torsion import TorsionTensor, decompose, classify_type
from .lie import MetricLieAlgebra, canonical_three_form, killing_form, identify_type
from .tau import classify_bricks, lie_from_tau, tau_jacobi_defect

__version__ = "0.1.0"

__all__ = ["KForm", "wedge", "contract", "derivation_action", "four_form_sum",
           "TorsionTensor", "decompose", "classify_type", "MetricLieAlgebra",
           "canonical_three_form", "killing_form", "identify_type", "classify_bricks",
           "lie_from_tau", "tau_jacobi_defect"]
