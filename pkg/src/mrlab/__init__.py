"""Numerical laboratory for weighted Hardy operators, interpolation norms and
maximal regularity of concrete analytic semigroups."""

from .quadrature import QuadratureSpec, InvalidSpecError
from .weightlab import (
    ConditionReport,
    DomainError,
    FunctionOnHalfLine,
    bound_P_L1,
    bound_P_Linf,
    bound_Q_L1,
    bound_Q_Linf,
    calderon_bound_L1,
    calderon_bound_Linf,
    stieltjes,
)
from .calculus import (
    DiagonalOperator,
    GridField,
    HeatModel,
    PsiSymbol,
    RadialHeatModel,
    RadialProfile,
    radial_lp_norm,
)
from .interpnorms import KCurve, LebesgueParameter, homogeneous_seminorm, psi_seminorm
from .besov import BesovSpec, LPFilterBank, besov_norm, thermic_norm
from .mrtest import MRReport, TimeSampledPath, divergence_fit, kp_l1_test, solution_operator

__version__ = "0.1.0"
