__all__ = ["SpecialApproximation", "ErrorSplitReport"]

from dataclasses import dataclass

from src.modules.timedisc.trajectory import ContinuousTrajectory, SlabwiseTrajectory


@dataclass(frozen=True, eq=False)
class SpecialApproximation:
    """Pair (w1, w2) approximating (u, du/dt); w1 may jump at slab interfaces, w2 is continuous."""

    w1: SlabwiseTrajectory
    w2: ContinuousTrajectory


@dataclass(frozen=True)
class ErrorSplitReport:
    """L2(L2) norms of the error splitting U - U_tau,h = eta + E, p - p_tau,h = omega + e."""

    eta1: float
    "u - w1"
    eta2: float
    "du/dt - w2"
    E1: float
    "w1 - u_tau,h"
    E2: float
    "w2 - v_tau,h"
    omega: float
    "p - I_tau R_h p"
    e: float
    "I_tau R_h p - p_tau,h"
    reconstruction_defect: float
    "L2(L2) norm of (eta + E) - (U - U_tau,h) summed over u, v, p"
