__all__ = ["build_time_mesh"]

import numpy as np

from src.exceptions import InvalidArgument
from src.modules.timedisc.schemas import TimeMesh

DIVISION_TOLERANCE = 1e-9


def build_time_mesh(T: float, tau0: float, level: int = 0) -> TimeMesh:
    if T <= 0 or tau0 <= 0:
        raise InvalidArgument(f"T and tau0 must be positive, got T={T}, tau0={tau0}")
    if level < 0:
        raise InvalidArgument(f"Refinement level must be non-negative, got {level}")
    tau = tau0 / 2**level
    n_slabs_exact = T / tau
    n_slabs = round(n_slabs_exact)
    if n_slabs < 1 or abs(n_slabs_exact - n_slabs) > DIVISION_TOLERANCE * n_slabs_exact:
        raise InvalidArgument(f"T / tau = {n_slabs_exact} is not an integer (T={T}, tau={tau})")
    points = np.linspace(0.0, T, n_slabs + 1)
    # Uniform slabs share one length so the slab matrix is reused bit for bit
    tau_n = np.full(n_slabs, T / n_slabs)
    points.setflags(write=False)
    tau_n.setflags(write=False)
    return TimeMesh(T=T, points=points, tau_n=tau_n)
