__all__ = ["lagrange_polynomials", "slab_basis", "legendre_test_basis"]

import functools

import numpy as np
from numpy.polynomial import Legendre, Polynomial

from src.exceptions import InvalidArgument
from src.modules.timedisc.quadrature import gauss_lobatto
from src.modules.timedisc.schemas import SlabBasis


def lagrange_polynomials(nodes: np.ndarray) -> tuple[Polynomial, ...]:
    """Lagrange basis polynomials with L_j(nodes[i]) = delta_ij."""
    polynomials = []
    for j, node in enumerate(nodes):
        others = np.delete(nodes, j)
        polynomials.append(Polynomial.fromroots(others) / np.prod(node - others))
    return tuple(polynomials)


def legendre_test_basis(degree: int) -> tuple[Polynomial, ...]:
    """Legendre polynomials P_0, ..., P_degree on [-1, 1] in power form."""
    return tuple(Legendre.basis(m).convert(kind=Polynomial) for m in range(degree + 1))


@functools.cache
def slab_basis(k: int) -> SlabBasis:
    if k < 1:
        raise InvalidArgument(f"Temporal degree must be at least 1, got {k}")
    nodes = gauss_lobatto(k).nodes
    trial = lagrange_polynomials(nodes)
    test = legendre_test_basis(k - 1)
    derivative_table = np.column_stack([p.deriv()(nodes) for p in trial])
    integral_table = np.column_stack([p.integ(lbnd=-1.0)(nodes) for p in trial])
    return SlabBasis(
        k=k,
        nodes=nodes,
        trial=trial,
        test=test,
        derivative_table=derivative_table,
        integral_table=integral_table,
    )
