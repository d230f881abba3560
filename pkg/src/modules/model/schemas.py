__all__ = ["MaterialParams", "ManufacturedSolution", "ExactSolution"]

import math
from typing import Protocol

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.modules.fespace.schemas import AnalyticField


class MaterialParams(BaseModel):
    """Coefficients of the dynamic Biot system; C is isotropic (plane strain Lame constants)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rho: float = Field(gt=0)
    "Density"
    alpha: float = Field(gt=0)
    "Biot coupling coefficient"
    c0: float = Field(gt=0)
    "Storage coefficient"
    K: tuple[tuple[float, float], tuple[float, float]]
    "Permeability tensor, symmetric positive definite"
    E: float = Field(gt=0)
    "Young's modulus"
    nu: float = Field(gt=0, lt=0.5)
    "Poisson's ratio"

    @model_validator(mode="after")
    def _check_permeability(self) -> "MaterialParams":
        K = np.asarray(self.K)
        if abs(K[0, 1] - K[1, 0]) > 1e-14 * np.abs(K).max():
            raise ValueError("K must be symmetric")
        if np.linalg.eigvalsh(K).min() <= 0:
            raise ValueError("K must be positive definite")
        return self

    @property
    def mu(self) -> float:
        return self.E / (2.0 * (1.0 + self.nu))

    @property
    def lam(self) -> float:
        return self.E * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))

    @property
    def K_matrix(self) -> np.ndarray:
        return np.asarray(self.K, dtype=float)

    def stress(self, strain: np.ndarray) -> np.ndarray:
        """C eps = 2 mu eps + lambda tr(eps) I for symmetric strains (..., 2, 2)."""
        trace = strain[..., 0, 0] + strain[..., 1, 1]
        return 2.0 * self.mu * strain + self.lam * trace[..., None, None] * np.eye(2)


class ExactSolution(Protocol):
    """Closed-form (u, v, p) used by error norms and projections."""

    def fields(self, x: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]: ...

    def displacement_gradient(self, x: np.ndarray, t: float) -> np.ndarray: ...

    def displacement_field(self, t: float) -> AnalyticField: ...

    def velocity_field(self, t: float) -> AnalyticField: ...

    def pressure_field(self, t: float) -> AnalyticField: ...


class ManufacturedSolution(BaseModel):
    """
    u = phi (1, 1), v = d/dt u, p = phi with phi = sin(omega1 t^2) sin(omega2 x1) sin(omega2 x2).

    All evaluators accept points of shape (..., 2) and a scalar time.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega1: float = math.pi
    omega2: float = math.pi

    # time factor a(t) = sin(omega1 t^2) and its derivatives

    def _a(self, t: float) -> float:
        return math.sin(self.omega1 * t * t)

    def _a_t(self, t: float) -> float:
        return 2.0 * self.omega1 * t * math.cos(self.omega1 * t * t)

    def _a_tt(self, t: float) -> float:
        w = self.omega1
        return 2.0 * w * math.cos(w * t * t) - 4.0 * w * w * t * t * math.sin(w * t * t)

    # space factor S(x) = sin(omega2 x1) sin(omega2 x2) and its derivatives

    def _s(self, x: np.ndarray) -> np.ndarray:
        w = self.omega2
        return np.sin(w * x[..., 0]) * np.sin(w * x[..., 1])

    def _s_grad(self, x: np.ndarray) -> np.ndarray:
        w = self.omega2
        s1, s2 = np.sin(w * x[..., 0]), np.sin(w * x[..., 1])
        c1, c2 = np.cos(w * x[..., 0]), np.cos(w * x[..., 1])
        return np.stack([w * c1 * s2, w * s1 * c2], axis=-1)

    def _s_hessian(self, x: np.ndarray) -> np.ndarray:
        w = self.omega2
        s1, s2 = np.sin(w * x[..., 0]), np.sin(w * x[..., 1])
        c1, c2 = np.cos(w * x[..., 0]), np.cos(w * x[..., 1])
        diagonal = -w * w * s1 * s2
        mixed = w * w * c1 * c2
        return np.stack([np.stack([diagonal, mixed], axis=-1), np.stack([mixed, diagonal], axis=-1)], axis=-2)

    def phi(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a(t) * self._s(x)

    def phi_t(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a_t(t) * self._s(x)

    def phi_tt(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a_tt(t) * self._s(x)

    def grad_phi(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a(t) * self._s_grad(x)

    def grad_phi_t(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a_t(t) * self._s_grad(x)

    def hessian_phi(self, x: np.ndarray, t: float) -> np.ndarray:
        return self._a(t) * self._s_hessian(x)

    def fields(self, x: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        s = self._s(x)
        u = np.repeat((self._a(t) * s)[..., None], 2, axis=-1)
        v = np.repeat((self._a_t(t) * s)[..., None], 2, axis=-1)
        return u, v, self._a(t) * s

    def displacement_gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        grad = self.grad_phi(np.asarray(x, dtype=float), t)
        return np.stack([grad, grad], axis=-2)

    def displacement_field(self, t: float) -> AnalyticField:
        return AnalyticField(
            value=lambda x: self.fields(x, t)[0],
            gradient=lambda x: self.displacement_gradient(x, t),
        )

    def velocity_field(self, t: float) -> AnalyticField:
        def gradient(x: np.ndarray) -> np.ndarray:
            grad = self.grad_phi_t(np.asarray(x, dtype=float), t)
            return np.stack([grad, grad], axis=-2)

        return AnalyticField(value=lambda x: self.fields(x, t)[1], gradient=gradient)

    def pressure_field(self, t: float) -> AnalyticField:
        return AnalyticField(
            value=lambda x: self.phi(np.asarray(x, dtype=float), t),
            gradient=lambda x: self.grad_phi(np.asarray(x, dtype=float), t),
        )
