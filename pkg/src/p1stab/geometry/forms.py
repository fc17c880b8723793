"""Positive hermitian forms on the section space H^0(E(k)).

Matrices are stored against the fixed reference basis of sections (the
monomial basis in canonical order).  The form space is a symmetric space;
geodesics between forms are matrix power interpolations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HermitianForm:
    matrix: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("hermitian form must be a square matrix")
        scale = max(np.abs(m).max(), 1.0)
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * scale:
            raise ValueError("matrix is not hermitian within tolerance")
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "matrix", m)
        try:
            chol = np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise ValueError("hermitian form is not positive definite") from exc
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def cholesky(self) -> np.ndarray:
        return self._chol

    def inverse(self) -> np.ndarray:
        ident = np.eye(self.dim, dtype=complex)
        y = np.linalg.solve(self._chol, ident)
        return y.conj().T @ y

    def inverse_factor(self) -> np.ndarray:
        """C with H^{-1} = C C*; metric formulas built from C stay accurate
        at the square root of the condition number of H."""
        return np.linalg.inv(self._chol).conj().T

    def orthonormal_basis(self) -> np.ndarray:
        """Columns B with B* H B = Id (an H-orthonormal basis)."""
        return np.linalg.inv(self._chol.conj().T)

    def scaled(self, factor: float) -> "HermitianForm":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return HermitianForm(self.matrix * factor)

    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.abs(np.diag(self._chol)))))

    @staticmethod
    def identity(n: int) -> "HermitianForm":
        return HermitianForm(np.eye(n, dtype=complex))

    @staticmethod
    def random(n: int, rng: np.random.Generator, spread: float = 0.6) -> "HermitianForm":
        """Well-conditioned random positive form for experiments."""
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = np.eye(n) + spread * (a @ a.conj().T) / n
        return HermitianForm(m)


class FormGeodesic:
    """Geodesic s -> H_s in the form space with H_0 = h0, H_1 = h1.

    Exposes the factored inverse K_s = H_s^{-1} = C_s C_s* together with the
    diagonal rate r: d/ds K_s = C_s diag(r) C_s*; downstream formulas work
    with C_s to avoid squaring condition numbers.
    """

    def __init__(self, h0: HermitianForm, h1: HermitianForm):
        cinv = np.linalg.inv(h0.cholesky)
        middle = cinv @ h1.matrix @ cinv.conj().T
        lam, v = np.linalg.eigh(0.5 * (middle + middle.conj().T))
        if lam.min() <= 0:
            raise ValueError("form geodesic requires positive definite endpoints")
        self.loglam = np.log(lam)
        self.left = cinv.conj().T @ v

    def inverse_factor(self, s: float) -> np.ndarray:
        return self.left * np.exp(-0.5 * float(s) * self.loglam)

    @property
    def rate_diagonal(self) -> np.ndarray:
        return -self.loglam


def form_geodesic(h0: HermitianForm, h1: HermitianForm) -> FormGeodesic:
    return FormGeodesic(h0, h1)
