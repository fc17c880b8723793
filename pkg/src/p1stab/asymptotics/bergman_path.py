"""One-parameter subgroups of hermitian forms generated by a filtration.

The generator is the hermitian matrix with the filtration's weights on an
orthonormal basis adapted to the weight subspaces (Gram-Schmidt in
filtration order, which preserves the flag).  The path of forms is

    H_t = e^{zeta_eff t} H_0 e^{zeta_eff t},   zeta_eff = sign * U w U*.

`sign = -1` is the calibrated default: the construction of Fubini-Study
metrics from forms acts on the dual of the section space, so running the
form path in the dual direction makes the energy slope match the
non-Archimedean functional including its sign (the destabilizing two-step
on O(1)+O(-1) must fit slope -2).  The sign is recorded in run manifests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra.filtrations import WeightedFiltration
from ..geometry.forms import HermitianForm

CALIBRATION_SIGN = -1


@dataclass(frozen=True)
class BergmanOneParameterSubgroup:
    filtration: WeightedFiltration
    base_form: HermitianForm
    sign: int = CALIBRATION_SIGN
    adapted_basis: np.ndarray = field(init=False, repr=False)
    column_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        filt = self.filtration
        n = filt.space.dimension
        if self.base_form.dim != n:
            raise ValueError("base form dimension must match dim H0(E(k))")
        cols = []
        wcol = []
        for w, basis in zip(filt.weights, filt.subspaces):
            for vec in basis:
                cols.append([float(c) for c in vec])
                wcol.append(float(w))
        b = np.array(cols, dtype=complex).T  # columns in filtration order
        q, r = np.linalg.qr(b)
        if np.abs(np.diag(r)).min() < 1e-10:
            raise ValueError("weight subspace bases are numerically degenerate")
        object.__setattr__(self, "adapted_basis", q)
        object.__setattr__(self, "column_weights", np.array(wcol))

    @property
    def weight_gaps(self) -> np.ndarray:
        w = [float(x) for x in self.filtration.weights]
        return np.array([w[i] - w[i + 1] for i in range(len(w) - 1)])

    def generator(self) -> np.ndarray:
        """zeta_eff = sign * U diag(w) U*, the hermitian path generator."""
        u = self.adapted_basis
        return self.sign * (u * self.column_weights) @ u.conj().T

    def gauge_at(self, t: float) -> np.ndarray:
        """e^{zeta_eff t}."""
        u = self.adapted_basis
        return (u * np.exp(self.sign * self.column_weights * float(t))) @ u.conj().T

    def form_at(self, t: float) -> HermitianForm:
        e = self.gauge_at(t)
        return HermitianForm(e @ self.base_form.matrix @ e)

    def log_det_drift(self, t: float) -> float:
        """log det H_t - log det H_0; zero for all t iff traceless weights."""
        return 2.0 * float(t) * self.sign * float(
            np.sum(self.column_weights)
        )
