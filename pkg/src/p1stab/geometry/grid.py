"""Quadrature on the Riemann sphere against the unit-volume round form.

Chart points are z = tan(rho/2) e^{i theta} with Gauss-Legendre nodes in
rho on (0, pi) and a uniform rule in theta.  The area form is
omega = (i/2pi) dz dz-bar / (1+|z|^2)^2 = sin(rho)/(4pi) drho dtheta,
normalized to total volume 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class QuadratureGrid:
    n_rho: int
    n_theta: int
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    rho: np.ndarray = field(init=False, repr=False)
    theta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_rho < 1 or self.n_theta < 1:
            raise ValueError("grid sizes must be positive")
        x, w = np.polynomial.legendre.leggauss(self.n_rho)
        rho = 0.5 * np.pi * (x + 1.0)
        w_rho = 0.5 * np.pi * w
        theta = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        rr, tt = np.meshgrid(rho, theta, indexing="ij")
        ww = np.broadcast_to((w_rho * np.sin(rho) / (2.0 * self.n_theta))[:, None], rr.shape)
        z = np.tan(rr / 2.0) * np.exp(1j * tt)
        object.__setattr__(self, "rho", rr.ravel())
        object.__setattr__(self, "theta", tt.ravel())
        object.__setattr__(self, "nodes", z.ravel())
        object.__setattr__(self, "weights", np.ascontiguousarray(ww.ravel()))

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> float | complex:
        """Integral against omega of a scalar sampled on the nodes."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def form_factor(self) -> np.ndarray:
        """(1+|z|^2)^2 per node: converts (i/2pi) dz dz-bar densities to omega."""
        return (1.0 + np.abs(self.nodes) ** 2) ** 2

    def interior_mask(self, radius: float = 0.9) -> np.ndarray:
        """Nodes with chart radius below `radius` (bounded away from infinity)."""
        return np.abs(self.nodes) <= radius
