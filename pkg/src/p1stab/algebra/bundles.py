"""Split bundles over the Riemann sphere and their section spaces.

A split bundle is a direct sum of line bundles O(a_1) (+) ... (+) O(a_r).
Sections of the k-th twist are spanned by monomials x^p y^q with
p + q = a_i + k on each factor; in the affine chart x = z, y = 1 they
evaluate to z^p on the corresponding component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from ..errors import TwistTooSmall
from .exactla import Poly, Vec, frac, pmonomial


@dataclass(frozen=True)
class SplitBundle:
    """Direct sum of line bundles over P^1, recorded by its degree list."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.degrees:
            raise ValueError("a bundle needs at least one summand")
        object.__setattr__(self, "degrees", tuple(int(a) for a in self.degrees))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    @property
    def regularity(self) -> int:
        """Smallest k with H^1(E(k-1)) = 0; global generation holds beyond it."""
        return -min(self.degrees)

    def sub_bundle(self, indices) -> "SplitBundle":
        return SplitBundle(tuple(self.degrees[i] for i in indices))

    def __str__(self):
        return "O(" + ")+O(".join(str(a) for a in self.degrees) + ")"


def h0_dimension(bundle: SplitBundle, k: int) -> int:
    """dim H^0(E(k)) = sum_i max(a_i + k + 1, 0)."""
    return sum(max(a + k + 1, 0) for a in bundle.degrees)


def hilbert_value(bundle: SplitBundle, k: int) -> int:
    """Hilbert polynomial rk*(k+1) + deg; equals h0 for k >= regularity."""
    return bundle.rank * (k + 1) + bundle.degree


@dataclass(frozen=True)
class MonomialSection:
    """Monomial x^p y^q on factor `factor`, with p + q = a_factor + k."""

    factor: int
    p: int
    q: int


@dataclass(frozen=True)
class SectionSpace:
    """H^0(E(k)) with its monomial basis and chart evaluation machinery.

    Basis order is canonical: factor-major, then descending power of x.
    """

    bundle: SplitBundle
    twist: int
    basis: tuple[MonomialSection, ...] = field(init=False)

    def __post_init__(self):
        if self.twist < self.bundle.regularity:
            raise TwistTooSmall(
                f"k={self.twist} below regularity {self.bundle.regularity} of {self.bundle}"
            )
        basis = []
        for i, a in enumerate(self.bundle.degrees):
            d = a + self.twist
            for p in range(d, -1, -1):
                basis.append(MonomialSection(i, p, d - p))
        object.__setattr__(self, "basis", tuple(basis))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def factor_degrees(self) -> tuple[int, ...]:
        return tuple(a + self.twist for a in self.bundle.degrees)

    # -- exact evaluation ----------------------------------------------------

    def evaluation_matrix(self, z: Fraction) -> list[Vec]:
        """r x N evaluation matrix A(z) in the chart x = z, y = 1."""
        z = frac(z)
        rows = [[Fraction(0)] * self.dimension for _ in range(self.bundle.rank)]
        for col, mono in enumerate(self.basis):
            rows[mono.factor][col] = z**mono.p
        return rows

    def evaluation_polys(self) -> list[list[Poly]]:
        """A(z) as an r x N matrix of exact polynomials in z."""
        mat = [[[] for _ in range(self.dimension)] for _ in range(self.bundle.rank)]
        for col, mono in enumerate(self.basis):
            mat[mono.factor][col] = pmonomial(1, mono.p)
        return mat

    def section_polys(self, coeffs: Vec) -> list[Poly]:
        """Chart polynomials of the section with the given basis coefficients."""
        comps: list[Poly] = [[] for _ in range(self.bundle.rank)]
        for c, mono in zip(coeffs, self.basis):
            c = frac(c)
            if c == 0:
                continue
            comp = comps[mono.factor]
            while len(comp) <= mono.p:
                comp.append(Fraction(0))
            comp[mono.p] += c
        for comp in comps:
            while comp and comp[-1] == 0:
                comp.pop()
        return comps

    # -- batched float evaluation ---------------------------------------------

    def evaluation_array(self, z: np.ndarray) -> np.ndarray:
        """A(z) for a batch of chart points, shape (len(z), r, N)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (self.bundle.rank, self.dimension), dtype=complex)
        powers = _power_table(z, max(self.factor_degrees, default=0))
        for col, mono in enumerate(self.basis):
            out[..., mono.factor, col] = powers[..., mono.p]
        return out

    def evaluation_array_dz(self, z: np.ndarray) -> np.ndarray:
        """Entrywise holomorphic derivative dA/dz, shape (len(z), r, N)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (self.bundle.rank, self.dimension), dtype=complex)
        powers = _power_table(z, max(max(self.factor_degrees, default=1) - 1, 0))
        for col, mono in enumerate(self.basis):
            if mono.p:
                out[..., mono.factor, col] = mono.p * powers[..., mono.p - 1]
        return out

    def evaluation_array_mirror(self, w: np.ndarray) -> np.ndarray:
        """Evaluation matrix in the mirror chart x = 1, y = w: entries w^q.

        Equals diag(w^{d_i}) A(1/w); sections of O(d) pick up w^d under the
        chart transition, turning x^p y^q into w^q.
        """
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape + (self.bundle.rank, self.dimension), dtype=complex)
        powers = _power_table(w, max(self.factor_degrees, default=0))
        for col, mono in enumerate(self.basis):
            out[..., mono.factor, col] = powers[..., mono.q]
        return out

    def evaluation_array_mirror_dz(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape + (self.bundle.rank, self.dimension), dtype=complex)
        powers = _power_table(w, max(max(self.factor_degrees, default=1) - 1, 0))
        for col, mono in enumerate(self.basis):
            if mono.q:
                out[..., mono.factor, col] = mono.q * powers[..., mono.q - 1]
        return out

    # -- reference L2 structure ------------------------------------------------

    def l2_gram_exact(self) -> list[Fraction]:
        """Diagonal of the exact L2 Gram of the monomial basis.

        Under the round reference metrics, <x^p y^q, x^p y^q> = p! q! / (d+1)!
        on a factor of twisted degree d, and distinct monomials are orthogonal.
        """
        diag = []
        for mono in self.basis:
            d = mono.p + mono.q
            diag.append(Fraction(factorial(mono.p) * factorial(mono.q), factorial(d + 1)))
        return diag


def _power_table(z: np.ndarray, max_power: int) -> np.ndarray:
    out = np.empty(z.shape + (max_power + 1,), dtype=complex)
    out[..., 0] = 1.0
    for p in range(1, max_power + 1):
        out[..., p] = out[..., p - 1] * z
    return out


@lru_cache(maxsize=None)
def section_space(degrees: tuple[int, ...], k: int) -> SectionSpace:
    return SectionSpace(SplitBundle(degrees), k)


def section_basis(bundle: SplitBundle, k: int) -> SectionSpace:
    """Monomial basis of H^0(E(k)); raises TwistTooSmall below regularity."""
    return section_space(bundle.degrees, k)


STABLE = "stable"
POLYSTABLE = "polystable"
UNSTABLE = "unstable"
# On P^1 every split bundle is a sum of line bundles, so a strictly
# semistable but non-polystable verdict cannot occur; kept for the record.
SEMISTABLE_NONPOLYSTABLE_IMPOSSIBLE = "strictly-semistable-nonpolystable-impossible"


def classify_split_bundle(bundle: SplitBundle) -> tuple[str, SplitBundle | None]:
    """Stability verdict with a destabilizing witness when unstable.

    Rank one is stable; equal summands are polystable; otherwise the maximal
    degree summand has slope above the bundle's and destabilizes.
    """
    if bundle.rank == 1:
        return STABLE, None
    if len(set(bundle.degrees)) == 1:
        return POLYSTABLE, None
    return UNSTABLE, SplitBundle((max(bundle.degrees),))
