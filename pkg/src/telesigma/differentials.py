"""Holomorphic differentials x^k dx_1 / det G_1 and the divided-difference
matrix H used to build the one-form Omega(x, y)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy.polys.rings import PolyElement

from .curve import CanonicalEquations
from .polyring import determinant
from .semigroup import ExponentVector, TelescopicSequence, basis_B


@dataclass(frozen=True)
class DifferentialBasis:
    """du_1..du_g; entry i is (k_i, order of vanishing of du_i at infinity)."""

    seq: TelescopicSequence
    entries: tuple[tuple[ExponentVector, int], ...]

    @property
    def exponents(self) -> list[ExponentVector]:
        return [k for k, _ in self.entries]

    @property
    def vanishing_orders(self) -> list[int]:
        return [v for _, v in self.entries]

    def __len__(self):
        return len(self.entries)


def holomorphic_basis(seq: TelescopicSequence) -> DifferentialBasis:
    """Exponents k in B with psi(k) <= 2g-2, sorted so that du_g has k = 0."""
    g = seq.genus
    ks = sorted(basis_B(seq, 2 * g - 2), key=seq.psi, reverse=True)
    return DifferentialBasis(seq, tuple((k, 2 * g - 2 - seq.psi(k)) for k in ks))


def second_kind_space_basis(seq: TelescopicSequence, pole_bound: int) -> list[ExponentVector]:
    """Exponents of x^i dx_1/det G_1 with psi(i) <= pole_bound (forms regular off infinity)."""
    return basis_B(seq, pole_bound)


class DivisionRemainderError(ArithmeticError):
    pass


def divided_difference(eqs: CanonicalEquations, i: int, j: int) -> PolyElement:
    """h_ij = (F_i(Y_<j, X_j, X_>j) - F_i(Y_<=j, X_>j)) / (X_j - Y_j); i, j 1-based."""
    R = eqs.ring
    f = eqs.F[i - 2]
    upper = R.rename_to_y(f, range(1, j))
    lower = R.rename_to_y(f, range(1, j + 1))
    diff = upper - lower
    if not diff:
        return R.zero
    q, r = diff.div([R.X(j) - R.Y(j)])
    if r:
        raise DivisionRemainderError(f"h_{i}{j}: division left a remainder")
    return q[0]


@dataclass
class BilinearFormNumerator:
    eqs: CanonicalEquations
    h: dict  # (i, j) -> h_ij, i in 2..t, j in 1..t

    @cached_property
    def H(self) -> list[list[PolyElement]]:
        t = self.eqs.seq.t
        return [[self.h[(i, j)] for j in range(2, t + 1)] for i in range(2, t + 1)]

    @cached_property
    def detH(self) -> PolyElement:
        return determinant(self.H)


def divided_difference_matrix(eqs: CanonicalEquations) -> BilinearFormNumerator:
    t = eqs.seq.t
    h = {(i, j): divided_difference(eqs, i, j) for i in range(2, t + 1) for j in range(1, t + 1)}
    return BilinearFormNumerator(eqs, h)


def det_H_bound(seq: TelescopicSequence) -> int:
    """Upper bound on the weighted X,Y-degree of det H."""
    return sum(seq.a[k] * (seq.e[k] - 1) for k in range(1, seq.t))


@dataclass(frozen=True)
class OmegaForm:
    """Omega(x, y) = det H(x, y) / ((x_1 - y_1) det G_1(x)) dx_1, kept unreduced."""

    numerator: PolyElement
    pole_factor: PolyElement
    det_G1: PolyElement

    def substitute_lambda(self, ring, values) -> "OmegaForm":
        return OmegaForm(*(ring.substitute_lambda(p, values)
                           for p in (self.numerator, self.pole_factor, self.det_G1)))


def omega_oneform(eqs: CanonicalEquations, bf: BilinearFormNumerator | None = None) -> OmegaForm:
    bf = bf or divided_difference_matrix(eqs)
    R = eqs.ring
    return OmegaForm(bf.detH, R.X(1) - R.Y(1), eqs.det_G[0])
