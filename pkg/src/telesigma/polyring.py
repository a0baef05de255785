"""Exact graded polynomials in X_1..X_t, Y_1..Y_t and the curve parameters.

Polynomials are sympy ``PolyElement`` objects over QQ living in one ring per
sequence whose generators are ``X1..Xt, Y1..Yt`` followed by one generator
per admissible curve parameter.  A "lambda polynomial" is simply an element
of the same ring with no X or Y content.

Weights: deg X_k = deg Y_k = a_k and
deg lambda^{(i)}_j = a_i * d_{i-1}/d_i - psi(j).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring

from .semigroup import ExponentVector, TelescopicSequence, basis_B

NEG_INF = -math.inf


@dataclass(frozen=True, order=True)
class LambdaKey:
    """Index of the coefficient lambda^{(eq)}_{j} of the defining equation F_eq."""

    eq: int
    j: ExponentVector

    @property
    def name(self) -> str:
        return f"l{self.eq}_" + ",".join(map(str, self.j))

    @property
    def json_key(self) -> str:
        return f"{self.eq}:" + ",".join(map(str, self.j))

    @classmethod
    def from_json_key(cls, text: str) -> "LambdaKey":
        eq, _, rest = text.partition(":")
        if not rest:
            raise ValueError(f"malformed lambda key {text!r}")
        return cls(int(eq), tuple(int(v) for v in rest.split(",")))


def admissible_keys(seq: TelescopicSequence) -> list[LambdaKey]:
    """All lambda keys, grouped by equation and sorted by the monomial order."""
    keys = []
    for i in range(1, seq.t):
        top = seq.a[i] * seq.e[i]
        keys += [LambdaKey(i + 1, j) for j in basis_B(seq, top - 1)]
    return keys


def lambda_degree(seq: TelescopicSequence, key: LambdaKey) -> int:
    i = key.eq - 1
    return seq.a[i] * seq.e[i] - seq.psi(key.j)


class MismatchedRingError(ValueError):
    pass


class CurveRing:
    """The polynomial ring attached to one telescopic sequence."""

    def __init__(self, seq: TelescopicSequence):
        self.seq = seq
        self.t = seq.t
        self.keys = admissible_keys(seq)
        names = [f"X{k}" for k in range(1, self.t + 1)]
        names += [f"Y{k}" for k in range(1, self.t + 1)]
        names += [k.name.replace(",", "_") for k in self.keys]
        self.R, *gens = ring(names, QQ, lex)
        self.Xs = gens[: self.t]
        self.Ys = gens[self.t : 2 * self.t]
        self._lam = dict(zip(self.keys, gens[2 * self.t :]))
        self.nvars = len(gens)
        self.weights = tuple(seq.a) * 2 + tuple(lambda_degree(seq, k) for k in self.keys)
        self._key_index = {k: 2 * self.t + n for n, k in enumerate(self.keys)}

    def __repr__(self):
        return f"CurveRing{self.seq}"

    @property
    def zero(self) -> PolyElement:
        return self.R.zero

    @property
    def one(self) -> PolyElement:
        return self.R.one

    def X(self, k: int) -> PolyElement:
        return self.Xs[k - 1]

    def Y(self, k: int) -> PolyElement:
        return self.Ys[k - 1]

    def lam(self, key: LambdaKey) -> PolyElement:
        return self._lam[key]

    def const(self, value) -> PolyElement:
        return self.R(QQ(Fraction(value).numerator, Fraction(value).denominator))

    def monomial(self, x: Sequence[int] = (), y: Sequence[int] = ()) -> PolyElement:
        exp = [0] * self.nvars
        exp[: len(x)] = x
        exp[self.t : self.t + len(y)] = y
        return self.R.term_new(tuple(exp), QQ.one)

    def check(self, *polys: PolyElement) -> None:
        for p in polys:
            if p.ring is not self.R:
                raise MismatchedRingError("polynomial belongs to a different ring")

    # --- structure ---------------------------------------------------------

    def x_exp(self, monom) -> ExponentVector:
        return tuple(monom[: self.t])

    def y_exp(self, monom) -> ExponentVector:
        return tuple(monom[self.t : 2 * self.t])

    def lambda_free(self, p: PolyElement) -> bool:
        return all(not any(m[2 * self.t :]) for m in p.itermonoms())

    def split(self, p: PolyElement) -> dict[tuple[ExponentVector, ExponentVector], PolyElement]:
        """Group terms by their (X, Y) exponent; values are lambda polynomials."""
        t2 = 2 * self.t
        groups: dict = {}
        pad = (0,) * t2
        for m, c in p.iterterms():
            key = (m[: self.t], m[self.t : t2])
            groups.setdefault(key, []).append((pad + m[t2:], c))
        return {k: self.R.from_dict(dict(v)) for k, v in groups.items()}

    def weighted_degree(self, p: PolyElement) -> tuple[float | int, bool]:
        """(max weighted degree, homogeneous?) with -inf for the zero polynomial."""
        if not p:
            return NEG_INF, True
        w = self.weights
        degs = {sum(e * wi for e, wi in zip(m, w)) for m in p.itermonoms()}
        return max(degs), len(degs) == 1

    def term_degree(self, monom) -> int:
        return sum(e * wi for e, wi in zip(monom, self.weights))

    # --- homomorphisms -----------------------------------------------------

    def swap_xy(self, p: PolyElement) -> PolyElement:
        t = self.t
        return self.R.from_dict(
            {m[t : 2 * t] + m[:t] + m[2 * t :]: c for m, c in p.iterterms()}
        )

    def rename_to_y(self, p: PolyElement, ks) -> PolyElement:
        """Rename X_k -> Y_k for the 1-based indices in ``ks``."""
        t = self.t
        out: dict = {}
        for m, c in p.iterterms():
            m2 = list(m)
            for k in ks:
                m2[t + k - 1] += m2[k - 1]
                m2[k - 1] = 0
            m2 = tuple(m2)
            out[m2] = out.get(m2, QQ.zero) + c
        return self.R.from_dict({m: c for m, c in out.items() if c})

    def x_to_y(self, p: PolyElement) -> PolyElement:
        """Rename X_k -> Y_k in a polynomial free of Y."""
        t = self.t
        out = {}
        for m, c in p.iterterms():
            if any(m[t : 2 * t]):
                raise ValueError("x_to_y expects a polynomial without Y")
            out[(0,) * t + m[:t] + m[2 * t :]] = c
        return self.R.from_dict(out)

    def y_to_x(self, p: PolyElement) -> PolyElement:
        """Identify Y_k with X_k (restriction to the diagonal)."""
        t = self.t
        out: dict = {}
        for m, c in p.iterterms():
            m2 = tuple(m[k] + m[t + k] for k in range(t)) + (0,) * t + m[2 * t :]
            out[m2] = out.get(m2, QQ.zero) + c
        return self.R.from_dict({m: c for m, c in out.items() if c})

    def substitute_lambda(self, p: PolyElement, values: Mapping[LambdaKey, Fraction]) -> PolyElement:
        """Replace the given parameters by rational values (ring homomorphism)."""
        if not values:
            return p
        idx = {self._key_index[k]: QQ(Fraction(v).numerator, Fraction(v).denominator)
               for k, v in values.items()}
        out: dict = {}
        for m, c in p.iterterms():
            m2 = list(m)
            for pos, val in idx.items():
                if m[pos]:
                    c = c * val ** m[pos]
                    m2[pos] = 0
            if c:
                m2 = tuple(m2)
                out[m2] = out.get(m2, QQ.zero) + c
        return self.R.from_dict({m: c for m, c in out.items() if c})

    def substitute_point(self, p: PolyElement, x: Sequence, y: Sequence = ()) -> PolyElement:
        """Evaluate X (and optionally Y) at numbers of any ring-compatible type.

        Returns a plain number when the result has no remaining generators;
        intended for lambda-free polynomials.
        """
        total = 0
        for m, c in p.iterterms():
            v = Fraction(int(c.numerator), int(c.denominator))
            term = v
            for k in range(self.t):
                if m[k]:
                    term = term * x[k] ** m[k]
                if m[self.t + k]:
                    term = term * y[k] ** m[self.t + k]
            total = total + term
        return total

    # --- text form ---------------------------------------------------------

    @cached_property
    def _gen_names(self) -> list[str]:
        t = self.t
        return ([f"X{k}" for k in range(1, t + 1)] + [f"Y{k}" for k in range(1, t + 1)]
                + [k.name for k in self.keys])

    def sort_terms(self, p: PolyElement):
        """Heaviest first; within a degree, X then Y part descending in the monomial order."""
        t, a = self.t, self.seq.a

        def key(mc):
            m = mc[0]
            x, y = m[:t], m[t : 2 * t]
            psi_x = sum(ai * v for ai, v in zip(a, x))
            psi_y = sum(ai * v for ai, v in zip(a, y))
            return (-self.term_degree(m), -psi_x, x, -psi_y, y, m[2 * t :])

        return sorted(p.iterterms(), key=key)

    def to_text(self, p: PolyElement) -> str:
        self.check(p)
        if not p:
            return "0"
        parts = []
        for n, (m, c) in enumerate(self.sort_terms(p)):
            c = Fraction(int(c.numerator), int(c.denominator))
            sign = "-" if c < 0 else "+"
            c = abs(c)
            factors = [name if e == 1 else f"{name}^{e}"
                       for name, e in zip(self._gen_names, m) if e]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            body = "*".join(factors)
            if n == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    _factor_re = re.compile(r"^([XY])(\d+)(?:\^(\d+))?$|^(l\d+_[\d,]+)(?:\^(\d+))?$")

    def from_text(self, text: str) -> PolyElement:
        text = text.strip()
        if text == "0":
            return self.R.zero
        tokens = re.split(r" ([+-]) ", text)
        signs = ["+"] + tokens[1::2]
        bodies = tokens[0::2]
        if bodies[0].startswith("-"):
            signs[0], bodies[0] = "-", bodies[0][1:]
        lam_names = {k.name: k for k in self.keys}
        out: dict = {}
        for sign, body in zip(signs, bodies):
            coeff = Fraction(1)
            exp = [0] * self.nvars
            for n, piece in enumerate(body.split("*")):
                mt = self._factor_re.match(piece)
                if mt is None:
                    if n != 0:
                        raise ValueError(f"cannot parse factor {piece!r}")
                    coeff = Fraction(piece)
                    continue
                if mt.group(1):
                    pos = int(mt.group(2)) - 1 + (self.t if mt.group(1) == "Y" else 0)
                    if not 0 <= int(mt.group(2)) - 1 < self.t:
                        raise ValueError(f"variable out of range: {piece!r}")
                    exp[pos] += int(mt.group(3) or 1)
                else:
                    key = lam_names.get(mt.group(4))
                    if key is None:
                        raise ValueError(f"unknown parameter {mt.group(4)!r}")
                    exp[self._key_index[key]] += int(mt.group(5) or 1)
            if sign == "-":
                coeff = -coeff
            m = tuple(exp)
            out[m] = out.get(m, QQ.zero) + QQ(coeff.numerator, coeff.denominator)
        return self.R.from_dict({m: c for m, c in out.items() if c})


@lru_cache(maxsize=None)
def curve_ring(seq: TelescopicSequence) -> CurveRing:
    return CurveRing(seq)


def determinant(matrix: Sequence[Sequence]):
    """Cofactor expansion along the first row; fine for the tiny sizes used here."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
