"""Miura canonical equations of a telescopic curve, reduction to the monomial
basis, the pole order at infinity and a nonsingularity test."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import sympy
from sympy.polys.rings import PolyElement

from .polyring import CurveRing, LambdaKey, NEG_INF, curve_ring, determinant
from .semigroup import (ExponentVector, TelescopicSequence, check_telescopic,
                        generators_V, in_basis, min_representative)


class CurveSpecError(ValueError):
    """Malformed or inadmissible curve description."""


@dataclass(frozen=True)
class CurveSpec:
    seq: TelescopicSequence
    lambda_values: Mapping[LambdaKey, Fraction] = field(default_factory=dict)
    default_lambda: str = "symbolic"

    def __post_init__(self):
        if self.default_lambda not in ("symbolic", "zero"):
            raise CurveSpecError(f"default_lambda must be 'symbolic' or 'zero', got {self.default_lambda!r}")
        allowed = set(curve_ring(self.seq).keys)
        vals = {}
        for k, v in self.lambda_values.items():
            if k not in allowed:
                raise CurveSpecError(f"inadmissible lambda key {k.json_key}")
            vals[k] = Fraction(v)
        object.__setattr__(self, "lambda_values", dict(sorted(vals.items())))

    @property
    def ring(self) -> CurveRing:
        return curve_ring(self.seq)

    @property
    def symbolic_keys(self) -> list[LambdaKey]:
        if self.default_lambda == "zero":
            return []
        return [k for k in self.ring.keys if k not in self.lambda_values]

    @property
    def symbolic(self) -> bool:
        return bool(self.symbolic_keys)

    def concrete_values(self) -> dict[LambdaKey, Fraction]:
        """Values for every key that is not left symbolic."""
        vals = {k: Fraction(0) for k in self.ring.keys}
        vals.update(self.lambda_values)
        for k in self.symbolic_keys:
            del vals[k]
        return vals

    @classmethod
    def from_dict(cls, data: Mapping) -> "CurveSpec":
        known = {"sequence", "lambda", "default_lambda"}
        extra = set(data) - known
        if extra:
            raise CurveSpecError(f"unknown keys in curve spec: {sorted(extra)}")
        if "sequence" not in data:
            raise CurveSpecError("curve spec needs a 'sequence'")
        raw = data["sequence"]
        if not isinstance(raw, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
            raise CurveSpecError("'sequence' must be a list of integers")
        seq = check_telescopic(raw)
        lam = {}
        for text, val in (data.get("lambda") or {}).items():
            try:
                key = LambdaKey.from_json_key(text)
                lam[key] = Fraction(str(val))
            except ValueError as exc:
                raise CurveSpecError(f"bad lambda entry {text!r}: {exc}") from None
        return cls(seq, lam, data.get("default_lambda", "symbolic"))

    @classmethod
    def from_json(cls, text: str) -> "CurveSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CurveSpecError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise CurveSpecError("curve spec must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "sequence": list(self.seq.a),
            "lambda": {k.json_key: str(v) for k, v in self.lambda_values.items()},
            "default_lambda": self.default_lambda,
        }


class CanonicalEquations:
    """F_2..F_t for a curve spec together with their reduction data."""

    def __init__(self, spec: CurveSpec, F: list[PolyElement]):
        self.spec = spec
        self.seq = spec.seq
        self.ring = spec.ring
        self.F = F  # F[0] is F_2

    def __iter__(self):
        return iter(self.F)

    def __len__(self):
        return len(self.F)

    @cached_property
    def leading(self) -> list[ExponentVector]:
        return generators_V(self.seq)

    @cached_property
    def tails(self) -> list[PolyElement]:
        """X^{V_i} - F_i, the rewrite rule for the leading monomial of F_i."""
        return [self.ring.monomial(v) - f for v, f in zip(self.leading, self.F)]

    @cached_property
    def reducers(self) -> tuple["Reducer", "Reducer"]:
        return Reducer(self, "x"), Reducer(self, "y")

    def jacobian(self) -> list[list[PolyElement]]:
        return [[f.diff(self.ring.X(k)) for k in range(1, self.seq.t + 1)] for f in self.F]

    def minor(self, k: int) -> list[list[PolyElement]]:
        """G with its k-th column removed (1-based)."""
        return [row[: k - 1] + row[k:] for row in self.jacobian()]

    @cached_property
    def det_G(self) -> list[PolyElement]:
        """[det G_1, ..., det G_t] as polynomials in X."""
        return [determinant(self.minor(k)) for k in range(1, self.seq.t + 1)]

    def normal_form(self, p: PolyElement) -> PolyElement:
        rx, ry = self.reducers
        return ry(rx(p))

    def concrete(self) -> bool:
        return not self.spec.symbolic


def build_equations(spec: CurveSpec) -> CanonicalEquations:
    seq, R = spec.seq, spec.ring
    values = spec.concrete_values()
    F = []
    for v in generators_V(seq):
        i = next(k for k in range(seq.t) if v[k])
        L = min_representative(seq, seq.a[i] * seq.e[i])
        f = R.monomial(v) - R.monomial(L)
        for key in R.keys:
            if key.eq != i + 1:
                continue
            coeff = R.const(values[key]) if key in values else R.lam(key)
            f -= coeff * R.monomial(key.j)
        F.append(f)
    return CanonicalEquations(spec, F)


def jacobian_minors(eqs: CanonicalEquations):
    """(G, [G_1, ..., G_t]) with G the (t-1) x t matrix of partials."""
    return eqs.jacobian(), [eqs.minor(k) for k in range(1, eqs.seq.t + 1)]


class Reducer:
    """Normal form with respect to F_2..F_t in one variable set (x or y).

    Every monomial X^m is rewritten to the span of the basis monomials; the
    images are memoized.  The rules have pairwise coprime leading monomials,
    so the result does not depend on the rewrite order.
    """

    def __init__(self, eqs: CanonicalEquations, side: str):
        self.eqs = eqs
        self.ring = eqs.ring
        self.side = side
        self.t = eqs.seq.t
        self.offset = 0 if side == "x" else self.t
        tails = eqs.tails
        if side == "y":
            tails = [self.ring.x_to_y(p) for p in tails]
        # rule i: (variable index, exponent, tail split into (var exponent, rest))
        self.rules = []
        for v, tail in zip(eqs.leading, tails):
            i = next(k for k in range(self.t) if v[k])
            self.rules.append((i, v[i], self._split(tail)))
        self._memo: dict[ExponentVector, PolyElement] = {}

    def _split(self, p: PolyElement):
        o, t = self.offset, self.t
        out = []
        for m, c in p.iterterms():
            var = m[o : o + t]
            rest = m[:o] + (0,) * t + m[o + t :]
            out.append((var, self.ring.R.term_new(rest, c)))
        return out

    def monomial(self, m: ExponentVector) -> PolyElement:
        if m in self._memo:
            return self._memo[m]
        for i, e, tail in self.rules:
            if m[i] >= e:
                base = list(m)
                base[i] -= e
                res = self.ring.zero
                for var, rest in tail:
                    res += rest * self.monomial(tuple(b + v for b, v in zip(base, var)))
                break
        else:
            exp = [0] * self.ring.nvars
            exp[self.offset : self.offset + self.t] = m
            res = self.ring.R.term_new(tuple(exp), self.ring.R.domain.one)
        self._memo[m] = res
        return res

    def __call__(self, p: PolyElement) -> PolyElement:
        o, t = self.offset, self.t
        groups: dict = {}
        for m, c in p.iterterms():
            var = m[o : o + t]
            rest = m[:o] + (0,) * t + m[o + t :]
            groups.setdefault(var, {})[rest] = c
        res = self.ring.zero
        for var, rest in groups.items():
            if in_basis(self.eqs.seq, var):
                rebuilt = {r[:o] + var + r[o + t :]: c for r, c in rest.items()}
                res += self.ring.R.from_dict(rebuilt)
            else:
                res += self.ring.R.from_dict(rest) * self.monomial(var)
        return res


def normal_form(p: PolyElement, eqs: CanonicalEquations) -> PolyElement:
    """Reduce ``p`` to the span of basis monomials in both X and Y."""
    return eqs.normal_form(p)


def random_order_normal_form(p: PolyElement, eqs: CanonicalEquations, rng: random.Random) -> PolyElement:
    """Naive term rewriting in X with a random choice of term and rule each step.

    Deliberately unrelated to :class:`Reducer`; used to check confluence.
    """
    R = eqs.ring
    t = eqs.seq.t
    rules = list(zip(eqs.leading, eqs.tails))
    p = R.R.from_dict(dict(p))
    while True:
        # one step rewrites a whole X-monomial, with all of its lambda/Y coefficient
        xparts = sorted({m[:t] for m in p.itermonoms()})
        reducible = [(x, [r for r in rules if all(x[k] >= r[0][k] for k in range(t))])
                     for x in xparts]
        reducible = [(x, rs) for x, rs in reducible if rs]
        if not reducible:
            return p
        x, rs = rng.choice(reducible)
        v, tail = rng.choice(rs)
        shift = tuple(x[k] - v[k] for k in range(t))
        cofactor = R.R.from_dict({shift + m[t:]: c for m, c in p.iterterms() if m[:t] == x})
        p = p - cofactor * (R.monomial(v) - tail)


def order_at_infinity(p: PolyElement, eqs: CanonicalEquations) -> float | int:
    """Pole order o(p) at infinity of a polynomial in x; -inf for zero."""
    if any(eqs.ring.y_exp(m) != (0,) * eqs.seq.t for m in p.itermonoms()):
        raise ValueError("order_at_infinity expects a polynomial in X only")
    red = eqs.reducers[0](p)
    if not red:
        return NEG_INF
    return max(eqs.seq.psi(eqs.ring.x_exp(m)) for m in red.itermonoms())


def valuation_at_infinity(p: PolyElement, eqs: CanonicalEquations) -> float | int:
    o = order_at_infinity(p, eqs)
    return -o


@dataclass
class SingularityReport:
    nonsingular: bool
    witness: tuple | None = None
    status: str = "exact"

    def to_dict(self) -> dict:
        return {
            "nonsingular": self.nonsingular,
            "status": self.status,
            "witness": None if self.witness is None else [str(v) for v in self.witness],
        }


def _to_sympy(p: PolyElement, R: CurveRing, symbols):
    return sum(sympy.Rational(int(c.numerator), int(c.denominator))
               * sympy.Mul(*[s ** e for s, e in zip(symbols, R.x_exp(m))])
               for m, c in p.iterterms())


def check_nonsingular(spec: CurveSpec) -> SingularityReport:
    """Decide whether the affine curve has a singular point.

    The defining equations and all maximal minors of the Jacobian generate
    the unit ideal exactly when there is no common complex zero; this is
    decided with a reduced Groebner basis over QQ.
    """
    if spec.symbolic:
        raise CurveSpecError("check_nonsingular needs every lambda to be concrete")
    eqs = build_equations(spec)
    R = eqs.ring
    xs = sympy.symbols(f"x1:{spec.seq.t + 1}")
    polys = [_to_sympy(f, R, xs) for f in eqs.F]
    polys += [_to_sympy(d, R, xs) for d in eqs.det_G]
    polys = [p for p in polys if p != 0]
    gb = sympy.groebner(polys, *xs, order="lex")
    if gb.exprs == [1]:
        return SingularityReport(True)
    witness = None
    try:
        sols = sympy.solve_poly_system(list(gb.exprs), *xs)
        if sols:
            witness = tuple(sympy.nsimplify(v) for v in sols[0])
    except (NotImplementedError, sympy.PolynomialError):
        witness = None
    return SingularityReport(False, witness)
