"""The symmetric bilinear form omega-hat and the second-kind differentials dr_i.

d_y Omega(x, y) is written over the denominator
(x_1 - y_1)^2 det G_1(x) det G_1(y); its numerator, reduced to the monomial
basis in x and in y, gives the q-table.  The correction coefficients c are
found by exact Gaussian elimination of the symmetry conditions.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from sympy.polys.rings import PolyElement

from .curve import CanonicalEquations, CurveSpec, build_equations
from .differentials import (BilinearFormNumerator, DifferentialBasis, divided_difference_matrix,
                            holomorphic_basis)
from .polyring import CurveRing
from .semigroup import ExponentVector, TelescopicSequence, basis_B, in_basis

PIVOT_RULE = ("columns ordered by (psi(i), psi(j), i, j); reduced row echelon form; "
              "free unknowns set to zero")

Pair = tuple[ExponentVector, ExponentVector]


class UnsolvableSystemError(ArithmeticError):
    pass


def _fmt_key(i: ExponentVector, j: ExponentVector) -> str:
    return ",".join(map(str, i)) + "|" + ",".join(map(str, j))


def _parse_key(text: str) -> Pair:
    a, b = text.split("|")
    return tuple(int(v) for v in a.split(",")), tuple(int(v) for v in b.split(","))


def c_degree(seq: TelescopicSequence, i: ExponentVector, j: ExponentVector) -> int:
    """Weighted lambda-degree a nonzero c_{i;j} must have."""
    top = 2 * sum(seq.e[k] * seq.a[k] for k in range(1, seq.t))
    return top - sum((i[k] + j[k] + 2) * seq.a[k] for k in range(seq.t))


def q_degree(seq: TelescopicSequence, i: ExponentVector, j: ExponentVector) -> int:
    top = 2 * sum((seq.e[k] - 1) * seq.a[k] for k in range(1, seq.t))
    return top - seq.psi(i) - seq.psi(j)


@dataclass
class _Table:
    ring: CurveRing
    entries: dict[Pair, PolyElement]

    def __getitem__(self, key: Pair) -> PolyElement:
        return self.entries.get(key, self.ring.zero)

    def __iter__(self):
        return iter(sorted(self.entries))

    def __len__(self):
        return len(self.entries)

    def to_dict(self) -> dict[str, str]:
        return {_fmt_key(i, j): self.ring.to_text(v) for (i, j), v in sorted(self.entries.items())}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, ring: CurveRing, data: dict[str, str]):
        return cls(ring, {_parse_key(k): ring.from_text(v) for k, v in data.items()})


class QTable(_Table):
    """q_{i;j}: coefficient of x^i y^j in the reduced numerator of d_y Omega."""


@dataclass
class CTable(_Table):
    """Correction coefficients c_{i;j}; ``support`` records which q entries fed each one."""

    support: dict[Pair, set[Pair]] = field(default_factory=dict)
    pivot_rule: str = PIVOT_RULE


def dy_omega_numerator(eqs: CanonicalEquations, bf: BilinearFormNumerator | None = None) -> PolyElement:
    """Numerator of d_y Omega over (x_1-y_1)^2 det G_1(x) det G_1(y), unreduced."""
    bf = bf or divided_difference_matrix(eqs)
    R = eqs.ring
    detH = bf.detH
    detG_y = [R.x_to_y(d) for d in eqs.det_G]
    total = detG_y[0] * detH
    x1y1 = R.X(1) - R.Y(1)
    for k in range(1, eqs.seq.t + 1):
        term = x1y1 * detH.diff(R.Y(k)) * detG_y[k - 1]
        total += term if k % 2 else -term
    return total


def expand_q(eqs: CanonicalEquations, bf: BilinearFormNumerator | None = None) -> QTable:
    N = eqs.normal_form(dy_omega_numerator(eqs, bf))
    R = eqs.ring
    return QTable(R, {k: v for k, v in R.split(N).items()})


def _c_unknowns(seq: TelescopicSequence) -> list[Pair]:
    g = seq.genus
    slack = c_degree(seq, (0,) * seq.t, (0,) * seq.t)
    out = []
    for i in basis_B(seq, 2 * g - 2):
        for j in basis_B(seq, slack - seq.psi(i)):
            out.append((i, j))
    return out


def _shift(m: ExponentVector, k: int) -> ExponentVector | None:
    if m[0] < k:
        return None
    return (m[0] - k,) + m[1:]


def _block(i: ExponentVector, j: ExponentVector, offset: int = 0):
    return (i[0] + j[0] + offset, tuple(sorted((i[1:], j[1:]))))


def solve_c(q: QTable, seq: TelescopicSequence) -> CTable:
    """Solve the symmetry conditions for c exactly; see PIVOT_RULE."""
    R = q.ring
    unknowns = set(_c_unknowns(seq))

    # equations indexed by (i, j) with i < j; (j, i) is the same equation negated
    eq_index: set[Pair] = set()
    for (a, b) in unknowns:
        for da, db in ((2, 0), (1, 1), (0, 2)):
            i = (a[0] + da,) + a[1:]
            j = (b[0] + db,) + b[1:]
            if i != j:
                eq_index.add(min((i, j), (j, i)))
    for (i, j) in q.entries:
        if i != j:
            eq_index.add(min((i, j), (j, i)))

    blocks: dict = defaultdict(lambda: ([], set()))
    for (i, j) in eq_index:
        lhs: dict[Pair, Fraction] = defaultdict(Fraction)
        for (p, r, coeff) in (
            (_shift(i, 2), j, 1), (_shift(i, 1), _shift(j, 1), -2), (i, _shift(j, 2), 1),
            (_shift(j, 2), i, -1), (_shift(j, 1), _shift(i, 1), 2), (j, _shift(i, 2), -1),
        ):
            if p is not None and r is not None and (p, r) in unknowns:
                lhs[(p, r)] += coeff
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = q[(j, i)] - q[(i, j)]
        if not lhs and not rhs:
            continue
        rows, cols = blocks[_block(i, j)]
        rows.append([lhs, rhs, {(i, j), (j, i)} & set(q.entries)])
        cols.update(lhs)

    def colkey(c: Pair):
        return (seq.psi(c[0]), seq.psi(c[1]), c[0], c[1])

    entries: dict[Pair, PolyElement] = {}
    support: dict[Pair, set[Pair]] = {}
    for bkey in sorted(blocks):
        rows, cols = blocks[bkey]
        pivots: dict[Pair, int] = {}
        for col in sorted(cols, key=colkey):
            prow = next((n for n, row in enumerate(rows)
                         if n not in pivots.values() and row[0].get(col)), None)
            if prow is None:
                continue
            lhs, rhs, src = rows[prow]
            piv = lhs[col]
            if piv != 1:
                lhs = {k: v / piv for k, v in lhs.items()}
                rhs = rhs * R.const(1 / piv)
                rows[prow] = [lhs, rhs, src]
            for n, row in enumerate(rows):
                f = row[0].get(col)
                if n == prow or not f:
                    continue
                new = dict(row[0])
                for k, v in lhs.items():
                    val = new.get(k, Fraction(0)) - f * v
                    if val:
                        new[k] = val
                    else:
                        new.pop(k, None)
                rows[n] = [new, row[1] - rhs * R.const(f), row[2] | src]
            pivots[col] = prow
        for lhs, rhs, src in rows:
            if not lhs and rhs:
                raise UnsolvableSystemError(f"inconsistent symmetry equations in block {bkey}")
        for col, n in pivots.items():
            lhs, rhs, src = rows[n]
            if rhs:
                entries[col] = rhs
                support[col] = set(src)
    return CTable(R, entries, support)


def c_polynomial(eqs: CanonicalEquations, c: CTable, swap: bool = False) -> PolyElement:
    """sum c_{i;j} X^i Y^j (or X^j Y^i when ``swap``)."""
    R = eqs.ring
    total = R.zero
    for (i, j), v in c.entries.items():
        total += v * (R.monomial(j, i) if swap else R.monomial(i, j))
    return total


def symmetric_numerator(eqs: CanonicalEquations, c: CTable, N: PolyElement | None = None) -> PolyElement:
    """Numerator of omega-hat(x, y) over (x_1-y_1)^2 det G_1(x) det G_1(y)."""
    R = eqs.ring
    if N is None:
        N = dy_omega_numerator(eqs)
    return N + (R.X(1) - R.Y(1)) ** 2 * c_polynomial(eqs, c)


def symmetry_check(eqs: CanonicalEquations, c: CTable, N: PolyElement | None = None) -> bool:
    """Exact test of omega-hat(x, y) == omega-hat(y, x) modulo the curve equations."""
    S = symmetric_numerator(eqs, c, N)
    diff = S - eqs.ring.swap_xy(S)
    return not eqs.normal_form(diff)


@dataclass(frozen=True)
class SecondKindBasis:
    """dr_i = sum_j coeffs[i][j] * y^j dy_1 / det G_1(y), paired with du_i."""

    ring: CurveRing
    du_exponents: tuple[ExponentVector, ...]
    coeffs: tuple[dict[ExponentVector, PolyElement], ...]

    def __len__(self):
        return len(self.coeffs)

    def to_dict(self) -> list[dict]:
        return [{"du": list(k), "dr": {",".join(map(str, j)): self.ring.to_text(v)
                                       for j, v in sorted(cs.items())}}
                for k, cs in zip(self.du_exponents, self.coeffs)]


def build_dr(c: CTable, basis: DifferentialBasis) -> SecondKindBasis:
    coeffs = []
    for k in basis.exponents:
        coeffs.append({j: v for (i, j), v in c.entries.items() if i == k})
    return SecondKindBasis(c.ring, tuple(basis.exponents), tuple(coeffs))


def audit_c(c: CTable, seq: TelescopicSequence) -> list[str]:
    """Violations of the degree / vanishing / index-support clauses (empty if none)."""
    R = c.ring
    problems = []
    for (i, j), v in c.entries.items():
        want = c_degree(seq, i, j)
        if want < 0:
            problems.append(f"c[{_fmt_key(i, j)}] nonzero with negative degree {want}")
            continue
        deg, homog = R.weighted_degree(v)
        if not homog or deg != want:
            problems.append(f"c[{_fmt_key(i, j)}] has degree {deg} (homogeneous={homog}), expected {want}")
        if any(R.x_exp(m) != (0,) * seq.t or R.y_exp(m) != (0,) * seq.t for m in v.itermonoms()):
            problems.append(f"c[{_fmt_key(i, j)}] depends on x or y")
        if not in_basis(seq, i) or not in_basis(seq, j) or seq.psi(i) > 2 * seq.genus - 2:
            problems.append(f"c[{_fmt_key(i, j)}] has an index outside the allowed range")
        for (ip, jp) in c.support.get((i, j), ()):
            ok = ip[0] + jp[0] == i[0] + j[0] + 2 and all(
                (ip[k], jp[k]) in ((i[k], j[k]), (j[k], i[k])) for k in range(1, seq.t))
            if not ok:
                problems.append(f"c[{_fmt_key(i, j)}] uses q[{_fmt_key(ip, jp)}] outside its index class")
    return problems


@dataclass
class FundamentalFormData:
    eqs: CanonicalEquations
    bilinear: BilinearFormNumerator
    numerator: PolyElement  # reduced numerator of d_y Omega
    q: QTable
    c: CTable
    basis: DifferentialBasis
    dr: SecondKindBasis

    def to_dict(self) -> dict:
        R = self.eqs.ring
        return {
            "sequence": list(self.eqs.seq.a),
            "genus": self.eqs.seq.genus,
            "det_H": R.to_text(self.bilinear.detH),
            "det_G1": R.to_text(self.eqs.det_G[0]),
            "q": self.q.to_dict(),
            "c": self.c.to_dict(),
            "pivot_rule": self.c.pivot_rule,
            "du": [list(k) for k in self.basis.exponents],
            "dr": self.dr.to_dict(),
        }


def fundamental_form(spec: CurveSpec) -> FundamentalFormData:
    """Run the full exact construction for one curve."""
    eqs = build_equations(spec)
    bf = divided_difference_matrix(eqs)
    N = eqs.normal_form(dy_omega_numerator(eqs, bf))
    q = QTable(eqs.ring, eqs.ring.split(N))
    c = solve_c(q, spec.seq)
    basis = holomorphic_basis(spec.seq)
    return FundamentalFormData(eqs, bf, N, q, c, basis, build_dr(c, basis))
