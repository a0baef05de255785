"""Branch points and sheet bookkeeping for hyperelliptic Miura curves.

For a = (2, 2g+1) the defining equation is y^2 - h(x) y - f(x) = 0.  With
w = y - h/2 we get w^2 = P(x) = f + h^2/4, a monic polynomial of degree 2g+1,
and det G_1 = dF/dX_2 = 2w.

The finite branch points are sorted by (real, imag) and joined by the
x-monotone polyline e_1 -> e_2 -> ... -> e_{2g+1}.  Cycle c_k is the lift of
a loop around the segment [e_k, e_{k+1}]; its sheet on the segment is fixed
by continuing w from segment to segment around the left side of each shared
branch point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from ..curve import CurveSpec, CurveSpecError


class UnsupportedCurveError(ValueError):
    """The numeric layer only handles a = (2, 2g+1)."""


class SingularCurveError(ValueError):
    pass


def hyperelliptic_polys(spec: CurveSpec) -> tuple[list[Fraction], list[Fraction]]:
    """Coefficient lists (ascending) of f and h for y^2 = h y + f."""
    seq = spec.seq
    if seq.a[0] != 2 or seq.t != 2:
        raise UnsupportedCurveError(f"periods unsupported for {seq} (need a = (2, 2g+1))")
    if spec.symbolic:
        raise CurveSpecError("numeric layer needs concrete lambda values")
    vals = spec.concrete_values()
    s = seq.a[1]
    f = [Fraction(0)] * (s + 1)
    f[s] = Fraction(1)
    h = [Fraction(0)] * (seq.genus + 1)
    for key, v in vals.items():
        j1, j2 = key.j
        if j2 == 0:
            f[j1] += v
        else:
            h[j1] += v
    return f, h


def _polymul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


@dataclass
class BranchData:
    genus: int
    f: list[Fraction]
    h: list[Fraction]
    P: list[Fraction]  # ascending coefficients of w^2
    points: np.ndarray  # sorted finite branch points
    signs: np.ndarray  # sheet sign s_k of segment k

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    def P_eval(self, x):
        return np.polyval(np.array([complex(c) for c in self.P[::-1]]), x)

    def h_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.h])

    def sqrt_Q(self, k: int, x: np.ndarray) -> np.ndarray:
        """Branch of sqrt(P(x) / ((x-e_k)(x-e_{k+1}))) continuous along segment k.

        Each factor sqrt(x - e_j) is anchored at the segment midpoint; a
        straight segment subtends less than pi from any point off it, so the
        ratio never crosses the principal cut.
        """
        ea, eb = self.points[k], self.points[k + 1]
        mid = 0.5 * (ea + eb)
        out = np.ones_like(x, dtype=complex)
        for n, e in enumerate(self.points):
            if n in (k, k + 1):
                continue
            out = out * np.sqrt(mid - e) * np.sqrt((x - e) / (mid - e))
        return out

    def w_on_segment(self, k: int, phi: np.ndarray) -> np.ndarray:
        """w along segment k parametrized by x = c - r cos(phi), phi in [0, pi]."""
        ea, eb = self.points[k], self.points[k + 1]
        c, r = 0.5 * (ea + eb), 0.5 * (eb - ea)
        x = c - r * np.cos(phi)
        return self.signs[k] * 1j * r * np.sin(phi) * self.sqrt_Q(k, x)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "branch_points": [[float(z.real), float(z.imag)] for z in self.points],
            "includes_infinity": True,
            "cycles": [f"c{k + 1}: loop around [e{k + 1}, e{k + 2}]" for k in range(self.n_segments)],
            "alpha": [f"c{2 * i + 1}" for i in range(self.genus)],
            "beta": [" + ".join(f"c{2 * k}" for k in range(i + 1, self.genus + 1))
                     for i in range(self.genus)],
        }


def _sort_points(roots: np.ndarray, tie: float = 1e-9) -> np.ndarray:
    roots = sorted(roots, key=lambda z: (z.real, z.imag))
    # group real parts that agree to within `tie`, then order each group by imag
    groups, cur = [], [roots[0]]
    for z in roots[1:]:
        if abs(z.real - cur[-1].real) <= tie:
            cur.append(z)
        else:
            groups.append(cur)
            cur = [z]
    groups.append(cur)
    return np.array([z for grp in groups for z in sorted(grp, key=lambda v: v.imag)])


def continue_sqrt(P, path, w0: complex, rel_step: float = 0.2) -> complex:
    """Analytic continuation of sqrt(P) along ``path(s)``, s from 0 to 1."""
    s, w, ds = 0.0, w0, 1.0 / 64
    while s < 1.0:
        ds = min(ds, 1.0 - s)
        v = np.sqrt(complex(P(path(s + ds))))
        cand = v if abs(v - w) <= abs(v + w) else -v
        if abs(cand - w) > rel_step * max(abs(w), 1e-300) and ds > 1e-12:
            ds *= 0.5
            continue
        s, w = s + ds, cand
        ds *= 1.5
    return w


def _link_sign(bd: BranchData, k: int) -> int:
    """Relative sheet sign of segment k+1 versus segment k (left-side continuation)."""
    e = bd.points
    ea, eb, ec = e[k], e[k + 1], e[k + 2]
    others = np.delete(e, k + 1)
    rho = 0.3 * min(np.min(np.abs(others - eb)), abs(eb - ea), abs(ec - eb))
    u_in = (eb - ea) / abs(eb - ea)
    u_out = (ec - eb) / abs(ec - eb)
    theta_a = np.angle(-u_in)
    theta_d = np.angle(u_out)
    sweep = (theta_a - theta_d) % (2 * np.pi)
    if sweep == 0:
        sweep = 2 * np.pi
    m_in = 0.5 * (ea + eb)
    m_out = 0.5 * (eb + ec)
    p1 = eb - rho * u_in
    p2 = eb + rho * u_out

    w = complex(bd.w_on_segment(k, np.array([np.pi / 2]))[0])
    w = continue_sqrt(bd.P_eval, lambda s: m_in + s * (p1 - m_in), w)
    w = continue_sqrt(bd.P_eval, lambda s: eb + rho * np.exp(1j * (theta_a - s * sweep)), w)
    w = continue_sqrt(bd.P_eval, lambda s: p2 + s * (m_out - p2), w)
    target = complex(bd.w_on_segment(k + 1, np.array([np.pi / 2]))[0])
    return 1 if abs(w - target) < abs(w + target) else -1


def branch_data(spec: CurveSpec, dps: int = 40) -> BranchData:
    f, h = hyperelliptic_polys(spec)
    h2 = _polymul(h, h)
    P = list(f)
    for i, c in enumerate(h2):
        P[i] += c / 4
    x = sympy.Symbol("x")
    Ps = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(P))
    if sympy.degree(sympy.gcd(Ps, sympy.diff(Ps, x)), x) > 0:
        raise SingularCurveError("repeated branch point: the curve is singular")
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in P[::-1]],
                                 maxsteps=200, extraprec=2 * dps)
    pts = _sort_points(np.array([complex(r) for r in roots]))
    bd = BranchData(spec.seq.genus, f, h, P, pts, np.ones(len(pts) - 1))
    for k in range(len(pts) - 2):
        bd.signs[k + 1] = _link_sign(bd, k)
    return bd
