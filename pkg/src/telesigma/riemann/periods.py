"""Period matrices of du and dr over the canonical cycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..curve import CurveSpec
from ..fundform import fundamental_form
from .branch import BranchData, branch_data
from .quadrature import adaptive_gauss_legendre


class PeriodError(ArithmeticError):
    pass


def _poly_coeffs(pairs: dict[int, Fraction], size: int) -> np.ndarray:
    out = np.zeros(size, dtype=complex)
    for deg, c in pairs.items():
        out[deg] += complex(c)
    return out


def integrand_polys(spec: CurveSpec, bd: BranchData) -> tuple[np.ndarray, np.ndarray]:
    """Ascending coefficient rows g(x) with du_i, dr_i ~ g(x) dx / (2w) on cycles.

    y = w + h/2, so x^j y dx/(2w) = x^j h/2 dx/(2w) + exact; the exact part
    integrates to zero over closed cycles and is dropped.
    """
    data = fundamental_form(spec)
    g = spec.seq.genus
    size = 2 * g + 2 + len(bd.h)
    du = np.zeros((g, size), dtype=complex)
    for n, k in enumerate(data.basis.exponents):
        du[n, k[0]] = 1.0
    half_h = [c / 2 for c in bd.h]
    dr = np.zeros((g, size), dtype=complex)
    R = data.eqs.ring
    for n, coeffs in enumerate(data.dr.coeffs):
        acc: dict[int, Fraction] = {}
        for (j1, j2), poly in coeffs.items():
            if any(any(m) for m in poly.itermonoms()):
                raise PeriodError("dr coefficients must be numeric")
            v = Fraction(int(poly.LC.numerator), int(poly.LC.denominator)) if poly else Fraction(0)
            if j2 == 0:
                acc[j1] = acc.get(j1, Fraction(0)) + v
            else:
                for d, hc in enumerate(half_h):
                    acc[j1 + d] = acc.get(j1 + d, Fraction(0)) + v * hc
        dr[n] = _poly_coeffs(acc, size)
    return du, dr


def cycle_integrals(bd: BranchData, polys: np.ndarray, tol: float = 1e-13,
                    max_depth: int = 30, order: int = 20) -> tuple[np.ndarray, float]:
    """Matrix [row, k] of the integral of polys[row](x) dx/(2w) over cycle c_{k+1}.

    On segment k put x = c - r cos(phi); the square-root endpoint singularity
    cancels against dx and the cycle integral becomes a smooth integral over
    [0, pi].
    """
    rev = polys[:, ::-1]
    out = np.zeros((polys.shape[0], bd.n_segments), dtype=complex)
    err = 0.0
    for k in range(bd.n_segments):
        ea, eb = bd.points[k], bd.points[k + 1]
        c, r = 0.5 * (ea + eb), 0.5 * (eb - ea)

        def f(phi, k=k, c=c, r=r):
            x = c - r * np.cos(phi)
            denom = bd.signs[k] * 1j * bd.sqrt_Q(k, x)
            vals = np.array([np.polyval(row, x) for row in rev])
            return vals / denom

        val, e = adaptive_gauss_legendre(f, 0.0, np.pi, tol=tol, order=order,
                                        max_depth=max_depth)
        out[:, k] = val
        err = max(err, e)
    return out, err


@dataclass
class PeriodData:
    omega1: np.ndarray
    omega2: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    tau: np.ndarray
    branch: BranchData
    quad_error: float
    beta_flipped: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def genus(self) -> int:
        return self.omega1.shape[0]

    def legendre_residual(self) -> float:
        g = self.genus
        M = np.block([[self.omega1, self.omega2], [self.eta1, self.eta2]])
        J = np.block([[np.zeros((g, g)), np.eye(g)], [-np.eye(g), np.zeros((g, g))]])
        return float(np.max(np.abs(M.T @ J @ M + 0.5j * np.pi * J)))

    def symmetry_error(self) -> float:
        return float(np.max(np.abs(self.tau - self.tau.T)))

    def imag_eigenvalues(self) -> np.ndarray:
        Y = self.tau.imag
        return np.linalg.eigvalsh(0.5 * (Y + Y.T))

    def to_dict(self) -> dict:
        def mat(a):
            return [[[float(z.real), float(z.imag)] for z in row] for row in a]

        return {
            "branch": self.branch.to_dict(),
            "omega1": mat(self.omega1),
            "omega2": mat(self.omega2),
            "eta1": mat(self.eta1),
            "eta2": mat(self.eta2),
            "tau": mat(self.tau),
            "tau_symmetry_error": self.symmetry_error(),
            "im_tau_eigenvalues": [float(v) for v in self.imag_eigenvalues()],
            "legendre_residual": self.legendre_residual(),
            "quadrature_error": self.quad_error,
            "beta_flipped": self.beta_flipped,
            "warnings": list(self.warnings),
        }


def _alpha_beta(C: np.ndarray, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Columns: alpha_i = c_{2i-1}, beta_i = c_{2i} + ... + c_{2g}."""
    A = C[:, 0 : 2 * g : 2]
    B = np.zeros_like(A)
    for i in range(g):
        B[:, i] = C[:, 2 * i + 1 : 2 * g : 2].sum(axis=1)
    return A, B


def period_matrices(spec: CurveSpec, tol: float = 1e-13, max_depth: int = 30,
                    symmetry_tol: float = 1e-8) -> PeriodData:
    bd = branch_data(spec)
    g = bd.genus
    du, dr = integrand_polys(spec, bd)
    C, err = cycle_integrals(bd, np.vstack([du, dr]), tol=tol, max_depth=max_depth)
    A, B = _alpha_beta(C, g)
    omega1, omega2 = 0.5 * A[:g], 0.5 * B[:g]
    eta1, eta2 = -0.5 * A[g:], -0.5 * B[g:]
    warnings = []
    if np.linalg.cond(omega1) > 1e12:
        warnings.append(f"omega1 is ill-conditioned (cond {np.linalg.cond(omega1):.3g})")
    tau = np.linalg.solve(omega1, omega2)
    flipped = False
    if np.all(np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T)) < 0):
        omega2, eta2, tau, flipped = -omega2, -eta2, -tau, True
    pd = PeriodData(omega1, omega2, eta1, eta2, tau, bd, err, flipped, warnings)
    scale = max(1.0, float(np.max(np.abs(tau))))
    if pd.symmetry_error() > symmetry_tol * scale:
        raise PeriodError(f"tau is not symmetric (error {pd.symmetry_error():.3g}); "
                          "cycle construction failed")
    if np.any(pd.imag_eigenvalues() <= 0):
        raise PeriodError("Im tau is not positive definite")
    return pd
