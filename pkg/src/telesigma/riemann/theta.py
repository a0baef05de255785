"""Riemann theta with half-integer characteristics, truncated with a tail bound."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


EPS = float(np.finfo(float).eps)


class DivergentThetaError(ValueError):
    """Im tau is not positive definite."""


@dataclass(frozen=True)
class ThetaParams:
    """``error`` bounds the dropped tail relative to the largest term of the series."""

    error: float = 1e-16
    max_radius: int = 60

    def __post_init__(self):
        if not self.error > 0:
            raise ValueError("theta error target must be positive")


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    gradient: np.ndarray
    radius: int
    bound: float  # neglected tail plus a rounding allowance, absolute


def _tail(lam: float, N: int, terms: int = 400) -> tuple[float, float]:
    m = np.arange(1, N + terms + 2)
    w = np.exp(-np.pi * lam * (m - 0.5) ** 2)
    return 2.0 * w[N:].sum(), 1.0 + 2.0 * w.sum()


def tail_bound(lam_min: float, g: int, N: int) -> float:
    """Bound on the terms outside the box, in units of the largest term."""
    tail, A = _tail(lam_min, N)
    return g * tail * A ** (g - 1)


def radius_for(lam_min: float, g: int, error: float, max_radius: int = 60) -> int:
    N = 1
    while tail_bound(lam_min, g, N) > error:
        N += 1
        if N > max_radius:
            raise DivergentThetaError(f"truncation radius exceeds {max_radius}; Im tau too small")
    return N


@lru_cache(maxsize=64)
def _box(g: int, N: int) -> np.ndarray:
    return np.array(list(itertools.product(range(-N, N + 1), repeat=g)), dtype=float)


def theta(z, tau, chars=None, params: ThetaParams = ThetaParams(),
          radius: int | None = None) -> ThetaValue:
    """theta[d', d''](z, tau) and its z-gradient.

    The box ||n - n0||_inf <= N is centred where the Gaussian peaks, so the
    tail bound holds for every z.  ``radius`` forces N instead of deriving it
    from ``params``.
    """
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    g = tau.shape[0]
    z = np.asarray(z, dtype=complex).reshape(g)
    dp, dpp = (np.zeros(g), np.zeros(g)) if chars is None else (
        np.asarray(chars[0], float).reshape(g), np.asarray(chars[1], float).reshape(g))
    Y = 0.5 * (tau.imag + tau.imag.T)
    eig = np.linalg.eigvalsh(Y)
    if eig[0] <= 0:
        raise DivergentThetaError("Im tau is not positive definite")
    vstar = -np.linalg.solve(Y, z.imag)
    n0 = np.round(vstar - dp)
    N = radius if radius is not None else radius_for(float(eig[0]), g, params.error,
                                                    params.max_radius)
    v = _box(g, N) + n0 + dp
    quad = np.einsum("ni,ij,nj->n", v, tau, v)
    expo = 1j * np.pi * quad + 2j * np.pi * (v @ (z + dpp))
    peak = np.pi * float(vstar @ Y @ vstar)
    terms = np.exp(expo)
    value = complex(terms.sum())
    grad = 2j * np.pi * (v.T @ terms)
    tail = float(np.exp(peak)) * tail_bound(float(eig[0]), g, N)
    # pairwise summation error, doubled so two radii can be compared
    rounding = 2 * EPS * (4 + np.log2(len(terms))) * float(np.abs(terms).sum())
    return ThetaValue(value, grad, N, tail + rounding)


def is_odd(chars) -> bool:
    dp, dpp = (np.asarray(c, float) for c in chars)
    return int(round(4 * float(dp @ dpp))) % 2 == 1


def half_characteristics(g: int):
    """All 2^(2g) characteristics with entries in {0, 1/2}, in a fixed order."""
    for bits in itertools.product((0.0, 0.5), repeat=2 * g):
        yield np.array(bits[:g]), np.array(bits[g:])
