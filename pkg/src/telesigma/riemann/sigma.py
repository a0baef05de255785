"""Sigma function built from the period data and a half-characteristic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .periods import PeriodData
from .theta import ThetaParams, half_characteristics, is_odd, theta


class UnsupportedGenusError(ValueError):
    pass


@dataclass
class SigmaFunction:
    periods: PeriodData
    delta_prime: np.ndarray
    delta_dblprime: np.ndarray
    c: complex = 1.0
    params: ThetaParams = field(default_factory=ThetaParams)

    def __post_init__(self):
        p = self.periods
        self._w1inv = np.linalg.inv(2 * p.omega1)
        self._quad = p.eta1 @ np.linalg.inv(p.omega1)

    @property
    def chars(self):
        return self.delta_prime, self.delta_dblprime

    def _vec(self, u) -> np.ndarray:
        return np.asarray(u, dtype=complex).reshape(self.periods.genus)

    def theta_part(self, u):
        u = self._vec(u)
        return theta(self._w1inv @ u, self.periods.tau, self.chars, self.params)

    def __call__(self, u) -> complex:
        u = self._vec(u)
        return complex(self.c * np.exp(0.5 * u @ self._quad @ u) * self.theta_part(u).value)

    def gradient_at_zero(self) -> np.ndarray:
        """d sigma / du at u = 0 (the quadratic factor is stationary there)."""
        tv = self.theta_part(np.zeros(self.periods.genus))
        return self.c * (self._w1inv.T @ tv.gradient)

    def quasi_factor(self, u, m1, m2) -> complex:
        """Right-hand side of the translation law for u -> u + 2 w1 m1 + 2 w2 m2."""
        p = self.periods
        m1, m2 = np.asarray(m1, float), np.asarray(m2, float)
        u = self._vec(u)
        phase = np.pi * 1j * (m1 @ m2 + 2 * self.delta_prime @ m1 - 2 * self.delta_dblprime @ m2)
        shift = 2 * p.eta1 @ m1 + 2 * p.eta2 @ m2
        return complex(np.exp(phase + shift @ (u + p.omega1 @ m1 + p.omega2 @ m2)))

    def translate(self, u, m1, m2) -> np.ndarray:
        p = self.periods
        return self._vec(u) + 2 * p.omega1 @ np.asarray(m1, float) \
            + 2 * p.omega2 @ np.asarray(m2, float)

    def to_dict(self) -> dict:
        return {
            "delta_prime": [float(v) for v in self.delta_prime],
            "delta_dblprime": [float(v) for v in self.delta_dblprime],
            "c": [float(complex(self.c).real), float(complex(self.c).imag)],
        }


def _selection_score(sig: SigmaFunction) -> float:
    """How far the characteristic is from the expected behaviour at u = 0.

    g = 1: sigma must be odd, checked at a fixed off-lattice point.
    g = 2: sigma vanishes on the image of the curve, which leaves the origin
    tangent to the u_g axis, so d sigma / du_g (0) = 0 while the gradient is
    nonzero.
    """
    g = sig.periods.genus
    if g == 1:
        u = 0.37 * sig.periods.omega1[0, 0] + 0.21 * sig.periods.omega2[0, 0]
        a, b = sig([u]), sig([-u])
        return abs(a + b) / max(abs(a), abs(b), 1e-300)
    grad = sig.gradient_at_zero()
    norm = float(np.linalg.norm(grad))
    return abs(grad[-1]) / norm if norm > 0 else np.inf


def select_characteristic(periods: PeriodData, params: ThetaParams = ThetaParams()):
    """Return (delta', delta'', scores) for the best odd half-characteristic."""
    g = periods.genus
    if g > 2:
        raise UnsupportedGenusError(
            f"no characteristic selection rule for genus {g}; sigma supports g <= 2")
    scored = []
    for dp, dpp in half_characteristics(g):
        if not is_odd((dp, dpp)):
            continue
        s = _selection_score(SigmaFunction(periods, dp, dpp, 1.0, params))
        scored.append((s, tuple(dp), tuple(dpp)))
    scored.sort()
    best = scored[0]
    return np.array(best[1]), np.array(best[2]), scored


def sigma_function(periods: PeriodData, params: ThetaParams = ThetaParams(),
                   c: complex | None = None) -> SigmaFunction:
    """Sigma with the searched characteristic.

    Default normalization: sigma'(0) = 1 for g = 1, c = 1 otherwise.
    """
    dp, dpp, _ = select_characteristic(periods, params)
    sig = SigmaFunction(periods, dp, dpp, 1.0, params)
    if c is None:
        c = 1.0 / complex(sig.gradient_at_zero()[0]) if periods.genus == 1 else 1.0
    sig.c = c
    return sig
