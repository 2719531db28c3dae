"""Transient photocurrent of a resonant-cavity-enhanced photodiode (RCE-PD).

Constant optical power ``P_i`` switches on at ``t = 0``. Carriers generated in
the active layer (width ``x_a``) drift through the n and p regions (widths
``w_n``, ``w_p``) at saturation velocity; each species contributes a plateau
window ``[0, w/v)`` followed by a sweep-out window ``[w/v, (w + x_a)/v)``.

``N_ph`` and ``P_ph`` are carrier counts (photon rate ``P_i / (h nu)`` times
efficiency terms); the prefactor ``q / (x_a + w_n + w_p)`` turns their
drift flux into a current.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .errors import DomainError

GROUPINGS = ("inside", "outside")


@dataclass(frozen=True)
class RcePdParams:
    x_a: float
    w_n: float
    w_p: float
    v_n: float
    v_p: float
    alpha_eff: float
    mu_f: float
    mu_b: float
    nu: float
    q: float = constants.e

    def __post_init__(self):
        for name in ("x_a", "w_n", "w_p", "v_n", "v_p", "alpha_eff", "nu", "q"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.mu_f < 0 or self.mu_b < 0 or self.mu_f + self.mu_b > 1:
            raise DomainError("need mu_f, mu_b >= 0 and mu_f + mu_b <= 1")

    def windows(self):
        """Window boundaries ``{w_n/v_n, (w_n+x_a)/v_n, w_p/v_p, (w_p+x_a)/v_p}`` in seconds."""
        return {
            "electron_plateau_end": self.w_n / self.v_n,
            "electron_sweep_end": (self.w_n + self.x_a) / self.v_n,
            "hole_plateau_end": self.w_p / self.v_p,
            "hole_sweep_end": (self.w_p + self.x_a) / self.v_p,
        }


@dataclass(frozen=True)
class PhotocurrentTrace:
    times: np.ndarray
    currents: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times.shape != self.currents.shape:
            raise DomainError("times and currents must have equal length")
        if not np.all(np.isfinite(self.currents)):
            raise DomainError("trace contains non-finite currents")


def quantum_efficiency_factors(params):
    """``mu* = mu / (1 - exp(-alpha_eff x_a))`` for the forward and backward efficiencies."""
    absorbed = -math.expm1(-params.alpha_eff * params.x_a)
    if not absorbed > 0:
        raise DomainError("alpha_eff * x_a must be positive")
    return params.mu_f / absorbed, params.mu_b / absorbed


def _step(t):
    return (t >= 0).astype(float)


def _carriers(t, photon_rate, mf, mb, a, xa, w, v, grouping):
    e_xa = math.exp(-a * xa)
    plateau = (mf + mb) * (1.0 - e_xa)
    t1 = w / v
    t2 = (w + xa) / v
    # only evaluate the exponentials inside the sweep window to avoid overflow
    in_sweep = (t >= t1) & (t < t2)
    ts = np.where(in_sweep, t, t1)
    grow = np.exp(a * v * ts - a * w)
    if grouping == "inside":
        fwd = 1.0 - e_xa * grow
    else:
        fwd = 1.0 - np.exp(-a * xa + a * v * ts) - a * w
    sweep = mf * fwd + mb * (grow - e_xa)
    body = plateau * (_step(t) - _step(t - t1)) + np.where(in_sweep, sweep, 0.0)
    return photon_rate * body


def photo_carrier_concentrations(t, power, params, grouping="inside"):
    """Photo-generated electron and hole counts ``(N_ph, P_ph)`` at time ``t``.

    ``grouping`` selects how the forward sweep term is read: ``"inside"``
    (default) uses ``1 - exp(-a x_a + a v t - a w)``; ``"outside"`` uses
    ``1 - exp(-a x_a + a v t) - a w``.
    """
    if power < 0:
        raise DomainError("incident power must be >= 0")
    if grouping not in GROUPINGS:
        raise DomainError(f"grouping must be one of {GROUPINGS}")
    t_arr = np.asarray(t, dtype=float)
    mf, mb = quantum_efficiency_factors(params)
    rate = power / (constants.h * params.nu)
    a, xa = params.alpha_eff, params.x_a
    n = _carriers(t_arr, rate, mf, mb, a, xa, params.w_n, params.v_n, grouping)
    p = _carriers(t_arr, rate, mf, mb, a, xa, params.w_p, params.v_p, grouping)
    if n.ndim == 0:
        return float(n), float(p)
    return n, p


def photocurrent(t, power, params, grouping="inside"):
    """``I_ph = q / (x_a + w_n + w_p) * (v_n N_ph + v_p P_ph)`` in amperes."""
    n, p = photo_carrier_concentrations(t, power, params, grouping)
    scale = params.q / (params.x_a + params.w_n + params.w_p)
    return scale * (params.v_n * n + params.v_p * p)


def photocurrent_series(t_grid, power, params, grouping="inside"):
    """Sample :func:`photocurrent` on a nondecreasing time grid."""
    t = np.asarray(t_grid, dtype=float).ravel()
    if t.size > 1 and np.any(np.diff(t) < 0):
        raise DomainError("time grid must be monotone nondecreasing")
    currents = np.asarray(photocurrent(t, power, params, grouping), dtype=float).reshape(t.shape)
    return PhotocurrentTrace(t, currents, {"windows": params.windows(), "grouping": grouping, "power": power})


def rc_lowpass(trace, r_tot, c_d):
    """Optional first-order RC post-filter with time constant ``r_tot * c_d``.

    Exact for input that is linear between samples; the output starts from
    rest at the first sample. Not part of the core transit-time model.
    """
    tau = r_tot * c_d
    if not tau > 0:
        raise DomainError("R_tot * C_d must be positive")
    t, u = trace.times, trace.currents
    y = np.zeros_like(u)
    if u.size:
        y[0] = 0.0
    for i in range(1, u.size):
        h = t[i] - t[i - 1]
        if h == 0:
            y[i] = y[i - 1]
            continue
        a = math.exp(-h / tau)
        g = tau / h * (1.0 - a)
        y[i] = a * y[i - 1] + (g - a) * u[i - 1] + (1.0 - g) * u[i]
    meta = dict(trace.meta, rc_time_constant=tau)
    return PhotocurrentTrace(t.copy(), y, meta)
