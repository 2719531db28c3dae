"""Hot numeric kernels, each in a numba flavour and a pure-numpy flavour.

The public names at the bottom of the module are bound to one flavour
according to :data:`nanoradar._accel.NUMBA_ENABLED`. Both flavours are always
importable under their ``*_numba`` / ``*_numpy`` names so the test suite and
the benchmark can compare them directly.

All kernels take and return plain ndarrays; argument checking happens in the
calling modules.
"""
import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

# Rescaling bounds for the downward recurrence.
_BIG = 1e200
_SMALL = 1e-200
# Below this |z| the two-term ascending series is exact to double precision.
_TINY_Z = 1e-8


def downward_start(nmax, az):
    """Starting order of the downward recurrence for ``j_n``.

    ``nmax + ceil(15 + |z|)`` plus a transition-zone margin of ``8 |z|^(1/3)``
    so that large arguments keep full precision.
    """
    return nmax + int(math.ceil(15.0 + az)) + int(math.ceil(8.0 * az ** (1.0 / 3.0)))


# --------------------------------------------------------------------------
# spherical Bessel j_n(z), complex z, orders 0..nmax
# --------------------------------------------------------------------------


@njit(cache=True)
def bessel_j_table_numba(nmax, z):
    m = z.size
    out = np.zeros((m, nmax + 1), dtype=np.complex128)
    for i in range(m):
        zi = z[i]
        az = abs(zi)
        if az == 0.0:
            out[i, 0] = 1.0
            continue
        if az < _TINY_Z:
            term = 1.0 + 0.0j
            for n in range(nmax + 1):
                if n > 0:
                    term = term * zi / (2.0 * n + 1.0)
                out[i, n] = term * (1.0 - zi * zi / (2.0 * (2.0 * n + 3.0)))
            continue
        nstart = nmax + int(math.ceil(15.0 + az)) + int(math.ceil(8.0 * az ** (1.0 / 3.0)))
        jp1 = 0.0 + 0.0j
        jn = _SMALL + 0.0j
        j1_raw = 0.0 + 0.0j
        for n in range(nstart, 0, -1):
            if n <= nmax:
                out[i, n] = jn
            jm1 = (2.0 * n + 1.0) / zi * jn - jp1
            jp1 = jn
            jn = jm1
            if abs(jn) > _BIG:
                jn *= _SMALL
                jp1 *= _SMALL
                for k in range(n, nmax + 1):
                    out[i, k] *= _SMALL
            if n == 1:
                j1_raw = jp1
        out[i, 0] = jn
        j0_true = np.sin(zi) / zi
        j1_true = np.sin(zi) / (zi * zi) - np.cos(zi) / zi
        if abs(j0_true) >= abs(j1_true):
            scale = j0_true / jn
        else:
            scale = j1_true / j1_raw
        for k in range(nmax + 1):
            out[i, k] *= scale
    return out


def bessel_j_table_numpy(nmax, z):
    z = np.asarray(z, dtype=np.complex128).ravel()
    m = z.size
    out = np.zeros((m, nmax + 1), dtype=np.complex128)
    az = np.abs(z)
    zero = az == 0.0
    tiny = (~zero) & (az < _TINY_Z)
    reg = ~(zero | tiny)
    out[zero, 0] = 1.0
    if tiny.any():
        zt = z[tiny]
        term = np.ones_like(zt)
        for n in range(nmax + 1):
            if n > 0:
                term = term * zt / (2.0 * n + 1.0)
            out[tiny, n] = term * (1.0 - zt * zt / (2.0 * (2.0 * n + 3.0)))
    if reg.any():
        zr = z[reg]
        block = np.zeros((zr.size, nmax + 1), dtype=np.complex128)
        nstart = downward_start(nmax, float(az[reg].max()))
        jp1 = np.zeros_like(zr)
        jn = np.full_like(zr, _SMALL)
        j1_raw = np.zeros_like(zr)
        for n in range(nstart, 0, -1):
            if n <= nmax:
                block[:, n] = jn
            jm1 = (2.0 * n + 1.0) / zr * jn - jp1
            jp1 = jn
            jn = jm1
            big = np.abs(jn) > _BIG
            if big.any():
                jn = np.where(big, jn * _SMALL, jn)
                jp1 = np.where(big, jp1 * _SMALL, jp1)
                if n <= nmax:
                    block[big, n:] *= _SMALL
            if n == 1:
                j1_raw = jp1.copy()
        block[:, 0] = jn
        j0_true = np.sin(zr) / zr
        j1_true = np.sin(zr) / (zr * zr) - np.cos(zr) / zr
        use0 = np.abs(j0_true) >= np.abs(j1_true)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = np.where(use0, j0_true / jn, j1_true / j1_raw)
        out[reg] = block * scale[:, None]
    return out


# --------------------------------------------------------------------------
# spherical Bessel y_n(z), upward recurrence (stable direction)
# --------------------------------------------------------------------------


@njit(cache=True)
def bessel_y_table_numba(nmax, z):
    m = z.size
    out = np.zeros((m, nmax + 1), dtype=np.complex128)
    for i in range(m):
        zi = z[i]
        c = np.cos(zi)
        s = np.sin(zi)
        out[i, 0] = -c / zi
        if nmax >= 1:
            out[i, 1] = -c / (zi * zi) - s / zi
        for n in range(1, nmax):
            out[i, n + 1] = (2.0 * n + 1.0) / zi * out[i, n] - out[i, n - 1]
    return out


def bessel_y_table_numpy(nmax, z):
    z = np.asarray(z, dtype=np.complex128).ravel()
    out = np.zeros((z.size, nmax + 1), dtype=np.complex128)
    c = np.cos(z)
    s = np.sin(z)
    out[:, 0] = -c / z
    if nmax >= 1:
        out[:, 1] = -c / (z * z) - s / z
    for n in range(1, nmax):
        out[:, n + 1] = (2.0 * n + 1.0) / z * out[:, n] - out[:, n - 1]
    return out


# --------------------------------------------------------------------------
# Mie angular functions pi_n, tau_n for n = 1..nmax at mu = cos(theta)
# --------------------------------------------------------------------------


@njit(cache=True)
def pi_tau_table_numba(nmax, mu):
    m = mu.size
    pi = np.zeros((m, nmax))
    tau = np.zeros((m, nmax))
    for i in range(m):
        x = mu[i]
        p_prev = 0.0
        p_cur = 1.0
        for n in range(1, nmax + 1):
            if n > 1:
                p_new = ((2.0 * n - 1.0) * x * p_cur - n * p_prev) / (n - 1.0)
                p_prev = p_cur
                p_cur = p_new
            pi[i, n - 1] = p_cur
            tau[i, n - 1] = n * x * p_cur - (n + 1.0) * p_prev
    return pi, tau


def pi_tau_table_numpy(nmax, mu):
    mu = np.asarray(mu, dtype=np.float64).ravel()
    pi = np.zeros((mu.size, nmax))
    tau = np.zeros((mu.size, nmax))
    p_prev = np.zeros_like(mu)
    p_cur = np.ones_like(mu)
    for n in range(1, nmax + 1):
        if n > 1:
            p_new = ((2.0 * n - 1.0) * mu * p_cur - n * p_prev) / (n - 1.0)
            p_prev, p_cur = p_cur, p_new
        pi[:, n - 1] = p_cur
        tau[:, n - 1] = n * mu * p_cur - (n + 1.0) * p_prev
    return pi, tau


# --------------------------------------------------------------------------
# amplitude sums S1, S2
# --------------------------------------------------------------------------


@njit(cache=True)
def amplitude_sums_numba(an, bn, pi, tau):
    m, nmax = pi.shape
    s1 = np.zeros(m, dtype=np.complex128)
    s2 = np.zeros(m, dtype=np.complex128)
    for i in range(m):
        acc1 = 0.0j
        acc2 = 0.0j
        for k in range(nmax):
            n = k + 1.0
            c = (2.0 * n + 1.0) / (n * (n + 1.0))
            acc1 += c * (an[k] * pi[i, k] + bn[k] * tau[i, k])
            acc2 += c * (an[k] * tau[i, k] + bn[k] * pi[i, k])
        s1[i] = acc1
        s2[i] = acc2
    return s1, s2


def amplitude_sums_numpy(an, bn, pi, tau):
    # sequential accumulation in the numba order; a BLAS matvec would make the
    # rounding depend on how many angles are evaluated together
    m, nmax = pi.shape
    s1 = np.zeros(m, dtype=np.complex128)
    s2 = np.zeros(m, dtype=np.complex128)
    for k in range(nmax):
        n = k + 1.0
        c = (2.0 * n + 1.0) / (n * (n + 1.0))
        s1 += c * (an[k] * pi[:, k] + bn[k] * tau[:, k])
        s2 += c * (an[k] * tau[:, k] + bn[k] * pi[:, k])
    return s1, s2


# --------------------------------------------------------------------------
# lattice phase sums for the RGD form factor
# --------------------------------------------------------------------------
# shape codes: 0 = sphere, 1 = box (every cell fully inside).
# Sphere cells whose centre lies within sqrt(3)/2 h of the surface are split
# into sub^3 subcells; subcells carry a linear volume-fraction ramp. Interior
# and boundary contributions are returned separately because the caller
# applies a different exact-cell phase factor to each.

_HALF_DIAG = 0.8660254037844386


@njit(cache=True)
def lattice_phase_sums_numba(shape, x, y, z, ex, ey, ez, radius, h, sx, sy, sz):
    n = x.size
    sub = sx.size
    hs = h / sub
    offs = (np.arange(sub) + 0.5) / sub * h - 0.5 * h
    inner = np.zeros(n, dtype=np.complex128)
    bound = np.zeros(n, dtype=np.complex128)
    w_in = np.zeros(n)
    w_bd = np.zeros(n)
    band = _HALF_DIAG * h
    for i in range(n):
        acc_i = 0.0j
        acc_b = 0.0j
        cnt_i = 0.0
        cnt_b = 0.0
        for j in range(y.size):
            row_i = 0.0j
            for k in range(z.size):
                if shape == 1:
                    row_i += ez[k]
                    cnt_i += 1.0
                    continue
                r = math.sqrt(x[i] * x[i] + y[j] * y[j] + z[k] * z[k])
                sd = r - radius
                if sd >= band:
                    continue
                if sd <= -band:
                    row_i += ez[k]
                    cnt_i += 1.0
                    continue
                cell = 0.0j
                cw = 0.0
                for a in range(sub):
                    px = x[i] + offs[a]
                    for b in range(sub):
                        py = y[j] + offs[b]
                        rowc = 0.0j
                        for c in range(sub):
                            pz = z[k] + offs[c]
                            w = 0.5 - (math.sqrt(px * px + py * py + pz * pz) - radius) / hs
                            if w <= 0.0:
                                continue
                            if w > 1.0:
                                w = 1.0
                            rowc += w * sz[c]
                            cw += w
                        cell += sx[a] * sy[b] * rowc
                acc_b += ex[i] * ey[j] * ez[k] * cell
                cnt_b += cw
            acc_i += ey[j] * row_i
        inner[i] = ex[i] * acc_i
        bound[i] = acc_b / (sub * sub * sub)
        w_in[i] = cnt_i
        w_bd[i] = cnt_b / (sub * sub * sub)
    return inner, bound, w_in, w_bd


def lattice_phase_sums_numpy(shape, x, y, z, ex, ey, ez, radius, h, sx, sy, sz):
    n = x.size
    sub = sx.size
    hs = h / sub
    offs = (np.arange(sub) + 0.5) / sub * h - 0.5 * h
    inner = np.zeros(n, dtype=np.complex128)
    bound = np.zeros(n, dtype=np.complex128)
    w_in = np.zeros(n)
    w_bd = np.zeros(n)
    eyz = ey[:, None] * ez[None, :]
    if shape == 1:
        inner[:] = ex * np.sum(eyz)
        w_in[:] = float(y.size * z.size)
        return inner, bound, w_in, w_bd
    band = _HALF_DIAG * h
    r2yz = y[:, None] ** 2 + z[None, :] ** 2
    sub_phase = (sx[:, None, None] * sy[None, :, None] * sz[None, None, :]).ravel()
    ox, oy, oz = np.meshgrid(offs, offs, offs, indexing="ij")
    ox, oy, oz = ox.ravel(), oy.ravel(), oz.ravel()
    for i in range(n):
        sd = np.sqrt(x[i] ** 2 + r2yz) - radius
        full = sd <= -band
        inner[i] = ex[i] * np.sum(eyz[full])
        w_in[i] = float(np.count_nonzero(full))
        jb, kb = np.nonzero((sd > -band) & (sd < band))
        if jb.size == 0:
            continue
        px = x[i] + ox[None, :]
        py = y[jb][:, None] + oy[None, :]
        pz = z[kb][:, None] + oz[None, :]
        w = np.clip(0.5 - (np.sqrt(px * px + py * py + pz * pz) - radius) / hs, 0.0, 1.0)
        cells = (w * sub_phase[None, :]).sum(axis=1)
        bound[i] = ex[i] * np.sum(ey[jb] * ez[kb] * cells) / sub**3
        w_bd[i] = np.sum(w) / sub**3
    return inner, bound, w_in, w_bd


if NUMBA_ENABLED:
    bessel_j_table = bessel_j_table_numba
    bessel_y_table = bessel_y_table_numba
    pi_tau_table = pi_tau_table_numba
    amplitude_sums = amplitude_sums_numba
    lattice_phase_sums = lattice_phase_sums_numba
else:
    bessel_j_table = bessel_j_table_numpy
    bessel_y_table = bessel_y_table_numpy
    pi_tau_table = pi_tau_table_numpy
    amplitude_sums = amplitude_sums_numpy
    lattice_phase_sums = lattice_phase_sums_numpy
