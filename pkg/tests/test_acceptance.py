"""Acceptance criteria, one test per criterion.

Each check prints a single ``[PASS]``/``[FAIL]`` line; under pytest the lines
are also collected into the terminal summary. Run standalone with::

    python3 tests/test_acceptance.py
"""
import math
import sys
import time
import warnings

import numpy as np
import pytest
from scipy import constants, integrate, optimize

from nanoradar import antenna, mie, photodetector, radar, rgd, spp
from nanoradar.radar import NoiseModel, PlaneWave, RadarScene

LAMBDA = 428e-9  # 700 THz in air


def _simpson_power(theta, intensity):
    return 2 * math.pi * integrate.simpson(intensity * np.sin(theta), x=theta)


def _random_cases(n=200, seed=20240601):
    rng = np.random.default_rng(seed)
    return list(zip(rng.uniform(0.01, 20.0, n), rng.uniform(1.01, 2.0, n)))


def c1_energy_conservation():
    worst = 0.0
    lossy_ok = True
    for x, m in _random_cases():
        q_sca, q_ext = mie.efficiencies(mie.lorenz_mie_coefficients(x, m))
        worst = max(worst, abs(q_ext - q_sca) / q_ext)
        q_sca, q_ext = mie.efficiencies(mie.lorenz_mie_coefficients(x, complex(m, 0.1)))
        lossy_ok &= q_ext > q_sca
    return worst < 1e-9 and lossy_ok, f"max |Qext-Qsca|/Qext = {worst:.2e} (< 1e-9); absorbing Qext > Qsca: {lossy_ok}"


def c2_optical_theorem():
    worst = 0.0
    for x, m in _random_cases():
        c = mie.lorenz_mie_coefficients(x, m)
        _, q_ext = mie.efficiencies(c)
        s0, _ = mie.scattering_amplitudes(c, 0.0)
        worst = max(worst, abs(4 / x**2 * s0.real - q_ext) / q_ext)
    return worst < 1e-8, f"max relative deviation {worst:.2e} (< 1e-8) over 200 cases"


def c3_rayleigh_limit():
    x, m = 1e-2, 1.33
    q_sca, _ = mie.efficiencies(mie.lorenz_mie_coefficients(x, m))
    oracle = 8.0 / 3.0 * x**4 * abs((m * m - 1) / (m * m + 2)) ** 2
    rel = abs(q_sca / oracle - 1)
    return rel < 5e-3, f"Q_sca/Rayleigh - 1 = {rel:.2e} (< 5e-3)"


def c4_rgd_mie_cross_validation():
    theta = np.linspace(0, math.pi, 2001)
    worst_small = 0.0
    for x in (0.05, 0.1, 0.25, 0.5):
        for m in (1.01, 1.03, 1.05):
            r = x * LAMBDA / (2 * math.pi)
            p_mie = _simpson_power(theta, mie.mie_intensity_pattern(mie.Sphere(r, m), 1.0, LAMBDA, theta).intensity)
            p_rgd = _simpson_power(
                theta, rgd.rgd_intensity_pattern(rgd.HomogeneousRegion.sphere(r, m), 1.0, LAMBDA, theta).intensity
            )
            worst_small = max(worst_small, abs(p_rgd / p_mie - 1))
    x = 7.34
    r = x * LAMBDA / (2 * math.pi)
    medians, power_gaps = [], []
    for m in (1.05, 1.10, 1.15, 1.20):
        i_mie = mie.mie_intensity_pattern(mie.Sphere(r, m), 1.0, LAMBDA, theta).intensity
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", rgd.RgdValidityWarning)
            i_rgd = rgd.rgd_intensity_pattern(rgd.HomogeneousRegion.sphere(r, m), 1.0, LAMBDA, theta).intensity
        medians.append(float(np.median(np.abs(i_rgd - i_mie) / i_mie)))
        power_gaps.append(abs(_simpson_power(theta, i_rgd) / _simpson_power(theta, i_mie) - 1))
    ok = worst_small < 0.05 and min(medians) > 0.2 and power_gaps[-1] > 0.2
    detail = (
        f"x<=0.5 power gap max {worst_small:.2%} (< 5%); x=7.34 median pattern gap "
        f"{min(medians):.0%}-{max(medians):.0%} (> 20%), power gap "
        + ", ".join(f"{g:.1%}" for g in power_gaps)
        + " for RRI 1.05-1.20"
    )
    return ok, detail


def c5_fig4_reproduction():
    theta = np.linspace(0, math.pi, 721)
    big = {m: mie.mie_intensity_pattern(mie.Sphere(500e-9, m), 1.0, LAMBDA, theta).intensity for m in (1.05, 1.20)}
    small = {
        m: rgd.rgd_intensity_pattern(rgd.HomogeneousRegion.sphere(50e-9, m), 1.0, LAMBDA, theta).intensity
        for m in (1.05, 1.20)
    }
    counts = []
    for i in big.values():
        counts.append(int(np.sum((i[1:-1] > i[:-2]) & (i[1:-1] > i[2:]))))
    shape_ok = True
    for i in small.values():
        lo = int(np.argmin(i))
        shape_ok &= int(np.argmax(i)) == 0 and bool(np.all(np.diff(i[: lo + 1]) < 0))
        shape_ok &= abs(theta[lo] - math.pi / 2) < math.radians(10)
    grows = bool(np.all(big[1.20] > big[1.05]) and np.all(small[1.20] > small[1.05]))
    ok = min(counts) >= 3 and shape_ok and grows
    return ok, f"500 nm interior maxima {counts} (>= 3); 50 nm forward-peaked to ~90 deg: {shape_ok}; 1.20 > 1.05 everywhere: {grows}"


def c6_dipole_chain():
    pat = antenna.dipole_normalized_pattern()
    p = antenna.integrate_radiated_power(pat)
    d = antenna.directivity(pat, math.pi / 2, p_rad=p)
    worst = 0.0
    for w in np.logspace(13, 16, 31):
        rho = antenna.ldos(antenna.dipole_radiated_power(1e-29, w), 1e-29, w)
        worst = max(worst, abs(rho / (w**2 / (math.pi**2 * constants.c**3)) - 1))
    ok = abs(p - 1) < 1e-9 and abs(d - 1.5) < 1e-9 and worst < 1e-12
    return ok, f"|P-1| = {abs(p - 1):.1e}, |D-1.5| = {abs(d - 1.5):.1e}, LDOS rel. error {worst:.1e}"


def c7_array_nulls():
    spec = antenna.ArraySpec.end_fire(4, LAMBDA / 4, LAMBDA)
    grid = np.linspace(0, math.pi, 3601)
    mag = np.abs(antenna.array_factor(spec, grid))
    af0 = abs(antenna.array_factor(spec, 0.0))
    peak_ok = int(np.argmax(mag)) == 0 and af0 == 4.0

    def real_af(t):
        psi = spec.k * spec.spacing * math.cos(t) + spec.progressive_phase
        return (antenna.array_factor(spec, t) * np.exp(-1.5j * psi)).real

    vals = np.array([real_af(t) for t in grid[1:-1]])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    nulls = []
    for i in idx:
        root = optimize.brentq(real_af, grid[1 + i], grid[2 + i], xtol=1e-15)
        nulls.append((root, abs(antenna.array_factor(spec, root))))
    null_ok = any(v < 1e-10 for _, v in nulls)
    where = ", ".join(f"{math.degrees(t):.3f} deg (|AF| {v:.1e})" for t, v in nulls)
    return peak_ok and null_ok, f"|AF(0)| = {af0!r}, argmax at 0: {peak_ok}; nulls: {where}"


def c8_spp_dispersion():
    wp = 1.37e16
    metal = spp.DrudeMetal(wp)
    pole = spp.dispersion_pole(metal, 1.0)
    pole_err = abs(pole / (wp / math.sqrt(2)) - 1)
    interface = spp.Interface(metal, 1.0)
    w_spp = spp.spp_frequency(wp, 1.0)
    bound_ok = all(
        spp.spp_wavevector(interface, w).real >= w / constants.c for w in np.linspace(1e-3, 0.95, 400) * w_spp
    )
    residual = 0.0
    for gamma, frac in ((0.0, 0.5), (3e13, 0.3), (1e14, 0.8)):
        iface = spp.Interface(spp.DrudeMetal(wp, gamma), 1.0)
        w = frac * w_spp
        mode = spp.solve_tm_mode(iface, w)
        eps1, eps2 = spp.region_permittivities(iface, w)
        ex1, ez1, hy1 = spp.tm_mode_fields(mode, iface, 1e-7, -1e-300)
        ex2, ez2, hy2 = spp.tm_mode_fields(mode, iface, 1e-7, 0.0)
        residual = max(
            residual,
            abs(ex1 - ex2) / abs(ex2),
            abs(eps1 * ez1 - eps2 * ez2) / abs(eps2 * ez2),
            abs(hy1 - hy2) / abs(hy2),
        )
    ok = pole_err < 1e-12 and bound_ok and residual < 1e-12
    return ok, f"pole rel. error {pole_err:.1e}; bound below light line: {bound_ok}; continuity residual {residual:.1e}"


def c9_photodetector():
    p = photodetector.RcePdParams(0.5e-6, 1e-6, 1.5e-6, 1e5, 0.7e5, 2e6, 0.4, 0.3, constants.c / 850e-9)
    t_neg = -np.logspace(-18, -9, 50)
    causal = bool(np.all(photodetector.photocurrent(t_neg, 1e-3, p) == 0))
    t = np.linspace(-1e-11, 6e-11, 701)
    base = photodetector.photocurrent(t, 1e-3, p)
    linear = all(np.array_equal(photodetector.photocurrent(t, a * 1e-3, p), a * base) for a in (0.0, 0.5, 2.0, 8.0))
    mf, mb = photodetector.quantum_efficiency_factors(p)
    rate = 1e-3 / (constants.h * p.nu)
    closed = p.q / (p.x_a + p.w_n + p.w_p) * rate * (mf + mb) * (1 - math.exp(-p.alpha_eff * p.x_a)) * (p.v_n + p.v_p)
    t_plateau = 0.5 * min(p.w_n / p.v_n, p.w_p / p.v_p)
    plateau_err = abs(photodetector.photocurrent(t_plateau, 1e-3, p) / closed - 1)
    end = max(p.windows().values())
    support = bool(np.all(photodetector.photocurrent(end * np.array([1.0, 1.01, 2.0, 1e3]), 1e-3, p) == 0))
    ok = causal and linear and plateau_err < 1e-12 and support
    return ok, f"causal {causal}; exact linearity {linear}; plateau rel. error {plateau_err:.1e}; zero after windows {support}"


def _fine_delta(radius, k, fraction, n=100_000):
    theta = np.linspace(0, math.pi, n)
    u = 2 * k * radius * np.sin(theta[1:] / 2)
    f = np.concatenate([[1.0], 3 * (np.sin(u) - u * np.cos(u)) / u**3])
    i = (np.cos(theta) * f) ** 2
    above = i >= fraction * i[-1]
    lo = n - 1
    while lo > 0 and above[lo - 1]:
        lo -= 1
    return 0.5 * (theta[-1] - theta[lo])


def c10_radar_detection():
    rng = np.random.default_rng(7)
    contained = True
    for _ in range(100):
        n = int(rng.integers(5, 200))
        theta = np.linspace(0, math.pi, n)
        pattern = radar.ScatteringPattern(theta, rng.exponential(1.0, n), "random", LAMBDA, 1.0)
        t1, t2 = np.sort(rng.uniform(0, 3, 2))
        low = radar.threshold_detect(pattern, t1)
        high = radar.threshold_detect(pattern, t2)
        for lo, hi in high.intervals:
            contained &= any(a <= lo and hi <= b for a, b in low.intervals)
        contained &= high.delta <= low.delta
    grid = np.linspace(0, math.pi, 181)
    scene = RadarScene(PlaneWave(LAMBDA, "parallel"), mie.Sphere(50e-9, 1.05))
    echo = radar.echo_pattern(scene, grid)
    rep = radar.threshold_detect(echo, 0.5 * echo.intensity[-1])
    ref = _fine_delta(50e-9, scene.k, 0.5)
    delta_ok = abs(rep.delta - ref) < grid[1] - grid[0]
    noise = NoiseModel("gaussian", sigma=0.05 * float(echo.intensity.max()), seed=99)
    a = radar.run_pipeline(scene, grid, noise, 0.5, relative_threshold=True)
    b = radar.run_pipeline(scene, grid, noise, 0.5, relative_threshold=True)
    repro = bool(np.array_equal(a.pattern.intensity, b.pattern.intensity)) and a.report == b.report
    ok = contained and delta_ok and repro
    return ok, (
        f"containment on 100 patterns {contained}; delta {math.degrees(rep.delta):.3f} deg vs fine scan "
        f"{math.degrees(ref):.3f} deg (tol 1 deg); seeded pipeline reproducible {repro}"
    )


CRITERIA = [
    ("C1 Mie energy conservation", c1_energy_conservation),
    ("C2 optical theorem", c2_optical_theorem),
    ("C3 Rayleigh limit", c3_rayleigh_limit),
    ("C4 RGD/Mie cross-validation", c4_rgd_mie_cross_validation),
    ("C5 Fig. 4 qualitative shape", c5_fig4_reproduction),
    ("C6 dipole antenna chain", c6_dipole_chain),
    ("C7 end-fire array nulls", c7_array_nulls),
    ("C8 SPP dispersion", c8_spp_dispersion),
    ("C9 RCE-PD transient", c9_photodetector),
    ("C10 radar detection", c10_radar_detection),
]


def _line(name, ok, detail, seconds):
    return f"[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({seconds:.2f} s)"


@pytest.mark.parametrize("name, check", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, check, acceptance_lines):
    t0 = time.perf_counter()
    ok, detail = check()
    line = _line(name, ok, detail, time.perf_counter() - t0)
    acceptance_lines.append(line)
    print(line)
    assert ok, line


def main():
    start = time.perf_counter()
    passed = 0
    for name, check in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = check()
        passed += ok
        print(_line(name, ok, detail, time.perf_counter() - t0))
    total = time.perf_counter() - start
    print(f"{passed}/{len(CRITERIA)} criteria passed in {total:.1f} s (budget 60 s)")
    return 0 if passed == len(CRITERIA) and total < 60 else 1


if __name__ == "__main__":
    sys.exit(main())
