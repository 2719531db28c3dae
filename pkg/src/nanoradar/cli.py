"""Command-line interface.

Every subcommand reads one YAML run configuration (``--config``; the built-in
small-sphere scene otherwise) and writes CSV or a JSON document. Angles are
degrees on the command line and in outputs.

Exit status: 0 success, 2 invalid input or configuration, 3 numerical failure.
"""
import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np
from scipy import integrate

from . import antenna, mie, photodetector, radar, rgd, spp
from ._accel import backend_name
from .config import DEFAULT_DOCUMENT, GridConfig, parse_config
from .errors import ConfigError, NanoradarError, NumericalError

FIG4_RRI = (1.05, 1.10, 1.15, 1.20)
FIG4_RADII = {"fig4a_mie.csv": ("mie", 500e-9), "fig4b_rgd.csv": ("rgd", 50e-9)}


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def to_csv(header, rows):
    """CSV text with a header row; floats use the shortest round-trip form."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def to_structured(document):
    return json.dumps(_jsonable(document), indent=2, sort_keys=True) + "\n"


class Output:
    """Tabular result that can render itself as CSV or as a JSON document."""

    def __init__(self, header, rows, summary=None, structured_default=False):
        self.header = list(header)
        self.rows = rows
        self.summary = summary or {}
        self.structured_default = structured_default

    def render(self, fmt):
        fmt = fmt or ("structured" if self.structured_default else "csv")
        if fmt == "csv":
            return to_csv(self.header, self.rows)
        doc = dict(self.summary)
        doc["columns"] = self.header
        doc["rows"] = [list(r) for r in self.rows]
        return to_structured(doc)


class ReportOutput(Output):
    """Structured output is the summary document alone; CSV is the echo table."""

    def render(self, fmt):
        if (fmt or "structured") == "structured":
            return to_structured(self.summary)
        return to_csv(self.header, self.rows)


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--grid expects start:stop:count, got {text!r}") from None
    try:
        return GridConfig(start=start, stop=stop, count=count)
    except ValueError as exc:
        raise ConfigError(f"--grid: {exc}") from None


def load_config(args):
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = parse_config(text)
    else:
        cfg = parse_config(DEFAULT_DOCUMENT)
    update = {}
    if getattr(args, "grid", None):
        update["grid"] = _parse_grid(args.grid)
    if getattr(args, "seed", None) is not None:
        update["noise"] = cfg.noise.model_copy(update={"seed": args.seed})
    return cfg.model_copy(update=update) if update else cfg


def _pattern_output(pattern, summary):
    rows = zip(pattern.degrees, pattern.intensity)
    summary = dict(summary, model=pattern.model, wavelength=pattern.wavelength, polarization=pattern.polarization)
    return Output(["angle_deg", "intensity"], list(rows), summary)


def cmd_mie(cfg, args):
    scene = cfg.scene.build()
    sphere = radar._as_sphere(scene.particle)
    if sphere is None:
        raise ConfigError("scene.particle: the mie command needs a sphere")
    pat = mie.mie_intensity_pattern(
        sphere, scene.medium.refractive_index, scene.wavelength, cfg.grid.radians(), scene.polarization
    )
    return _pattern_output(pat, {"size_parameter": pat.meta["size_parameter"]})


def cmd_rgd(cfg, args):
    scene = cfg.scene.build()
    region = radar._as_region(scene.particle)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", rgd.RgdValidityWarning)
        pat = rgd.rgd_intensity_pattern(
            region, scene.medium.refractive_index, scene.wavelength, cfg.grid.radians(), scene.polarization
        )
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    v = pat.meta["validity"]
    return _pattern_output(pat, {"rgd_valid": v.valid, "contrast": v.contrast, "phase_shift": v.phase_shift})


def cmd_radar(cfg, args):
    scene = cfg.scene.build()
    th = cfg.threshold
    relative = th.relative is not None
    result = radar.run_pipeline(
        scene,
        cfg.grid.radians(),
        cfg.noise.build(),
        th.relative if relative else th.absolute,
        math.radians(cfg.look_direction_deg),
        model=cfg.model,
        relative_threshold=relative,
    )
    summary = {"scenario": cfg.scenario, "report": result.report.to_dict()}
    summary.update(result.selection.to_dict())
    return ReportOutput(["angle_deg", "echo"], list(zip(result.pattern.degrees, result.pattern.intensity)), summary)


def cmd_spp(cfg, args):
    c = cfg.spp
    metal = spp.DrudeMetal(c.plasma_frequency, c.damping, c.eps_inf)
    interface = spp.Interface(metal, c.eps2)
    w_spp = spp.spp_frequency(c.plasma_frequency, c.eps2)
    omegas = np.linspace(c.omega_start_fraction, c.omega_stop_fraction, c.count) * w_spp
    rows = []
    for w in omegas:
        k = spp.spp_wavevector(interface, float(w), c.mode)
        rows.append((w, k.real, k.imag))
    return Output(["omega", "re_k", "im_k"], rows, {"omega_spp": w_spp, "mode": c.mode})


def cmd_antenna(cfg, args):
    c = cfg.antenna
    wavelength = cfg.scene.build().wavelength
    d = c.spacing_wavelengths * wavelength
    if c.progressive_phase == "end_fire":
        spec = antenna.ArraySpec.end_fire(c.element_count, d, wavelength)
    else:
        spec = antenna.ArraySpec(c.element_count, d, c.progressive_phase, wavelength)
    element = antenna.dipole_normalized_pattern() if c.element == "dipole" else antenna.isotropic_pattern()
    array = antenna.uniform_array_pattern(spec, element)
    theta = cfg.grid.radians()
    p_elem = antenna.integrate_radiated_power(element)
    p_arr = antenna.integrate_radiated_power(array)
    rows = list(
        zip(
            np.degrees(theta),
            element(theta, 0.0),
            array(theta, 0.0),
            antenna.directivity(array, theta, 0.0, p_rad=p_arr),
        )
    )
    summary = {
        "element_power": p_elem,
        "array_power": p_arr,
        "array_directivity_max": float(np.max(antenna.directivity(array, theta, 0.0, p_rad=p_arr))),
    }
    return Output(["angle_deg", "element", "array", "array_directivity"], rows, summary)


def cmd_pd(cfg, args):
    c = cfg.photodetector
    t = np.linspace(-0.05 * c.t_stop, c.t_stop, c.count)
    trace = photodetector.photocurrent_series(t, c.power, c.params(), c.grouping)
    return Output(["t_s", "i_a"], list(zip(trace.times, trace.currents)), {"windows": trace.meta["windows"]})


def compare_models(x_values, m, wavelength, medium_index, theta):
    """RGD against Mie for a sphere at each size parameter (unpolarized).

    Returns rows of ``(x, max relative intensity error, relative power error,
    mie seconds, rgd seconds)``; errors are relative to Mie.
    """
    rows = []
    for x in x_values:
        radius = x * wavelength / (2.0 * math.pi * medium_index)
        t0 = time.perf_counter()
        pm = mie.mie_intensity_pattern(mie.Sphere(radius, m), medium_index, wavelength, theta).intensity
        t1 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", rgd.RgdValidityWarning)
            region = rgd.HomogeneousRegion.sphere(radius, m)
            pr = rgd.rgd_intensity_pattern(region, medium_index, wavelength, theta).intensity
        t2 = time.perf_counter()
        max_err = float(np.max(np.abs(pr - pm) / pm))
        w = np.sin(theta)
        power_err = float(integrate.simpson(pr * w, x=theta) / integrate.simpson(pm * w, x=theta) - 1.0)
        rows.append((x, max_err, power_err, t1 - t0, t2 - t1))
    return rows


def cmd_compare(cfg, args):
    scene = cfg.scene.build()
    c = cfg.compare
    rows = compare_models(c.size_parameters, c.rri, scene.wavelength, scene.medium.refractive_index, cfg.grid.radians())
    header = ["x", "m", "max_rel_intensity_error", "power_rel_error"]
    table = [(x, c.rri, e, p) for x, e, p, _, _ in rows]
    if args.timing:
        header += ["mie_seconds", "rgd_seconds"]
        table = [(x, c.rri, e, p, tm, tr) for x, e, p, tm, tr in rows]
    return Output(header, table, {"backend": backend_name()})


def fig4_tables(grid_deg):
    """Both Fig. 4 style panels: ``{filename: (header, rows)}``."""
    theta = np.radians(grid_deg)
    tables = {}
    for name, (model, radius) in FIG4_RADII.items():
        columns = []
        for m in FIG4_RRI:
            if model == "mie":
                pat = mie.mie_intensity_pattern(mie.Sphere(radius, m), 1.0, 428e-9, theta)
            else:
                pat = rgd.rgd_intensity_pattern(rgd.HomogeneousRegion.sphere(radius, m), 1.0, 428e-9, theta)
            columns.append(pat.intensity)
        header = ["angle_deg"] + [f"rri_{m:.2f}" for m in FIG4_RRI]
        tables[name] = (header, list(zip(grid_deg, *columns)))
    return tables


def cmd_reproduce_fig4(cfg, args):
    out_dir = Path(args.out or "fig4")
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(cfg.grid.start, cfg.grid.stop, cfg.grid.count)
    for name, (header, rows) in fig4_tables(grid).items():
        (out_dir / name).write_text(to_csv(header, rows))
    return None


COMMANDS = {
    "mie": (cmd_mie, "Mie intensity pattern of the configured sphere"),
    "rgd": (cmd_rgd, "RGD intensity pattern of the configured particle"),
    "radar": (cmd_radar, "full detection pipeline; JSON report by default"),
    "spp": (cmd_spp, "SPP dispersion curve (omega, re_k, im_k)"),
    "antenna": (cmd_antenna, "element and uniform-array power patterns"),
    "pd": (cmd_pd, "RCE photodetector transient (t_s, i_a)"),
    "compare": (cmd_compare, "RGD versus Mie error sweep over size parameter"),
    "reproduce-fig4": (cmd_reproduce_fig4, "write both Fig. 4 style panels into the --out directory"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration")
    common.add_argument("--out", metavar="PATH", help="output file (directory for reproduce-fig4); stdout if omitted")
    common.add_argument("--seed", type=int, metavar="U64", help="override the noise seed")
    common.add_argument("--format", choices=("csv", "structured"), help="output format")
    common.add_argument("--grid", metavar="START:STOP:COUNT", help="angle grid in degrees")
    parser = argparse.ArgumentParser(prog="nanoradar", description="Nanoscale radar scattering and detection toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "compare":
            p.add_argument("--timing", action="store_true", help="add wall-clock columns (not reproducible)")
    return parser


def _emit(output, cfg, args):
    if output is None:
        return
    if args.out:
        Path(args.out).write_text(output.render(args.format))
        return
    if cfg.outputs:
        for target in cfg.outputs:
            Path(target.path).write_text(output.render(args.format or target.format))
        return
    sys.stdout.write(output.render(args.format))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        cfg = load_config(args)
        _emit(handler(cfg, args), cfg, args)
    except NumericalError as exc:
        _report(exc, args.command)
        return 3
    except (NanoradarError, ValueError) as exc:
        _report(exc, args.command)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _report(exc, command):
    stage = getattr(exc, "stage", None) or command
    prefix = f"error [{stage}]" if stage else "error"
    print(f"{prefix}: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
