"""Command-line entry point: ``qsuff {entropy,sweep,verify,petz}``.

Exit codes: 0 success, 2 parse or validation error, 3 infinite result with
``--finite-required``, 4 quadrature budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, fileio
from .divergences import QuadratureSpec, divergence_report, relative_entropy_integral, relative_entropy_spectral
from .errors import QsuffError, QuadratureBudgetExceeded
from .hypothesis import DEFAULT_GRID_COUNT, S_FLOOR, curve_arrays, default_grid, image
from .quantum import kraus_to_choi
from .recovery import petz_map, recovery_report, rotated_petz, sufficiency_report, universal_recovery

EXIT_OK, EXIT_INVALID, EXIT_INFINITE, EXIT_BUDGET = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    s_min: float | None = None
    s_max: float | None = None
    s_count: int = DEFAULT_GRID_COUNT
    s_spacing: str = "geometric"
    quad_tol: float = 1e-8
    t_max: float = 4.0
    t_nodes: int = 801
    threshold: float = 1e-6

    def __post_init__(self):
        if self.s_count < 2:
            raise QsuffError("--s-count must be >= 2")
        if self.s_min is not None and self.s_min < 0:
            raise QsuffError("--s-min must be >= 0")
        if self.s_min is not None and self.s_max is not None and self.s_max <= self.s_min:
            raise QsuffError("--s-max must exceed --s-min")
        if self.quad_tol <= 0:
            raise QsuffError("--quad-tol must be positive")
        if self.s_spacing not in ("geometric", "linear"):
            raise QsuffError("--s-spacing must be geometric or linear")

    def grid(self, rho, sigma) -> np.ndarray:
        if self.s_min is None and self.s_max is None and self.s_spacing == "geometric":
            return default_grid(rho, sigma, self.s_count)
        auto = default_grid(rho, sigma, 2)
        lo = auto[1] if self.s_min is None else self.s_min
        hi = auto[-1] if self.s_max is None else self.s_max
        if self.s_spacing == "linear":
            return np.linspace(lo, hi, self.s_count)
        if lo == 0.0:
            return np.concatenate([[0.0], np.geomspace(S_FLOOR, hi, self.s_count - 1)])
        return np.geomspace(lo, hi, self.s_count)


def _provenance(args, config: RunConfig) -> dict:
    inputs = {}
    for name in ("rho", "sigma", "channel"):
        path = getattr(args, name, None)
        if path:
            inputs[name] = {"path": path, "sha256": fileio.file_sha256(path)}
    return {"tool": "qsuff", "version": __version__, "command": args.command, "inputs": inputs, "config": asdict(config)}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_entropy(args, config: RunConfig) -> int:
    rho, sigma = fileio.load_state(args.rho), fileio.load_state(args.sigma)
    spec = QuadratureSpec(rel_tol=config.quad_tol)
    if args.method == "both":
        report = fileio.to_plain(divergence_report(rho, sigma, spec))
    elif args.method == "spectral":
        report = {"d_spectral": relative_entropy_spectral(rho, sigma)}
    else:
        value, err = relative_entropy_integral(rho, sigma, spec)
        report = {"d_integral": value, "quad_error_estimate": err}
    doc = {"provenance": _provenance(args, config), "method": args.method, "report": report}
    _emit(fileio.dumps(doc), args.out)
    values = [v for k, v in report.items() if k in ("d_spectral", "d_integral")]
    if args.finite_required and any(math.isinf(v) for v in values):
        return EXIT_INFINITE
    return EXIT_OK


def cmd_sweep(args, config: RunConfig) -> int:
    rho, sigma = fileio.load_state(args.rho), fileio.load_state(args.sigma)
    s = config.grid(rho, sigma)
    l1, tp, tn = curve_arrays(rho, sigma, s)
    pe = 0.5 * (1.0 - l1 / (1.0 + s))
    header = ["s", "l1", "tr_pos", "tr_neg", "pe"]
    cols = [s, l1, tp, tn, pe]
    if args.channel:
        phi = fileio.load_channel(args.channel)
        l1i, _, tni = curve_arrays(image(phi, rho), image(phi, sigma), s)
        header += ["l1_img", "tr_neg_img", "gap_l1"]
        cols += [l1i, tni, l1 - l1i]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*cols):
        writer.writerow([format(float(v), ".17g") for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args, config: RunConfig) -> int:
    rho, sigma = fileio.load_state(args.rho), fileio.load_state(args.sigma)
    phi = fileio.load_channel(args.channel)
    grid = config.grid(rho, sigma)
    suff = sufficiency_report(rho, sigma, phi, grid=grid, threshold=config.threshold)
    rec = recovery_report(rho, sigma, phi, grid=grid, truncation_T=config.t_max, nodes=config.t_nodes)
    doc = {
        "provenance": _provenance(args, config),
        "verdict": suff.verdict,
        "sufficiency": fileio.to_plain(suff),
        "recovery": fileio.to_plain(rec),
    }
    _emit(fileio.dumps(doc), args.out)
    return EXIT_OK


def cmd_petz(args, config: RunConfig) -> int:
    sigma = fileio.load_state(args.sigma)
    phi = fileio.load_channel(args.channel)
    variant = args.variant
    if variant == "petz":
        doc = fileio.channel_to_doc(petz_map(phi, sigma).as_channel())
    elif variant.startswith("rotated:"):
        try:
            t = float(variant.split(":", 1)[1])
        except ValueError as exc:
            raise QsuffError(f"bad rotation parameter in {variant!r}") from exc
        doc = fileio.channel_to_doc(rotated_petz(phi, sigma, t).as_channel())
    elif variant == "universal":
        doc = fileio.choi_to_doc(universal_recovery(phi, sigma, config.t_max, config.t_nodes).choi)
    else:
        raise QsuffError(f"unknown variant {variant!r}; use petz, rotated:<t> or universal")
    _emit(fileio.dumps(doc), args.out)
    return EXIT_OK


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-min", type=float)
    p.add_argument("--s-max", type=float)
    p.add_argument("--s-count", type=int, default=DEFAULT_GRID_COUNT)
    p.add_argument("--s-spacing", choices=["geometric", "linear"], default="geometric")
    p.add_argument("--quad-tol", type=float, default=1e-8)
    p.add_argument("--t-max", type=float, default=4.0)
    p.add_argument("--t-nodes", type=int, default=801)
    p.add_argument("--threshold", type=float, default=1e-6)
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsuff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="relative entropy report (JSON)")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--method", choices=["spectral", "integral", "both"], default="both")
    p.add_argument("--finite-required", action="store_true")
    _add_config_flags(p)

    p = sub.add_parser("sweep", help="hypothesis-testing curves over s (CSV)")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--channel")
    _add_config_flags(p)

    p = sub.add_parser("verify", help="sufficiency and recoverability report (JSON)")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--channel", required=True)
    _add_config_flags(p)

    p = sub.add_parser("petz", help="emit a recovery channel (JSON)")
    p.add_argument("--sigma", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--variant", default="petz", help="petz, rotated:<t> or universal")
    _add_config_flags(p)
    return parser


COMMANDS = {"entropy": cmd_entropy, "sweep": cmd_sweep, "verify": cmd_verify, "petz": cmd_petz}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            s_min=args.s_min,
            s_max=args.s_max,
            s_count=args.s_count,
            s_spacing=args.s_spacing,
            quad_tol=args.quad_tol,
            t_max=args.t_max,
            t_nodes=args.t_nodes,
            threshold=args.threshold,
        )
        return COMMANDS[args.command](args, config)
    except QuadratureBudgetExceeded as exc:
        print(f"qsuff: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except QsuffError as exc:
        print(f"qsuff: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
