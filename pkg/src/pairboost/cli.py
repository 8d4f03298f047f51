"""``pairboost`` command line: ``report``, ``sweep``, ``fig2`` and ``selftest``.

Settings resolve as built-in defaults, then the JSON config file, then
command-line flags, each layer overriding the one before. The config file
comes from ``--config`` or, failing that, the ``PAIRBOOST_CONFIG``
environment variable. It is a JSON object whose keys are the long flag
names (``beta_v`` or ``beta-v``), optionally with a nested object per
subcommand that overrides the top-level keys for that subcommand::

    {"phi": 0.785, "beta_v": 0.6, "sweep": {"axis": ["beta:0:0.99:50"]}}

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from .errors import DomainError, NumericalFailure, PrecisionError, StructureError
from .pairsim import PairConfig, resource_report
from .relativity import BoostParams
from .selftest import run_selftest
from .svg import heatmap_svg
from .sweep import (
    FIG2_COLUMNS,
    SWEEP_COLUMNS,
    SweepSpec,
    fig2_rows,
    fig2_surface,
    format_csv,
    format_json,
    parse_axis,
    sweep_rows,
)

__all__ = ["main", "build_parser", "resolve_settings", "CONFIG_ENV"]

CONFIG_ENV = "PAIRBOOST_CONFIG"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

PARAMS = ("phi", "theta", "beta", "beta_v", "alpha", "mass")
DEFAULTS = {
    "report": {"theta": 0.0, "mass": 1.0, "format": "text", "angle": "auto", "certify": False},
    "sweep": {"theta": 0.0, "mass": 1.0, "format": "csv", "workers": 1, "axis": []},
    "fig2": {"grid": 200, "format": "csv"},
    "selftest": {"quick": False},
}
SUBCOMMAND_KEYS = {
    "report": set(PARAMS) | {"format", "out", "angle", "certify"},
    "sweep": set(PARAMS) | {"axis", "format", "out", "workers"},
    "fig2": {"alpha", "grid", "mass", "format", "out", "svg"},
    "selftest": {"quick"},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _params(p, names):
    helps = {
        "phi": "superposition angle in [0, pi/2], radians",
        "theta": "relative phase, radians",
        "beta": "boost speed in [0, 1)",
        "beta_v": "particle speed in (0, 1)",
        "alpha": "boost angle from +z toward -x in [0, pi], radians",
        "mass": "particle mass (default 1)",
    }
    for n in names:
        p.add_argument("--" + n.replace("_", "-"), dest=n, type=float, default=None, help=helps[n])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairboost", description="Relativistic pair-state resource calculator.")
    parser.add_argument("--config", default=None, help=f"JSON config file (default: ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rep = sub.add_parser("report", help="resources at one parameter point")
    _params(rep, PARAMS)
    rep.add_argument("--format", choices=("text", "json"), default=None)
    rep.add_argument("--out", default=None)
    rep.add_argument("--angle", choices=("auto", "matrix", "extended", "closed_form"), default=None)
    rep.add_argument("--certify", action="store_true", default=None, help="check every 4-party reduction")

    sw = sub.add_parser("sweep", help="resources over a 1- or 2-axis grid")
    _params(sw, PARAMS)
    sw.add_argument("--axis", action="append", default=None, metavar="NAME:MIN:MAX:N")
    sw.add_argument("--format", choices=("csv", "json"), default=None)
    sw.add_argument("--out", default=None)
    sw.add_argument("--workers", type=int, default=None)

    f2 = sub.add_parser("fig2", help="cos(Omega) surface over (beta, beta_v)")
    _params(f2, ("alpha", "mass"))
    f2.add_argument("--grid", type=int, default=None)
    f2.add_argument("--format", choices=("csv", "json"), default=None)
    f2.add_argument("--out", default=None)
    f2.add_argument("--svg", default=None)

    st = sub.add_parser("selftest", help="run the invariant and property checks")
    st.add_argument("--quick", action="store_true", default=None)
    for p in (rep, sw, f2, st):
        p.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path!r} must hold a JSON object")
    return data


def _normalize_keys(d: dict) -> dict:
    return {str(k).replace("-", "_"): v for k, v in d.items()}


def resolve_settings(args: argparse.Namespace, environ=os.environ) -> dict:
    """Merge defaults, config file and flags for ``args.command``."""
    cmd = args.command
    path = args.config if args.config is not None else environ.get(CONFIG_ENV) or None
    raw = _normalize_keys(_load_config(path))
    from_file = {k: v for k, v in raw.items() if k not in DEFAULTS}
    section = raw.get(cmd, {})
    if not isinstance(section, dict):
        raise UsageError(f"config section {cmd!r} must be a JSON object")
    from_file.update(_normalize_keys(section))

    allowed = set().union(*SUBCOMMAND_KEYS.values())
    unknown = set(from_file) - allowed
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    settings = dict(DEFAULTS[cmd])
    settings.update({k: v for k, v in from_file.items() if k in SUBCOMMAND_KEYS[cmd]})
    settings.update({k: v for k, v in vars(args).items() if k in SUBCOMMAND_KEYS[cmd] and v is not None})
    if isinstance(settings.get("axis"), str):
        settings["axis"] = [settings["axis"]]
    return settings


def _need(settings, names):
    missing = [n for n in names if settings.get(n) is None]
    if missing:
        raise UsageError("missing value for " + ", ".join("--" + n.replace("_", "-") for n in missing))
    try:
        return [float(settings[n]) for n in names]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"non-numeric parameter: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out!r}: {exc.strerror}") from None


def _report_text(rep) -> str:
    lines = [
        f"phi={rep.phi!r} theta={rep.theta!r} beta={rep.beta!r} beta_v={rep.beta_v!r} "
        f"alpha={rep.alpha!r} mass={rep.mass!r}",
        f"omega            {rep.omega:.17g}",
        f"cos_omega        {rep.cos_omega:.17g}   closed form {rep.cos_omega_closed:.17g}",
        f"e4_lab           {rep.e4_lab:.17g}",
        f"e8_lab           {rep.e8_lab:.17g}",
        f"coherence_lab    max {max(rep.coherence_lab.values()):.3e} over all parties",
        f"e4_boosted       {rep.e4_boosted:.17g}",
        f"e8               {rep.e8:.17g}",
        f"coherence_minus  {rep.coherence_minus:.17g}   relative entropy {rep.coherence_re_minus:.17g}",
        f"coherence_plus   {rep.coherence_plus:.17g}   relative entropy {rep.coherence_re_plus:.17g}",
        f"invariant_lab    {rep.invariant_lab:.17g}",
        f"invariant        {rep.invariant_value:.17g}",
        f"argmin           {rep.argmin}",
        f"active parties   {' '.join(map(str, rep.effective_parties))}",
        f"degenerate       {rep.degenerate}",
    ]
    if rep.certified_separable is not None:
        lines.append(f"4-party separable {rep.certified_separable}")
    lines.append("deviations from closed forms:")
    for k, v in rep.deviations.items():
        lines.append(f"  {k:<18} {v:.3e}   (predicted {rep.predictions[k]:.17g})")
    lines.append(f"max_deviation    {rep.max_deviation:.3e}")
    lines += [f"note: {n}" for n in rep.notes]
    return "\n".join(lines) + "\n"


def cmd_report(settings) -> int:
    phi, theta, beta, beta_v, alpha, mass = _need(settings, PARAMS)
    cfg = PairConfig(phi, beta_v, theta, mass)
    bp = BoostParams(beta, beta_v, alpha)
    failure = None
    try:
        rep = resource_report(cfg, bp, certify=bool(settings["certify"]), angle=settings["angle"])
    except NumericalFailure as exc:
        if not hasattr(exc, "report"):
            raise
        failure, rep = exc, exc.report
    if settings["format"] == "json":
        text = json.dumps(rep.to_dict(), indent=1) + "\n"
    else:
        text = _report_text(rep)
    _emit(text, settings.get("out"))
    if failure is not None:
        print(f"pairboost: {failure}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_sweep(settings) -> int:
    if not settings["axis"]:
        raise UsageError("sweep needs at least one --axis NAME:MIN:MAX:N")
    if len(settings["axis"]) > 2:
        raise UsageError("at most two --axis options")
    axes = [parse_axis(a) for a in settings["axis"]]
    swept = {a.name for a in axes}
    fixed = {}
    for n in PARAMS:
        if n in swept:
            continue
        if settings.get(n) is None:
            raise UsageError(f"--{n.replace('_', '-')} must be given or swept")
        fixed[n] = float(settings[n])
    spec = SweepSpec(tuple(axes), fixed)
    rows = sweep_rows(spec, workers=int(settings["workers"]))
    fmt = format_csv if settings["format"] == "csv" else format_json
    _emit(fmt(rows, SWEEP_COLUMNS), settings.get("out"))
    return EXIT_OK


def cmd_fig2(settings) -> int:
    (alpha,) = _need(settings, ["alpha"])
    mass = float(settings.get("mass") or 1.0)
    n = int(settings["grid"])
    for path in (settings.get("out"), settings.get("svg")):
        if path is not None and not os.access(os.path.dirname(os.path.abspath(path)), os.W_OK):
            raise UsageError(f"cannot write {path!r}")
    betas, closed, matrix = fig2_surface(alpha, n, mass=mass)
    rows = fig2_rows(alpha, betas, closed, matrix)
    fmt = format_csv if settings["format"] == "csv" else format_json
    _emit(fmt(rows, FIG2_COLUMNS), settings.get("out"))
    if settings.get("svg"):
        # closed[i, j] is at beta = betas[i], beta_v = betas[j]: beta on the vertical axis
        svg = heatmap_svg(
            closed,
            betas,
            betas,
            xlabel="beta_v (particle speed)",
            ylabel="beta (boost speed)",
            title=f"cos Omega at alpha = {alpha:.6g} rad",
            vmin=min(0.0, float(closed.min())),
            vmax=1.0,
        )
        _emit(svg, settings["svg"])
    return EXIT_OK


def cmd_selftest(settings) -> int:
    results = run_selftest(quick=bool(settings["quick"]))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


COMMANDS = {"report": cmd_report, "sweep": cmd_sweep, "fig2": cmd_fig2, "selftest": cmd_selftest}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = resolve_settings(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return COMMANDS[args.command](settings)
    except UsageError as exc:
        print(str(exc) if str(exc).startswith("pairboost") else f"pairboost: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"pairboost: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, StructureError, PrecisionError) as exc:
        print(f"pairboost: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
