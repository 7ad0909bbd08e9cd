"""``toricnl`` command-line interface.

Exit codes: 0 when every check passes, 1 when checks ran and something
failed, 2 on invalid input.  JSON output embeds the :class:`RunConfig` that
produced it; :func:`execute` on that config reproduces the output exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import platformdirs

from .cohomology import CohomologyCache, cohomology, set_cache
from .catalog import catalog, catalog_entries, format_class, parse_divisor
from .checks import (
    SCHEMA_VERSION,
    codim_bound_report,
    corollary4_bounds,
    is_m_regular,
    theorem1_check,
    theorem3_check,
)
from .detcurve import check_avoidance, corollary44_check, curve_invariants, preset
from .toric import FanError, ToricThreefold, WeilDivisor, load_fan_json
from .wps import UNEXPECTED, scan

DEFAULT_SEED = 20240613
CACHE_ENV = "TORICNL_CACHE_DIR"
CHECKS = ("theorem1", "theorem3", "corollary4", "regularity", "codim-bound")


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    check: str | None = None
    variety: str | None = None
    divisor: str | None = None
    divisor_class: str | None = None
    H: str | None = None
    L: str | None = None
    d: int | None = None
    m: int | None = None
    k: int | None = None
    preset: str | None = None
    field_prime: int = 10007
    trials: int = 20
    seed: int = DEFAULT_SEED
    max_weight: int | None = None
    format: str = "json"
    cache_dir: str | None = None
    no_cache: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


# input resolution -------------------------------------------------------------


def load_variety(spec: str | None) -> ToricThreefold:
    if not spec:
        raise InputError("--variety is required")
    if spec.endswith(".json") or Path(spec).is_file():
        return load_fan_json(spec)
    try:
        return catalog(spec)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


def _divisor(x: ToricThreefold, text: str, what: str) -> WeilDivisor:
    try:
        return parse_divisor(x, text)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad {what} {text!r}: {exc.args[0]}") from None


def _hyperplane(x: ToricThreefold, cfg: RunConfig) -> WeilDivisor:
    if cfg.H is not None:
        return _divisor(x, cfg.H, "--H")
    try:
        return x.divisor("H")
    except KeyError:
        raise InputError(f"{x.name} has no named H; pass --H") from None


def _require(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _cache(cfg: RunConfig) -> CohomologyCache | None:
    if cfg.no_cache:
        return None
    directory = cfg.cache_dir or os.environ.get(CACHE_ENV) or platformdirs.user_cache_dir("toricnl")
    return CohomologyCache(directory)


# commands ---------------------------------------------------------------------------


def _cmd_cohomology(cfg: RunConfig) -> tuple[int, dict, str]:
    x = load_variety(cfg.variety)
    if (cfg.divisor is None) == (cfg.divisor_class is None):
        raise InputError("give exactly one of --divisor or --divisor-class")
    if cfg.divisor is not None:
        try:
            coeffs = tuple(int(t) for t in cfg.divisor.split(","))
        except ValueError:
            raise InputError(f"--divisor expects {x.n_rays} comma-separated integers") from None
        if len(coeffs) != x.n_rays:
            raise InputError(f"--divisor expects {x.n_rays} ray coefficients, got {len(coeffs)}")
        d = WeilDivisor(coeffs)
    else:
        d = _divisor(x, cfg.divisor_class, "--divisor-class")
    t = cohomology(x, d)
    out = {"variety": x.name, "divisor": list(d.coeffs), "class": format_class(x, d), **t.to_dict()}
    md = (f"## cohomology of O({format_class(x, d)}) on `{x.name}`\n\n"
          "| h0 | h1 | h2 | h3 | chi |\n|---|---|---|---|---|\n"
          f"| {' | '.join(map(str, t.h))} | {t.chi} |\n")
    return 0, out, md


def _cmd_check(cfg: RunConfig) -> tuple[int, dict, str]:
    x = load_variety(cfg.variety)
    kind = cfg.check
    if kind == "codim-bound":
        l = _divisor(x, _require(cfg.L, "--L"), "--L")
        rep = codim_bound_report(x, l)
    else:
        h = _hyperplane(x, cfg)
        try:
            if kind == "theorem1":
                rep = theorem1_check(x, h, _require(cfg.d, "--d"))
            elif kind == "theorem3":
                rep = theorem3_check(x, h, _require(cfg.d, "--d"))
            elif kind == "corollary4":
                rep = corollary4_bounds(x, h, _require(cfg.d, "--d"))
            elif kind == "regularity":
                rep = is_m_regular(x, h, _require(cfg.m, "--m"))
            else:
                raise InputError(f"unknown check {kind!r}; choose from {', '.join(CHECKS)}")
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return (0 if rep.passed else 1), rep.to_dict(), rep.to_markdown()


def _cmd_scan(cfg: RunConfig) -> tuple[int, dict, str]:
    bound = _require(cfg.max_weight, "--max-weight")
    if bound < 1:
        raise InputError("--max-weight must be >= 1")
    entries = scan(bound)
    unexpected = sum(e.family == UNEXPECTED for e in entries)
    out = {"entries": [e.to_dict() for e in entries],
           "summary": {"max_weight": bound, "count": len(entries), "unexpected": unexpected}}
    md = [f"## delta < sigma scan up to weight {bound}", "", "| weights | delta | sigma | family |", "|---|---|---|---|"]
    md += [f"| {e.weights} | {e.delta} | {e.sigma} | {e.family} |" for e in entries]
    md += ["", f"**{len(entries)} tuples, {unexpected} UNEXPECTED**"]
    return (0 if unexpected == 0 else 1), out, "\n".join(md) + "\n"


def _cmd_detcurve(cfg: RunConfig) -> tuple[int, dict, str]:
    x = load_variety(cfg.variety)
    h = _hyperplane(x, cfg)
    l = None
    try:
        if cfg.preset:
            k, l = preset(x, h, cfg.preset, _require(cfg.d, "--d"))
            if cfg.k is not None and cfg.k != k:
                raise InputError(f"--k {cfg.k} conflicts with preset {cfg.preset} (k = {k})")
        else:
            k = _require(cfg.k, "--k or --preset")
        if cfg.L is not None:
            l = _divisor(x, cfg.L, "--L")
        if k < 2:
            raise InputError("k >= 2 required")
        verdict = check_avoidance(x, h, k, cfg.field_prime, cfg.trials, cfg.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    inv = curve_invariants(x, h, k)
    out = {"avoidance": verdict.to_dict(), "invariants": inv.to_dict()}
    ok = verdict.passed
    md = [f"## determinantal curve on `{x.name}`, k = {k}", "",
          f"- avoidance: {'pass' if verdict.passed else 'FAIL'} ({verdict.pass_count}/{cfg.trials} trials clean)"]
    if verdict.note:
        md.append(f"- {verdict.note}")
    for s in verdict.strata:
        md.append(f"- stratum {list(s.cone)}: {s.samples} samples, max vanishing minors {s.vanishing_minors}, "
                  f"exact failures {len(s.exact_failures)}")
    md.append(f"- H-degree: {out['invariants']['degree_H']}")
    md.append(f"- expected genus (generic matrix): {inv.genus}")
    md += [f"- {n}" for n in inv.notes]
    if l is not None:
        battery = corollary44_check(x, l, h, k)
        out["conditions"] = [c.to_dict() for c in battery]
        ok = ok and all(c.verdict for c in battery)
        md += [f"- {c.label}: {'pass' if c.verdict else 'FAIL'}" for c in battery]
    md.append(f"> {verdict.to_dict()['disclaimer']}")
    return (0 if ok else 1), out, "\n".join(md) + "\n"


def _cmd_catalog(cfg: RunConfig) -> tuple[int, dict, str]:
    entries = catalog_entries()
    md = ["| name | named classes | class basis |", "|---|---|---|"]
    md += [f"| {e['name']} | {', '.join(e['named'])} | {', '.join(e['class_basis'])} |" for e in entries]
    return 0, {"varieties": entries}, "\n".join(md) + "\n"


_COMMANDS = {"cohomology": _cmd_cohomology, "check": _cmd_check, "scan": _cmd_scan,
             "detcurve": _cmd_detcurve, "catalog": _cmd_catalog}


def execute(cfg: RunConfig) -> tuple[int, str]:
    """Run a config; returns ``(exit_code, rendered output)``.

    Input errors raise :class:`InputError` or :class:`FanError`.
    """
    if cfg.format not in ("json", "markdown"):
        raise InputError("--format must be json or markdown")
    set_cache(_cache(cfg))
    try:
        code, payload, md = _COMMANDS[cfg.command](cfg)
    finally:
        set_cache(None)
    if cfg.format == "markdown":
        return code, md
    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command, **payload, "config": cfg.to_dict()}
    return code, json.dumps(doc, sort_keys=True, indent=2) + "\n"


# argument parsing -----------------------------------------------------------------------

_VALUE_FLAGS = ("--divisor", "--divisor-class", "--H", "--L")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--divisor -4,0,0,0`` and ``--divisor-class -K-2H`` through argparse."""
    out = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricnl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "markdown"), default="json")
    common.add_argument("--cache-dir", help=f"cohomology cache directory (env {CACHE_ENV})")
    common.add_argument("--no-cache", action="store_true")
    var = argparse.ArgumentParser(add_help=False)
    var.add_argument("--variety", required=True, help="catalog name, wps:q0,q1,q2,q3, or fan JSON path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", parents=[common, var], help="h^0..h^3 of a divisor")
    p.add_argument("--divisor", help="ray coefficients, comma separated")
    p.add_argument("--divisor-class", help='named expression like "-K-2H" or class coordinates')

    p = sub.add_parser("check", parents=[common, var], help="hypothesis checks")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--H")
    p.add_argument("--L")
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)

    p = sub.add_parser("scan", parents=[common], help="delta < sigma classification scan")
    p.add_argument("--max-weight", type=int, required=True)

    p = sub.add_parser("detcurve", parents=[common, var], help="determinantal curve checks")
    p.add_argument("--H")
    p.add_argument("--L")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--preset", choices=("theorem1", "theorem3"))
    p.add_argument("--field-prime", type=int, default=10007)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("catalog", parents=[common], help="builtin varieties")
    p.add_argument("action", choices=("list",))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    values = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    return RunConfig(**values)


def _fail(message: str, **extra) -> int:
    print(json.dumps({"schema_version": SCHEMA_VERSION, "error": message, **extra}), file=sys.stderr)
    return 2


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = config_from_args(ns)
    try:
        code, text = execute(cfg)
    except FanError as exc:
        return _fail(str(exc), cones=[list(c) if isinstance(c, (list, tuple)) else c for c in exc.cones])
    except InputError as exc:
        return _fail(str(exc))
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
