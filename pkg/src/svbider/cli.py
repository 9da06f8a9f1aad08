"""Command-line front end.

Exit codes: 0 all checks pass / verdict is match, 1 a check failed,
2 usage error, 3 a requested map is undefined at the given parameters.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import HalfInt, Params, format_fraction
from .classifier import classify_biderivations, classify_commuting, detect_case, expected_biderivations
from .errors import ParameterIncompatible
from .linalg import ModularConfig
from .maps import (
    bider_from_commuting,
    bider_window_check,
    evaluation_rank,
    inner_bider,
    lemma25_window_check,
    maps_agree,
    phi0,
    phi1,
    polarized_commuting_residual,
    psi0,
    psi1,
    skew_check_window,
)
from .structure import (
    Window,
    antisymmetry_check_window,
    degree_check_window,
    jacobi_check_window,
    structure_summary,
)

SCHEMA_VERSION = "1.0"
SUBCOMMANDS = ("case", "jacobi", "structure", "verify-maps", "classify-bider", "classify-commuting")
DEFAULT_WINDOW = {"jacobi": 4, "structure": 3, "verify-maps": 3, "classify-bider": 2,
                  "classify-commuting": 2, "case": 0}

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCOMPATIBLE = 0, 1, 2, 3

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Exact parse of ``p`` or ``p/q``; ValueError on anything else."""
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _s_arg(text: str) -> HalfInt:
    q = _rational_arg(text)
    if q not in (0, Fraction(1, 2)):
        raise argparse.ArgumentTypeError("s must be 0 or 1/2")
    return HalfInt.of(q)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    lam: Fraction = Fraction(0)
    mu: Fraction = Fraction(0)
    s: HalfInt = HalfInt(0)
    window: int | None = None
    margin: int = 2
    codomain_margin: int | None = None
    mode: str = "full"
    prime: str = "auto"
    seed: int = 0
    format: str = "json"

    @property
    def params(self) -> Params:
        return Params(self.lam, self.mu, self.s)

    @property
    def radius(self) -> int:
        return self.window if self.window is not None else DEFAULT_WINDOW[self.subcommand]

    def modular(self) -> ModularConfig:
        if self.prime == "auto":
            return ModularConfig.from_seed(self.seed)
        return ModularConfig(int(self.prime), self.seed)


def _pair_list(w: Window):
    return list(product(w.basis, w.basis))


def _cmd_case(cfg: RunConfig) -> tuple[bool, dict]:
    p = cfg.params
    tag = detect_case(p)
    res = tag.as_dict()
    res["predicted_bider_dim"] = len(expected_biderivations(p))
    res["membership"] = {"mu_in_half_Z": p.two_mu_integral(), "mu_in_s_plus_Z": p.mu_in_s_plus_z(),
                         "mu_in_s_plus_half_plus_Z": p.mu_in_s_half_plus_z()}
    return True, res


def _cmd_jacobi(cfg: RunConfig) -> tuple[bool, dict]:
    p = cfg.params
    w = Window(cfg.radius, p.s)
    jr = jacobi_check_window(p, w)
    anti, anti_w = antisymmetry_check_window(p, w)
    deg, deg_w = degree_check_window(p, w)
    res = {
        "window": w.radius,
        "jacobi": {"ok": jr.ok, "triples_checked": jr.triples_checked,
                   "witness": [str(b) for b in jr.witness] if jr.witness else None,
                   "residual": str(jr.residual) if jr.residual is not None else None},
        "antisymmetry": {"ok": anti, "witness": [str(b) for b in anti_w] if anti_w else None},
        "degree_additivity": {"ok": deg, "witness": [str(b) for b in deg_w] if deg_w else None},
    }
    return jr.ok and anti and deg, res


def _cmd_structure(cfg: RunConfig) -> tuple[bool, dict]:
    p = cfg.params
    w = Window(cfg.radius, p.s)
    res = structure_summary(p, w, cfg.margin)
    ok = (res["center"]["matches_prediction"] and res["abelianization"]["matches_prediction"]
          and res["centralizer_of_derived"]["equals_center"])
    return ok, res


def _map_checks(phi, p, w) -> dict:
    b = bider_window_check(phi, p, w)
    l25 = lemma25_window_check(phi, p, w)
    return {
        "triples": b["triples"],
        "axiom1_failures": b["axiom1_failures"],
        "axiom2_failures": b["axiom2_failures"],
        "skew": skew_check_window(phi, w),
        "lemma25_quadruples": l25["quadruples"],
        "lemma25_failures": l25["failures"],
    }


def _map_ok(d: dict) -> bool:
    return d["axiom1_failures"] == 0 and d["axiom2_failures"] == 0 and d["skew"] and d["lemma25_failures"] == 0


def _cmd_verify_maps(cfg: RunConfig) -> tuple[bool, dict]:
    p = cfg.params
    w = Window(cfg.radius, p.s)
    f0 = phi0(p)  # raises ParameterIncompatible outside lambda=1, 2mu integral
    pairs = _pair_list(w)
    res: dict = {"window": w.radius}
    ok = True
    inner = inner_bider(1, p)
    res["phi0"] = _map_checks(f0, p, w)
    ok &= _map_ok(res["phi0"])
    g0 = psi0(p)
    pol0 = max((polarized_commuting_residual(g0, x, y, p).max_abs_coeff() for x, y in pairs), default=0)
    agree0, _ = maps_agree(bider_from_commuting(g0, p, w), f0, pairs)
    res["psi0"] = {"polarized_residual_max": format_fraction(Fraction(pol0)), "induces_phi0": agree0}
    ok &= pol0 == 0 and agree0
    rank_inner = evaluation_rank([inner], pairs)
    rank0 = evaluation_rank([inner, f0], pairs)
    res["non_inner"] = {"rank_inner": rank_inner, "rank_inner_phi0": rank0}
    ok &= rank0 == rank_inner + 1
    if p.mu_in_s_plus_z():
        f1 = phi1(p)
        res["phi1"] = _map_checks(f1, p, w)
        ok &= _map_ok(res["phi1"])
        g1 = psi1(p)
        pol1 = max((polarized_commuting_residual(g1, x, y, p).max_abs_coeff() for x, y in pairs), default=0)
        agree1, _ = maps_agree(bider_from_commuting(g1, p, w), f1, pairs)
        res["psi1"] = {"polarized_residual_max": format_fraction(Fraction(pol1)), "induces_phi1": agree1}
        ok &= pol1 == 0 and agree1
        rank1 = evaluation_rank([inner, f0, f1], pairs)
        res["non_inner"]["rank_inner_phi0_phi1"] = rank1
        ok &= rank1 == rank0 + 1
    else:
        res["phi1"] = None
        res["psi1"] = None
    return bool(ok), res


def _cmd_classify(cfg: RunConfig, fn) -> tuple[bool, dict]:
    p = cfg.params
    w = Window(cfg.radius, p.s)
    rep = fn(p, w, mode=cfg.mode, cfg=cfg.modular(), codomain_margin=cfg.codomain_margin)
    d = rep.as_dict()
    d.pop("params")
    d.pop("case")
    return rep.span_verdict.value == "match" and rep.residual_max == 0, d


_DISPATCH = {
    "case": _cmd_case,
    "jacobi": _cmd_jacobi,
    "structure": _cmd_structure,
    "verify-maps": _cmd_verify_maps,
    "classify-bider": lambda c: _cmd_classify(c, classify_biderivations),
    "classify-commuting": lambda c: _cmd_classify(c, classify_commuting),
}


def run_config(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one configuration; returns (exit code, report)."""
    p = cfg.params
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.subcommand,
        "params": p.as_strings(),
        "case": detect_case(p).as_dict(),
    }
    try:
        ok, result = _DISPATCH[cfg.subcommand](cfg)
    except ParameterIncompatible as exc:
        report.update(status="parameter_incompatible", error=str(exc), result=None)
        return EXIT_INCOMPATIBLE, report
    report.update(status="pass" if ok else "fail", result=result)
    return (EXIT_OK if ok else EXIT_FAIL), report


def render(report: dict, fmt: str, *, compact: bool = False) -> str:
    if fmt == "json":
        if compact:
            return json.dumps(report, sort_keys=True, separators=(",", ":"))
        return json.dumps(report, sort_keys=True, indent=2)
    lines: list[str] = []
    _text_lines(report, "", lines)
    return "\n".join(lines)


def _text_lines(obj, prefix: str, out: list[str]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _text_lines(obj[k], f"{prefix}{k}.", out)
        return
    key = prefix[:-1] if prefix.endswith(".") else prefix
    if isinstance(obj, list):
        out.append(f"{key}: {json.dumps(obj, separators=(',', ':'))}")
    elif isinstance(obj, bool) or obj is None:
        out.append(f"{key}: {json.dumps(obj)}")
    else:
        out.append(f"{key}: {obj}")


def read_grid(path: str) -> list[tuple[Fraction, Fraction, HalfInt]]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [t for t in re.split(r"[,\s]+", line) if t]
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'lambda mu s'")
            lam, mu = parse_rational(parts[0]), parse_rational(parts[1])
            s = parse_rational(parts[2])
            if s not in (0, Fraction(1, 2)):
                raise ValueError(f"{path}:{lineno}: s must be 0 or 1/2")
            rows.append((lam, mu, HalfInt.of(s)))
    return rows


def _worker(cfg: RunConfig) -> tuple[int, str]:
    code, report = run_config(cfg)
    return code, render(report, cfg.format, compact=True)


def run_grid(base: RunConfig, rows, workers: int = 1) -> tuple[int, list[str]]:
    """One report per row, in input order, whatever the worker count."""
    cfgs = [replace(base, lam=lam, mu=mu, s=s) for lam, mu, s in rows]
    if workers > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, cfgs))
    else:
        results = [_worker(c) for c in cfgs]
    codes = [c for c, _ in results]
    worst = EXIT_INCOMPATIBLE if EXIT_INCOMPATIBLE in codes else max(codes, default=EXIT_OK)
    return worst, [r for _, r in results]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="svbider", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        grid_mode = sp.add_mutually_exclusive_group(required=True)
        grid_mode.add_argument("--lambda", dest="lam", type=_rational_arg)
        grid_mode.add_argument("--grid", help="file of 'lambda mu s' rows; emits JSON lines")
        sp.add_argument("--mu", type=_rational_arg, default=Fraction(0))
        sp.add_argument("--s", type=_s_arg, default=HalfInt(0))
        sp.add_argument("--window", type=_nonneg if name == "jacobi" else _positive,
                        default=None, help=f"window radius N (default {DEFAULT_WINDOW[name]})")
        sp.add_argument("--margin", type=_positive, default=2)
        sp.add_argument("--codomain-margin", type=_nonneg, default=None)
        sp.add_argument("--mode", choices=("full", "graded"), default="full")
        sp.add_argument("--prime", default="auto", help="'auto' or an explicit prime in (2^50, 2^51)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--workers", type=_positive, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand, lam=args.lam if args.lam is not None else Fraction(0),
        mu=args.mu, s=args.s, window=args.window, margin=args.margin,
        codomain_margin=args.codomain_margin, mode=args.mode, prime=args.prime,
        seed=args.seed, format=args.format)
    if cfg.prime != "auto":
        try:
            cfg.modular()
        except ValueError as exc:
            parser.error(f"--prime: {exc}")
    if args.subcommand.startswith("classify") and cfg.radius < 2:
        parser.error("classification needs --window >= 2")
    if args.grid is not None:
        try:
            rows = read_grid(args.grid)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        code, lines = run_grid(cfg, rows, args.workers)
        for line in lines:
            print(line)
        return code
    code, report = run_config(cfg)
    print(render(report, cfg.format))
    if code == EXIT_INCOMPATIBLE:
        print(f"svbider: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
