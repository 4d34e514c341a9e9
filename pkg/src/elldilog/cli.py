"""Command-line entry point: configuration loading, orchestration of the
divisor condition checks, and report emission.

Subcommands: check, dilog, lvalue, identities, reproduce-example.
Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration
error, 3 numeric precision failure, 4 unsupported place.

Reports are deterministic: fixed summation orders, fixed formatting,
seeded sampling with the seed recorded in the report.  With --out the
delimited report is written as CSV and a bar-chart rendering of the
same rows is saved as a PNG next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import Curve, INFINITY, Point
from .divisors import (Divisor, MWCoordinates, build_Pk, condition_a,
                       moment_vector)
from .heights import PlaceSet, UnsupportedPlaceError, condition_b
from .tate import PrecisionError, condition_c

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_PRECISION = 3
EXIT_PLACE = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    curve: Curve
    coords: MWCoordinates
    generator: Point
    divisors: List[Tuple[str, Divisor, Optional[float]]]
    places: List[int]
    include_archimedean: bool
    arch_tolerance: float
    ratio_tolerance: float
    lvalue_mode: str
    lvalue_terms: int
    seed: int


def _frac(v) -> Fraction:
    return Fraction(str(v))


def load_config(path: Optional[str] = None) -> RunConfig:
    """Parse and validate a JSON run configuration; None loads the
    bundled sample."""
    try:
        if path is None:
            text = (resources.files("elldilog") / "data"
                    / "curve37a.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        raw = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from exc
    try:
        cv = raw["curve"]
        C = Curve(*(_frac(cv[k]) for k in ("a1", "a2", "a3", "a4", "a6")))
        gens = [C.point(_frac(g["x"]), _frac(g["y"]))
                for g in raw["generators"]]
        if len(gens) != 1:
            raise ConfigError("exactly one generator is supported")
        G = gens[0]
        rng = int(raw.get("multiple_range", 12))
        coords = MWCoordinates.rank_one(C, G, range(-rng, rng + 1))
        divisors = []
        for spec in raw["divisors"]:
            label = spec["label"]
            D = _parse_divisor(spec, C, G)
            divisors.append((label, D, spec.get("expect_ratio")))
        tol = raw.get("tolerances", {})
        lv = raw.get("lvalue", {})
        return RunConfig(
            curve=C, coords=coords, generator=G, divisors=divisors,
            places=[int(p) for p in raw.get("places", [])],
            include_archimedean=bool(raw.get("include_archimedean", True)),
            arch_tolerance=float(tol.get("archimedean", 1e-6)),
            ratio_tolerance=float(tol.get("ratio", 5e-4)),
            lvalue_mode=str(lv.get("mode", "afe")),
            lvalue_terms=int(lv.get("terms", 80)),
            seed=int(raw.get("seed", 0)),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def _parse_divisor(spec: Dict, C: Curve, G: Point) -> Divisor:
    if "Pk" in spec:
        return build_Pk(int(spec["Pk"]), G, C)
    if "combo" in spec:
        out = Divisor()
        for coeff, sub in spec["combo"]:
            out = out + int(coeff) * _parse_divisor(sub, C, G)
        return out
    if "multiple" in spec:
        return Divisor.of((C.scalar_mul(int(spec["multiple"]), G), 1))
    if "points" in spec:
        items = []
        for coeff, x, y in spec["points"]:
            items.append((C.point(_frac(x), _frac(y)), int(coeff)))
        return Divisor(items)
    raise ConfigError(f"divisor spec {spec.get('label')!r} has no "
                      "Pk/combo/multiple/points entry")


# -- report rows -------------------------------------------------------------

@dataclass
class ReportRow:
    cells: Tuple[str, ...]

    def text(self, widths: Sequence[int]) -> str:
        return "  ".join(c.ljust(w) for c, w in zip(self.cells, widths)).rstrip()


@dataclass
class Report:
    header: Tuple[str, ...]
    rows: List[ReportRow] = field(default_factory=list)
    passed: bool = True
    notes: List[str] = field(default_factory=list)

    def add(self, *cells: str):
        self.rows.append(ReportRow(tuple(cells)))

    def render(self) -> str:
        widths = [len(h) for h in self.header]
        for r in self.rows:
            for i, c in enumerate(r.cells):
                widths[i] = max(widths[i], len(c))
        lines = ["  ".join(h.ljust(w) for h, w in
                           zip(self.header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        lines.extend(r.text(widths) for r in self.rows)
        lines.extend(self.notes)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.header)
            for r in self.rows:
                w.writerow(r.cells)

    def write_png(self, path: str, value_col: int, label_col: int = 0):
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        labels = [r.cells[label_col] for r in self.rows]
        vals = []
        for r in self.rows:
            try:
                vals.append(float(r.cells[value_col]))
            except ValueError:
                vals.append(0.0)
        fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels)), 3.2))
        ax.bar(range(len(vals)), vals, color="#4878b0")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel(self.header[value_col])
        fig.tight_layout()
        fig.savefig(path, dpi=110)
        plt.close(fig)


def _emit(report: Report, out: Optional[str], value_col: int):
    sys.stdout.write(report.render())
    if out:
        report.write_csv(out)
        png = out[:-4] + ".png" if out.endswith(".csv") else out + ".png"
        report.write_png(png, value_col)


# -- subcommands --------------------------------------------------------------

def _lattice(C: Curve):
    from .analytic import periods
    return periods(C)


def cmd_check(cfg: RunConfig, skip_archimedean: bool,
              tolerance: Optional[float], out: Optional[str]) -> int:
    from .analytic import elliptic_dilog
    from .lseries import conductor, l_value, ratio_report

    L = _lattice(cfg.curve)
    arch_tol = tolerance if tolerance is not None else cfg.arch_tolerance
    lv = l_value(cfg.curve, mode=cfg.lvalue_mode, terms=cfg.lvalue_terms)
    N = conductor(cfg.curve)
    report = Report(header=("divisor", "cond_a", "cond_b", "cond_c",
                            "dilog", "ratio", "verdict"))
    report.notes.append(f"L(E,2) [{lv.mode}] = {lv.value:.12f}"
                        + (f"  (eps={lv.epsilon})" if lv.epsilon else ""))
    all_pass = True
    for label, D, expect in cfg.divisors:
        a_ok = condition_a(D, cfg.coords)
        m3 = moment_vector(D, cfg.coords).m3
        b_results = condition_b(
            D, cfg.coords,
            PlaceSet(cfg.places,
                     include_archimedean=(cfg.include_archimedean
                                          and not skip_archimedean)),
            lattice=L, arch_tol=arch_tol)
        b_ok = all(r.passed for r in b_results)
        c_ok = True
        for p in cfg.places:
            info = cfg.curve.reduction_type(p)
            if info.kind.endswith("multiplicative"):
                c_ok = c_ok and condition_c(D, cfg.curve, p).passed
        dval = elliptic_dilog(D, L, cfg.curve)
        ratio = 8 * math.pi * dval / (N * lv.value)
        ratio_ok = (expect is None
                    or abs(ratio - expect) <= cfg.ratio_tolerance)
        verdict = a_ok and b_ok and c_ok and ratio_ok
        all_pass = all_pass and verdict
        b_detail = ";".join(
            f"{r.place}:{'ok' if r.passed else 'FAIL'}" for r in b_results)
        a_detail = "ok" if a_ok else (
            "FAIL m3=" + ",".join(str(v) for v in m3.values()))
        report.add(label, a_detail, b_detail, "ok" if c_ok else "FAIL",
                   f"{dval:.10f}", f"{ratio:.6f}",
                   "pass" if verdict else "fail")
    report.passed = all_pass
    _emit(report, out, value_col=5)
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_dilog(cfg: RunConfig, label: Optional[str],
              out: Optional[str]) -> int:
    from .analytic import elliptic_dilog
    L = _lattice(cfg.curve)
    report = Report(header=("divisor", "dilog"))
    found = False
    for lab, D, _ in cfg.divisors:
        if label is not None and lab != label:
            continue
        found = True
        report.add(lab, f"{elliptic_dilog(D, L, cfg.curve):.12f}")
    if label is not None and not found:
        raise ConfigError(f"no divisor labelled {label!r}")
    _emit(report, out, value_col=1)
    return EXIT_OK


def cmd_lvalue(cfg: RunConfig, mode: str, terms: int,
               out: Optional[str]) -> int:
    from .lseries import l_value
    lv = l_value(cfg.curve, mode=mode,
                 B=terms if mode == "naive" else 10 ** 7,
                 terms=terms if mode == "afe" else 80)
    report = Report(header=("mode", "terms", "epsilon", "L(E,2)"))
    report.add(lv.mode, str(lv.terms),
               str(lv.epsilon) if lv.epsilon else "-", f"{lv.value:.12f}")
    _emit(report, out, value_col=3)
    return EXIT_OK


def cmd_identities(cfg: RunConfig, seed: Optional[int], samples: int,
                   out: Optional[str]) -> int:
    from .analytic import identity_battery
    L = _lattice(cfg.curve)
    use_seed = cfg.seed if seed is None else seed
    results = identity_battery(cfg.curve, L, cfg.generator,
                               seed=use_seed, samples=samples)
    report = Report(header=("identity", "samples", "worst_residual",
                            "tolerance", "verdict"))
    report.notes.append(f"seed = {use_seed}")
    ok = True
    for r in results:
        ok = ok and r.passed
        report.add(r.name, str(r.samples), f"{r.worst:.3e}",
                   f"{r.tolerance:.0e}", "pass" if r.passed else "fail")
    report.passed = ok
    _emit(report, out, value_col=2)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reproduce(out: Optional[str]) -> int:
    cfg = load_config(None)
    return cmd_check(cfg, skip_archimedean=False, tolerance=None, out=out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="verify",
        description="Divisor-condition and elliptic-dilogarithm verifier")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", default=None,
                           help="JSON run configuration "
                                "(default: bundled sample)")
        p.add_argument("--out", default=None,
                       help="write the report as CSV here, plus a PNG "
                            "chart alongside")

    p = sub.add_parser("check", help="run conditions a/b/c and ratios")
    add_common(p)
    p.add_argument("--skip-archimedean", action="store_true")
    p.add_argument("--tolerance", type=float, default=None,
                   help="archimedean tolerance override")

    p = sub.add_parser("dilog", help="evaluate the elliptic dilogarithm")
    add_common(p)
    p.add_argument("--divisor", default=None, help="divisor label")

    p = sub.add_parser("lvalue", help="compute L(E,2)")
    add_common(p)
    p.add_argument("--mode", choices=("afe", "naive"), default="afe")
    p.add_argument("--terms", type=int, default=None,
                   help="series terms (afe) or sum bound (naive)")

    p = sub.add_parser("identities", help="run the identity battery")
    add_common(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("reproduce-example",
                       help="run the bundled sample end to end")
    add_common(p, config=False)

    args = ap.parse_args(argv)
    try:
        if args.cmd == "reproduce-example":
            return cmd_reproduce(args.out)
        cfg = load_config(args.config)
        if args.cmd == "check":
            return cmd_check(cfg, args.skip_archimedean, args.tolerance,
                             args.out)
        if args.cmd == "dilog":
            return cmd_dilog(cfg, args.divisor, args.out)
        if args.cmd == "lvalue":
            terms = args.terms
            if terms is None:
                terms = cfg.lvalue_terms if args.mode == "afe" else 10 ** 7
            return cmd_lvalue(cfg, args.mode, terms, args.out)
        if args.cmd == "identities":
            return cmd_identities(cfg, args.seed, args.samples, args.out)
        raise AssertionError("unreachable")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PrecisionError, ArithmeticError) as exc:
        print(f"numeric precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UnsupportedPlaceError, NotImplementedError) as exc:
        print(f"unsupported place: {exc}", file=sys.stderr)
        return EXIT_PLACE


if __name__ == "__main__":
    sys.exit(main())
