"""Command-line entry point: ``lrcc {construct,plan,convert,verify,bounds}``.

Exit codes: 0 success, 1 usage or I/O error, 2 mathematical violation (a
witness is printed), 3 work ceiling exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .code import CodeError, LinearCode, WorkCeilingExceeded, ZeroCode, default_ceiling
from .construct import (
    BaseCode,
    BaseCodeASpec,
    ConditionGViolated,
    ConstructError,
    build,
    check_condition_g,
    spec_from_dict,
)
from .convert import (
    ConversionPlan,
    ConvertError,
    HypothesisViolated,
    NoInvertiblePermutation,
    NotACodeword,
    audit_optimality,
    convert,
    make_plan,
)
from .gf import FieldError
from .linalg import BlockStructure, LinalgError, MatrixGF
from .lrc import (
    BoundInputs,
    LocalityPartition,
    LRCError,
    Regime,
    access_lb_new,
    access_lb_old,
    fig1_grid,
    mr_check,
    singleton_bound,
    verify_locality,
)

EXIT_OK, EXIT_IO, EXIT_MATH, EXIT_CEILING = 0, 1, 2, 3
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class MathViolation(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class RunConfig:
    ceiling: int
    seed: int
    fmt: str
    verbose: int

    def __post_init__(self):
        if self.ceiling <= 0:
            raise UsageError("work ceiling must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


# -- file helpers ------------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _is_spec(d: dict) -> bool:
    return "G" in d or "alphas" in d


def _base_from_code_dict(d: dict) -> BaseCode:
    try:
        code = LinearCode.from_dict(d)
        part = LocalityPartition.from_dict(d["partition"])
        g = int(d["blocks"]["g"])
        lr = int(d["blocks"]["local_rows"])
    except KeyError as exc:
        raise UsageError(f"code file is missing the key {exc.args[0]!r}") from None
    blocks = BlockStructure.from_matrix(code.H, g, lr)
    meta = d.get("metadata", {})
    return BaseCode(code, part, blocks, meta.get("family", "custom"), dict(meta))


def _load_base(path: str) -> BaseCode:
    d = _read_json(path)
    if not isinstance(d, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        if _is_spec(d):
            return build(spec_from_dict(d))
        return _base_from_code_dict(d)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: invalid file ({exc})") from None


def _code_json(base: BaseCode) -> dict:
    out = base.to_dict()
    out["schema"] = f"lrcc.code/{SCHEMA_VERSION}"
    out["metadata"]["regime"] = _natural_regime(base).value
    return out


def _natural_regime(base: BaseCode) -> Regime:
    if base.family == "A" and base.params.get("d_design") == base.r + base.delta:
        return Regime.IMPROVED
    if base.params.get("regime"):
        return Regime(base.params["regime"])
    return Regime.STANDARD


# -- subcommands ---------------------------------------------------------------------


def cmd_construct(args, cfg: RunConfig) -> int:
    d = _read_json(args.spec)
    if not isinstance(d, dict) or not _is_spec(d):
        raise UsageError(f"{args.spec}: not a base-code spec (needs 'G' or 'alphas')")
    try:
        spec = spec_from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (FieldError, ConstructError)):
            raise
        raise UsageError(f"{args.spec}: invalid spec ({exc})") from None
    if isinstance(spec, BaseCodeASpec):
        rep = check_condition_g(spec)
        if not rep.passed:
            raise MathViolation("generating sets violate the union-size condition", rep.to_dict())
    base = build(spec)
    out = _code_json(base)
    if cfg.fmt == "json":
        _emit(_dump(out), args.out)
    else:
        if args.out:
            _emit(_dump(out), args.out)
        C = base.code
        print(f"[{C.n}, {C.k}] code over GF({C.tower.order}), {base.g} groups of width {base.blocks.width}")
        print(
            C.H.pretty(
                col_groups=[base.blocks.width] * base.g,
                row_groups=[base.blocks.local_rows] * base.g + [base.blocks.global_rows],
            )
        )
    return EXIT_OK


def cmd_plan(args, cfg: RunConfig) -> int:
    base = _load_base(args.code)
    regime = Regime(args.regime) if args.regime else _natural_regime(base)
    plan = make_plan(base, args.t, args.h, regime=regime)
    out = plan.to_dict()
    if cfg.fmt == "json" or args.out:
        _emit(_dump(out), args.out)
    if cfg.fmt != "json":
        print(
            f"plan: g={plan.g} l={plan.l} t={plan.t} h={plan.h} s={plan.s}; "
            f"initial [{plan.n_I}, {plan.k_I}], final [{plan.n_F}, {plan.k_F}]"
        )
        print(f"global rows for elimination: {plan.m_rows}; remaining: {plan.n_rows}")
        print(plan.H_F.pretty(col_groups=[plan.width] * (plan.l + plan.h)))
    return EXIT_OK


def cmd_convert(args, cfg: RunConfig) -> int:
    d = _read_json(args.plan)
    try:
        plan = ConversionPlan.from_dict(d)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.plan}: invalid plan ({exc})") from None
    batches = []
    if args.inputs:
        if len(args.inputs) != plan.t:
            raise UsageError(f"plan needs {plan.t} codeword files, got {len(args.inputs)}")
        words = []
        for path in args.inputs:
            obj = _read_json(path)
            vec = obj.get("codeword") if isinstance(obj, dict) else obj
            if not isinstance(vec, list):
                raise UsageError(f"{path}: expected a list or {{'codeword': [...]}}")
            words.append(np.array(vec, dtype=np.int64))
        batches.append(words)
    else:
        rng = np.random.default_rng(cfg.seed)
        for _ in range(args.random):
            batches.append([C.random_codeword(rng) for C in plan.initial])
    traces, audits = [], []
    for words in batches:
        tr = convert(plan, words)
        traces.append(tr)
        audits.append(audit_optimality(plan, tr))
    if cfg.fmt == "json":
        _emit(
            _dump(
                {
                    "schema": f"lrcc.convert/{SCHEMA_VERSION}",
                    "traces": [t.to_dict() for t in traces],
                    "audit": [a.to_dict() for a in audits],
                }
            ),
            args.out,
        )
    else:
        for i, (tr, au) in enumerate(zip(traces, audits)):
            print(f"trace {i}: rho_r={tr.rho_r} rho_w={tr.rho_w}")
        if audits:
            print(audits[0].table())
    return EXIT_OK if all(a.optimal for a in audits) else EXIT_MATH


def cmd_verify(args, cfg: RunConfig) -> int:
    base = _load_base(args.code)
    C, part = base.code, base.partition
    regime = Regime(args.regime) if args.regime else _natural_regime(base)
    selected = [k for k in ("distance", "locality", "optimal", "mr") if getattr(args, k)]
    if not selected:
        selected = ["distance", "locality"]
    report: dict = {"schema": f"lrcc.verify/{SCHEMA_VERSION}", "n": C.n, "k": C.k, "checks": {}}
    ok = True
    try:
        if "distance" in selected:
            dist = C.min_distance(cfg.ceiling)
            report["checks"]["distance"] = {"d": dist, "passed": True}
        if "locality" in selected:
            rep = verify_locality(C, part, cfg.ceiling)
            report["checks"]["locality"] = rep.to_dict()
            ok &= rep.passed
        if "optimal" in selected:
            dist = C.min_distance(cfg.ceiling)
            try:
                bound = singleton_bound(C.n, C.k, part.r, part.delta, regime)
            except LRCError:
                bound = None
            loc = verify_locality(C, part, cfg.ceiling).passed
            passed = loc and bound == dist
            report["checks"]["optimal"] = {"d": dist, "bound": bound, "regime": regime.value, "locality": loc, "passed": passed}
            ok &= passed
        if "mr" in selected:
            res = mr_check(C, part, cfg.ceiling)
            report["checks"]["mr"] = res.to_dict()
            ok &= res.is_mr
    except WorkCeilingExceeded as exc:
        report["ceiling_exceeded"] = {"message": str(exc), "lower_bound": exc.lower_bound, "work": exc.work}
        _print_report(report, cfg, args.out)
        return EXIT_CEILING
    report["passed"] = bool(ok)
    _print_report(report, cfg, args.out)
    return EXIT_OK if ok else EXIT_MATH


def _print_report(report: dict, cfg: RunConfig, out: str | None) -> None:
    if cfg.fmt == "json":
        _emit(_dump(report), out)
        return
    print(f"code [{report['n']}, {report['k']}]")
    for name, rep in report["checks"].items():
        status = "pass" if rep.get("passed", rep.get("is_mr")) else "FAIL"
        extra = ""
        if name == "distance":
            extra = f"d = {rep['d']}"
        elif name == "optimal":
            extra = f"d = {rep['d']}, bound = {rep['bound']} ({rep['regime']})"
        elif name == "mr":
            extra = f"{rep['patterns_checked']} of {rep['total_patterns']} patterns checked"
            if rep["witness"]:
                extra += f", witness {rep['witness']}"
        elif name == "locality" and rep["first_failure"] is not None:
            extra = f"first failing group {rep['first_failure']}"
        print(f"  {name:<9} {status:<5} {extra}")
    if "ceiling_exceeded" in report:
        print(f"  work ceiling exceeded: {report['ceiling_exceeded']['message']}")


def cmd_bounds(args, cfg: RunConfig) -> int:
    if args.fig1_grid:
        rows = fig1_grid(deltas=args.deltas or (3, 4, 5), regime=Regime(args.regime or "standard"))
        if cfg.fmt == "json":
            _emit(_dump({"schema": f"lrcc.fig1/{SCHEMA_VERSION}", "rows": rows}), args.out)
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["rate", "delta", "rho_r_old", "rho_r_new"])
            for row in rows:
                w.writerow([f"{row['rate']:.6f}", row["delta"], row["rho_r_old"], row["rho_r_new"]])
            _emit(buf.getvalue(), args.out)
        return EXIT_OK
    need = ("n_F", "k", "t", "r", "delta", "d", "n_I")
    missing = [n for n in need if getattr(args, n) is None]
    if missing:
        raise UsageError("bounds needs --" + ", --".join(m.replace("_", "-") for m in missing) + " (or --fig1-grid)")
    regimes = [Regime(args.regime)] if args.regime else [Regime.STANDARD, Regime.IMPROVED]
    rows = []
    for reg in regimes:
        B = BoundInputs(args.n_F, args.k, args.t, args.r, args.delta, args.d, args.n_I, reg)
        old, new = access_lb_old(B), access_lb_new(B)
        rows.append({"regime": reg.value, "old": old.__dict__, "new": new.__dict__})
    if cfg.fmt == "json":
        _emit(_dump({"schema": f"lrcc.bounds/{SCHEMA_VERSION}", "rows": rows}), args.out)
    else:
        lines = [f"{'bound':<22}{'rho_w >=':>10}{'rho_r >=':>10}{'Delta':>8}"]
        o = rows[0]["old"]
        lines.append(f"{'old (r only)':<22}{o['rho_w']:>10}{o['rho_r']:>10}{o['delta_value']:>8}")
        for row in rows:
            label = f"new ({row['regime']})"
            lines.append(f"{label:<22}{row['new']['rho_w']:>10}{row['new']['rho_r']:>10}{row['new']['delta_value']:>8}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lrcc", description="Locally repairable convertible codes: construct, convert, verify.")
    p.add_argument("--version", action="version", version=f"lrcc {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--ceiling", type=int, default=None, help="work ceiling (default: LRCC_WORK_CEILING or 1e7)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--out", default=None, help="write the main output to a file")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a base code from a spec file")
    c.add_argument("spec")
    c.set_defaults(func=cmd_construct)

    pl = sub.add_parser("plan", parents=[common], help="derive a conversion plan from a base code")
    pl.add_argument("code", help="code file from 'construct' or a spec file")
    pl.add_argument("--t", type=int, required=True, help="number of initial codes")
    pl.add_argument("--h", type=int, required=True, help="shared groups kept in the final code")
    pl.add_argument("--regime", choices=[r.value for r in Regime])
    pl.set_defaults(func=cmd_plan)

    cv = sub.add_parser("convert", parents=[common], help="run conversions for a plan")
    cv.add_argument("--plan", required=True)
    cv.add_argument("--inputs", nargs="+", help="one codeword file per initial code")
    cv.add_argument("--random", type=int, default=1, help="number of random conversions")
    cv.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", parents=[common], help="check code properties")
    v.add_argument("code")
    v.add_argument("--distance", action="store_true")
    v.add_argument("--locality", action="store_true")
    v.add_argument("--optimal", action="store_true")
    v.add_argument("--mr", action="store_true")
    v.add_argument("--regime", choices=[r.value for r in Regime])
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", parents=[common], help="access-cost lower bounds")
    for name in ("n-F", "k", "t", "r", "delta", "d", "n-I"):
        b.add_argument(f"--{name}", dest=name.replace("-", "_"), type=int)
    b.add_argument("--regime", choices=[r.value for r in Regime])
    b.add_argument("--fig1-grid", action="store_true", help="emit the rate sweep as CSV")
    b.add_argument("--deltas", type=int, nargs="+")
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ceiling = args.ceiling if args.ceiling is not None else default_ceiling()
        cfg = RunConfig(ceiling=ceiling, seed=args.seed, fmt="json" if args.json else "pretty", verbose=args.verbose)
        if args.ceiling is not None:
            os.environ["LRCC_WORK_CEILING"] = str(args.ceiling)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"lrcc: {exc}", file=sys.stderr)
        return EXIT_IO
    except WorkCeilingExceeded as exc:
        print(f"lrcc: work ceiling exceeded: {exc} (lower bound {exc.lower_bound})", file=sys.stderr)
        return EXIT_CEILING
    except ConditionGViolated as exc:
        print(f"lrcc: {exc}; witness {list(exc.witness)}", file=sys.stderr)
        return EXIT_MATH
    except MathViolation as exc:
        print(f"lrcc: {exc}; witness {json.dumps(exc.witness)}", file=sys.stderr)
        return EXIT_MATH
    except NotACodeword as exc:
        print(f"lrcc: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (ConstructError, FieldError, HypothesisViolated, NoInvertiblePermutation, ConvertError, LRCError, ZeroCode) as exc:
        print(f"lrcc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (LinalgError, CodeError) as exc:
        print(f"lrcc: invalid input: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
