"""Command-line front end: ``deszeta eval | shuffle | verify``.

Word literals are written ``[e1,e2,...,er]`` and stand for j^{e1} y ... j^{er} y;
a negative exponent is a power of d. Index lists are comma separated, e.g.
``-k -1,-2``.

Exit codes: 0 when every case passes, 1 when any case fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import mpmath

from .closedform import deszeta_nonpos_bernoulli, deszeta_nonpos_iterdiff
from .harness import SUITES, Case, Report, RunConfig, _psi, _psi_sum, default_bits, run_suite
from .numcore import PrecisionCtx
from .numeval import DomainError, NonConvergenceError, deszeta_eval
from .wordalg import format_word, format_wordsum, parse_word, shuffle0_words, word_to_index

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        k = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse index list {text!r}; expected e.g. 1,-2,0") from None
    if not k:
        raise UsageError("empty index list")
    return k


def _merge_index_args(argv: Sequence[str]) -> list[str]:
    # "-k -1,-2" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("-k", "--indices"):
            nxt = next(it, None)
            out.append(f"--indices={nxt}" if nxt is not None else a)
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="deszeta",
        description="Desingularized multiple zeta values: evaluation, word products, verification.",
        epilog="Word literals: [e1,...,er] means j^e1 y ... j^er y (negative e is a power of d).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, help="working precision in bits (default: $DESZETA_PREC or 192)")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--config", help="JSON file with RunConfig fields; flags take precedence")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate zeta^des_r(k)")
    e.add_argument("-k", "--indices", required=True, help="comma-separated integers")
    e.add_argument("--exact", action="store_true",
                   help="require an exact rational (non-positive points); both exact routes must agree")
    e.add_argument("--route", choices=("A", "B", "auto"), default="auto")

    s = sub.add_parser("shuffle", parents=[common], help="expand u sh_0 v and check it numerically")
    s.add_argument("u")
    s.add_argument("v")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    v.add_argument("--seed", type=int)
    v.add_argument("--jobs", type=int)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig(bits=default_bits())
    if args.config:
        try:
            cfg = RunConfig.from_file(args.config)
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"bad config file: {exc}") from None
    kw = {"bits": args.prec, "format": args.format,
          "seed": getattr(args, "seed", None), "jobs": getattr(args, "jobs", None)}
    if args.tol is not None:
        if args.command != "verify":
            names = [args.command]
        else:
            names = list(SUITES) if args.suite == "all" else [args.suite]
        kw["tols"] = {n: args.tol for n in names}
    cfg = cfg.override(**kw)
    if cfg.bits < 64:
        raise UsageError("precision must be at least 64 bits")
    if cfg.jobs < 1:
        raise UsageError("--jobs must be positive")
    return cfg


def cmd_eval(args, cfg: RunConfig) -> Report:
    k = _parse_indices(args.indices)
    ctx = PrecisionCtx(cfg.bits)
    inputs = {"k": list(k), "bits": cfg.bits, "route": args.route}
    cid = "zeta_des(" + ",".join(map(str, k)) + ")"
    if args.exact:
        if any(x > 0 for x in k):
            raise UsageError("--exact needs non-positive indices")
        a = deszeta_nonpos_bernoulli(k)
        b = deszeta_nonpos_iterdiff(k)
        case = Case(cid, inputs, str(a), str(b), float(abs(a - b)),
                    "pass" if a == b else "fail", "exact", "exact")
        return Report("eval", [case])
    try:
        res = deszeta_eval(k, ctx, route=args.route, tol=cfg.tols.get("eval", 1e-8))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    except NonConvergenceError as exc:
        return Report("eval", [Case(cid, inputs, None, str(exc), None, "fail", "extrapolation-A")])
    with ctx.workprec():
        actual = str(res.exact) if res.exact is not None else mpmath.nstr(res.value, max(15, cfg.bits // 4))
    case = Case(cid, inputs, None, actual, float(res.err_bound), "pass", res.route.value,
                "exact" if res.exact is not None else None)
    return Report("eval", [case])


def _zeta_name(w) -> str:
    return "zeta_des(" + ",".join(map(str, word_to_index(w))) + ")"


def cmd_shuffle(args, cfg: RunConfig) -> Report:
    try:
        u, v = parse_word(args.u), parse_word(args.v)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if u.depth == 0 or v.depth == 0:
        raise UsageError("word literals must be non-empty")
    prod = shuffle0_words(u, v)
    rhs = " + ".join(_zeta_name(w) if c == 1 else f"{c}*{_zeta_name(w)}" for w, c in prod) or "0"
    identity = f"{_zeta_name(u)}*{_zeta_name(v)} = {rhs}".replace("+ -1*", "- ").replace("+ -", "- ")
    ctx = PrecisionCtx(cfg.bits)
    tol = cfg.tols.get("shuffle", 1e-9)
    with ctx.workprec():
        t = mpmath.mpf(1) / 2
        lhs = _psi(u, t, ctx) * _psi(v, t, ctx)
        res = abs(_psi_sum(prod, t, ctx) - lhs)
    case = Case(f"{format_word(u)}*{format_word(v)}",
                {"u": format_word(u), "v": format_word(v), "identity": identity, "t": "1/2"},
                format_wordsum(prod), format_wordsum(prod), float(res),
                "pass" if res <= tol else "fail", "shuffle", "psi-numeric")
    return Report("shuffle", [case])


def cmd_verify(args, cfg: RunConfig) -> Report:
    return run_suite(args.suite, cfg)


# ---------------------------------------------------------------- rendering

_CSV_FIELDS = ("id", "inputs", "expected", "actual", "abs_err", "verdict", "route", "equality_level")


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_CSV_FIELDS)
        for row in report.to_dict()["cases"]:
            row["inputs"] = json.dumps(row["inputs"], sort_keys=True)
            w.writerow([row[f] for f in _CSV_FIELDS])
        return buf.getvalue()
    return _render_text(report)


def _render_text(report: Report) -> str:
    lines: list[str] = []
    if report.suite == "eval":
        c = report.cases[0]
        lines.append(f"{c.id} = {c.actual}")
        if c.equality_level == "exact":
            lines.append("exact: yes")
        if c.abs_err is not None:
            label = "route disagreement" if c.route == "exact" else "error bound"
            lines.append(f"{label}: {c.abs_err:.3g}")
        lines.append(f"route: {c.route}")
        if c.verdict == "fail":
            lines.append(f"FAIL: expected {c.expected}")
        return "\n".join(lines) + "\n"
    if report.suite == "shuffle":
        c = report.cases[0]
        lines.append(f"{c.inputs['u']} sh_0 {c.inputs['v']} = {c.actual}")
        lines.append(c.inputs["identity"])
        lines.append(f"residual at t=1/2: {c.abs_err:.3g} ({c.verdict})")
        return "\n".join(lines) + "\n"
    for c in report.cases:
        err = "" if c.abs_err is None else f"  err={c.abs_err:.3g}"
        lines.append(f"{c.verdict.upper():4}  {c.id}{err}")
        if c.verdict == "fail":
            lines.append(f"      expected {c.expected}, got {c.actual}")
    s = report.summary
    lines.append(f"{report.suite}: {s['pass']} passed, {s['fail']} failed, {s['skip']} skipped "
                 f"in {report.wall_time:.2f} s")
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_index_args(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        handler = {"eval": cmd_eval, "shuffle": cmd_shuffle, "verify": cmd_verify}[args.command]
        report = handler(args, cfg)
    except (UsageError, ValueError) as exc:
        print(f"deszeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = cfg.format or ("json" if args.command == "verify" else "text")
    text = render(report, fmt)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
