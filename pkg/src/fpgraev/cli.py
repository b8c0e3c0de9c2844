"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
All numbers are printed as exact rationals ``p/q``.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

from . import __version__
from .catalog import bench_metric, point_names
from .formats import load_metric, load_topology, parse_fraction
from .graev import GraevExtension, check_prenorm_axioms
from .joiner import (
    equiv_conds_battery,
    joiner_sweep,
    make_instance,
    refine_exact_length,
    replay,
    separation_certificate,
    verify_neighbourhood,
    x_power_check,
)
from .report import Report
from .schemes import (
    Crossing,
    FixedPoint,
    LengthMismatch,
    NotInvolution,
    Representation,
    enumerate_schemes,
    gamma,
    is_nested,
    nested_normalize,
    parse_scheme,
)
from .topology import (
    all_topologies,
    check_reznichenko,
    check_rez_duality,
    discrete,
    graev_family_topology_on_inverse,
    indiscrete,
    inverse_topology,
    sierpinski,
)
from .words import (
    Letter,
    ReducedWord,
    enumerate_FPn,
    parse_reduced,
    parse_word,
    reduce,
)


class Output:
    def __init__(self, fmt: str, command: str, stream: TextIO):
        self.fmt, self.command, self.stream = fmt, command, stream

    def emit(self, value: Any, input: Any = None, provenance: str = "", text: str | None = None) -> None:
        if self.fmt == "json-lines":
            record = {
                "command": self.command,
                "input": _jsonable(input),
                "value": _jsonable(value),
                "provenance": provenance,
            }
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            print(str(value) if text is None else text, file=self.stream)

    def report(self, report: Report, provenance: str = "check") -> int:
        for c in report.checks:
            self.emit(c.record(), input=c.instance, provenance=provenance, text=c.line())
        return 0 if report.ok else 1


def _jsonable(v: Any) -> Any:
    if isinstance(v, (Fraction, ReducedWord)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = [_jsonable(x) for x in v]
        return sorted(items) if isinstance(v, (set, frozenset)) else items
    return v


_BUILTIN = re.compile(r"^(sierpinski|discrete(\d+)|indiscrete(\d+))$")


def load_space(name: str):
    """A topology file, or one of ``sierpinski``, ``discreteK``, ``indiscreteK``."""
    m = _BUILTIN.match(name)
    if m and not Path(name).exists():
        if m.group(1) == "sierpinski":
            return sierpinski()
        if m.group(2):
            return discrete(point_names(int(m.group(2))))
        return indiscrete(point_names(int(m.group(3))))
    return load_topology(name)


# -- commands ------------------------------------------------------------------


def cmd_reduce(args, out: Output) -> int:
    out.emit(reduce(parse_word(args.word)), input=args.word, provenance="free reduction")
    return 0


def _ext(args) -> GraevExtension:
    return GraevExtension(load_metric(args.metric, sparse=args.sparse), name=Path(args.metric).stem)


def cmd_prenorm(args, out: Output) -> int:
    ext = _ext(args)
    g = parse_reduced(args.word)
    values = {}
    if args.method in ("dp", "both"):
        values["dp"] = ext.prenorm_dp(g)
        out.emit(values["dp"], input=str(g), provenance="dp")
    if args.method in ("brute", "both"):
        values["brute"] = ext.prenorm_bruteforce(g, cap=args.cap)
        out.emit(values["brute"], input=str(g), provenance="bruteforce")
    if args.method == "both":
        agree = values["dp"] == values["brute"]
        out.emit("AGREE" if agree else "DISAGREE", input=str(g), provenance="dp=bruteforce")
        return 0 if agree else 1
    return 0


def cmd_dist(args, out: Output) -> int:
    ext = _ext(args)
    g, h = parse_reduced(args.g), parse_reduced(args.h)
    out.emit(ext.distance(g, h), input=[str(g), str(h)], provenance="dp")
    return 0


def cmd_ball(args, out: Output) -> int:
    ext = _ext(args)
    center = parse_reduced(args.center)
    radius = parse_fraction(args.radius)
    if args.words:
        universe = [parse_reduced(w) for w in args.words]
    else:
        universe = enumerate_FPn(ext.metric.points, args.n)
    members = ext.ball(center, radius, universe)
    for h in members:
        out.emit(h, input={"center": str(center), "radius": str(radius)}, provenance="dp")
    return 0


def cmd_schemes(args, out: Output) -> int:
    if args.action == "enumerate":
        for s in enumerate_schemes(args.n, cap=args.cap):
            out.emit(s, input=args.n, provenance="enumeration")
        return 0
    if args.action == "validate":
        try:
            s = parse_scheme(args.scheme)
        except (Crossing, FixedPoint, NotInvolution) as err:
            out.emit(f"invalid {type(err).__name__}: {err}", input=args.scheme, provenance="stack")
            return 1
        if args.n is not None and s.n != args.n:
            raise LengthMismatch(f"scheme covers 1..{2 * s.n}, not 1..{2 * args.n}")
        out.emit(f"valid {'nested' if is_nested(s) else 'not-nested'}", input=args.scheme,
                 provenance="stack")
        return 0
    rep = Representation(parse_word(args.word))
    s = parse_scheme(args.scheme)
    new_rep, new_s = nested_normalize(rep, s)
    out.emit(new_rep.word, input={"word": args.word, "scheme": args.scheme}, provenance="nested-normalize")
    out.emit(new_s, input={"word": args.word, "scheme": args.scheme}, provenance="nested-normalize")
    if args.metric:
        ext = _ext(args)
        before, after = gamma(ext.dstar, rep, s), gamma(ext.dstar, new_rep, new_s)
        out.emit(f"gamma {before} -> {after}", input=args.metric, provenance="gamma")
        return 0 if before == after else 1
    return 0


def cmd_gamma(args, out: Output) -> int:
    ext = _ext(args)
    rep = Representation(parse_word(args.word))
    s = parse_scheme(args.scheme)
    out.emit(gamma(ext.dstar, rep, s), input={"word": args.word, "scheme": args.scheme}, provenance="gamma")
    return 0


def cmd_topology(args, out: Output) -> int:
    t = load_space(args.space)
    if args.action == "closure":
        cl = t.closure(args.point)
        out.emit(" ".join(p for p in t.points if p in cl), input=args.point, provenance="closure")
        return 0
    if args.action == "t1":
        out.emit("true" if t.is_T1() else "false", input=t.label(), provenance="closure")
        return 0
    if args.action == "inverse":
        out.emit(inverse_topology(t).topology, input=t.label(), provenance="T_A")
        return 0
    if args.action == "duality":
        report = check_rez_duality(t)
        report.extend(check_reznichenko(t))
        return out.report(report)
    comparison = graev_family_topology_on_inverse(t, n_family_cap=args.family_cap)
    report = comparison.report()
    status = out.report(report)
    # equality is measured, not required
    return 0 if comparison.included else status


def cmd_joiner(args, out: Output) -> int:
    if args.action == "replay":
        data = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
        return out.report(replay(data))
    space = load_space(args.space)
    if args.action == "sweep":
        return out.report(joiner_sweep(space, args.max_len, jobs=args.jobs))
    if args.action == "separate":
        cert = separation_certificate(space, args.word, args.target)
        report = Report()
        report.add("separation", f"{space.label()}:w={cert.w}:{cert.target}", True,
                   f"{cert.kind} {cert.line()}")
        return out.report(report)
    choice = args.choice.split(",") if "," in args.choice else args.choice
    inst = make_instance(space, args.word, choice)
    if args.refine:
        inst = refine_exact_length(inst)
    cert = verify_neighbourhood(inst)
    if args.cert:
        Path(args.cert).write_text(cert.to_json(), encoding="utf-8")
    report = Report()
    report.add(
        "joiner_verdict",
        inst.describe(),
        cert.verdict,
        f"offending {cert.offending}" if cert.offending else ("fallback metric" if cert.fallback else ""),
    )
    report.add("joiner_trace", inst.describe(), True, ";".join(str(h) for h in cert.trace))
    return out.report(report)


def cmd_equiv(args, out: Output) -> int:
    if args.all_topologies:
        spaces = list(all_topologies(point_names(args.all_topologies)))
    else:
        spaces = [load_space(s) for s in args.space]
    status = 0
    results = []
    for sp in spaces:
        res = equiv_conds_battery(sp, max_len=args.max_len)
        results.append(res)
        status = max(status, out.report(res.report()))
    if args.plot:
        from .plotting import plot_conditions

        conds = list(results[0].values)
        plot_conditions([r.space.label() for r in results], conds,
                        [[r.values[c] for c in conds] for r in results], args.plot)
    return status


def cmd_xpower(args, out: Output) -> int:
    return out.report(x_power_check(load_space(args.space), args.n))


def cmd_axioms(args, out: Output) -> int:
    ext = _ext(args)
    sample = enumerate_FPn(ext.metric.points, args.max_len)
    return out.report(check_prenorm_axioms(ext, sample, tuple_len=args.tuple_len))


def random_reduced(points, length: int, rng: random.Random) -> ReducedWord:
    letters: list[Letter] = []
    while len(letters) < length:
        x = Letter(rng.choice(points), rng.choice((1, -1)))
        if letters and letters[-1] == x.inverse():
            continue
        letters.append(x)
    return ReducedWord(tuple(letters))


def cmd_bench(args, out: Output) -> int:
    d = bench_metric(args.points)
    rng = random.Random(args.seed)
    rows = []
    for n in args.lengths:
        g = random_reduced(d.points, n, rng)
        best = None
        for _ in range(args.repeat):
            ext = GraevExtension(d)
            t0 = time.perf_counter()
            value = ext.prenorm_dp(g)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        rows.append((n, best))
        out.emit(
            {"length": n, "seconds": round(best, 6), "N": value},
            input=str(g),
            provenance="dp",
            text=f"{n}\t{best:.6f}\t{value}",
        )
    if args.plot:
        from .plotting import plot_bench

        plot_bench(rows, args.plot, title=f"interval recurrence, {args.points}-point metric")
    return 0


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpgraev", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def metric_opts(sp, required=True):
        sp.add_argument("--metric", required=required, help="metric file")
        sp.add_argument("--sparse", action="store_true", help="missing pairs default to 0")

    sp = sub.add_parser("reduce", help="freely reduce a word")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("prenorm", help="N_d of a word")
    metric_opts(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--method", choices=("dp", "brute", "both"), default="dp")
    sp.add_argument("--cap", type=int, default=8, help="brute-force length cap")
    sp.set_defaults(func=cmd_prenorm)

    sp = sub.add_parser("dist", help="Graev distance d^(g, h)")
    metric_opts(sp)
    sp.add_argument("g")
    sp.add_argument("h")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("ball", help="members of a d^-ball inside FP_n or a word list")
    metric_opts(sp)
    sp.add_argument("--center", required=True)
    sp.add_argument("--radius", required=True)
    sp.add_argument("-n", type=int, default=2, help="universe FP_n when --words is absent")
    sp.add_argument("--words", nargs="*")
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("schemes", help="enumerate, validate or normalize schemes")
    ssub = sp.add_subparsers(dest="action", required=True)
    e = ssub.add_parser("enumerate")
    e.add_argument("n", type=int)
    e.add_argument("--cap", type=int, default=8)
    v = ssub.add_parser("validate")
    v.add_argument("scheme", help="pairs such as '1-4 2-3'")
    v.add_argument("-n", type=int)
    nz = ssub.add_parser("normalize")
    nz.add_argument("--word", required=True)
    nz.add_argument("--scheme", required=True)
    metric_opts(nz, required=False)
    sp.set_defaults(func=cmd_schemes)

    sp = sub.add_parser("gamma", help="cost of a representation under a scheme")
    metric_opts(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--scheme", required=True)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("topology", help="finite topology queries")
    tsub = sp.add_subparsers(dest="action", required=True)
    c = tsub.add_parser("closure")
    c.add_argument("space")
    c.add_argument("point")
    for name in ("t1", "inverse", "duality"):
        tsub.add_parser(name).add_argument("space")
    f = tsub.add_parser("family", help="Graev-family topology on X^-1 against T_A")
    f.add_argument("space")
    f.add_argument("--family-cap", type=int, default=1 << 12)
    sp.set_defaults(func=cmd_topology)

    sp = sub.add_parser("joiner", help="neighbourhood-base verification")
    jsub = sp.add_subparsers(dest="action", required=True)
    jv = jsub.add_parser("verify")
    jv.add_argument("--space", required=True)
    jv.add_argument("--word", required=True)
    jv.add_argument("--choice", default="singleton",
                    help="singleton, full, or a comma list with one entry per position")
    jv.add_argument("--refine", action="store_true", help="shrink to exact-length products")
    jv.add_argument("--cert", help="write the certificate as JSON")
    jr = jsub.add_parser("replay")
    jr.add_argument("certificate")
    js = jsub.add_parser("sweep")
    js.add_argument("--space", required=True)
    js.add_argument("--max-len", type=int, default=3)
    js.add_argument("--jobs", type=int, default=1)
    jp = jsub.add_parser("separate")
    jp.add_argument("--space", required=True)
    jp.add_argument("--word", required=True)
    jp.add_argument("--target", required=True, help="X, X^-1 or FP<n>")
    sp.set_defaults(func=cmd_joiner)

    sp = sub.add_parser("equiv-conds", help="equivalent-conditions battery")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--space", nargs="+")
    grp.add_argument("--all-topologies", type=int, metavar="K")
    sp.add_argument("--max-len", type=int, default=3)
    sp.add_argument("--plot", help="write a heat map of the condition values")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("xpower", help="closed discrete copy of X^n")
    sp.add_argument("--space", required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.set_defaults(func=cmd_xpower)

    sp = sub.add_parser("axioms", help="invariant quasi-prenorm axioms on FP_n")
    metric_opts(sp)
    sp.add_argument("--max-len", type=int, default=2)
    sp.add_argument("--tuple-len", type=int, default=3)
    sp.set_defaults(func=cmd_axioms)

    sp = sub.add_parser("bench", help="time the interval recurrence")
    sp.add_argument("--lengths", type=int, nargs="+", default=[10, 20, 40])
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--plot", help="write a timing figure")
    sp.set_defaults(func=cmd_bench)
    return p


def run(argv=None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format, args.command, stdout)
    try:
        return args.func(args, out)
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=stderr)
        return 2


def main() -> None:
    sys.exit(run())
