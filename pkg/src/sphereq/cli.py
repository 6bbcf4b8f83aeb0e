"""Command-line driver.

Exit codes: 0 positive/success, 1 negative/unsolvable, 2 unknown or budget
exhausted, 3 usage or syntax error, 4 invalid instance or library error,
5 internal consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import experiments as ex
from . import hashing as hs
from .agwp import AgwpInstance, agwp_solve
from .algebra import GroupParams, format_element, format_vector, parse_element, parse_vector
from .equations import (
    CiseInstance,
    ConstraintKind,
    SphericalInstance,
    Status,
    solve_auto,
    solve_bruteforce,
    solve_generic,
    verify,
)
from .errors import BudgetExceeded, ParseError, SphereqError
from .fileformat import kind_of, parse_instance, serialize
from .reductions import (
    IsisInstance,
    SisInstance,
    SspInstance,
    cise_to_agwp,
    isis_from_sis_guess,
    isis_to_cise,
    sis_bruteforce,
    sis_to_cise123,
    ssp_bruteforce,
    ssp_reduction_is_exact,
    ssp_to_spherical,
)

EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_USAGE, EXIT_ERROR, EXIT_INTERNAL = range(6)
SEED_ENV = "SPHEREQ_SEED"
STATUS_EXIT = {Status.SOLVABLE: EXIT_POSITIVE, Status.UNSOLVABLE: EXIT_NEGATIVE, Status.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class InternalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Report:
    """Key/value lines, optionally followed by a table."""

    def __init__(self, command: str, seed: int):
        self.fields = [("command", command), ("seed", str(seed))]
        self.table_header = None
        self.rows = []
        self.body = None

    def add(self, key, value):
        self.fields.append((key, str(value)))

    def table(self, header, rows):
        self.table_header = list(header)
        self.rows = [[str(v) for v in row] for row in rows]

    def render(self, fmt: str) -> str:
        if self.body is not None:
            comments = "".join(f"# {k}: {v}\n" for k, v in self.fields)
            return comments + self.body
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            if self.table_header:
                writer.writerow(self.table_header)
                writer.writerows(self.rows)
            else:
                writer.writerow(["key", "value"])
                writer.writerows(self.fields)
            return buf.getvalue()
        lines = [f"{k}: {v}" for k, v in self.fields]
        if self.table_header:
            lines.append("table: " + " ".join(self.table_header))
            lines += ["  " + " ".join(r) for r in self.rows]
        return "\n".join(lines) + "\n"


# argument helpers


def _int_list(text: str) -> list[int]:
    """``"4"``, ``"1-8"`` or ``"1,3,5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError("empty integer list")
    return out


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _read_instance(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _params(args) -> GroupParams:
    return GroupParams(args.p, args.n)


def _hash_spec(args) -> hs.Hash01Spec:
    params = _params(args)
    if not args.coef:
        raise UsageError("give the hash coefficients with --coef")
    return hs.Hash01Spec.from_vectors(params, [parse_vector(c, params) for c in args.coef])


def _fraction_fields(report: Report, key: str, value: Fraction):
    report.add(key, value)
    report.add(key + ".float", f"{float(value):.12g}")


# solving and verification


def _emit_assignment(report: Report, instance, witness):
    if not verify(instance, witness):
        raise InternalError("solver produced a witness that does not verify")
    for j, z in enumerate(witness, start=1):
        report.add(f"z{j}", format_element(z))
    if isinstance(instance, CiseInstance) and all(c.is_preset for c in instance.constraints):
        params = instance.params
        labels = [params.unit_inverse(z.unit) for z in witness]
        report.add("labels", " ".join(map(str, labels)))


def _emit_vector_solution(report: Report, instance, x):
    if not instance.is_solution(x):
        raise InternalError("solver produced a solution that does not verify")
    report.add("x", " ".join(map(str, x)))


def cmd_solve(args, report: Report) -> int:
    inst = _read_instance(args.file)
    kind = kind_of(inst)
    report.add("kind", kind)
    if kind in ("spherical", "cise"):
        if args.mode == "generic":
            if isinstance(inst, CiseInstance):
                if any(c.kind is not ConstraintKind.FREE for c in inst.constraints):
                    raise UsageError("generic mode solves unconstrained equations only")
                inst = inst.base
            result = solve_generic(inst)
        elif args.mode == "brute":
            result = solve_bruteforce(inst, args.budget)
        else:
            result = solve_auto(inst, args.budget)
        report.add("status", result.status.value)
        report.add("method", result.method)
        if result.detail:
            report.add("detail", result.detail)
        if result.solvable:
            _emit_assignment(report, inst, result.witness)
        return STATUS_EXIT[result.status]
    if kind == "agwp":
        return _agwp(inst, args, report)
    solver = ssp_bruteforce if kind == "ssp" else sis_bruteforce
    try:
        x = solver(inst, args.budget)
    except BudgetExceeded as exc:
        report.add("status", Status.UNKNOWN.value)
        report.add("detail", exc)
        return EXIT_UNKNOWN
    report.add("method", "brute")
    if x is None:
        report.add("status", Status.UNSOLVABLE.value)
        return EXIT_NEGATIVE
    report.add("status", Status.SOLVABLE.value)
    _emit_vector_solution(report, inst, x)
    return EXIT_POSITIVE


def _agwp(inst: AgwpInstance, args, report: Report) -> int:
    result = agwp_solve(inst, args.budget)
    report.add("status", result.status.value)
    report.add("method", result.method)
    if result.detail:
        report.add("detail", result.detail)
    if result.solvable:
        path = result.witness
        if not (inst.is_path(path) and inst.path_label(path).is_identity):
            raise InternalError("agwp witness does not evaluate to the identity")
        report.add("path", " ".join(map(str, path)))
    return STATUS_EXIT[result.status]


def cmd_agwp_solve(args, report: Report) -> int:
    inst = _read_instance(args.file)
    if not isinstance(inst, AgwpInstance):
        raise UsageError("agwp-solve needs an agwp instance")
    return _agwp(inst, args, report)


def cmd_verify(args, report: Report) -> int:
    inst = _read_instance(args.file)
    kind = kind_of(inst)
    report.add("kind", kind)
    if kind in ("spherical", "cise"):
        if not args.z:
            raise UsageError("give the assignment with repeated --z 'x_1 .. x_n alpha'")
        zs = tuple(parse_element(z, inst.params) for z in args.z)
        ok = len(zs) == inst.m and verify(inst, zs)
    elif kind == "agwp":
        if args.path is None:
            raise UsageError("give the path with --path 'e_1 e_2 ...'")
        path = _csv_ints(args.path)
        ok = inst.is_path(path) and inst.path_label(path).is_identity
    else:
        if args.x is None:
            raise UsageError("give the solution vector with --x")
        ok = inst.is_solution(_csv_ints(args.x))
    report.add("valid", "yes" if ok else "no")
    return EXIT_POSITIVE if ok else EXIT_NEGATIVE


# reductions


def cmd_reduce(args, report: Report) -> int:
    inst = _read_instance(args.file)
    name = args.reduction
    if name == "ssp-to-sph":
        if not isinstance(inst, SspInstance):
            raise UsageError("ssp-to-sph needs an ssp instance")
        out = ssp_to_spherical(inst)
        report.add("equivalence", "exact" if ssp_reduction_is_exact(inst) else "forward-only")
    elif name == "isis-to-cise":
        if not isinstance(inst, IsisInstance):
            raise UsageError("isis-to-cise needs an isis instance")
        out = isis_to_cise(inst).instance
        report.add("labels", "x_j = label_j - 1")
    elif name == "sis-to-cise123":
        if not isinstance(inst, SisInstance):
            raise UsageError("sis-to-cise123 needs a sis instance")
        out = sis_to_cise123(inst).instance
        report.add("labels", "x_j = label_j - 2; the all-2 labelling is the trivial solution")
    elif name == "guess-index":
        if not isinstance(inst, SisInstance):
            raise UsageError("guess-index needs a sis instance")
        if args.index is None:
            raise UsageError("guess-index needs --index")
        out = isis_from_sis_guess(inst, args.index)
        report.add("reinsert", f"x = x'[:{args.index}] + (1,) + x'[{args.index}:]")
    else:
        if not isinstance(inst, (CiseInstance, SphericalInstance)):
            raise UsageError("cise-to-agwp needs a cise instance")
        if isinstance(inst, SphericalInstance):
            inst = CiseInstance.unconstrained(inst)
        out = cise_to_agwp(inst, args.budget)
    text = serialize(out)
    if args.output:
        Path(args.output).write_text(text)
        report.add("output", args.output)
    else:
        report.body = text
    return EXIT_POSITIVE


# hashing


def cmd_hash(args, report: Report) -> int:
    action = args.action
    if action == "sample":
        spec = hs.sample_hash_family(_params(args), args.m, args.seed)
        for j, c in enumerate(spec.coefficients, start=1):
            report.add(f"c{j}", format_vector(c.vec))
        return EXIT_POSITIVE
    if action == "jc":
        params = _params(args)
        if not args.c0 or len(args.c0) != len(args.c1 or []):
            raise UsageError("jc needs equally many --c0 and --c1 elements")
        spec = hs.JcSpec(
            params,
            (tuple(parse_element(t, params) for t in args.c0), tuple(parse_element(t, params) for t in args.c1)),
        )
        report.add("digest", format_element(hs.eval_jc(spec, hs.parse_bits(args.bits))))
        return EXIT_POSITIVE
    spec = _hash_spec(args)
    if action == "eval":
        report.add("digest", format_element(hs.eval_hash01(spec, hs.parse_bits(args.bits))))
        return EXIT_POSITIVE
    if action == "collide-to-cise":
        cise, witness = hs.collision_to_cise(spec, hs.parse_bits(args.x), hs.parse_bits(args.y))
        for j, z in enumerate(witness, start=1):
            report.add(f"z{j}", format_element(z))
        report.body = serialize(cise)
        return EXIT_POSITIVE
    target = parse_element(args.target, spec.params)
    report.body = serialize(hs.preimage_to_cise(spec, target))
    return EXIT_POSITIVE


# statistics


def _maybe_plot(args, report, xs, series, xlabel, ylabel, title, logy=False):
    if args.plot:
        from .plotting import render_series

        render_series(args.plot, xs, series, xlabel, ylabel, title, logy)
        report.add("figure", args.plot)


def cmd_stats(args, report: Report) -> int:
    action = args.action
    if action == "params":
        regime = ex.validate_params(args.n, args.m, args.p, math.e if args.natural_log else 2)
        report.add("log", "natural" if args.natural_log else "2")
        report.add("lower", f"{regime.lower:.4f}")
        report.add("upper", f"{regime.upper:.4f}")
        report.add("valid", "yes" if regime.valid else "no")
        for v in regime.violations:
            report.add("violation", v)
        return EXIT_POSITIVE if regime.valid else EXIT_NEGATIVE
    if action == "generic":
        rows, xs, freq_m, freq_b = [], [], [], []
        for s in _int_list(args.s):
            rm, rb = ex.generic_stats(s, args.trials, args.seed)
            rows.append([s, args.trials, rm.successes, f"{rm.point_estimate:.6f}", f"{float(rm.exact_value):.6f}",
                         rb.successes, f"{rb.point_estimate:.6f}", f"{float(rb.exact_value):.6f}"])
            xs.append(s)
            freq_m.append(rm.point_estimate)
            freq_b.append(rb.point_estimate)
        report.add("trials", args.trials)
        report.table(["s", "trials", "m_hits", "m_freq", "m_exact", "beta_hits", "beta_freq", "beta_exact"], rows)
        _maybe_plot(args, report, xs, {"m >= s/2": freq_m, "some unit != 1": freq_b},
                    "s", "frequency", "generic-case properties over I_s")
        return EXIT_POSITIVE
    if action == "uniformity":
        params = _params(args)
        rows, xs, ys = [], [], []
        for m in _int_list(args.m):
            tv = ex.hash_uniformity(params, m, args.budget)
            rows.append([m, tv, f"{float(tv):.10f}"])
            xs.append(m)
            ys.append(tv)
        report.table(["m", "tv", "tv_float"], rows)
        _maybe_plot(args, report, xs, {"average TV": ys}, "m", "average TV distance",
                    f"hash output vs uniform, p={params.p} n={params.n}", logy=True)
        return EXIT_POSITIVE
    if action == "universality":
        params = _params(args)
        m = args.m
        value = ex.universality_check(params, m, hs.parse_bits(args.x), hs.parse_bits(args.y), args.budget)
        _fraction_fields(report, "value", value)
        report.add("bound", Fraction(1, params.p**params.n))
        return EXIT_POSITIVE
    if action == "device":
        params = _params(args)
        if args.coef:
            spec = _hash_spec(args)
        else:
            spec = hs.sample_hash_family(params, args.m, ex.trial_rng(args.seed, 0))
        rng = ex.trial_rng(args.seed, 1)
        rows = []
        for _ in range(args.count):
            bits, g = ex.hidden_function_device(spec, rng)
            rows.append([hs.format_bits(bits), format_element(g)])
        report.table(["bits", "value"], rows)
        return EXIT_POSITIVE
    # random-cise
    params = _params(args)
    ms = _int_list(args.m)
    if args.census is None:
        if len(ms) != 1:
            raise UsageError("a single --m is needed unless --census is given")
        report.body = serialize(ex.random_cise(params, ms[0], args.preset, ex.trial_rng(args.seed, 0)))
        return EXIT_POSITIVE
    rows, xs, ys, exact = [], [], [], []
    for m in ms:
        res = ex.solvability_census(params, m, args.preset, args.census, args.seed, args.budget)
        ev = "" if res.exact_value is None else f"{float(res.exact_value):.6f}"
        rows.append([m, res.trials, res.successes, f"{res.point_estimate:.6f}", ev])
        xs.append(m)
        ys.append(res.point_estimate)
        exact.append(float(res.exact_value) if res.exact_value is not None else float("nan"))
    report.table(["m", "draws", "solvable", "fraction", "exact"], rows)
    _maybe_plot(args, report, xs, {"observed": ys, "exact": exact}, "m", "solvable fraction",
                f"random CISE preset {args.preset}, p={params.p} n={params.n}")
    return EXIT_POSITIVE


# parser


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="u64 seed (overrides $SPHEREQ_SEED)")
    common.add_argument("--budget", type=int, default=10**7, help="search/enumeration budget")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--timing", action="store_true", help="append wall-clock timing to the report")

    parser = _Parser(prog="sphereq", description="Spherical equations over Z_p^n x| Z_p^*.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="decide/solve an instance file")
    p.add_argument("file")
    p.add_argument("--mode", choices=("generic", "brute", "auto"), default="auto")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check a witness against an instance")
    p.add_argument("file")
    p.add_argument("--z", action="append", help="assignment value 'x_1 .. x_n alpha' (repeat per variable)")
    p.add_argument("--x", help="solution vector for ssp/sis/isis, e.g. '1,0,1'")
    p.add_argument("--path", help="edge indices for agwp")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("reduce", parents=[common], help="transform an instance file")
    p.add_argument("reduction", choices=("ssp-to-sph", "isis-to-cise", "sis-to-cise123", "guess-index", "cise-to-agwp"))
    p.add_argument("file")
    p.add_argument("--index", type=int, help="0-based column index for guess-index")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("agwp-solve", parents=[common], help="solve an acyclic graph word problem")
    p.add_argument("file")
    p.set_defaults(handler=cmd_agwp_solve)

    group = _Parser(add_help=False)
    group.add_argument("--p", type=int, required=True)
    group.add_argument("--n", type=int, required=True)

    h = sub.add_parser("hash", help="0/1-spherical and transducer functions")
    hsub = h.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("eval", "jc", "sample", "collide-to-cise", "preimage-to-cise"):
        q = hsub.add_parser(name, parents=[common, group])
        q.set_defaults(handler=cmd_hash)
        if name in ("eval", "collide-to-cise", "preimage-to-cise"):
            q.add_argument("--coef", action="append", help="coefficient vector 'x_1 .. x_n' (repeat)")
        if name in ("eval", "jc"):
            q.add_argument("--bits", required=True)
    hsub.choices["jc"].add_argument("--c0", action="append", help="element chosen for bit 0 (repeat per position)")
    hsub.choices["jc"].add_argument("--c1", action="append", help="element chosen for bit 1 (repeat per position)")
    hsub.choices["sample"].add_argument("--m", type=int, required=True)
    hsub.choices["collide-to-cise"].add_argument("--x", required=True)
    hsub.choices["collide-to-cise"].add_argument("--y", required=True)
    hsub.choices["preimage-to-cise"].add_argument("--target", required=True)

    s = sub.add_parser("stats", help="experiments")
    ssub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("params", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--natural-log", action="store_true")
    q = ssub.add_parser("generic", parents=[common])
    q.add_argument("--s", default="8", help="bound or list/range, e.g. 2-8")
    q.add_argument("--trials", type=int, default=10**4)
    q.add_argument("--plot")
    q = ssub.add_parser("uniformity", parents=[common, group])
    q.add_argument("--m", required=True, help="length or list/range, e.g. 1-8")
    q.add_argument("--plot")
    q = ssub.add_parser("universality", parents=[common, group])
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q = ssub.add_parser("device", parents=[common, group])
    q.add_argument("--coef", action="append")
    q.add_argument("--m", type=int, default=4)
    q.add_argument("--count", type=int, default=10)
    q = ssub.add_parser("random-cise", parents=[common, group])
    q.add_argument("--m", required=True, help="length or list/range with --census")
    q.add_argument("--preset", choices=("12", "123"), default="12")
    q.add_argument("--census", type=int, help="number of draws for a solvability census")
    q.add_argument("--plot")
    for q in ssub.choices.values():
        q.set_defaults(handler=cmd_stats)
    return parser


def run(argv) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, output_text)``."""
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    if args.seed is None:
        args.seed = _default_seed()
    report = Report(" ".join(argv), args.seed)
    started = time.perf_counter()
    try:
        code = args.handler(args, report)
    except UsageError as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    except ParseError as exc:
        return EXIT_USAGE, f"error: ParseError: {exc}\n"
    except (SphereqError, OSError) as exc:
        return EXIT_ERROR, f"error: {type(exc).__name__}: {exc}\n"
    except ValueError as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    except (InternalError, AssertionError) as exc:
        return EXIT_INTERNAL, f"internal error: {exc}\n"
    if args.timing:
        report.add("timing", f"{time.perf_counter() - started:.6f}s")
    return code, report.render(args.format)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code < EXIT_USAGE else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
