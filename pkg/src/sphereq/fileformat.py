"""Line-oriented text format for instances.

Every file starts with ``sphereq v1 <kind>``; ``#`` starts a comment and
blank lines are ignored.  Records are ``keyword values...`` in a fixed
order per kind; see ``docs/format.md`` for the full grammar.
"""
from __future__ import annotations

from typing import Union

from .agwp import AgwpInstance, Edge, validate_dag
from .algebra import GroupParams, format_element, format_vector, parse_element, parse_vector
from .equations import CiseInstance, ConstraintKind, SphericalInstance, VariableConstraint
from .errors import ParseError, SphereqError, InvariantViolation
from .reductions import IsisInstance, SisInstance, SspInstance, Variant

HEADER = "sphereq v1"
KINDS = ("spherical", "cise", "ssp", "sis", "isis", "agwp")

Instance = Union[SphericalInstance, CiseInstance, SspInstance, SisInstance, IsisInstance, AgwpInstance]


def kind_of(instance) -> str:
    kinds = {
        SphericalInstance: "spherical",
        CiseInstance: "cise",
        SspInstance: "ssp",
        SisInstance: "sis",
        IsisInstance: "isis",
        AgwpInstance: "agwp",
    }
    try:
        return kinds[type(instance)]
    except KeyError:
        raise TypeError(f"no file format for {type(instance).__name__}") from None


# serialization


def _params_lines(params: GroupParams) -> list[str]:
    return [f"p {params.p}", f"n {params.n}"]


def _spherical_lines(inst: SphericalInstance) -> list[str]:
    lines = _params_lines(inst.params) + [f"m {inst.m}"]
    lines += [f"coef {format_element(c)}" for c in inst.coefficients]
    lines.append(f"rhs {format_element(inst.rhs)}")
    return lines


def _constraint_lines(con: VariableConstraint) -> list[str]:
    if con.kind is ConstraintKind.SET:
        return [f"constraint set {len(con.members)}"] + [f"member {format_element(z)}" for z in con.members]
    return [f"constraint {con.kind.value}"]


def _sis_lines(inst: SisInstance) -> list[str]:
    lines = _params_lines(inst.params) + [f"m {inst.m}", f"variant {inst.variant.value}", "matrix"]
    if inst.m:
        for row in range(inst.params.n):
            lines.append(" ".join(str(col[row]) for col in inst.columns))
    return lines


def serialize(instance: Instance) -> str:
    kind = kind_of(instance)
    if kind == "spherical":
        body = _spherical_lines(instance)
    elif kind == "cise":
        body = _spherical_lines(instance.base)
        for con in instance.constraints:
            body += _constraint_lines(con)
    elif kind == "ssp":
        body = _params_lines(instance.params) + [f"m {instance.m}"]
        body += [f"vector {format_vector(v)}" for v in instance.vectors]
        body.append(f"target {format_vector(instance.target)}")
    elif kind == "sis":
        body = _sis_lines(instance)
    elif kind == "isis":
        body = _sis_lines(instance.base) + [f"target {format_vector(instance.target)}"]
    else:
        body = _params_lines(instance.params) + [
            f"vertices {instance.vertex_count}",
            f"alpha {instance.alpha}",
            f"omega {instance.omega}",
        ]
        body += [f"edge {e.src} {e.dst} {format_element(e.label)}" for e in instance.edges]
    return "\n".join([f"{HEADER} {kind}", *body]) + "\n"


# parsing


class _Cursor:
    def __init__(self, text: str):
        self.records = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.records.append((lineno, line))
        self.pos = 0

    def raw(self) -> tuple[int, str]:
        if self.pos >= len(self.records):
            last = self.records[-1][0] if self.records else 1
            raise ParseError("unexpected end of file", last)
        rec = self.records[self.pos]
        self.pos += 1
        return rec

    def expect(self, keyword: str) -> tuple[int, str]:
        lineno, line = self.raw()
        word, _, rest = line.partition(" ")
        if word != keyword:
            raise ParseError(f"expected {keyword!r}, found {word!r}", lineno)
        return lineno, rest.strip()

    def expect_int(self, keyword: str) -> tuple[int, int]:
        lineno, rest = self.expect(keyword)
        try:
            return lineno, int(rest)
        except ValueError:
            raise ParseError(f"{keyword} needs one integer, got {rest!r}", lineno) from None

    def peek_word(self):
        if self.pos >= len(self.records):
            return None
        return self.records[self.pos][1].partition(" ")[0]

    def done(self):
        if self.pos < len(self.records):
            lineno, line = self.records[self.pos]
            raise ParseError(f"unexpected trailing record {line!r}", lineno)


def _invariant(exc: SphereqError, lineno=None) -> InvariantViolation:
    where = f" (line {lineno})" if lineno else ""
    return InvariantViolation(f"{type(exc).__name__}: {exc}{where}")


def _read_params(cur: _Cursor) -> GroupParams:
    lp, p = cur.expect_int("p")
    _, n = cur.expect_int("n")
    try:
        return GroupParams(p, n)
    except SphereqError as exc:
        raise _invariant(exc, lp) from exc


def _located(cur, keyword, parser, params):
    lineno, rest = cur.expect(keyword)
    try:
        return parser(rest, params)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def _read_spherical(cur: _Cursor, params: GroupParams) -> SphericalInstance:
    lm, m = cur.expect_int("m")
    coefficients = [_located(cur, "coef", parse_element, params) for _ in range(m)]
    rhs = _located(cur, "rhs", parse_element, params)
    try:
        return SphericalInstance(params, tuple(coefficients), rhs)
    except SphereqError as exc:
        raise _invariant(exc, lm) from exc


def _read_constraint(cur: _Cursor, params: GroupParams) -> VariableConstraint:
    lineno, rest = cur.expect("constraint")
    word, _, count = rest.partition(" ")
    simple = {
        "free": VariableConstraint.free,
        "preset12": VariableConstraint.preset12,
        "preset123": VariableConstraint.preset123,
    }
    if word in simple:
        if count:
            raise ParseError(f"constraint {word} takes no arguments", lineno)
        return simple[word]()
    if word != "set":
        raise ParseError(f"unknown constraint {word!r}", lineno)
    try:
        k = int(count)
    except ValueError:
        raise ParseError("constraint set needs a member count", lineno) from None
    members = [_located(cur, "member", parse_element, params) for _ in range(k)]
    try:
        return VariableConstraint.explicit(members)
    except SphereqError as exc:
        raise _invariant(exc, lineno) from exc


def _read_sis(cur: _Cursor, params: GroupParams) -> SisInstance:
    _, m = cur.expect_int("m")
    lineno, word = cur.expect("variant")
    try:
        variant = Variant(word)
    except ValueError:
        raise ParseError(f"variant must be 01 or pm1, got {word!r}", lineno) from None
    cur.expect("matrix")
    rows = []
    if m:
        for _ in range(params.n):
            lineno, line = cur.raw()
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError:
                raise ParseError(f"bad matrix row {line!r}", lineno) from None
            if len(row) != m or any(not 0 <= x < params.p for x in row):
                raise ParseError(f"matrix row needs {m} entries in [0, {params.p})", lineno)
            rows.append(row)
    columns = tuple(tuple(row[j] for row in rows) for j in range(m))
    return SisInstance(params, columns, variant)


def parse_instance(text: str) -> Instance:
    cur = _Cursor(text)
    lineno, line = cur.raw()
    if not line.startswith(HEADER + " "):
        raise ParseError(f"expected header '{HEADER} <kind>'", lineno)
    kind = line[len(HEADER) :].strip()
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", lineno)
    params = _read_params(cur)
    if kind == "spherical":
        inst = _read_spherical(cur, params)
    elif kind == "cise":
        base = _read_spherical(cur, params)
        constraints = [_read_constraint(cur, params) for _ in range(base.m)]
        try:
            inst = CiseInstance(base, tuple(constraints))
        except SphereqError as exc:
            raise _invariant(exc) from exc
    elif kind == "ssp":
        _, m = cur.expect_int("m")
        vectors = [_located(cur, "vector", parse_vector, params) for _ in range(m)]
        target = _located(cur, "target", parse_vector, params)
        try:
            inst = SspInstance(params, tuple(vectors), target)
        except SphereqError as exc:
            raise _invariant(exc) from exc
    elif kind == "sis":
        inst = _read_sis(cur, params)
    elif kind == "isis":
        base = _read_sis(cur, params)
        inst = IsisInstance(base, _located(cur, "target", parse_vector, params))
    else:
        _, k = cur.expect_int("vertices")
        _, alpha = cur.expect_int("alpha")
        _, omega = cur.expect_int("omega")
        edges = []
        while cur.peek_word() == "edge":
            lineno, rest = cur.expect("edge")
            toks = rest.split()
            if len(toks) != params.n + 3:
                raise ParseError(f"edge needs u v and {params.n + 1} label numbers", lineno)
            try:
                u, v = int(toks[0]), int(toks[1])
            except ValueError:
                raise ParseError("edge endpoints must be integers", lineno) from None
            try:
                label = parse_element(" ".join(toks[2:]), params)
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
            edges.append(Edge(u, v, label))
        inst = AgwpInstance(params, k, tuple(edges), alpha, omega)
        try:
            validate_dag(inst)
        except SphereqError as exc:
            raise _invariant(exc) from exc
    cur.done()
    return inst


def canonical(text: str) -> str:
    return serialize(parse_instance(text))
