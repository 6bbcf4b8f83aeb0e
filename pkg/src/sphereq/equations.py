"""Spherical equations ``prod z_i^-1 c_i z_i = c`` over G(p, n): checking and solving.

Each variable may be free or constrained to a finite candidate set.  The
solvers return a :class:`SolveReport`; a ``SOLVABLE`` report always carries a
witness that has passed :func:`verify`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .algebra import (
    GroupElement,
    GroupParams,
    Vector,
    conjugate_naive,
    fold_conjugates,
    inverse,
    multiply,
)
from .errors import BudgetExceeded, ConstraintError, LengthMismatch, ModulusTooSmall, ParamMismatch

DEFAULT_BUDGET = 10**7

Assignment = tuple[GroupElement, ...]


@dataclass(frozen=True)
class SphericalInstance:
    params: GroupParams
    coefficients: tuple[GroupElement, ...]
    rhs: GroupElement

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise LengthMismatch("a spherical equation needs m >= 1 coefficients")
        for c in (*self.coefficients, self.rhs):
            if c.params != self.params:
                raise ParamMismatch("coefficient outside the instance group")

    @property
    def m(self) -> int:
        return len(self.coefficients)

    @property
    def homogeneous(self) -> bool:
        return self.rhs.is_identity

    @classmethod
    def homogeneous_from(cls, coefficients: Sequence[GroupElement]) -> SphericalInstance:
        params = coefficients[0].params
        return cls(params, tuple(coefficients), params.identity)


class ConstraintKind(enum.Enum):
    FREE = "free"
    SET = "set"
    PRESET12 = "preset12"
    PRESET123 = "preset123"


@dataclass(frozen=True)
class VariableConstraint:
    """Membership constraint ``z in Z`` for one variable.

    The presets restrict ``z`` to ``(0, k^-1)`` for ``k`` in {1, 2} or
    {1, 2, 3}; their candidate order follows ``k``.
    """

    kind: ConstraintKind
    members: tuple[GroupElement, ...] = ()

    def __post_init__(self):
        if self.kind is ConstraintKind.SET:
            if not self.members:
                raise ConstraintError("explicit constraint set is empty")
            object.__setattr__(self, "members", tuple(dict.fromkeys(self.members)))
        elif self.members:
            raise ConstraintError(f"{self.kind.value} constraint takes no members")

    @classmethod
    def free(cls) -> VariableConstraint:
        return cls(ConstraintKind.FREE)

    @classmethod
    def explicit(cls, members: Sequence[GroupElement]) -> VariableConstraint:
        return cls(ConstraintKind.SET, tuple(members))

    @classmethod
    def preset12(cls) -> VariableConstraint:
        return cls(ConstraintKind.PRESET12)

    @classmethod
    def preset123(cls) -> VariableConstraint:
        return cls(ConstraintKind.PRESET123)

    @property
    def is_preset(self) -> bool:
        return self.kind in (ConstraintKind.PRESET12, ConstraintKind.PRESET123)

    def labels(self) -> tuple[int, ...]:
        """The ``k`` values of a preset constraint."""
        if self.kind is ConstraintKind.PRESET12:
            return (1, 2)
        if self.kind is ConstraintKind.PRESET123:
            return (1, 2, 3)
        raise ConstraintError(f"{self.kind.value} constraint has no preset labels")

    def check(self, params: GroupParams):
        if self.kind is ConstraintKind.PRESET12 and params.p < 3:
            raise ModulusTooSmall("preset {1,2} needs p >= 3")
        if self.kind is ConstraintKind.PRESET123 and params.p < 5:
            raise ModulusTooSmall("preset {1,2,3} needs p >= 5 so that 3 is a unit")
        if any(z.params != params for z in self.members):
            raise ParamMismatch("constraint member outside the instance group")

    def size(self, params: GroupParams) -> int:
        if self.kind is ConstraintKind.FREE:
            return params.order
        if self.kind is ConstraintKind.SET:
            return len(self.members)
        return len(self.labels())

    def candidates(self, params: GroupParams) -> tuple[GroupElement, ...]:
        if self.kind is ConstraintKind.FREE:
            return tuple(params.elements())
        if self.kind is ConstraintKind.SET:
            return self.members
        return tuple(params.scalar(params.unit_inverse(k)) for k in self.labels())

    def contains(self, z: GroupElement) -> bool:
        if self.kind is ConstraintKind.FREE:
            return True
        return z in self.candidates(z.params)


@dataclass(frozen=True)
class CiseInstance:
    base: SphericalInstance
    constraints: tuple[VariableConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(self.constraints) != self.base.m:
            raise LengthMismatch(f"{len(self.constraints)} constraints for {self.base.m} variables")
        for con in self.constraints:
            con.check(self.base.params)

    @classmethod
    def unconstrained(cls, base: SphericalInstance) -> CiseInstance:
        return cls(base, (VariableConstraint.free(),) * base.m)

    @property
    def params(self) -> GroupParams:
        return self.base.params

    @property
    def m(self) -> int:
        return self.base.m

    def search_space(self) -> int:
        size = 1
        for con in self.constraints:
            size *= con.size(self.params)
        return size


AnyInstance = Union[SphericalInstance, CiseInstance]


class Status(enum.Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolveReport:
    status: Status
    witness: Optional[tuple] = None
    method: str = ""
    detail: str = ""

    def __post_init__(self):
        if self.status is Status.SOLVABLE and self.witness is None:
            raise ValueError("a solvable report needs a witness")

    @property
    def solvable(self) -> bool:
        return self.status is Status.SOLVABLE


def _split(instance: AnyInstance) -> tuple[SphericalInstance, Optional[tuple[VariableConstraint, ...]]]:
    if isinstance(instance, CiseInstance):
        return instance.base, instance.constraints
    return instance, None


def lemma_conditions(instance: SphericalInstance, assignment: Sequence[GroupElement]) -> tuple[bool, bool]:
    """Evaluate the two solvability conditions for an assignment.

    S1: the product of coefficient units equals the unit of the rhs.
    S2: ``sum_i B_i a_i^-1 ((b_i - 1) z_i + c_i)`` equals the rhs vector, where
    ``B_i`` is the product of the units of the preceding coefficients.
    """
    params = instance.params
    p = params.p
    if len(assignment) != instance.m:
        raise LengthMismatch(f"{len(assignment)} values for {instance.m} variables")
    prefix = 1
    acc = [0] * params.n
    for z, c in zip(assignment, instance.coefficients):
        if z.params != params:
            raise ParamMismatch("assignment value outside the instance group")
        scale = prefix * pow(z.unit, -1, p) % p
        for k in range(params.n):
            acc[k] = (acc[k] + scale * ((c.unit - 1) * z.vec[k] + c.vec[k])) % p
        prefix = prefix * c.unit % p
    return prefix == instance.rhs.unit, tuple(acc) == instance.rhs.vec


def verify(instance: AnyInstance, assignment: Sequence[GroupElement]) -> bool:
    base, constraints = _split(instance)
    assignment = tuple(assignment)
    s1, s2 = lemma_conditions(base, assignment)
    direct = fold_conjugates(assignment, base.coefficients) == base.rhs
    assert (s1 and s2) == direct, "S1/S2 evaluation disagrees with the direct product"
    if not direct:
        return False
    if constraints is not None:
        return all(con.contains(z) for con, z in zip(constraints, assignment))
    return True


@dataclass(frozen=True)
class Homogenization:
    """Solution maps between ``E = c`` and ``E * u^-1 c^-1 u = 1``."""

    original: SphericalInstance
    homogeneous: SphericalInstance

    def extract(self, witness: Sequence[GroupElement]) -> Assignment:
        """Homogeneous solution ``(z_1..z_m, u)`` to ``(z_1 u^-1, ..., z_m u^-1)``."""
        *zs, u = witness
        u_inv = inverse(u)
        return tuple(multiply(z, u_inv) for z in zs)

    def embed(self, witness: Sequence[GroupElement]) -> Assignment:
        return (*witness, self.original.params.identity)


def homogenize(instance: SphericalInstance) -> tuple[SphericalInstance, Homogenization]:
    hom = SphericalInstance(
        instance.params,
        (*instance.coefficients, inverse(instance.rhs)),
        instance.params.identity,
    )
    return hom, Homogenization(instance, hom)


def _generic_homogeneous(instance: SphericalInstance) -> SolveReport:
    params = instance.params
    p = params.p
    prefixes = []
    prefix = 1
    for c in instance.coefficients:
        prefixes.append(prefix)
        prefix = prefix * c.unit % p
    if prefix != 1:
        return SolveReport(Status.UNSOLVABLE, method="generic", detail="S1 fails")
    pivot = next((i for i, c in enumerate(instance.coefficients) if c.unit != 1), None)
    if pivot is None:
        return SolveReport(Status.UNKNOWN, method="generic", detail="all coefficient units are 1")
    total = [0] * params.n
    for b, c in zip(prefixes, instance.coefficients):
        for k in range(params.n):
            total[k] += b * c.vec[k]
    c_piv = instance.coefficients[pivot]
    # minus sign: with the opposite sign S2 leaves 2 * sum instead of 0
    scale = -pow(prefixes[pivot] * (c_piv.unit - 1), -1, p)
    z_piv = params.element((scale * t for t in total), 1)
    witness = tuple(z_piv if i == pivot else params.identity for i in range(instance.m))
    return SolveReport(Status.SOLVABLE, witness, "generic", f"pivot {pivot}")


def solve_generic(instance: SphericalInstance) -> SolveReport:
    """Closed-form solver for equations with some coefficient unit different from 1.

    An inhomogeneous right-hand side is folded in with :func:`homogenize`.
    Returns ``UNKNOWN`` when every coefficient lies in C(p, n).
    """
    if instance.homogeneous:
        report = _generic_homogeneous(instance)
        if report.solvable:
            assert verify(instance, report.witness)
        return report
    hom, maps = homogenize(instance)
    report = _generic_homogeneous(hom)
    if not report.solvable:
        return report
    witness = maps.extract(report.witness)
    assert verify(instance, witness)
    return SolveReport(Status.SOLVABLE, witness, report.method, report.detail + ", homogenized")


def solve_bruteforce(instance: AnyInstance, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Exhaustive search returning the lexicographically first witness.

    Candidates are ordered per variable (free variables enumerate the group
    as in :meth:`GroupParams.elements`), variables left to right.  Sets of
    reachable suffix products prune the search without changing which
    witness comes first.  Conjugates come from literal triple products.
    """
    if isinstance(instance, SphericalInstance):
        instance = CiseInstance.unconstrained(instance)
    space = instance.search_space()
    if space > budget:
        return SolveReport(
            Status.UNKNOWN, method="brute", detail=f"search space {space} exceeds budget {budget}"
        )
    base = instance.base
    params = base.params
    layers = []
    for con, c in zip(instance.constraints, base.coefficients):
        layers.append([(z, conjugate_naive(z, c)) for z in con.candidates(params)])

    suffix = [None] * (base.m + 1)
    suffix[base.m] = {params.identity}
    for j in range(base.m - 1, -1, -1):
        values = {v for _, v in layers[j]}
        suffix[j] = {multiply(v, s) for v in values for s in suffix[j + 1]}

    if base.rhs not in suffix[0]:
        return SolveReport(Status.UNSOLVABLE, method="brute")
    prefix = params.identity
    witness = []
    for j, layer in enumerate(layers):
        for z, v in layer:
            step = multiply(prefix, v)
            if multiply(inverse(step), base.rhs) in suffix[j + 1]:
                witness.append(z)
                prefix = step
                break
    witness = tuple(witness)
    assert verify(instance, witness)
    return SolveReport(Status.SOLVABLE, witness, "brute")


def solve_nonzero_combination(
    params: GroupParams, vectors: Sequence[Vector], budget: int = DEFAULT_BUDGET
) -> Optional[tuple[int, ...]]:
    """Find units ``a_1..a_m`` with ``sum a_i^-1 y_i = 0`` (mod p), or ``None``.

    Exhaustive over ``(Z_p^*)^m`` in lexicographic order; the first solution
    in that order is returned.
    """
    p = params.p
    m = len(vectors)
    if m < 1:
        raise LengthMismatch("need at least one vector")
    if (p - 1) ** m > budget:
        raise BudgetExceeded(f"(p-1)^m = {(p - 1) ** m} exceeds budget {budget}")
    zero = params.zero_vector()
    units = range(1, p)
    scaled = [[(a, tuple(pow(a, -1, p) * x % p for x in y)) for a in units] for y in vectors]
    suffix = [None] * (m + 1)
    suffix[m] = {zero}
    for j in range(m - 1, -1, -1):
        suffix[j] = {
            tuple((x + y) % p for x, y in zip(s, t)) for _, s in scaled[j] for t in suffix[j + 1]
        }
    if zero not in suffix[0]:
        return None
    acc = zero
    chosen = []
    for j in range(m):
        for a, s in scaled[j]:
            nxt = tuple((x + y) % p for x, y in zip(acc, s))
            if tuple(-x % p for x in nxt) in suffix[j + 1]:
                chosen.append(a)
                acc = nxt
                break
    return tuple(chosen)


def solve_coefficient_set(instance: SphericalInstance, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Decide an equation whose coefficients and rhs all lie in C(p, n).

    Conjugating ``(c, 1)`` by ``(x, a)`` gives ``(a^-1 c, 1)``, so solvability
    is the nonzero-combination problem on ``c_1..c_m, -c``.
    """
    if not all(c.in_coefficient_set for c in (*instance.coefficients, instance.rhs)):
        raise ValueError("all coefficients and the rhs must have unit part 1")
    hom, maps = homogenize(instance)
    try:
        units = solve_nonzero_combination(hom.params, [c.vec for c in hom.coefficients], budget)
    except BudgetExceeded as exc:
        return SolveReport(Status.UNKNOWN, method="nonzero-combination", detail=str(exc))
    if units is None:
        return SolveReport(Status.UNSOLVABLE, method="nonzero-combination")
    witness = maps.extract([hom.params.scalar(a) for a in units])
    assert verify(instance, witness)
    return SolveReport(Status.SOLVABLE, witness, "nonzero-combination")


def solve_auto(instance: AnyInstance, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """S1 check, closed form, nonzero combination, then brute force."""
    base, constraints = _split(instance)
    if constraints is not None and any(c.kind is not ConstraintKind.FREE for c in constraints):
        return solve_bruteforce(instance, budget)
    report = solve_generic(base)
    if report.status is not Status.UNKNOWN:
        return report
    if all(c.in_coefficient_set for c in (*base.coefficients, base.rhs)):
        report = solve_coefficient_set(base, budget)
        if report.status is not Status.UNKNOWN:
            return report
    return solve_bruteforce(base, budget)


def enumerate_solutions(instance: AnyInstance, budget: int = DEFAULT_BUDGET) -> list[Assignment]:
    """Every verifying assignment, in candidate order (small instances only)."""
    if isinstance(instance, SphericalInstance):
        instance = CiseInstance.unconstrained(instance)
    space = instance.search_space()
    if space > budget:
        raise BudgetExceeded(f"search space {space} exceeds budget {budget}")
    params = instance.params
    pools = [con.candidates(params) for con in instance.constraints]
    return [a for a in itertools.product(*pools) if verify(instance, a)]
