"""Instance transformations among subset sum, SIS/ISIS, constrained spherical
equations and the acyclic graph word problem, with their solution maps.

Matrices are stored column-major: ``columns[i]`` is the i-th column vector.
All indices are 0-based.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Union

from .agwp import AgwpInstance, Edge
from .algebra import GroupElement, GroupParams, Vector, conjugate, inverse, vec_add, vec_scale
from .equations import (
    DEFAULT_BUDGET,
    Assignment,
    CiseInstance,
    SphericalInstance,
    VariableConstraint,
)
from .errors import (
    BudgetExceeded,
    EvenModulus,
    IndexOutOfRange,
    LengthMismatch,
    ModulusTooSmall,
    ParamMismatch,
    WrongVariant,
)


def _check_vector(v: Sequence[int], params: GroupParams) -> Vector:
    v = tuple(int(x) % params.p for x in v)
    if len(v) != params.n:
        raise LengthMismatch(f"vector of length {len(v)} in dimension {params.n}")
    return v


def _column_sum(columns: Sequence[Vector], params: GroupParams) -> Vector:
    acc = params.zero_vector()
    for v in columns:
        acc = vec_add(acc, v, params.p)
    return acc


def _combine(xs: Sequence[int], columns: Sequence[Vector], params: GroupParams) -> Vector:
    acc = params.zero_vector()
    for x, v in zip(xs, columns):
        acc = vec_add(acc, vec_scale(x, v, params.p), params.p)
    return acc


@dataclass(frozen=True)
class SspInstance:
    """Subset sum over Z_p^n: is ``target`` a sum of a subset of ``vectors``?"""

    params: GroupParams
    vectors: tuple[Vector, ...]
    target: Vector

    def __post_init__(self):
        if not self.vectors:
            raise LengthMismatch("subset sum needs m >= 1 vectors")
        object.__setattr__(self, "vectors", tuple(_check_vector(v, self.params) for v in self.vectors))
        object.__setattr__(self, "target", _check_vector(self.target, self.params))

    @property
    def m(self) -> int:
        return len(self.vectors)

    def is_solution(self, eps: Sequence[int]) -> bool:
        if len(eps) != self.m or any(e not in (0, 1) for e in eps):
            return False
        return _combine(eps, self.vectors, self.params) == self.target


class Variant(enum.Enum):
    ZERO_ONE = "01"
    PLUS_MINUS_ONE = "pm1"

    @property
    def alphabet(self) -> tuple[int, ...]:
        return (0, 1) if self is Variant.ZERO_ONE else (-1, 0, 1)


@dataclass(frozen=True)
class SisInstance:
    """Homogeneous short integer solution: nonzero short ``x`` with ``A x = 0 (mod p)``."""

    params: GroupParams
    columns: tuple[Vector, ...]
    variant: Variant = Variant.ZERO_ONE

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(_check_vector(v, self.params) for v in self.columns))

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def m(self) -> int:
        return len(self.columns)

    def image(self, x: Sequence[int]) -> Vector:
        if len(x) != self.m:
            raise LengthMismatch(f"{len(x)} entries for {self.m} columns")
        return _combine(x, self.columns, self.params)

    def is_solution(self, x: Sequence[int]) -> bool:
        if len(x) != self.m or any(v not in self.variant.alphabet for v in x):
            return False
        return any(x) and self.image(x) == self.params.zero_vector()


@dataclass(frozen=True)
class IsisInstance:
    """Inhomogeneous variant: short ``x`` (possibly zero) with ``A x = target``."""

    base: SisInstance
    target: Vector

    def __post_init__(self):
        object.__setattr__(self, "target", _check_vector(self.target, self.base.params))

    @property
    def params(self) -> GroupParams:
        return self.base.params

    @property
    def m(self) -> int:
        return self.base.m

    def is_solution(self, x: Sequence[int]) -> bool:
        if len(x) != self.m or any(v not in self.base.variant.alphabet for v in x):
            return False
        return self.base.image(x) == self.target


class Reduction(NamedTuple):
    """A reduced instance plus maps between source and target solutions."""

    instance: object
    forward: Callable
    backward: Callable


# subset sum -> spherical equation


def ssp_to_spherical(i: SspInstance) -> SphericalInstance:
    """``prod z_j^-1 (v_j, 1) z_j = (v + sum_j v_j, 1)``.

    Both problems are equivalent only for p = 3, where the units are exactly
    ``eps + 1`` for ``eps`` in {0, 1}; otherwise only subset-sum solutions
    carry over (see :func:`ssp_reduction_is_exact`).
    """
    params = i.params
    shifted = vec_add(i.target, _column_sum(i.vectors, params), params.p)
    coefficients = tuple(params.coefficient(v) for v in i.vectors)
    return SphericalInstance(params, coefficients, params.coefficient(shifted))


def ssp_reduction_is_exact(i: SspInstance) -> bool:
    return i.params.p == 3


def ssp_solution_to_assignment(i: SspInstance, eps: Sequence[int]) -> Assignment:
    params = i.params
    return tuple(params.scalar(params.unit_inverse(e + 1)) for e in eps)


def ssp_assignment_to_solution(i: SspInstance, zs: Sequence[GroupElement]) -> Optional[tuple[int, ...]]:
    """Read ``eps_j = a_j^-1 - 1``; ``None`` when some value falls outside {0, 1}."""
    params = i.params
    eps = tuple(params.unit_inverse(z.unit) - 1 for z in zs)
    if any(e not in (0, 1) for e in eps):
        return None
    return eps


def ssp_bruteforce(i: SspInstance, budget: int = DEFAULT_BUDGET) -> Optional[tuple[int, ...]]:
    """First ``eps`` in lexicographic order with ``sum eps_j v_j = target``."""
    if 2**i.m > budget:
        raise BudgetExceeded(f"2^{i.m} subsets exceed budget {budget}")
    for eps in itertools.product((0, 1), repeat=i.m):
        if _combine(eps, i.vectors, i.params) == i.target:
            return eps
    return None


# ISIS / SIS -> CISE


def _preset_cise(params: GroupParams, columns, rhs_vec, preset: VariableConstraint) -> CiseInstance:
    base = SphericalInstance(
        params, tuple(params.coefficient(v) for v in columns), params.coefficient(rhs_vec)
    )
    return CiseInstance(base, (preset,) * len(columns))


def _labels_to_z(params: GroupParams, labels: Sequence[int]) -> Assignment:
    return tuple(params.scalar(params.unit_inverse(k)) for k in labels)


def _z_to_labels(params: GroupParams, zs: Sequence[GroupElement], allowed) -> tuple[int, ...]:
    labels = []
    for z in zs:
        if any(z.vec):
            raise ValueError(f"{z} is not of the form (0, k^-1)")
        k = params.unit_inverse(z.unit)
        if k not in allowed:
            raise ValueError(f"{z} has label {k} outside {allowed}")
        labels.append(k)
    return tuple(labels)


def isis_to_cise(i: IsisInstance) -> Reduction:
    """ISIS over {0, 1} to CISE with the {1, 2} preset.

    ``A x = y`` iff ``sum (x_j + 1) v_j = y + sum v_j``; conjugating ``(v, 1)``
    by ``(0, k^-1)`` scales ``v`` by ``k``, so ``z_j = (0, (x_j + 1)^-1)``.
    """
    if i.base.variant is not Variant.ZERO_ONE:
        raise WrongVariant("isis_to_cise needs the {0,1} variant")
    params = i.params
    if params.p == 2:
        raise EvenModulus("isis_to_cise needs an odd modulus")
    rhs = vec_add(i.target, _column_sum(i.base.columns, params), params.p)
    cise = _preset_cise(params, i.base.columns, rhs, VariableConstraint.preset12())

    def forward(x):
        return _labels_to_z(params, [v + 1 for v in x])

    def backward(zs):
        return tuple(k - 1 for k in _z_to_labels(params, zs, (1, 2)))

    return Reduction(cise, forward, backward)


def sis_to_cise123(i: SisInstance) -> Reduction:
    """SIS over {-1, 0, 1} to CISE with the {1, 2, 3} preset.

    ``A x = 0`` iff ``sum (x_j + 2) v_j = 2 sum v_j``, so the right-hand side
    is ``(2 sum v_j, 1)``.  The zero vector maps to the all-``(0, 2^-1)``
    assignment, which is a valid CISE solution; callers test ``any(x)``
    on the backward image to exclude it.
    """
    if i.variant is not Variant.PLUS_MINUS_ONE:
        raise WrongVariant("sis_to_cise123 needs the {-1,0,1} variant")
    params = i.params
    if params.p < 5:
        raise ModulusTooSmall("sis_to_cise123 needs p >= 5")
    rhs = vec_scale(2, _column_sum(i.columns, params), params.p)
    cise = _preset_cise(params, i.columns, rhs, VariableConstraint.preset123())

    def forward(x):
        return _labels_to_z(params, [v + 2 for v in x])

    def backward(zs):
        return tuple(k - 2 for k in _z_to_labels(params, zs, (1, 2, 3)))

    return Reduction(cise, forward, backward)


def isis_from_sis_guess(i: SisInstance, guessed_index: int) -> IsisInstance:
    """Assume ``x[guessed_index] = 1``: drop that column, target ``-v``."""
    if i.variant is not Variant.ZERO_ONE:
        raise WrongVariant("the guessing reduction needs the {0,1} variant")
    if not 0 <= guessed_index < i.m:
        raise IndexOutOfRange(f"index {guessed_index} outside 0..{i.m - 1}")
    p = i.p
    rest = i.columns[:guessed_index] + i.columns[guessed_index + 1 :]
    target = vec_scale(-1, i.columns[guessed_index], p)
    return IsisInstance(SisInstance(i.params, rest, i.variant), target)


def reinsert_guess(x: Sequence[int], guessed_index: int) -> tuple[int, ...]:
    x = tuple(x)
    return x[:guessed_index] + (1,) + x[guessed_index:]


def sis_bruteforce(
    i: Union[SisInstance, IsisInstance], budget: int = DEFAULT_BUDGET
) -> Optional[tuple[int, ...]]:
    """Shortest solution (fewest nonzero entries), ties broken lexicographically.

    Homogeneous instances exclude the zero vector.
    """
    base = i.base if isinstance(i, IsisInstance) else i
    alphabet = base.variant.alphabet
    if len(alphabet) ** base.m > budget:
        raise BudgetExceeded(f"{len(alphabet)}^{base.m} candidates exceed budget {budget}")
    best = None
    for x in itertools.product(alphabet, repeat=base.m):
        if i.is_solution(x):
            key = (sum(v != 0 for v in x), x)
            if best is None or key < best:
                best = key
    return None if best is None else best[1]


# CISE -> AGWP


def cise_to_agwp(i: CiseInstance, budget: int = DEFAULT_BUDGET) -> AgwpInstance:
    """Layered digraph on vertices 0..m+1.

    Edge ``j-1 -> j`` carries ``z^-1 c_j z`` for each ``z`` allowed for
    variable j; the final edge ``m -> m+1`` carries ``rhs^-1``.  Edges are
    listed layer by layer in candidate order.
    """
    params = i.params
    width = sum(con.size(params) for con in i.constraints)
    if width > budget:
        raise BudgetExceeded(f"{width} edges exceed budget {budget}")
    edges = []
    for j, (con, c) in enumerate(zip(i.constraints, i.base.coefficients), start=1):
        for z in con.candidates(params):
            edges.append(Edge(j - 1, j, conjugate(z, c), f"z{j}={z}"))
    edges.append(Edge(i.m, i.m + 1, inverse(i.base.rhs), "rhs^-1"))
    return AgwpInstance(params, i.m + 2, tuple(edges), 0, i.m + 1)


def agwp_path_to_assignment(i: CiseInstance, path: Sequence[int]) -> Assignment:
    """Map a witness path (edge indices into :func:`cise_to_agwp` output) back to z."""
    params = i.params
    pools = [con.candidates(params) for con in i.constraints]
    offsets = list(itertools.accumulate((len(pool) for pool in pools), initial=0))
    if len(path) != i.m + 1:
        raise LengthMismatch(f"path of {len(path)} edges, expected {i.m + 1}")
    zs = []
    for j, e in enumerate(path[:-1]):
        k = e - offsets[j]
        if not 0 <= k < len(pools[j]):
            raise ParamMismatch(f"edge {e} does not belong to layer {j + 1}")
        zs.append(pools[j][k])
    return tuple(zs)


def assignment_to_agwp_path(i: CiseInstance, zs: Sequence[GroupElement]) -> tuple[int, ...]:
    params = i.params
    pools = [con.candidates(params) for con in i.constraints]
    offsets = list(itertools.accumulate((len(pool) for pool in pools), initial=0))
    path = [offsets[j] + pools[j].index(z) for j, z in enumerate(zs)]
    path.append(offsets[-1])
    return tuple(path)
