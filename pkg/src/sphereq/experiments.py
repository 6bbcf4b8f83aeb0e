"""Samplers and exact or seeded statistical experiments.

Every randomized routine takes an explicit seed; trial ``t`` of an
experiment draws from its own stream derived from ``(seed, t)``, so results
do not depend on how trials are scheduled.  Exact quantities are returned as
:class:`fractions.Fraction`.
"""
from __future__ import annotations

import bisect
import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

from .algebra import GroupElement, GroupParams, conjugate, inverse, is_prime, multiply
from .equations import (
    DEFAULT_BUDGET,
    CiseInstance,
    ConstraintKind,
    SphericalInstance,
    VariableConstraint,
    solve_bruteforce,
)
from .errors import BudgetExceeded, EqualInputs, EvenModulus, LengthMismatch, ModulusTooSmall
from .hashing import Hash01Spec, as_rng, canonical_pair, eval_hash01

WARN_SIGMAS = 3
FAIL_SIGMAS = 4


def trial_rng(seed: int, index: int) -> random.Random:
    """Independent stream for trial ``index`` of an experiment seeded by ``seed``."""
    return random.Random((seed << 64) | index)


@dataclass(frozen=True)
class StatReport:
    name: str
    trials: int
    successes: int
    exact_value: Optional[Fraction] = None
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def point_estimate(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    @property
    def sigma(self) -> float:
        q = float(self.exact_value) if self.exact_value is not None else self.point_estimate
        return math.sqrt(q * (1 - q) / self.trials)

    def band(self, sigmas: float = FAIL_SIGMAS) -> tuple[float, float]:
        centre = float(self.exact_value) if self.exact_value is not None else self.point_estimate
        return centre - sigmas * self.sigma, centre + sigmas * self.sigma

    def verdict(self) -> str:
        """'ok', 'warn' (outside 3 sigma) or 'fail' (outside 4 sigma) against the exact value."""
        if self.exact_value is None:
            return "ok"
        dev = abs(self.point_estimate - float(self.exact_value))
        sig = self.sigma
        if sig == 0:
            return "ok" if dev == 0 else "fail"
        if dev > FAIL_SIGMAS * sig:
            return "fail"
        if dev > WARN_SIGMAS * sig:
            return "warn"
        return "ok"


def frequency_check(counts: Sequence[int], probs: Sequence[float]) -> str:
    """Per-category binomial band check of observed counts: 'ok', 'warn' or 'fail'."""
    total = sum(counts)
    worst = 0.0
    for k, q in zip(counts, probs):
        sig = math.sqrt(total * q * (1 - q))
        if sig:
            worst = max(worst, abs(k - total * q) / sig)
    if worst > FAIL_SIGMAS:
        return "fail"
    return "warn" if worst > WARN_SIGMAS else "ok"


# parameter regime


@dataclass(frozen=True)
class ParamRegime:
    n: int
    m: int
    p: int
    lower: float
    upper: float
    violations: tuple[str, ...]
    log_base: float = 2

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_params(n: int, m: int, p: int, log_base: float = 2) -> ParamRegime:
    """Check ``n log(p) < m < p / (2 n^4)`` with p prime.

    ``log_base=math.e`` switches to the natural logarithm.
    """
    lower = n * math.log(p, log_base) if p > 1 else float("-inf")
    upper = p / (2 * n**4)
    violations = []
    if not is_prime(p):
        violations.append(f"p = {p} is not prime")
    if not lower < m:
        violations.append(f"lower bound fails: m = {m} <= n log p = {lower:.4f}")
    if not m < upper:
        violations.append(f"upper bound fails: m = {m} >= p/(2n^4) = {upper:.4f}")
    if lower >= upper:
        violations.append(f"window ({lower:.4f}, {upper:.4f}) is empty")
    return ParamRegime(n, m, p, lower, upper, tuple(violations), log_base)


# stratified instance set I_s


@dataclass(frozen=True)
class StratifiedIndex:
    """Cells ``(p, n, m)`` with p prime and p, n, m <= s, weighted by ``|G|^m``."""

    s: int
    cells: tuple[tuple[int, int, int], ...]
    weights: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.weights)

    @cached_property
    def cumulative(self) -> list[int]:
        return list(itertools.accumulate(self.weights))

    def probability(self, predicate) -> Fraction:
        hit = sum(w for cell, w in zip(self.cells, self.weights) if predicate(*cell))
        return Fraction(hit, self.size)


def stratified_index(s: int) -> StratifiedIndex:
    if s < 2:
        raise ValueError("stratification bound must be >= 2")
    cells, weights = [], []
    for p in range(2, s + 1):
        if not is_prime(p):
            continue
        for n in range(1, s + 1):
            order = p**n * (p - 1)
            for m in range(1, s + 1):
                cells.append((p, n, m))
                weights.append(order**m)
    return StratifiedIndex(s, tuple(cells), tuple(weights))


def _random_element(params: GroupParams, rng: random.Random) -> GroupElement:
    p = params.p
    vec = tuple(rng.randrange(p) for _ in range(params.n))
    return GroupElement(vec, rng.randrange(1, p), params)


def sample_Is(s: int, rng=None, index: Optional[StratifiedIndex] = None):
    """Uniform draw from I_s: a cell by exact big-integer weight, then uniform coefficients.

    Returns ``(instance, p, n, m)``.
    """
    rng = as_rng(rng)
    index = index or stratified_index(s)
    pick = bisect.bisect_right(index.cumulative, rng.randrange(index.size))
    p, n, m = index.cells[pick]
    params = GroupParams(p, n)
    coefficients = tuple(_random_element(params, rng) for _ in range(m))
    return SphericalInstance(params, coefficients, params.identity), p, n, m


def all_units_trivial_probability(p: int, m: int) -> Fraction:
    """Pr[every coefficient unit is 1] for uniform coefficients in G(p, n)."""
    return Fraction(1, (p - 1) ** m)


def enumerate_all_units_trivial(p: int, m: int) -> Fraction:
    hits = sum(all(u == 1 for u in units) for units in itertools.product(range(1, p), repeat=m))
    return Fraction(hits, (p - 1) ** m)


def generic_stats(s: int, trials: int, seed: int = 0) -> tuple[StatReport, StatReport]:
    """Empirical frequencies of ``m >= s/2`` and of ``some unit != 1`` over I_s.

    Each report carries the exact probability over I_s as ``exact_value``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    index = stratified_index(s)
    big_m = big_beta = 0
    for t in range(trials):
        inst, p, n, m = sample_Is(s, trial_rng(seed, t), index)
        big_m += 2 * m >= s
        big_beta += any(c.unit != 1 for c in inst.coefficients)
    exact_m = index.probability(lambda p, n, m: 2 * m >= s)
    hit = sum(
        w * (1 - all_units_trivial_probability(p, m)) for (p, n, m), w in zip(index.cells, index.weights)
    )
    exact_beta = Fraction(hit) / index.size
    params = {"s": s}
    return (
        StatReport("m>=s/2", trials, big_m, exact_m, seed, params),
        StatReport("exists beta!=1", trials, big_beta, exact_beta, seed, params),
    )


# hash output distributions


def _hash_counts(params: GroupParams, coefficients, pair) -> Counter:
    """Counts of ``H_c(b)`` over all bit strings, by dynamic programming over positions."""
    g0, g1 = pair
    counts = Counter({params.identity: 1})
    for c in coefficients:
        steps = (conjugate(g0, c), conjugate(g1, c))
        nxt = Counter()
        for g, k in counts.items():
            for d in steps:
                nxt[multiply(g, d)] += k
        counts = nxt
    return counts


def hash_distribution(spec: Hash01Spec) -> dict[GroupElement, Fraction]:
    """Exact distribution of ``H_c(b)`` for uniform bits."""
    counts = _hash_counts(spec.params, spec.coefficients, (spec.g0, spec.g1))
    return {g: Fraction(k, 2**spec.m) for g, k in counts.items()}


def _tv_to_uniform(counts: Counter, outcomes: int, mass: int, size: int) -> Fraction:
    # counts live on C(p, n); unseen points contribute their full 1/size
    seen = sum(abs(k * size - mass) for k in counts.values())
    unseen = (size - len(counts)) * mass
    return Fraction(seen + unseen, 2 * mass * size)


def _iterate_coefficient_tuples(params: GroupParams, m: int, visit):
    """Depth-first walk over ``(C(p, n))^m`` sharing prefix hash counts."""
    coeffs = list(params.coefficients())
    pair = canonical_pair(params)
    steps = [(c, conjugate(pair[0], c), conjugate(pair[1], c)) for c in coeffs]

    def walk(depth, counts, chosen):
        if depth == m:
            visit(tuple(chosen), counts)
            return
        for c, d0, d1 in steps:
            nxt = Counter()
            for g, k in counts.items():
                nxt[multiply(g, d0)] += k
                nxt[multiply(g, d1)] += k
            chosen.append(c)
            walk(depth + 1, nxt, chosen)
            chosen.pop()

    walk(0, Counter({params.identity: 1}), [])


def hash_uniformity(params: GroupParams, m: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Average over all ``c`` in C(p, n)^m of the total-variation distance
    between the distribution of ``H_c(b)`` and the uniform distribution on C(p, n)."""
    if params.p == 2:
        raise EvenModulus("the hash family is defined for odd p")
    size = params.p**params.n
    work = size**m * 2**m
    if work > budget:
        raise BudgetExceeded(f"p^(nm) 2^m = {work} exceeds budget {budget}")
    total = Fraction(0)

    def visit(_, counts):
        nonlocal total
        total += _tv_to_uniform(counts, 2**m, 2**m, size)

    _iterate_coefficient_tuples(params, m, visit)
    return total / size**m


def unconditional_hash_distribution(
    params: GroupParams, m: int, budget: int = DEFAULT_BUDGET
) -> dict[GroupElement, Fraction]:
    """Distribution of ``H_c(b)`` with ``c`` and ``b`` drawn jointly and uniformly."""
    size = params.p**params.n
    work = size**m * 2**m
    if work > budget:
        raise BudgetExceeded(f"p^(nm) 2^m = {work} exceeds budget {budget}")
    joint = Counter()

    def visit(_, counts):
        joint.update(counts)

    _iterate_coefficient_tuples(params, m, visit)
    return {g: Fraction(k, work) for g, k in joint.items()}


def universality_check(
    params: GroupParams, m: int, x: Sequence[int], y: Sequence[int], budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Exact ``Pr_c[H_c(x) = H_c(y)]`` over uniform ``c`` in C(p, n)^m.

    C(p, n) is an abelian normal subgroup, so ``H_c(x) H_c(y)^-1`` is the
    product over positions of ``d_j = (g_(x_j)^-1 c_j g_(x_j)) (g_(y_j)^-1 c_j g_(y_j))^-1``
    and its distribution follows by convolution, one position at a time.
    """
    x, y = tuple(x), tuple(y)
    if len(x) != m or len(y) != m:
        raise LengthMismatch(f"inputs must have length {m}")
    if x == y:
        raise EqualInputs("universality is defined for distinct inputs")
    if params.p == 2:
        raise EvenModulus("the hash family is defined for odd p")
    size = params.p**params.n
    if m * size * size > budget:
        raise BudgetExceeded(f"convolution work {m * size * size} exceeds budget {budget}")
    pair = canonical_pair(params)
    coeffs = list(params.coefficients())
    layer_cache = {}
    counts = Counter({params.identity: 1})
    for a, b in zip(x, y):
        if (a, b) not in layer_cache:
            layer_cache[a, b] = Counter(
                multiply(conjugate(pair[a], c), inverse(conjugate(pair[b], c))) for c in coeffs
            )
        layer = layer_cache[a, b]
        nxt = Counter()
        for g, k in counts.items():
            for d, w in layer.items():
                nxt[multiply(g, d)] += k * w
        counts = nxt
    return Fraction(counts[params.identity], size**m)


# samplers


def hidden_function_device(spec: Hash01Spec, rng=None) -> tuple[tuple[int, ...], GroupElement]:
    """One button press: uniform bits and their hash value."""
    rng = as_rng(rng)
    bits = tuple(rng.randrange(2) for _ in range(spec.m))
    return bits, eval_hash01(spec, bits)


def preset_constraint(preset: Union[str, VariableConstraint]) -> VariableConstraint:
    if isinstance(preset, VariableConstraint):
        return preset
    key = str(preset).lower().removeprefix("preset")
    if key in ("12", "{1,2}"):
        return VariableConstraint.preset12()
    if key in ("123", "{1,2,3}"):
        return VariableConstraint.preset123()
    raise ValueError(f"unknown preset {preset!r}")


def random_cise(params: GroupParams, m: int, preset="12", rng=None) -> CiseInstance:
    """Coefficients and right-hand side uniform over C(p, n), preset constraints."""
    con = preset_constraint(preset)
    if params.p == 2:
        raise EvenModulus("random CISE needs an odd modulus")
    if con.kind is ConstraintKind.PRESET123 and params.p < 5:
        raise ModulusTooSmall("preset {1,2,3} needs p >= 5")
    if m < 1:
        raise LengthMismatch("m must be >= 1")
    rng = as_rng(rng)
    p, n = params.p, params.n
    coefficients = tuple(params.coefficient([rng.randrange(p) for _ in range(n)]) for _ in range(m))
    rhs = params.coefficient([rng.randrange(p) for _ in range(n)])
    return CiseInstance(SphericalInstance(params, coefficients, rhs), (con,) * m)


def exact_solvable_fraction(
    params: GroupParams, m: int, preset="12", budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Fraction of all preset-constrained instances over C(p, n) that are solvable."""
    con = preset_constraint(preset)
    size = params.p**params.n
    k = len(con.labels())
    if size ** (m + 1) * k**m > budget:
        raise BudgetExceeded("instance enumeration exceeds budget")
    coeffs = list(params.coefficients())
    solvable = 0
    for cs in itertools.product(coeffs, repeat=m):
        base = SphericalInstance(params, cs, params.identity)
        reach = _preset_reach(base, con)
        solvable += len(reach)
    return Fraction(solvable, size ** (m + 1))


def _preset_reach(base: SphericalInstance, con: VariableConstraint) -> set:
    params = base.params
    values = {params.identity}
    for c in base.coefficients:
        conj = {conjugate(z, c) for z in con.candidates(params)}
        values = {multiply(v, d) for v in values for d in conj}
    return values


def solvability_census(
    params: GroupParams, m: int, preset="12", draws: int = 1000, seed: int = 0, budget: int = DEFAULT_BUDGET
) -> StatReport:
    """Brute-force solvable fraction of seeded random CISE instances."""
    solvable = 0
    for t in range(draws):
        inst = random_cise(params, m, preset, trial_rng(seed, t))
        solvable += solve_bruteforce(inst, budget).solvable
    try:
        exact = exact_solvable_fraction(params, m, preset, budget)
    except BudgetExceeded:
        exact = None
    return StatReport(
        "solvable", draws, solvable, exact, seed, {"p": params.p, "n": params.n, "m": m, "preset": str(preset)}
    )
