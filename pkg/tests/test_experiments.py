import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from sphereq.algebra import GroupParams, fold_conjugates
from sphereq.equations import solve_bruteforce
from sphereq.errors import BudgetExceeded, EqualInputs, ModulusTooSmall
from sphereq.experiments import (
    StatReport,
    all_units_trivial_probability,
    enumerate_all_units_trivial,
    exact_solvable_fraction,
    frequency_check,
    generic_stats,
    hash_distribution,
    hash_uniformity,
    hidden_function_device,
    random_cise,
    sample_Is,
    solvability_census,
    stratified_index,
    trial_rng,
    unconditional_hash_distribution,
    universality_check,
    validate_params,
)
from sphereq.hashing import Hash01Spec

# average TV distance at p=3, n=1 for m = 1..8, checked once by plain enumeration
TV_P3 = [Fraction(2 ** (m + 1), 3 ** (m + 1)) for m in range(1, 9)]


def test_validate_params_examples():
    ok = validate_params(2, 21, 769)
    assert ok.valid
    assert ok.lower == pytest.approx(19.17, abs=0.01)
    assert ok.upper == pytest.approx(24.03, abs=0.01)
    tiny = validate_params(1, 1, 3)
    assert not tiny.valid
    assert any("empty" in v for v in tiny.violations)
    low = validate_params(2, 19, 769)
    assert not low.valid
    assert any(v.startswith("lower") for v in low.violations)
    assert not validate_params(2, 21, 768).valid
    assert validate_params(2, 21, 769, log_base=math.e).lower == pytest.approx(2 * math.log(769))


def test_stratified_index_small():
    index = stratified_index(2)
    assert index.size == 26
    assert list(index.cells) == [(2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2)]
    for (p, n, m), w in zip(stratified_index(5).cells, stratified_index(5).weights):
        assert w == (p**n * (p - 1)) ** m


def test_sample_Is_reproducible():
    a = sample_Is(6, random.Random(3))
    b = sample_Is(6, random.Random(3))
    assert a == b


def test_sample_Is_cell_frequencies():
    index = stratified_index(3)
    counts = Counter()
    draws = 100_000
    for t in range(draws):
        _, p, n, m = sample_Is(3, trial_rng(11, t), index)
        counts[p, n, m] += 1
    probs = [w / index.size for w in index.weights]
    assert frequency_check([counts[c] for c in index.cells], probs) != "fail"


def test_sample_Is_p2_units_trivial():
    for t in range(300):
        inst, p, n, m = sample_Is(2, trial_rng(0, t))
        assert p == 2 and all(c.unit == 1 for c in inst.coefficients)


def test_all_units_trivial():
    assert all_units_trivial_probability(3, 4) == Fraction(1, 16)
    for p, m in [(3, 4), (5, 3), (7, 2)]:
        assert enumerate_all_units_trivial(p, m) == all_units_trivial_probability(p, m)


def test_generic_stats():
    m_rep, beta_rep = generic_stats(8, 10_000, seed=0)
    assert beta_rep.point_estimate >= 0.95
    assert m_rep.point_estimate >= 0.9
    assert m_rep.verdict() != "fail" and beta_rep.verdict() != "fail"


def test_stat_report_bands():
    rep = StatReport("x", 100, 50, Fraction(1, 2))
    assert rep.sigma == pytest.approx(0.05)
    assert rep.verdict() == "ok"
    assert StatReport("x", 100, 66, Fraction(1, 2)).verdict() == "warn"
    assert StatReport("x", 100, 71, Fraction(1, 2)).verdict() == "fail"
    with pytest.raises(ValueError):
        StatReport("x", 1, 2)


def test_hash_uniformity_values():
    g31 = GroupParams(3, 1)
    assert [hash_uniformity(g31, m) for m in range(1, 9)] == TV_P3


def test_hash_uniformity_matches_enumeration():
    params = GroupParams(3, 1)
    size = 3
    for m in (1, 2, 3):
        total = Fraction(0)
        for vecs in itertools.product(range(3), repeat=m):
            dist = hash_distribution(Hash01Spec.from_vectors(params, [(v,) for v in vecs]))
            total += sum(abs(dist.get(g, 0) - Fraction(1, size)) for g in params.coefficients()) / 2
        assert total / size**m == hash_uniformity(params, m)
    with pytest.raises(BudgetExceeded):
        hash_uniformity(GroupParams(5, 2), 6, budget=1000)


@pytest.mark.parametrize("p,n,m", [(3, 1, 3), (5, 1, 2), (3, 2, 2)])
def test_unconditional_distribution_uniform(p, n, m):
    params = GroupParams(p, n)
    dist = unconditional_hash_distribution(params, m)
    assert set(dist) == set(params.coefficients())
    assert set(dist.values()) == {Fraction(1, p**n)}


def test_universality_examples():
    g31 = GroupParams(3, 1)
    assert universality_check(g31, 2, (1, 0), (0, 1)) == Fraction(1, 3)
    assert universality_check(g31, 2, (1, 1), (0, 0)) == Fraction(1, 3)
    with pytest.raises(EqualInputs):
        universality_check(g31, 2, (1, 0), (1, 0))


def test_universality_matches_enumeration():
    params = GroupParams(3, 1)
    m = 3
    for x, y in itertools.combinations(itertools.product((0, 1), repeat=m), 2):
        hits = 0
        for vecs in itertools.product(range(3), repeat=m):
            s = Hash01Spec.from_vectors(params, [(v,) for v in vecs])
            hits += fold_conjugates(s.select(x), s.coefficients) == fold_conjugates(s.select(y), s.coefficients)
        assert universality_check(params, m, x, y) == Fraction(hits, 3**m)


def test_hidden_device_frequencies():
    params = GroupParams(5, 1)
    spec = Hash01Spec.from_vectors(params, [(1,), (2,), (3,), (4,)])
    rng = random.Random(99)
    counts = Counter(hidden_function_device(spec, rng)[0] for _ in range(10_000))
    order = list(itertools.product((0, 1), repeat=4))
    assert frequency_check([counts[b] for b in order], [1 / 16] * 16) != "fail"
    a = [hidden_function_device(spec, random.Random(5)) for _ in range(3)]
    b = [hidden_function_device(spec, random.Random(5)) for _ in range(3)]
    assert a == b


def test_random_cise_distribution():
    params = GroupParams(3, 1)
    assert random_cise(params, 2, "12", 4) == random_cise(params, 2, "12", 4)
    counts = Counter()
    for t in range(10_000):
        inst = random_cise(params, 2, "12", trial_rng(1, t))
        counts[tuple(c.vec[0] for c in inst.base.coefficients) + inst.base.rhs.vec] += 1
    cells = list(itertools.product(range(3), repeat=3))
    assert frequency_check([counts[c] for c in cells], [1 / 27] * 27) != "fail"
    with pytest.raises(ModulusTooSmall):
        random_cise(params, 2, "123", 0)


def test_exact_solvable_fraction():
    params = GroupParams(3, 1)
    assert exact_solvable_fraction(params, 1) == Fraction(5, 9)
    for m in (1, 2, 3):
        solvable = 0
        from sphereq.equations import CiseInstance, SphericalInstance, VariableConstraint

        coeffs = list(params.coefficients())
        for cs in itertools.product(coeffs, repeat=m):
            for rhs in coeffs:
                inst = CiseInstance(SphericalInstance(params, cs, rhs), (VariableConstraint.preset12(),) * m)
                solvable += solve_bruteforce(inst).solvable
        assert exact_solvable_fraction(params, m) == Fraction(solvable, 3 ** (m + 1))


def test_solvability_census_trend():
    params = GroupParams(3, 1)
    low = solvability_census(params, 1, "12", draws=1000, seed=0)
    high = solvability_census(params, 6, "12", draws=1000, seed=0)
    assert high.point_estimate > low.point_estimate
    assert low.exact_value == Fraction(5, 9)
    assert high.exact_value == Fraction(2173, 2187)
    assert low.verdict() != "fail" and high.verdict() != "fail"
