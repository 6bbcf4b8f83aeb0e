import itertools

import pytest

from sphereq.algebra import GroupParams
from sphereq.equations import CiseInstance, SphericalInstance, Status, VariableConstraint, enumerate_solutions, solve_bruteforce, verify
from sphereq.errors import EvenModulus, IndexOutOfRange, ModulusTooSmall, WrongVariant
from sphereq.reductions import (
    IsisInstance,
    SisInstance,
    SspInstance,
    Variant,
    agwp_path_to_assignment,
    assignment_to_agwp_path,
    cise_to_agwp,
    isis_from_sis_guess,
    isis_to_cise,
    reinsert_guess,
    sis_bruteforce,
    sis_to_cise123,
    ssp_assignment_to_solution,
    ssp_bruteforce,
    ssp_reduction_is_exact,
    ssp_solution_to_assignment,
    ssp_to_spherical,
)
from sphereq.agwp import agwp_solve, validate_dag

from conftest import el


def vectors(params, m):
    return itertools.product(itertools.product(range(params.p), repeat=params.n), repeat=m)


def sis(params, cols, variant=Variant.ZERO_ONE):
    return SisInstance(params, tuple(tuple(c) for c in cols), variant)


def test_ssp_examples(g31):
    i = SspInstance(g31, ((1,), (2,)), (0,))
    sph = ssp_to_spherical(i)
    assert sph.rhs == el(g31, 0, 1)
    assert sph.coefficients == (el(g31, 1, 1), el(g31, 2, 1))
    # the empty subset also hits target 0 and comes first lexicographically
    assert ssp_bruteforce(i) == (0, 0)
    assert i.is_solution((1, 1))
    assert solve_bruteforce(sph).solvable
    assert verify(sph, ssp_solution_to_assignment(i, (1, 1)))

    j = SspInstance(g31, ((1,),), (2,))
    assert ssp_to_spherical(j).rhs == el(g31, 0, 1)
    assert ssp_bruteforce(j) is None
    assert solve_bruteforce(ssp_to_spherical(j)).status is Status.UNSOLVABLE

    zero = SspInstance(GroupParams(5, 2), ((0, 0),) * 3, (0, 0))
    assert ssp_bruteforce(zero) == (0, 0, 0)
    assert solve_bruteforce(ssp_to_spherical(zero)).solvable


def test_ssp_exactness_flag(g31, g51):
    assert ssp_reduction_is_exact(SspInstance(g31, ((1,),), (0,)))
    assert not ssp_reduction_is_exact(SspInstance(g51, ((1,),), (0,)))


def test_ssp_solution_maps_exhaustive_p3():
    params = GroupParams(3, 2)
    for vs in vectors(params, 2):
        for target in itertools.product(range(3), repeat=2):
            i = SspInstance(params, vs, target)
            sph = ssp_to_spherical(i)
            for eps in itertools.product((0, 1), repeat=2):
                zs = ssp_solution_to_assignment(i, eps)
                assert verify(sph, zs) == i.is_solution(eps)
                assert ssp_assignment_to_solution(i, zs) == eps


def test_ssp_forward_direction_holds_for_p5(rng):
    params = GroupParams(5, 1)
    for _ in range(200):
        m = rng.randint(1, 4)
        vs = tuple((rng.randrange(5),) for _ in range(m))
        eps = tuple(rng.randrange(2) for _ in range(m))
        target = (sum(e * v[0] for e, v in zip(eps, vs)) % 5,)
        i = SspInstance(params, vs, target)
        assert verify(ssp_to_spherical(i), ssp_solution_to_assignment(i, eps))


def test_isis_example(g31):
    i = IsisInstance(sis(g31, [(1,), (2,)]), (0,))
    red = isis_to_cise(i)
    assert red.instance.base.rhs == el(g31, 0, 1)
    zs = red.forward((1, 1))
    assert zs == (el(g31, 0, 2), el(g31, 0, 2))
    assert verify(red.instance, zs)
    assert red.backward(zs) == (1, 1)


def test_isis_zero_case():
    params = GroupParams(5, 2)
    i = IsisInstance(sis(params, [(0, 0)] * 3), (0, 0))
    red = isis_to_cise(i)
    assert red.forward((0, 0, 0)) == (params.identity,) * 3
    assert verify(red.instance, red.forward((0, 0, 0)))


def test_isis_label_roundtrip():
    params = GroupParams(7, 1)
    for m in range(1, 11):
        red = isis_to_cise(IsisInstance(sis(params, [(1,)] * m), (0,)))
        for x in itertools.product((0, 1), repeat=m):
            assert red.backward(red.forward(x)) == x


def test_isis_rejections(g31):
    with pytest.raises(WrongVariant):
        isis_to_cise(IsisInstance(sis(g31, [(1,)], Variant.PLUS_MINUS_ONE), (0,)))
    g2 = GroupParams(2, 1)
    with pytest.raises(EvenModulus):
        isis_to_cise(IsisInstance(sis(g2, [(1,)]), (0,)))


def test_sis123_example(g51):
    i = sis(g51, [(1,), (4,)], Variant.PLUS_MINUS_ONE)
    red = sis_to_cise123(i)
    assert red.instance.base.rhs == el(g51, 0, 1)
    zs = red.forward((1, 1))
    assert zs == (el(g51, 0, 2), el(g51, 0, 2))  # 3^-1 = 2 mod 5
    assert verify(red.instance, zs)
    trivial = red.forward((0, 0))
    assert trivial == (el(g51, 0, 3),) * 2
    assert verify(red.instance, trivial)


def test_sis123_label_roundtrip():
    params = GroupParams(5, 1)
    for m in range(1, 9):
        red = sis_to_cise123(sis(params, [(1,)] * m, Variant.PLUS_MINUS_ONE))
        for x in itertools.product((-1, 0, 1), repeat=m):
            assert red.backward(red.forward(x)) == x


def test_sis123_rejections(g31, g51):
    with pytest.raises(ModulusTooSmall):
        sis_to_cise123(sis(g31, [(1,)], Variant.PLUS_MINUS_ONE))
    with pytest.raises(WrongVariant):
        sis_to_cise123(sis(g51, [(1,)]))


@pytest.mark.parametrize("p,n,m", [(3, 1, 3), (5, 1, 3), (3, 2, 2)])
def test_isis_solution_sets_match(p, n, m, rng):
    params = GroupParams(p, n)
    for _ in range(60):
        cols = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(m)]
        target = tuple(rng.randrange(p) for _ in range(n))
        i = IsisInstance(sis(params, cols), target)
        red = isis_to_cise(i)
        mapped = {red.backward(zs) for zs in enumerate_solutions(red.instance)}
        direct = {x for x in itertools.product((0, 1), repeat=m) if i.is_solution(x)}
        assert mapped == direct


def test_sis123_solution_sets_match(rng):
    params = GroupParams(5, 1)
    for _ in range(100):
        m = rng.randint(1, 4)
        cols = [(rng.randrange(5),) for _ in range(m)]
        i = sis(params, cols, Variant.PLUS_MINUS_ONE)
        red = sis_to_cise123(i)
        mapped = {red.backward(zs) for zs in enumerate_solutions(red.instance)}
        kernel = {x for x in itertools.product((-1, 0, 1), repeat=m) if i.image(x) == (0,)}
        assert mapped == kernel
        assert {x for x in mapped if any(x)} == {x for x in kernel if i.is_solution(x)}


def test_guess_example(g31):
    i = sis(g31, [(1,), (2,)])
    sub = isis_from_sis_guess(i, 0)
    assert sub.base.columns == ((2,),)
    assert sub.target == (2,)
    assert sub.is_solution((1,))
    assert reinsert_guess((1,), 0) == (1, 1)
    assert i.is_solution(reinsert_guess((1,), 0))


def test_guess_single_column(g31):
    for v in range(3):
        sub = isis_from_sis_guess(sis(g31, [(v,)]), 0)
        assert sub.m == 0
        assert (sis_bruteforce(sub) is not None) == (v == 0)


def test_guess_rejections(g31):
    with pytest.raises(IndexOutOfRange):
        isis_from_sis_guess(sis(g31, [(1,)]), 1)
    with pytest.raises(WrongVariant):
        isis_from_sis_guess(sis(g31, [(1,)], Variant.PLUS_MINUS_ONE), 0)


def test_guess_soundness_exhaustive():
    params = GroupParams(3, 1)
    for m in range(1, 4):
        for cols in vectors(params, m):
            i = sis(params, cols)
            for x in itertools.product((0, 1), repeat=m):
                if not i.is_solution(x):
                    continue
                first = x.index(1)
                sub = isis_from_sis_guess(i, first)
                x_sub = sis_bruteforce(sub)
                assert x_sub is not None
                assert i.is_solution(reinsert_guess(x_sub, first))


def test_sis_bruteforce_examples(g31, g51):
    assert sis_bruteforce(sis(g31, [(1,), (2,)])) == (1, 1)
    assert sis_bruteforce(IsisInstance(sis(g31, [(1,), (2,)]), (0,))) == (0, 0)
    assert sis_bruteforce(sis(g51, [(1,)])) is None


def test_cise_to_agwp_structure(g31):
    base = SphericalInstance(g31, (el(g31, 1, 1),), el(g31, 2, 1))
    cise = CiseInstance(base, (VariableConstraint.explicit([el(g31, 0, 1), el(g31, 0, 2)]),))
    graph = cise_to_agwp(cise)
    assert graph.vertex_count == 3
    assert [(e.src, e.dst) for e in graph.edges] == [(0, 1), (0, 1), (1, 2)]
    assert validate_dag(graph) == [0, 1, 2]
    report = agwp_solve(graph)
    assert report.solvable
    assert agwp_path_to_assignment(cise, report.witness) == (el(g31, 0, 2),)
    assert assignment_to_agwp_path(cise, (el(g31, 0, 2),)) == report.witness


def test_cise_to_agwp_identity_instance(g51):
    base = SphericalInstance(g51, (g51.identity,) * 3, g51.identity)
    cise = CiseInstance(base, (VariableConstraint.preset12(), VariableConstraint.free(), VariableConstraint.preset123()))
    assert agwp_solve(cise_to_agwp(cise)).solvable
