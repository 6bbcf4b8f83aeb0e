import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphereq.algebra import (
    GroupParams,
    conjugate,
    conjugate_naive,
    fold_conjugates,
    format_element,
    inverse,
    is_prime,
    make_params,
    multiply,
    parse_element,
    product_of_conjugates,
    vec_lincomb,
)
from sphereq.errors import CompositeModulus, EmptyProduct, LengthMismatch, NonPositiveDimension, ParamMismatch, ParseError

from conftest import el, random_element

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_make_params():
    assert make_params(3, 1) == GroupParams(3, 1)
    assert make_params(769, 2).p == 769
    with pytest.raises(CompositeModulus):
        make_params(4, 1)
    with pytest.raises(CompositeModulus):
        make_params(1, 1)
    with pytest.raises(NonPositiveDimension):
        make_params(3, 0)


@pytest.mark.parametrize("p", range(2, 400))
def test_primality_matches_sieve(p):
    assert is_prime(p) == all(p % d for d in range(2, p))


def test_multiply_examples(g31):
    assert multiply(el(g31, 1, 2), el(g31, 2, 2)) == el(g31, 2, 1)
    g52 = GroupParams(5, 2)
    assert multiply(el(g52, 1, 2, 3), el(g52, 4, 0, 2)) == el(g52, 3, 2, 1)
    a = el(g52, 1, 2, 3)
    assert a * g52.identity == a == g52.identity * a


def test_inverse_examples(g31):
    assert inverse(el(g31, 1, 2)) == el(g31, 1, 2)
    assert multiply(el(g31, 1, 2), el(g31, 1, 2)) == g31.identity
    g52 = GroupParams(5, 2)
    assert inverse(el(g52, 1, 2, 3)) == el(g52, 3, 1, 2)
    assert inverse(g52.identity) == g52.identity


def test_conjugate_examples(g31):
    assert conjugate(el(g31, 1, 2), el(g31, 2, 2)) == el(g31, 0, 2)
    c = el(g31, 2, 2)
    assert conjugate(g31.identity, c) == c
    assert conjugate(el(g31, 1, 2), g31.identity) == g31.identity


def test_param_mismatch(g31, g51):
    with pytest.raises(ParamMismatch):
        multiply(g31.identity, g51.identity)
    with pytest.raises(ParamMismatch):
        conjugate(g31.identity, g51.identity)


@pytest.mark.parametrize("p", [3, 5])
def test_group_laws_exhaustive(p):
    params = GroupParams(p, 1)
    elems = list(params.elements())
    assert len(elems) == params.order == p * (p - 1)
    e = params.identity
    for a in elems:
        assert a * e == e * a == a
        assert a * inverse(a) == e == inverse(a) * a
        for b in elems:
            assert conjugate(a, b) == conjugate_naive(a, b)
            assert conjugate(a, b).unit == b.unit
            ab = a * b
            for c in elems:
                assert ab * c == a * (b * c)


def test_elements_order(g31):
    assert [format_element(g) for g in g31.elements()] == ["0 1", "0 2", "1 1", "1 2", "2 1", "2 2"]


def test_product_of_conjugates_examples(g31):
    z, c = el(g31, 1, 2), el(g31, 2, 2)
    assert product_of_conjugates([z], [c]) == conjugate(z, c)
    ids = [g31.identity] * 3
    assert product_of_conjugates([el(g31, 1, 2)] * 3, ids) == g31.identity
    zs = [el(g31, 0, 2), el(g31, 0, 2)]
    cs = [el(g31, 1, 1), el(g31, 2, 1)]
    assert product_of_conjugates(zs, cs) == el(g31, 0, 1)
    with pytest.raises(LengthMismatch):
        product_of_conjugates(zs, cs[:1])
    with pytest.raises(EmptyProduct):
        product_of_conjugates([], [])


def test_product_of_conjugates_matches_fold(rng):
    for _ in range(10_000):
        params = GroupParams(rng.choice([3, 5, 7, 13]), rng.randint(1, 3))
        m = rng.randint(1, 8)
        zs = [random_element(params, rng) for _ in range(m)]
        cs = [random_element(params, rng) for _ in range(m)]
        assert product_of_conjugates(zs, cs) == fold_conjugates(zs, cs)


def test_vec_lincomb():
    assert vec_lincomb((1, 1), ((1,), (2,)), 3) == (0,)
    assert vec_lincomb((0, 0), ((1,), (2,)), 3) == (0,)
    assert vec_lincomb((1, 2), ((1,), (2,)), 3) == (2,)
    with pytest.raises(LengthMismatch):
        vec_lincomb((1,), ((1,), (2,)), 3)


def test_element_text_roundtrip(rng):
    params = GroupParams(13, 4)
    for _ in range(200):
        g = random_element(params, rng)
        assert parse_element(format_element(g), params) == g
    with pytest.raises(ParseError):
        parse_element("1 2", params)
    with pytest.raises(ParseError):
        parse_element("0 0 0 0 0", params)


@st.composite
def group_and_elements(draw, k):
    p = draw(st.sampled_from(SMALL_PRIMES[1:]))
    n = draw(st.integers(1, 4))
    params = GroupParams(p, n)
    elem = st.builds(
        lambda vec, a: params.element(vec, a),
        st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
        st.integers(1, p - 1),
    )
    return params, [draw(elem) for _ in range(k)]


@settings(max_examples=300, deadline=None)
@given(group_and_elements(3))
def test_axioms_property(data):
    params, (a, b, c) = data
    assert (a * b) * c == a * (b * c)
    assert a * inverse(a) == params.identity
    assert conjugate(a, b) == conjugate_naive(a, b)
    assert conjugate(a, b).unit == b.unit


def test_large_modulus_random(rng):
    params = GroupParams(10007, 8)
    for _ in range(2000):
        a, b, c = (random_element(params, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert conjugate(a, b) == conjugate_naive(a, b)
