from pathlib import Path

import pytest

from sphereq.algebra import GroupParams
from sphereq.errors import InvariantViolation, ParseError
from sphereq.fileformat import canonical, kind_of, parse_instance, serialize

GOLDEN = Path(__file__).parent / "golden"
CANONICAL = sorted(GOLDEN.glob("*.txt"))


@pytest.mark.parametrize("path", CANONICAL, ids=lambda p: p.stem)
def test_golden_roundtrip(path):
    text = path.read_text()
    inst = parse_instance(text)
    assert serialize(inst) == text
    assert parse_instance(serialize(inst)) == inst


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.in")), ids=lambda p: p.stem)
def test_noncanonical_normalizes(path):
    expected = path.with_suffix(".out").read_text()
    assert canonical(path.read_text()) == expected
    assert canonical(expected) == expected


def test_kinds_cover_corpus():
    kinds = {kind_of(parse_instance(p.read_text())) for p in CANONICAL}
    assert kinds == {"spherical", "cise", "ssp", "sis", "isis", "agwp"}


def test_kind_of_rejects_other_objects():
    with pytest.raises(TypeError):
        kind_of(GroupParams(3, 1))


SPH = GOLDEN.joinpath("spherical.txt").read_text()


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("sphereq v2 spherical\n", 1),
        ("sphereq v1 matrix\n", 1),
        (SPH.replace("rhs 2 1", "rhs 2"), 6),
        (SPH.replace("coef 1 1", "coef 3 1"), 5),
        (SPH.replace("m 1", "m one"), 4),
        (SPH.replace("coef 1 1\n", ""), 5),
        (SPH + "rhs 0 1\n", 7),
        (SPH.replace("rhs 2 1\n", ""), 5),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line


@pytest.mark.parametrize(
    "text",
    [
        SPH.replace("p 3", "p 4"),
        SPH.replace("n 1", "n 0"),
        SPH.replace("m 1", "m 0").replace("coef 1 1\n", ""),
        GOLDEN.joinpath("agwp.txt").read_text() + "edge 2 0 0 1\n",
        GOLDEN.joinpath("agwp.txt").read_text().replace("vertices 3", "vertices 2"),
        GOLDEN.joinpath("cise.txt").read_text().replace("p 5", "p 3").replace("coef 3 1", "coef 2 1").replace("rhs 4 1", "rhs 1 1").replace("member 0 4", "member 0 2"),
    ],
    ids=["composite", "dimension", "empty", "cycle", "dangling", "preset123-p3"],
)
def test_invariant_violations(text):
    with pytest.raises(InvariantViolation):
        parse_instance(text)


def test_constraint_syntax_errors():
    cise = GOLDEN.joinpath("cise.txt").read_text()
    with pytest.raises(ParseError):
        parse_instance(cise.replace("constraint preset12", "constraint preset7"))
    with pytest.raises(ParseError):
        parse_instance(cise.replace("constraint preset12", "constraint free 3"))
    with pytest.raises(ParseError):
        parse_instance(GOLDEN.joinpath("sis.txt").read_text().replace("variant pm1", "variant 012"))
