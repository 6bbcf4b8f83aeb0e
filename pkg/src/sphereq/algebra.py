"""Exact arithmetic in the semidirect product G(p, n) = Z_p^n x| Z_p^*.

Elements are pairs ``(x, alpha)`` with ``x`` a vector over Z_p and ``alpha``
a unit, multiplied by ``(x, a)(y, b) = (x + a*y, a*b)``.  Every value is
immutable and kept reduced to ``[0, p)`` so equality is structural.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    CompositeModulus,
    EmptyProduct,
    LengthMismatch,
    NonPositiveDimension,
    ParamMismatch,
    ParseError,
)

Vector = tuple[int, ...]


def is_prime(p: int) -> bool:
    """Deterministic trial-division primality test."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True, slots=True)
class GroupParams:
    """Parameters of G(p, n).  ``p = 2`` is admitted (the unit group is trivial)."""

    p: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise NonPositiveDimension(f"dimension must be >= 1, got {self.n}")
        if not is_prime(self.p):
            raise CompositeModulus(f"modulus {self.p} is not prime")

    @property
    def order(self) -> int:
        return self.p**self.n * (self.p - 1)

    @property
    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.n, 1, self)

    def zero_vector(self) -> Vector:
        return (0,) * self.n

    def unit_inverse(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)

    def element(self, vec: Iterable[int], unit: int) -> GroupElement:
        """Build an element, reducing components and checking the unit."""
        vec = tuple(int(x) % self.p for x in vec)
        if len(vec) != self.n:
            raise LengthMismatch(f"vector has length {len(vec)}, expected {self.n}")
        unit = int(unit) % self.p
        if unit == 0:
            raise ParamMismatch(f"unit component must be invertible mod {self.p}")
        return GroupElement(vec, unit, self)

    def coefficient(self, vec: Iterable[int]) -> GroupElement:
        """The element ``(vec, 1)`` of the coefficient set C(p, n)."""
        return self.element(vec, 1)

    def scalar(self, unit: int) -> GroupElement:
        """The element ``(0, unit)``."""
        return self.element(self.zero_vector(), unit)

    def vectors(self) -> Iterator[Vector]:
        return itertools.product(range(self.p), repeat=self.n)

    def elements(self) -> Iterator[GroupElement]:
        """All elements, lexicographic in (vector digits, unit)."""
        units = range(1, self.p)
        for vec in self.vectors():
            for a in units:
                yield GroupElement(vec, a, self)

    def coefficients(self) -> Iterator[GroupElement]:
        """All elements of C(p, n) = {(c, 1)}, lexicographic in c."""
        for vec in self.vectors():
            yield GroupElement(vec, 1, self)


def make_params(p: int, n: int) -> GroupParams:
    if p < 2:
        raise CompositeModulus(f"modulus must be >= 2, got {p}")
    return GroupParams(p, n)


@dataclass(frozen=True, slots=True)
class GroupElement:
    vec: Vector
    unit: int
    params: GroupParams

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def inverse(self) -> GroupElement:
        return inverse(self)

    @property
    def is_identity(self) -> bool:
        return self.unit == 1 and not any(self.vec)

    @property
    def in_coefficient_set(self) -> bool:
        return self.unit == 1

    def __str__(self):
        return format_element(self)


def _check_same(a: GroupElement, b: GroupElement):
    if a.params != b.params:
        raise ParamMismatch(f"elements of G{a.params.p, a.params.n} and G{b.params.p, b.params.n}")


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same(a, b)
    p = a.params.p
    alpha = a.unit
    vec = tuple((x + alpha * y) % p for x, y in zip(a.vec, b.vec))
    return GroupElement(vec, alpha * b.unit % p, a.params)


def inverse(a: GroupElement) -> GroupElement:
    p = a.params.p
    inv = pow(a.unit, -1, p)
    return GroupElement(tuple(-inv * x % p for x in a.vec), inv, a.params)


def conjugate(z: GroupElement, c: GroupElement) -> GroupElement:
    """``z^-1 c z`` by the closed form ``(a^-1((b - 1) x + y), b)``."""
    _check_same(z, c)
    p = z.params.p
    inv = pow(z.unit, -1, p)
    shift = c.unit - 1
    vec = tuple(inv * (shift * x + y) % p for x, y in zip(z.vec, c.vec))
    return GroupElement(vec, c.unit, z.params)


def conjugate_naive(z: GroupElement, c: GroupElement) -> GroupElement:
    """``z^-1 c z`` as a literal triple product (oracle for :func:`conjugate`)."""
    return multiply(multiply(inverse(z), c), z)


def product_of_conjugates(zs: Sequence[GroupElement], cs: Sequence[GroupElement]) -> GroupElement:
    """Evaluate ``prod_i z_i^-1 c_i z_i`` in one pass.

    The i-th conjugate contributes its vector scaled by the prefix product
    ``B_i = b_1 ... b_(i-1)`` of the coefficient units.
    """
    if len(zs) != len(cs):
        raise LengthMismatch(f"{len(zs)} variables for {len(cs)} coefficients")
    if not cs:
        raise EmptyProduct("product of conjugates needs m >= 1")
    params = cs[0].params
    p, n = params.p, params.n
    acc = [0] * n
    prefix = 1
    for z, c in zip(zs, cs):
        _check_same(z, c)
        if c.params != params:
            raise ParamMismatch("coefficients from different groups")
        scale = prefix * pow(z.unit, -1, p) % p
        shift = c.unit - 1
        for k in range(n):
            acc[k] = (acc[k] + scale * (shift * z.vec[k] + c.vec[k])) % p
        prefix = prefix * c.unit % p
    return GroupElement(tuple(acc), prefix, params)


def fold_conjugates(zs: Sequence[GroupElement], cs: Sequence[GroupElement]) -> GroupElement:
    """Left-to-right fold of triple products; independent of the closed forms."""
    if len(zs) != len(cs):
        raise LengthMismatch(f"{len(zs)} variables for {len(cs)} coefficients")
    if not cs:
        raise EmptyProduct("product of conjugates needs m >= 1")
    acc = cs[0].params.identity
    for z, c in zip(zs, cs):
        acc = multiply(acc, conjugate_naive(z, c))
    return acc


def vec_lincomb(coeffs: Sequence[int], vectors: Sequence[Vector], p: int) -> Vector:
    """``sum_i coeffs[i] * vectors[i]`` reduced mod p."""
    if len(coeffs) != len(vectors):
        raise LengthMismatch(f"{len(coeffs)} coefficients for {len(vectors)} vectors")
    if not vectors:
        raise LengthMismatch("empty linear combination has no dimension")
    n = len(vectors[0])
    acc = [0] * n
    for a, v in zip(coeffs, vectors):
        if len(v) != n:
            raise LengthMismatch("vectors of different lengths")
        for k in range(n):
            acc[k] += a * v[k]
    return tuple(x % p for x in acc)


def vec_add(u: Vector, v: Vector, p: int) -> Vector:
    return tuple((x + y) % p for x, y in zip(u, v))


def vec_scale(a: int, v: Vector, p: int) -> Vector:
    return tuple(a * x % p for x in v)


def format_vector(v: Sequence[int]) -> str:
    return " ".join(str(int(x)) for x in v)


def format_element(g: GroupElement) -> str:
    return " ".join([format_vector(g.vec), str(g.unit)])


def parse_vector(text: str, params: GroupParams) -> Vector:
    try:
        vals = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}") from exc
    if len(vals) != params.n:
        raise ParseError(f"vector {text!r} has {len(vals)} entries, expected {params.n}")
    if any(not 0 <= x < params.p for x in vals):
        raise ParseError(f"vector {text!r} has entries outside [0, {params.p})")
    return tuple(vals)


def parse_element(text: str, params: GroupParams) -> GroupElement:
    toks = text.split()
    if len(toks) != params.n + 1:
        raise ParseError(f"element {text!r} needs {params.n + 1} numbers")
    vec = parse_vector(" ".join(toks[:-1]), params)
    try:
        unit = int(toks[-1])
    except ValueError as exc:
        raise ParseError(f"bad unit {toks[-1]!r}") from exc
    if not 1 <= unit < params.p:
        raise ParseError(f"unit {unit} outside [1, {params.p})")
    return GroupElement(vec, unit, params)
