"""Spherical functions and hash families built from them.

* ``f_c(z_1..z_m) = prod z_j^-1 c_j z_j`` (:func:`eval_spherical`),
* the 0/1-spherical hash ``H_c(b) = prod g_(b_j)^-1 c_j g_(b_j)`` with
  ``g_0 = (0, 1)``, ``g_1 = (0, 2^-1)`` and every ``c_j`` in C(p, n),
* the transducer function ``J_C(b) = c_(1 b_1) ... c_(m b_m)``.

For the canonical pair, conjugation by ``(0, k^-1)`` scales a coefficient
vector by ``k``, so ``H_c(b) = (sum (b_j + 1) c_j, 1)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .algebra import GroupElement, GroupParams, conjugate, multiply, product_of_conjugates, vec_add, vec_scale
from .equations import Assignment, CiseInstance, SphericalInstance, VariableConstraint, verify
from .errors import EvenModulus, LengthMismatch, ModulusTooSmall, NotACollision, ParamMismatch, TargetOutsideRange

Bits = tuple[int, ...]


def as_rng(rng: Union[random.Random, int, None]) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


def parse_bits(text: str) -> Bits:
    if any(ch not in "01" for ch in text):
        raise ValueError(f"bit string {text!r} may contain only 0 and 1")
    return tuple(int(ch) for ch in text)


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def _check_bits(bits: Sequence[int], m: int) -> Bits:
    bits = tuple(bits)
    if len(bits) != m:
        raise LengthMismatch(f"{len(bits)} bits for length {m}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    return bits


@dataclass(frozen=True)
class SphericalFnSpec:
    params: GroupParams
    coefficients: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise LengthMismatch("a spherical function needs m >= 1")

    @property
    def m(self) -> int:
        return len(self.coefficients)


def eval_spherical(s: SphericalFnSpec, zs: Sequence[GroupElement]) -> GroupElement:
    if len(zs) != s.m:
        raise LengthMismatch(f"{len(zs)} arguments for length {s.m}")
    return product_of_conjugates(zs, s.coefficients)


def canonical_pair(params: GroupParams) -> tuple[GroupElement, GroupElement]:
    return params.identity, params.scalar((params.p + 1) // 2)


@dataclass(frozen=True)
class Hash01Spec:
    params: GroupParams
    coefficients: tuple[GroupElement, ...]
    g0: Optional[GroupElement] = None
    g1: Optional[GroupElement] = None

    def __post_init__(self):
        if self.params.p < 3:
            raise EvenModulus("0/1-spherical hashing needs an odd prime")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise LengthMismatch("hash length m must be >= 1")
        if any(not c.in_coefficient_set or c.params != self.params for c in self.coefficients):
            raise ParamMismatch("hash coefficients must lie in C(p, n)")
        g0, g1 = canonical_pair(self.params)
        if self.g0 is None:
            object.__setattr__(self, "g0", g0)
        if self.g1 is None:
            object.__setattr__(self, "g1", g1)
        if self.g0 == self.g1:
            raise ValueError("g0 and g1 must differ")

    @classmethod
    def from_vectors(cls, params: GroupParams, vectors) -> Hash01Spec:
        return cls(params, tuple(params.coefficient(v) for v in vectors))

    @property
    def m(self) -> int:
        return len(self.coefficients)

    @property
    def canonical(self) -> bool:
        return (self.g0, self.g1) == canonical_pair(self.params)

    def select(self, bits: Sequence[int]) -> Assignment:
        return tuple(self.g1 if b else self.g0 for b in bits)


def eval_hash01(s: Hash01Spec, bits: Sequence[int]) -> GroupElement:
    bits = _check_bits(bits, s.m)
    direct = eval_spherical(SphericalFnSpec(s.params, s.coefficients), s.select(bits))
    if not s.canonical:
        return direct
    p = s.params.p
    acc = s.params.zero_vector()
    for b, c in zip(bits, s.coefficients):
        acc = vec_add(acc, vec_scale(b + 1, c.vec, p), p)
    closed = GroupElement(acc, 1, s.params)
    assert closed == direct, "closed-form hash disagrees with the conjugate product"
    return closed


@dataclass(frozen=True)
class JcSpec:
    """``table[b][i]`` is the element chosen at position i when bit i is b."""

    params: GroupParams
    table: tuple[tuple[GroupElement, ...], tuple[GroupElement, ...]]

    def __post_init__(self):
        if len(self.table) != 2:
            raise LengthMismatch("the table needs exactly two rows")
        row0, row1 = (tuple(r) for r in self.table)
        if len(row0) != len(row1) or not row0:
            raise LengthMismatch("rows must have equal length m >= 1")
        if any(g.params != self.params for g in row0 + row1):
            raise ParamMismatch("table entry outside the instance group")
        object.__setattr__(self, "table", (row0, row1))

    @property
    def m(self) -> int:
        return len(self.table[0])


def eval_jc(s: JcSpec, bits: Sequence[int]) -> GroupElement:
    bits = _check_bits(bits, s.m)
    acc = s.params.identity
    for i, b in enumerate(bits):
        acc = multiply(acc, s.table[b][i])
    return acc


def jc_from_hash01(s: Hash01Spec) -> JcSpec:
    row0 = tuple(conjugate(s.g0, c) for c in s.coefficients)
    row1 = tuple(conjugate(s.g1, c) for c in s.coefficients)
    return JcSpec(s.params, (row0, row1))


def sample_hash_family(params: GroupParams, m: int, rng=None) -> Hash01Spec:
    """Draw ``c_1..c_m`` uniformly from C(p, n)."""
    if params.p == 2:
        raise EvenModulus("the hash family is defined for odd p")
    if m < 1:
        raise LengthMismatch("hash length m must be >= 1")
    rng = as_rng(rng)
    p, n = params.p, params.n
    vectors = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(m)]
    return Hash01Spec.from_vectors(params, vectors)


def collision_to_cise(s: Hash01Spec, x: Sequence[int], y: Sequence[int]) -> tuple[CiseInstance, Assignment]:
    """Turn a collision ``H(x) = H(y)`` into a solved {1, 2, 3}-constrained equation.

    ``sum (2 + x_j - y_j) c_j = 2 sum c_j`` holds exactly for collisions, so
    ``z_j = (0, (2 + x_j - y_j)^-1)`` solves the equation with coefficients
    ``c_j`` and right-hand side ``(2 sum c_j, 1)``.
    """
    params = s.params
    if params.p < 5:
        raise ModulusTooSmall("3 must be a unit, so p >= 5")
    if not s.canonical:
        raise ValueError("collision mapping needs the canonical pair g0, g1")
    x = _check_bits(x, s.m)
    y = _check_bits(y, s.m)
    if x == y or eval_hash01(s, x) != eval_hash01(s, y):
        raise NotACollision("inputs are equal or hash to different values")
    p = params.p
    total = params.zero_vector()
    for c in s.coefficients:
        total = vec_add(total, c.vec, p)
    base = SphericalInstance(params, s.coefficients, params.coefficient(vec_scale(2, total, p)))
    cise = CiseInstance(base, (VariableConstraint.preset123(),) * s.m)
    witness = tuple(params.scalar(params.unit_inverse(2 + a - b)) for a, b in zip(x, y))
    assert verify(cise, witness)
    return cise, witness


def preimage_to_cise(s: Hash01Spec, target: GroupElement) -> CiseInstance:
    """Preimages of ``target`` are the solutions of a {1, 2}-constrained equation.

    Bits ``b`` map to ``z_j = g_(b_j)`` (see :func:`bits_to_assignment`).
    """
    if not s.canonical:
        raise ValueError("preimage mapping needs the canonical pair g0, g1")
    if target.params != s.params or not target.in_coefficient_set:
        raise TargetOutsideRange("hash values lie in C(p, n); target unit part must be 1")
    base = SphericalInstance(s.params, s.coefficients, target)
    return CiseInstance(base, (VariableConstraint.preset12(),) * s.m)


def bits_to_assignment(s: Hash01Spec, bits: Sequence[int]) -> Assignment:
    return s.select(_check_bits(bits, s.m))


def assignment_to_bits(s: Hash01Spec, zs: Sequence[GroupElement]) -> Bits:
    bits = []
    for z in zs:
        if z == s.g0:
            bits.append(0)
        elif z == s.g1:
            bits.append(1)
        else:
            raise ValueError(f"{z} is neither g0 nor g1")
    return tuple(bits)
