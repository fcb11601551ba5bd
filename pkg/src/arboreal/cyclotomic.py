"""Exact arithmetic in Z[zeta_p] for odd primes p.

Elements are integer vectors in the power basis 1, zeta, ..., zeta^(p-2).
Every product is reduced with zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)),
so equal elements always have equal coefficient tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

import gmpy2


@dataclass(frozen=True)
class CyclotomicContext:
    p: int

    def __post_init__(self):
        if self.p < 3 or not gmpy2.is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")

    @property
    def degree(self) -> int:
        return self.p - 1

    @property
    def phi_p(self) -> tuple[int, ...]:
        """Coefficients of the p-th cyclotomic polynomial, low degree first."""
        return (1,) * self.p

    @property
    def discriminant(self) -> int:
        p = self.p
        return (-1) ** ((p - 1) // 2) * p ** (p - 2)

    @property
    def zeta(self) -> "CycInt":
        return self.element([0, 1])

    def element(self, coeffs: Iterable[int]) -> "CycInt":
        """Build an element from a coefficient list of any length (reduced mod x^p - 1, then Phi_p)."""
        p = self.p
        buf = [0] * p
        for i, c in enumerate(coeffs):
            buf[i % p] += int(c)
        top = buf[p - 1]
        return CycInt(self, tuple(c - top for c in buf[: p - 1]))

    def scalar(self, n: int) -> "CycInt":
        return CycInt(self, (int(n),) + (0,) * (self.p - 2))

    def zeta_power(self, k: int) -> "CycInt":
        buf = [0] * self.p
        buf[k % self.p] = 1
        return self.element(buf)


@lru_cache(maxsize=None)
def context(p: int) -> CyclotomicContext:
    return CyclotomicContext(p)


class CycInt:
    """An element a_0 + a_1 zeta + ... + a_{p-2} zeta^{p-2} of Z[zeta_p]."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CyclotomicContext, coeffs: tuple[int, ...]):
        if len(coeffs) != ctx.p - 1:
            raise ValueError(f"expected {ctx.p - 1} coefficients, got {len(coeffs)}")
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.ctx.p != self.ctx.p:
                raise ValueError("mixed cyclotomic contexts")
            return other
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        buf = [0] * p
        b = other.coeffs
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    buf[(i + j) % p] += x * y
        top = buf[p - 1]
        return CycInt(self.ctx, tuple(c - top for c in buf[: p - 1]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ctx.scalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.ctx.p == other.ctx.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"CycInt[p={self.ctx.p}](" + (" + ".join(terms) or "0") + ")"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conjugate(self, k: int) -> "CycInt":
        """Image under the automorphism zeta -> zeta^k (k prime to p)."""
        p = self.ctx.p
        if k % p == 0:
            raise ValueError("k must be prime to p")
        buf = [0] * p
        for i, c in enumerate(self.coeffs):
            buf[(i * k) % p] += c
        top = buf[p - 1]
        return CycInt(self.ctx, tuple(c - top for c in buf[: p - 1]))

    def to_json(self) -> list[str]:
        return [gmpy2.mpz(c).digits(10) for c in self.coeffs]

    @classmethod
    def from_json(cls, ctx: CyclotomicContext, data: list) -> "CycInt":
        return ctx.element(int(gmpy2.mpz(c)) for c in data)


Number = Union[int, CycInt]


def ring_ops(a: CycInt, b, op: str) -> CycInt:
    """Dispatch add/sub/mul/pow by name; for pow, b is the exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown ring operation {op!r}")


def norm(a: CycInt) -> int:
    """Absolute norm N_{Q(zeta_p)/Q}(a) = Res(Phi_p, A).

    Phi_p is monic, so the resultant is the product of A over all
    primitive p-th roots; that product is formed exactly as the product
    of the Galois conjugates of a, which lands in Z.
    """
    if a.is_zero():
        return 0
    acc = a
    for k in range(2, a.ctx.p):
        acc = acc * a.conjugate(k)
    if any(acc.coeffs[1:]):
        raise ArithmeticError("conjugate product is not rational")
    return acc.coeffs[0]


@dataclass(frozen=True)
class ResiduePrime:
    """A degree-one prime q of Z[zeta_p] given by zeta -> root in F_ell."""

    ctx: CyclotomicContext
    ell: int
    root: int
    generator: Optional[CycInt] = None

    @property
    def N(self) -> int:
        return self.ell

    @property
    def ramified(self) -> bool:
        return self.ell == self.ctx.p

    def label(self) -> str:
        if self.generator is None:
            return f"({self.ell}, zeta->{self.root})"
        return _format_generator(self.generator)

    def to_json(self) -> dict:
        out = {"ell": self.ell, "root": self.root}
        if self.generator is not None:
            c = self.generator.coeffs
            if not any(c[2:]):
                out["a"], out["b"] = c[0], c[1]
            else:
                out["generator"] = self.generator.to_json()
        return out


def _format_generator(g: CycInt) -> str:
    c = g.coeffs
    if not any(c[2:]):
        a, b = c[0], c[1]
        if b == 0:
            return f"({a})"
        bpart = "z" if abs(b) == 1 else f"{abs(b)}z"
        return f"({a}{'+' if b > 0 else '-'}{bpart})"
    return repr(g)


def _eval_mod(coeffs: Iterable[int], t: int, n: int) -> int:
    acc = 0
    for c in reversed(tuple(coeffs)):
        acc = (acc * t + c) % n
    return acc


def residue_prime(ctx: CyclotomicContext, generator: CycInt) -> ResiduePrime:
    if generator.ctx.p != ctx.p:
        raise ValueError("mixed cyclotomic contexts")
    n = abs(norm(generator))
    if n == 1:
        raise ValueError("unit generates no prime")
    if n == 0 or not gmpy2.is_prime(n):
        raise ValueError("not a degree-one prime")
    c = generator.coeffs
    if not any(c[2:]) and c[1] % n:
        root = (-c[0] * pow(c[1], -1, n)) % n
        candidates = [root]
    else:
        candidates = [
            t for t in range(n)
            if _eval_mod(ctx.phi_p, t, n) == 0 and _eval_mod(c, t, n) == 0
        ]
    if not candidates:
        raise ValueError("not a degree-one prime")
    root = min(candidates)
    if _eval_mod(ctx.phi_p, root, n) != 0:
        raise ArithmeticError("root does not annihilate Phi_p")
    return ResiduePrime(ctx, n, root, generator)


def linear_prime(p: int, a: int, b: int) -> ResiduePrime:
    """The prime generated by a + b*zeta_p."""
    ctx = context(p)
    return residue_prime(ctx, ctx.element([a, b]))


def reduce(a: Number, q: ResiduePrime) -> int:
    if isinstance(a, int):
        return a % q.N
    if a.ctx.p != q.ctx.p:
        raise ValueError("mixed cyclotomic contexts")
    return _eval_mod(a.coeffs, q.root, q.N)


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ramified_valuation(a: CycInt):
    """Valuation at (1 - zeta_p), read off from v_p of the norm.

    Valid because (1 - zeta_p) is the only prime above p and has residue
    degree one. Returns math.inf for zero.
    """
    if a.is_zero():
        return math.inf
    return p_adic_valuation(norm(a), a.ctx.p)
