"""Iteration of unicritical maps (x - gamma)^d + c over exact and residue rings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .cyclotomic import CycInt, ResiduePrime, context, reduce

Target = Union[int, ResiduePrime]


@dataclass(frozen=True)
class UnicriticalMap:
    """x -> (x - gamma)^degree + c.

    The carrier ring is Z when gamma and c are ints and modulus is None,
    Z[zeta_p] when either is a CycInt, and Z/modulus when modulus is set.
    """

    degree: int
    gamma: Union[int, CycInt]
    c: Union[int, CycInt]
    modulus: Optional[int] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def ring(self) -> str:
        if self.modulus is not None:
            return f"Z/{self.modulus}"
        for v in (self.gamma, self.c):
            if isinstance(v, CycInt):
                return f"Z[zeta_{v.ctx.p}]"
        return "Z"

    def __call__(self, x):
        if self.modulus is not None:
            m = self.modulus
            return (pow(x - self.gamma, self.degree, m) + self.c) % m
        return (x - self.gamma) ** self.degree + self.c

    def reduce(self, target: Target) -> "UnicriticalMap":
        if isinstance(target, ResiduePrime):
            g, c, m = reduce(self.gamma, target), reduce(self.c, target), target.N
        else:
            m = int(target)
            if isinstance(self.gamma, CycInt) or isinstance(self.c, CycInt):
                raise ValueError("cyclotomic map needs a ResiduePrime target")
            g, c = self.gamma % m, self.c % m
        return UnicriticalMap(self.degree, g, c, modulus=m, name=self.name)


def unicritical_phi(p: int) -> UnicriticalMap:
    """(x - 1)^p + 2 - zeta_p."""
    ctx = context(p)
    return UnicriticalMap(p, 1, 2 - ctx.zeta, name=f"phi_{p}")


def delta_map(p: int) -> UnicriticalMap:
    """x^p + 1 - zeta_p."""
    ctx = context(p)
    return UnicriticalMap(p, 0, 1 - ctx.zeta, name=f"delta_{p}")


def twisted_phi(p: int, i: int) -> UnicriticalMap:
    """(x - zeta^i)^p + 1 + zeta^i - zeta; equals unicritical_phi(p) at i = p."""
    ctx = context(p)
    zi = ctx.zeta_power(i)
    return UnicriticalMap(p, zi, 1 + zi - ctx.zeta, name=f"phi_({p},{i})")


def quadratic_phi(p: int) -> UnicriticalMap:
    """(x - p)^2 + 2p - p^2."""
    return UnicriticalMap(2, p, 2 * p - p * p, name=f"quad_{p}")


def quadratic_f(p: int) -> UnicriticalMap:
    """(x - p)^2 - p^2 - 1."""
    return UnicriticalMap(2, p, -p * p - 1, name=f"f_{p}")


def iterate_exact(fmap: UnicriticalMap, x0, n: int):
    if n < 0:
        raise ValueError("n must be non-negative")
    x = x0
    for _ in range(n):
        x = fmap(x)
    return x


def orbit_exact(fmap: UnicriticalMap, x0, n: int) -> list:
    """[x0, f(x0), ..., f^n(x0)]."""
    out = [x0]
    for _ in range(n):
        out.append(fmap(out[-1]))
    return out


@dataclass(frozen=True)
class OrbitTrace:
    modulus: int
    tail: int
    cycle: tuple[int, ...]
    prefix: tuple[int, ...]

    def value(self, n: int) -> int:
        """Residue of f^n(x0)."""
        if n < self.tail:
            return self.prefix[n]
        return self.cycle[(n - self.tail) % len(self.cycle)]

    def values_from(self, n_min: int) -> list[int]:
        """Every residue f^n(x0) takes for some n >= n_min, in first-seen order."""
        out = []
        for n in range(n_min, max(n_min, self.tail) + len(self.cycle)):
            v = self.value(n)
            if v not in out:
                out.append(v)
        return out

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "tail": self.tail, "cycle": list(self.cycle)}


def orbit_mod(fmap: UnicriticalMap, x0, target: Target) -> OrbitTrace:
    red = fmap if (fmap.modulus is not None and not isinstance(target, ResiduePrime)
                   and fmap.modulus == target) else fmap.reduce(target)
    m = red.modulus
    x = reduce(x0, target) if isinstance(target, ResiduePrime) else x0 % m
    seen: dict[int, int] = {}
    seq: list[int] = []
    while x not in seen:
        seen[x] = len(seq)
        seq.append(x)
        x = red(x)
    tail = seen[x]
    return OrbitTrace(m, tail, tuple(seq[tail:]), tuple(seq))


def forward_orbit_of_zero(fmap: UnicriticalMap, limit: int = 64) -> list:
    """{f^k(0) : k >= 1} for a map with 0 preperiodic; raises if no repeat within limit."""
    seen = []
    x = fmap(0 * fmap.c if isinstance(fmap.c, CycInt) else 0)
    for _ in range(limit):
        if x in seen:
            return seen
        seen.append(x)
        x = fmap(x)
    raise ValueError("orbit of 0 did not close within the iteration limit")


def _divides(q, value) -> bool:
    if isinstance(q, ResiduePrime):
        return reduce(value, q) == 0
    if isinstance(value, CycInt):
        return all(c % q == 0 for c in value.coeffs)
    return value % q == 0


def primitive_prime_filter(fmap: Optional[UnicriticalMap], orbit0: Sequence, q) -> bool:
    """True iff q divides no element of the forward orbit of 0.

    Any q dividing f^n(gamma) is then a primitive prime divisor. When a map is
    given, orbit0 must equal its certified finite orbit of 0.
    """
    if not orbit0:
        raise ValueError("orbit of 0 must be non-empty")
    if fmap is not None:
        actual = forward_orbit_of_zero(fmap)
        if sorted(map(repr, actual)) != sorted(map(repr, orbit0)):
            raise ValueError(f"supplied orbit {list(orbit0)} is not the orbit of 0 ({actual})")
    return not any(_divides(q, v) for v in orbit0)
