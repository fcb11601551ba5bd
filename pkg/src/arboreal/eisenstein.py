"""Eisenstein criteria at the ramified prime (1 - zeta_p) and the phi_(p,i) family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .cyclotomic import CycInt, context, ramified_valuation
from .dynamics import iterate_exact, twisted_phi

DEGREE_CAP = 200


@dataclass(frozen=True)
class CycPolynomial:
    """sum coeffs[k] x^k over Z[zeta_p], lowest degree first."""

    p: int
    coeffs: tuple[CycInt, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ValueError("leading coefficient must be nonzero")

    @classmethod
    def from_list(cls, p: int, coeffs: Sequence) -> "CycPolynomial":
        ctx = context(p)
        cs = [c if isinstance(c, CycInt) else ctx.scalar(c) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        return cls(p, tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> CycInt:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = context(self.p).scalar(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "CycPolynomial") -> "CycPolynomial":
        zero = context(self.p).scalar(0)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return CycPolynomial.from_list(self.p, [x + y for x, y in zip(a, b)])

    def __mul__(self, other: "CycPolynomial") -> "CycPolynomial":
        zero = context(self.p).scalar(0)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return CycPolynomial.from_list(self.p, out)

    def __pow__(self, n: int) -> "CycPolynomial":
        result = CycPolynomial.from_list(self.p, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, inner: "CycPolynomial") -> "CycPolynomial":
        acc = CycPolynomial.from_list(self.p, [self.lead])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * inner + CycPolynomial.from_list(self.p, [c])
        return acc

    def valuations(self) -> list:
        return [ramified_valuation(c) for c in self.coeffs]


def eisenstein_check(f: CycPolynomial, mode: str = "standard") -> bool:
    if mode not in ("standard", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    nu = f.valuations()
    middle = nu[1:-1]
    floor = 1 if mode == "standard" else 2
    return nu[-1] == 0 and nu[0] == 1 and all(v >= floor for v in middle)


def translate(f: CycPolynomial, alpha: CycInt) -> CycPolynomial:
    """f(x + alpha) - c_d alpha^d by binomial expansion."""
    ctx = context(f.p)
    d = f.degree
    out = [ctx.scalar(0)] * (d + 1)
    for k, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        for j in range(k + 1):
            out[j] = out[j] + c * comb(k, j) * alpha ** (k - j)
    out[0] = out[0] - f.lead * alpha ** d
    return CycPolynomial.from_list(f.p, out)


def translate_check(f: CycPolynomial, alpha: CycInt) -> tuple[bool, CycPolynomial]:
    if not eisenstein_check(f, "strong"):
        raise ValueError("lemma hypotheses not met")
    if ramified_valuation(alpha) < 0:
        raise ValueError("lemma hypotheses not met")
    g = translate(f, alpha)
    nu = g.valuations()
    ok = eisenstein_check(g, "standard") and nu[0] == 1 and all(v > 1 for v in nu[1:-1])
    return ok, g


def twisted_polynomial(p: int, i: int) -> CycPolynomial:
    """Expanded coefficients of (x - zeta^i)^p + 1 + zeta^i - zeta."""
    fmap = twisted_phi(p, i)
    base = CycPolynomial.from_list(p, [-fmap.gamma, 1]) ** p
    return base + CycPolynomial.from_list(p, [fmap.c])


def expanded_iterate(p: int, i: int, n: int, cap: int = DEGREE_CAP) -> CycPolynomial:
    if p ** n > cap:
        raise ValueError(f"degree {p ** n} exceeds cap {cap}")
    phi = twisted_polynomial(p, i)
    acc = phi
    for _ in range(n - 1):
        acc = phi.compose(acc)
    return acc


def corollary_family_check(p: int, i: int, n_max: int, cap: int = DEGREE_CAP) -> dict:
    """Orbit identity, constant-term valuations and Eisenstein iterates of phi_(p,i)."""
    if not 2 <= i <= p:
        raise ValueError("need 2 <= i <= p")
    ctx = context(p)
    z = ctx.zeta
    zi = ctx.zeta_power(i)
    fmap = twisted_phi(p, i)
    c0 = fmap(ctx.scalar(0))
    c1 = fmap(c0)
    orbit_identity = c0 == c1 == zi - z
    unit_twist = ctx.zeta_power(p - i) * c0 == 1 - ctx.zeta_power(p - i + 1)
    constant_vals = [ramified_valuation(iterate_exact(fmap, ctx.scalar(0), n)) for n in range(1, n_max + 1)]
    # mod (1 - zeta) the map is x^p, so every iterate reduces to x^(p^n)
    phi = twisted_polynomial(p, i)
    reduces_to_power = all(ramified_valuation(c) >= 1 for c in phi.coeffs[:-1]) and phi.lead == 1
    coverage = []
    for n in range(1, n_max + 1):
        if p ** n <= cap:
            g = expanded_iterate(p, i, n, cap)
            ok = eisenstein_check(g, "standard") and g.coeffs[0] == iterate_exact(fmap, ctx.scalar(0), n)
            coverage.append({"n": n, "degree": p ** n, "method": "expanded", "eisenstein": ok})
        else:
            ok = reduces_to_power and constant_vals[n - 1] == 1
            coverage.append({"n": n, "degree": p ** n, "method": "indirect", "eisenstein": ok})
    verdict = orbit_identity and unit_twist and all(v == 1 for v in constant_vals) \
        and all(c["eisenstein"] for c in coverage)
    return {
        "p": p,
        "i": i,
        "n_max": n_max,
        "orbit_identity": orbit_identity,
        "unit_twist_identity": unit_twist,
        "constant_term_valuations": constant_vals,
        "coverage": coverage,
        "verdict": verdict,
    }


def associate_valuations(p: int) -> dict[int, float]:
    """nu(1 - zeta^m) for m = 1..p-1; all equal to 1."""
    ctx = context(p)
    return {m: ramified_valuation(1 - ctx.zeta_power(m)) for m in range(1, p)}


def translation_family_check(p: int) -> list[dict]:
    """Translate x^p + (1 - zeta) by -zeta^i for every 2 <= i <= p."""
    ctx = context(p)
    f = CycPolynomial.from_list(p, [1 - ctx.zeta] + [0] * (p - 1) + [1])
    out = []
    for i in range(2, p + 1):
        ok, g = translate_check(f, -ctx.zeta_power(i))
        expected = CycPolynomial.from_list(p, [-ctx.zeta_power(i), 1]) ** p \
            + CycPolynomial.from_list(p, [2 - ctx.zeta])
        out.append({"i": i, "strong": eisenstein_check(f, "strong"), "translate": ok,
                    "matches_target": g == expected, "valuations": [v if v != math.inf else "inf" for v in g.valuations()]})
    return out
