"""Certified evaluation of the effective index bound for phi_p over Q(zeta_p).

Everything is carried in interval arithmetic (mpmath.iv) and in log space;
the crude height bound is p raised to an exponent in the millions even
at p = 3 and is never materialised.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from math import isqrt
from typing import Optional

import mpmath
from mpmath import iv

from .cyclotomic import CycInt, context
from .dynamics import UnicriticalMap, delta_map

PUBLISHED_N_BOUND = {3: 20031664}
MIN_PRECISION = 30


@contextmanager
def _dps(digits: int):
    # iv has no workdps of its own
    old = iv.dps
    iv.dps = digits
    try:
        yield
    finally:
        iv.dps = old


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    r = isqrt(n - 1) + 1
    return r


def discriminant(p: int) -> int:
    """(-1)^((p-1)/2) p^(p-2)."""
    return (-1) ** ((p - 1) // 2) * p ** (p - 2)


def s_bound(p: int) -> int:
    """(p - 1) + ceil(p |D_p|^(1/2))."""
    return (p - 1) + _ceil_sqrt(p * p * abs(discriminant(p)))


def rank_bound(p: int) -> int:
    return (p - 1) // 2 - 1 + _ceil_sqrt(p * p * abs(discriminant(p)))


def lo(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[0])


def hi(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[1])


def _endpoints(x) -> list[str]:
    return [mpmath.nstr(lo(x), iv.dps), mpmath.nstr(hi(x), iv.dps)]


def crude_exponent(p: int):
    """Exponent E with the crude bound h <= p^E."""
    P = iv.mpf(p)
    h = iv.mpf(p) / 2
    return (16 * P ** (h + 9) + 14 * P ** (h + 7) + 84 * P ** (h + 6)
            + iv.mpf(3) / 2 * P ** (h + 5) + 2 * P ** 5 - 4 * P ** 4)


def height_lower_bound_S(d: int, field_degree: int, C_phi=0):
    """S_phi = 12 [K:Q] 2^([K:Q]^2) (1 + C_phi)^([K:Q]^2 + [K:Q]) and log(1/d^S_phi)."""
    if d < 2 or field_degree < 1:
        raise ValueError("need d >= 2 and field degree >= 1")
    k = field_degree
    C = iv.mpf(C_phi) if not isinstance(C_phi, type(iv.mpf(0))) else C_phi
    if lo(C) < 0:
        raise ValueError("C_phi must be non-negative")
    S = 12 * k * iv.mpf(2) ** (k * k) * (1 + C) ** (k * k + k)
    return S, -S * iv.log(d)


@dataclass
class BoundReport:
    p: int
    D_p: int
    s_bound: int
    rank_bound: int
    hbar_bound: object
    crude_log: object
    S_phi: object
    n_bound: int
    precision: int
    n_bound_published: Optional[int] = None
    exclusion: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def discrepancy(self) -> Optional[bool]:
        if self.n_bound_published is None:
            return None
        return self.n_bound != self.n_bound_published

    def to_json(self) -> dict:
        with _dps(self.precision):
            return {
                "p": self.p,
                "D_p": str(self.D_p),
                "s_bound": self.s_bound,
                "rank_bound": self.rank_bound,
                "hbar_bound": _endpoints(self.hbar_bound),
                "crude_log_base_p": _endpoints(self.crude_log),
                "S_phi": _endpoints(self.S_phi),
                "n_bound": self.n_bound,
                "n_bound_published": self.n_bound_published,
                "discrepancy": self.discrepancy,
                "exclusion": self.exclusion,
                "precision": self.precision,
                "notes": self.notes,
            }


def _certified_ceil(x) -> int:
    with mpmath.workprec(iv.prec):
        a, b = int(mpmath.ceil(lo(x))), int(mpmath.ceil(hi(x)))
    if a != b:
        raise ArithmeticError("raise precision")
    return b


def bound_report(p: int, precision: int = 50) -> BoundReport:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} digits")
    D = context(p).discriminant
    if D != discriminant(p):
        raise ArithmeticError("discriminant mismatch")
    s, r = s_bound(p), rank_bound(p)
    with _dps(precision):
        log2 = iv.log(2)
        hbar = (p - 1) * r * iv.log(abs(D)) + (p * (p - 1) + 1) * log2
        E = crude_exponent(p)
        C_phi = iv.log(4)
        S, _ = height_lower_bound_S(p, p - 1, C_phi)
        total = E + S + 2
        n_bound = _certified_ceil(total)
        exclusion = exclusion_check(p, E, S, n_bound)
    notes = ["hbar bound evaluated with log|D_p| since D_p may be negative"]
    rep = BoundReport(p, D, s, r, hbar, E, S, n_bound, precision, PUBLISHED_N_BOUND.get(p), exclusion, notes)
    if rep.discrepancy:
        rep.notes.append(f"computed n_bound {n_bound} differs from the published {rep.n_bound_published}")
    return rep


def exclusion_check(p: int, E, S, n_bound: int) -> dict:
    """Check that the lower bound 1/p^S rules out every n > n_bound.

    With hhat(0) >= p^-S, a non-maximal stage n forces
    (n - 1 - S) log p <= log(p^E + log 8). We check the reverse strict
    inequality at n = n_bound + 1, entirely in log space.
    """
    logp = iv.log(p)
    rhs = E * logp + iv.log(1 + iv.log(8) * iv.exp(-E * logp))
    lhs = (n_bound - S) * logp
    return {"n": n_bound + 1, "excluded": bool(lo(lhs) > hi(rhs)),
            "lhs": mpmath.nstr(lo(lhs), 20), "rhs": mpmath.nstr(hi(rhs), 20)}


# -- heights ------------------------------------------------------------------------

def embeddings(p: int):
    """Interval values of zeta_p^j under zeta -> exp(2 pi i k / p), k = 1 .. p - 1."""
    out = []
    for k in range(1, p):
        row = []
        for j in range(p - 1):
            t = 2 * iv.pi * k * j / p
            row.append((iv.cos(t), iv.sin(t)))
        out.append(row)
    return out


def weil_height(x: CycInt):
    """Absolute logarithmic height of an algebraic integer in Q(zeta_p), as an interval."""
    p = x.ctx.p
    total = iv.mpf(0)
    for row in embeddings(p):
        re = iv.mpf(0)
        im = iv.mpf(0)
        for c, (cr, ci) in zip(x.coeffs, row):
            if c:
                re += c * cr
                im += c * ci
        sq = re * re + im * im
        a = max(mpmath.mpf(1), lo(sq))
        b = max(mpmath.mpf(1), hi(sq))
        total += iv.log(iv.mpf([a, b])) / 2
    return total / (p - 1)


@dataclass
class HeightEstimate:
    interval: object
    preperiodic: bool
    n_iter: int
    samples: list = field(default_factory=list)

    @property
    def lower(self) -> mpmath.mpf:
        return lo(self.interval)

    @property
    def upper(self) -> mpmath.mpf:
        return hi(self.interval)

    @property
    def width(self) -> mpmath.mpf:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {"interval": [mpmath.nstr(self.lower, 20), mpmath.nstr(self.upper, 20)],
                "preperiodic": self.preperiodic, "n_iter": self.n_iter}


def canonical_height_estimate(fmap: UnicriticalMap, x0=0, n_iter: int = 6, precision: int = 50,
                              C=None) -> HeightEstimate:
    """Interval for hhat(x0): h(f^n(x0))/d^n +- C/d^n with C = log 4 by default."""
    if n_iter < 3:
        raise ValueError("n_iter must be at least 3")
    p = fmap.c.ctx.p if isinstance(fmap.c, CycInt) else fmap.gamma.ctx.p
    ctx = context(p)
    x = x0 if isinstance(x0, CycInt) else ctx.scalar(x0)
    d = fmap.degree
    seen = {x}
    orbit = [x]
    for _ in range(n_iter):
        x = fmap(x)
        if x in seen:
            with _dps(precision):
                return HeightEstimate(iv.mpf(0), True, n_iter)
        seen.add(x)
        orbit.append(x)
    with _dps(precision):
        Cv = iv.log(4) if C is None else iv.mpf(C)
        samples = [weil_height(orbit[n]) / iv.mpf(d) ** n for n in range(1, n_iter + 1)]
        a = samples[-1]
        eps = Cv / iv.mpf(d) ** n_iter
        interval = iv.mpf([lo(a - eps), hi(a + eps)])
        return HeightEstimate(interval, False, n_iter, samples)


def delta_height(p: int = 3, n_iter: int = 6, precision: int = 50) -> HeightEstimate:
    return canonical_height_estimate(delta_map(p), 0, n_iter, precision)
