"""Surjectivity certificates for phi_p(x) = (x - 1)^p + 2 - zeta_p.

Stage n fails to be maximal only if phi_p^n(1) = unit * y^p in Z[zeta_p].
Small n are excluded because the norm of phi_p^n(1) is not a p-th power;
large n are excluded by reducing modulo degree-one primes where the
critical orbit has settled into a cycle, and showing that no unit
class u = zeta^n0 * u_1^n1 * ... * u_t^nt makes v = u * y^p solvable.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import gmpy2

from .cyclotomic import CycInt, ResiduePrime, context, linear_prime, norm, reduce
from .dynamics import OrbitTrace, orbit_mod, unicritical_phi
from .finitefield import power_residue_solvable

DEFAULT_N_DIRECT = 7


def decimal(n: int) -> str:
    # gmpy2 avoids the interpreter's int->str digit limit
    return gmpy2.mpz(n).digits(10)


@dataclass(frozen=True)
class UnitBasis:
    """zeta_p together with generators of the free part of Z[zeta_p]^*."""

    p: int
    free_gens: tuple[CycInt, ...]

    def __post_init__(self):
        for u in self.free_gens:
            if abs(norm(u)) != 1:
                raise ValueError(f"{u} is not a unit")

    @property
    def torsion_gen(self) -> CycInt:
        return context(self.p).zeta

    @property
    def rank(self) -> int:
        return len(self.free_gens)

    @property
    def generators(self) -> tuple[CycInt, ...]:
        return (self.torsion_gen,) + self.free_gens

    def images(self, q: ResiduePrime) -> tuple[int, ...]:
        return tuple(reduce(g, q) for g in self.generators)

    def to_json(self) -> dict:
        return {"torsion": self.torsion_gen.to_json(), "free": [u.to_json() for u in self.free_gens]}


@lru_cache(maxsize=None)
def _builtin_data() -> dict:
    return json.loads(resources.files("arboreal.data").joinpath("unit_bases.json").read_text())


def builtin_unit_basis(p: int) -> UnitBasis:
    data = _builtin_data()
    if str(p) not in data:
        raise ValueError(f"no built-in unit basis for p={p}; supply one")
    ctx = context(p)
    return UnitBasis(p, tuple(ctx.element(c) for c in data[str(p)]["free"]))


def builtin_primes(p: int) -> list[ResiduePrime]:
    data = _builtin_data()
    if str(p) not in data:
        raise ValueError(f"no built-in prime list for p={p}")
    return [linear_prime(p, a, b) for a, b in data[str(p)]["primes"]]


@lru_cache(maxsize=None)
def critical_orbit(p: int, n: int) -> CycInt:
    """phi_p^n(1), cached along the orbit."""
    if n == 0:
        return context(p).scalar(1)
    return unicritical_phi(p)(critical_orbit(p, n - 1))


def is_perfect_power(n: int, k: int) -> bool:
    if n < 0:
        if k % 2 == 0:
            return False
        n = -n
    return bool(gmpy2.iroot(n, k)[1])


def norm_power_test(p: int, n: int, value: Optional[CycInt] = None) -> bool:
    """True iff |N(phi_p^n(1))| is not a perfect p-th power."""
    if n < 1:
        raise ValueError("stage n must be at least 1")
    x = critical_orbit(p, n) if value is None else value
    return not is_perfect_power(abs(norm(x)), p)


def norm_test_record(p: int, n: int) -> dict:
    N = norm(critical_orbit(p, n))
    power = is_perfect_power(abs(N), p)
    return {"n": n, "norm_decimal": decimal(N), "digits": len(decimal(abs(N))), "is_power": power}


def solvable(v: int, u: int, N: int, e: int) -> bool:
    """Is v = u * y^e solvable in F_N? (v = 0 is solvable with y = 0.)"""
    return power_residue_solvable(v, u, N, e)


def solvable_bruteforce(v: int, u: int, N: int, e: int) -> bool:
    v, u = v % N, u % N
    return v in {u * pow(y, e, N) % N for y in range(N)}


def unit_image(tuple_: Sequence[int], images: Sequence[int], N: int) -> int:
    acc = 1
    for e, g in zip(tuple_, images):
        acc = acc * pow(g, e, N) % N
    return acc


def _witness(v: int, u: int, N: int, e: int) -> dict:
    """Data showing v / u is not an e-th power class in F_N."""
    w = v * pow(u, -1, N) % N
    g = math.gcd(e, N - 1)
    return {"value": v, "ratio": w, "exponent": (N - 1) // g, "power": pow(w, (N - 1) // g, N)}


@dataclass
class PrimeStage:
    prime: ResiduePrime
    orbit: OrbitTrace
    values: list[int]
    unit_images: tuple[int, ...]
    survivors: list[tuple]

    def to_json(self) -> dict:
        return {
            "prime": self.prime.to_json(),
            "label": self.prime.label(),
            "orbit": self.orbit.to_json(),
            "relevant_values": list(self.values),
            "unit_images": list(self.unit_images),
            "survivor_count": len(self.survivors),
            "survivors": [list(t) for t in self.survivors],
        }


@dataclass
class MaximalityCertificate:
    p: int
    n_direct: int
    norm_tests: list[dict] = field(default_factory=list)
    eliminations: dict = field(default_factory=dict)
    stages: list[PrimeStage] = field(default_factory=list)
    survivors: list[tuple] = field(default_factory=list)
    irreducibility: dict = field(default_factory=dict)
    basis: Optional[UnitBasis] = None
    verdict: str = "inconclusive"

    def survivors_after(self, k: int) -> list[tuple]:
        return self.stages[k].survivors

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n_direct": self.n_direct,
            "unit_basis": self.basis.to_json() if self.basis else None,
            "irreducibility": self.irreducibility,
            "norm_tests": self.norm_tests,
            "stages": [s.to_json() for s in self.stages],
            "eliminations": [
                {"tuple": list(t), **rec} for t, rec in sorted(self.eliminations.items())
            ],
            "survivors": [list(t) for t in self.survivors],
            "verdict": self.verdict,
        }


def all_tuples(p: int, rank: int) -> list[tuple]:
    return list(itertools.product(range(p), repeat=rank + 1))


def tuple_elimination(p: int, basis: UnitBasis, primes: Sequence[ResiduePrime], n_min: int,
                      tuples: Optional[Sequence[tuple]] = None) -> MaximalityCertificate:
    fmap = unicritical_phi(p)
    cert = MaximalityCertificate(p=p, n_direct=n_min - 1, basis=basis)
    alive = list(tuples) if tuples is not None else all_tuples(p, basis.rank)
    for q in primes:
        orbit = orbit_mod(fmap, 1, q)
        if orbit.tail + len(orbit.cycle) > q.N + 1:
            raise ArithmeticError("no stabilization")
        values = orbit.values_from(n_min)
        images = basis.images(q)
        keep = []
        for t in alive:
            u = unit_image(t, images, q.N)
            if any(solvable(v, u, q.N, p) for v in values):
                keep.append(t)
            else:
                cert.eliminations[t] = {
                    "prime": {**q.to_json(), "label": q.label()},
                    "stabilization_n": orbit.tail,
                    "cycle": list(orbit.cycle),
                    "values": list(values),
                    "unit_image": u,
                    "solvable": False,
                    "witness": [_witness(v, u, q.N, p) for v in values],
                }
        cert.stages.append(PrimeStage(q, orbit, values, images, keep))
        alive = keep
    cert.survivors = alive
    return cert


def replay_elimination(p: int, basis: UnitBasis, t: tuple, record: dict, n_min: int) -> dict:
    """Recompute the elimination of tuple t from scratch and return the record it yields."""
    pr = record["prime"]
    q = linear_prime(p, pr["a"], pr["b"])
    orbit = orbit_mod(unicritical_phi(p), 1, q)
    values = orbit.values_from(n_min)
    u = unit_image(t, basis.images(q), q.N)
    if any(solvable(v, u, q.N, p) for v in values):
        raise AssertionError(f"tuple {t} is not eliminated by {q.label()}")
    return {
        "prime": {**q.to_json(), "label": q.label()},
        "stabilization_n": orbit.tail,
        "cycle": list(orbit.cycle),
        "values": list(values),
        "unit_image": u,
        "solvable": False,
        "witness": [_witness(v, u, q.N, p) for v in values],
    }


def search_primes(p: int, basis: UnitBasis, n_min: int, bound: int = 5,
                  max_primes: int = 12) -> list[ResiduePrime]:
    """Greedy choice of degree-one primes a + b*zeta (|a|, |b| <= bound) that shrink the survivor set."""
    candidates = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if b == 0:
                continue
            try:
                q = linear_prime(p, a, b)
            except ValueError:
                continue
            if q.ramified or any(c.N == q.N and c.root == q.root for c in candidates):
                continue
            candidates.append(q)
    candidates.sort(key=lambda q: (q.N, q.root))
    chosen: list[ResiduePrime] = []
    alive = all_tuples(p, basis.rank)
    for q in candidates:
        if not alive or len(chosen) >= max_primes:
            break
        cert = tuple_elimination(p, basis, [q], n_min, tuples=alive)
        if cert.stages[0].orbit.tail > n_min:
            continue
        if len(cert.survivors) < len(alive):
            chosen.append(q)
            alive = cert.survivors
    return chosen


def xy_classes(survivors: Sequence[tuple]) -> set[tuple[int, int]]:
    """(i + k, j + 2k) mod 7 for p = 7 tuples (i, j, k)."""
    return {((i + k) % 7, (j + 2 * k) % 7) for i, j, k in survivors}


def verify_theorem1(p: int, n_direct: int = DEFAULT_N_DIRECT, basis: Optional[UnitBasis] = None,
                    primes: Optional[Sequence[ResiduePrime]] = None,
                    eisenstein_nmax: int = 2) -> MaximalityCertificate:
    from .eisenstein import corollary_family_check

    basis = basis or builtin_unit_basis(p)
    primes = list(primes) if primes is not None else builtin_primes(p)
    norm_tests = [norm_test_record(p, n) for n in range(1, n_direct + 1)]
    cert = tuple_elimination(p, basis, primes, n_direct + 1)
    cert.norm_tests = norm_tests
    eis = corollary_family_check(p, p, eisenstein_nmax)
    cert.irreducibility = {
        "statement": "every iterate of phi_p is Eisenstein at (1 - zeta_p)",
        "check": "eisenstein.corollary_family_check(p, i=p)",
        "holds": eis["verdict"],
        "coverage": eis["coverage"],
    }
    direct_ok = all(not r["is_power"] for r in norm_tests)
    coverage_ok = all(rec["stabilization_n"] <= n_direct + 1 for rec in cert.eliminations.values())
    if direct_ok and coverage_ok and not cert.survivors and eis["verdict"]:
        cert.verdict = "surjective"
    return cert
