"""Stage-by-stage certificates for phi_p(x) = (x - p)^2 + 2p - p^2 over Q.

A stage n >= 2 can fail to be maximal only if phi_p^n(p) = p * y^2. For
n = 2, 3 that value is p times C1(p), C2(p) and is tested directly. For
n >= 4 the orbit of p modulo a small modulus m falls into a cycle none of
whose values lies in p * (Z/m)^2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence

import gmpy2

from .dynamics import OrbitTrace, iterate_exact, orbit_mod, quadratic_f, quadratic_phi
from .hyperelliptic import C1, C2, X1, X2, HyperCurve, jacobian_order

PUBLISHED_EXCEPTIONAL = (229, 1009, 1093, 1321, 1453, 3169, 3229, 3301, 3529, 4153, 4261, 4621, 4789)
PUBLISHED_MODULI = {
    229: 16, 1093: 16, 1453: 16, 3229: 16, 3301: 16, 4261: 16, 4621: 16, 4789: 16,
    1009: 19, 3529: 19, 1321: 17, 3169: 53, 4153: 31,
}
ASSUMPTIONS = [
    "phi_p^n is irreducible over Q for all n (cited, not re-proved)",
    "phi_p^n(p) is not a rational square for any n >= 0 (cited, not re-proved)",
    "stage n is maximal unless phi_p^n(p) = p * y^2 (orbit of 0 is {2p})",
]
TAIL_LIMIT = 4
GAP_LIMIT = 8


def is_square(n: int) -> bool:
    return n >= 0 and bool(gmpy2.is_square(n))


@lru_cache(maxsize=None)
def squares_mod(m: int) -> frozenset[int]:
    return frozenset(y * y % m for y in range(m))


def obstructed(v: int, r: int, m: int) -> Optional[int]:
    """None if v = r*y^2 (mod m) has no solution, else a witness y."""
    v %= m
    for y in range(m):
        if r * y * y % m == v:
            return y
    return None


def is_obstructed(v: int, r: int, m: int) -> bool:
    rs = {r * s % m for s in squares_mod(m)}
    return v % m not in rs


# -- direct tests -------------------------------------------------------------

def phi_value(p: int, n: int) -> int:
    return iterate_exact(quadratic_phi(p), p, n)


def square_refinement_test(p: int, n: int, value: Optional[int] = None) -> bool:
    """True when phi_p^n(p) = p * y^2 is impossible."""
    if n < 2:
        raise ValueError("n must be at least 2")
    v = phi_value(p, n) if value is None else value
    if v <= 0 or v % p:
        return True
    return not is_square(v // p)


def direct_check(p: int, n: int) -> dict:
    v = phi_value(p, n)
    q, r = divmod(v, p)
    return {"n": n, "value": str(v), "quotient": str(q) if r == 0 else None,
            "is_square": r == 0 and is_square(q)}


# Integer polynomials in the variable p, lowest degree first.

def _padd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def symbolic_iterate(n: int, shift: Sequence[int], const: Sequence[int]) -> list[int]:
    """x_n as a polynomial in p where x_0 = p and x_{k+1} = (x_k - shift)^2 + const."""
    x = [0, 1]
    neg_shift = [-c for c in shift]
    for _ in range(n):
        d = _padd(x, neg_shift)
        x = _padd(_pmul(d, d), list(const))
    return x


def curve_correspondence_check(p: int, n: int, primes: Optional[Iterable[int]] = None) -> dict:
    """phi_p^n(p) / p = F_n(p) with F_2, F_3 the models of C1, C2."""
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    curve = C1 if n == 2 else C2
    sym = symbolic_iterate(n, [0, 1], [0, 2, -1])
    target = _pmul([0, 1], list(curve.f))
    if sym != target:
        raise ArithmeticError(f"polynomial identity fails for n={n}")
    sample = list(primes) if primes is not None else _first_odd_primes(50)
    for q in sample:
        if phi_value(q, n) != q * _eval(curve.f, q):
            raise ArithmeticError(f"identity fails at p={q}, n={n}")
    v = phi_value(p, n)
    return {"p": p, "n": n, "curve": curve.name, "identity": True, "sampled": len(sample),
            "value": str(v), "curve_value": str(_eval(curve.f, p))}


def _eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _first_odd_primes(k: int) -> list[int]:
    out, n = [], 3
    while len(out) < k:
        if gmpy2.is_prime(n):
            out.append(n)
        n += 2
    return out


# -- congruence rules -------------------------------------------------------------

@dataclass(frozen=True)
class ResidueClaim:
    residue: int
    cycle: tuple[int, ...]
    n0: int


@dataclass(frozen=True)
class CaseRule:
    name: str
    modulus: int
    classes: tuple[ResidueClaim, ...]

    def covers(self, p: int) -> Optional[ResidueClaim]:
        for c in self.classes:
            if p % self.modulus == c.residue:
                return c
        return None

    def to_json(self) -> dict:
        return {"name": self.name, "modulus": self.modulus,
                "classes": [{"residue": c.residue, "cycle": list(c.cycle), "n0": c.n0} for c in self.classes]}

    @classmethod
    def from_json(cls, data: dict) -> "CaseRule":
        return cls(data["name"], int(data["modulus"]),
                   tuple(ResidueClaim(int(c["residue"]), tuple(c["cycle"]), int(c["n0"])) for c in data["classes"]))


@lru_cache(maxsize=None)
def case_rules() -> tuple[CaseRule, ...]:
    data = json.loads(resources.files("arboreal.data").joinpath("case_rules.json").read_text())
    return tuple(CaseRule.from_json(r) for r in data)


def residue_orbit(r: int, m: int) -> OrbitTrace:
    """Orbit of r under x -> (x - r)^2 + 2r - r^2 modulo m."""
    return orbit_mod(quadratic_phi(r % m).reduce(m), r % m, m)


@dataclass
class RuleCheck:
    rule: str
    ok: bool
    results: list[dict] = field(default_factory=list)
    failure: Optional[dict] = None


def congruence_case_check(rule: CaseRule) -> RuleCheck:
    m = rule.modulus
    out = RuleCheck(rule.name, True)
    for claim in rule.classes:
        orbit = residue_orbit(claim.residue, m)
        cyc_ok = sorted(orbit.cycle) == sorted(claim.cycle) and orbit.tail <= claim.n0
        witness = None
        for v in orbit.cycle:
            y = obstructed(v, claim.residue, m)
            if y is not None:
                witness = {"r": claim.residue, "v": v, "y": y}
                break
        entry = {"residue": claim.residue, "tail": orbit.tail, "cycle": list(orbit.cycle),
                 "claimed_cycle": list(claim.cycle), "n0": claim.n0,
                 "cycle_matches": cyc_ok, "obstructed": witness is None}
        out.results.append(entry)
        if not cyc_ok or witness is not None:
            out.ok = False
            if out.failure is None:
                out.failure = witness or {"r": claim.residue, "cycle": list(orbit.cycle), "tail": orbit.tail}
    return out


def mod13_value_reading() -> dict:
    """The value claimed for p = 2, 3 (mod 13) checked modulo 13 and modulo 11."""
    out = {}
    for r, v in ((2, 4), (3, 6)):
        orbit = residue_orbit(r, 13)
        mod13 = list(orbit.cycle) == [v]
        # p = r (mod 13) fixes nothing modulo 11; the mod-11 reading holds only if
        # every class s mod 11 lands on v, which it does not
        mod11 = all(residue_orbit(s, 11).cycle == (v,) for s in range(1, 11))
        out[r] = {"value": v, "holds_mod_13": mod13, "holds_mod_11_for_all_classes": mod11}
    return out


def mod11_obstruction() -> dict:
    """For p = 2 (mod 11): is 4 in 2*(F_11^*)^2, and is 2 a square in F_11?"""
    sq = {s for s in squares_mod(11) if s}
    return {"4_in_2_times_squares": 4 in {2 * s % 11 for s in sq}, "2_is_square": 2 in sq}


# -- per-prime certificates -------------------------------------------------------------

@dataclass
class QuadCertificate:
    p: int
    direct_checks: list[dict]
    rule: str
    modulus: Optional[int]
    tail: Optional[int]
    cycle: list[int]
    obstruction: dict
    verdict: str
    assumptions: list[str] = field(default_factory=lambda: list(ASSUMPTIONS))

    def to_json(self) -> dict:
        return {"p": self.p, "rule": self.rule, "modulus": self.modulus, "tail": self.tail,
                "cycle": self.cycle, "direct_checks": self.direct_checks,
                "obstruction": self.obstruction, "verdict": self.verdict,
                "assumptions": self.assumptions}


def default_pool(limit: int = 100) -> list[int]:
    """Primes up to limit together with the 2-power moduli 4 and 16."""
    return sorted({q for q in range(3, limit + 1) if gmpy2.is_prime(q)} | {4, 16})


def try_modulus(p: int, m: int, gap_limit: int = GAP_LIMIT) -> Optional[dict]:
    """Local argument modulo m: cycle values obstructed and tail covered."""
    orbit = residue_orbit(p, m)
    if orbit.tail > gap_limit:
        return None
    if not all(is_obstructed(v, p, m) for v in orbit.cycle):
        return None
    gap = [n for n in range(TAIL_LIMIT, orbit.tail)]
    gap_ok = all(square_refinement_test(p, n) for n in gap)
    if not gap_ok:
        return None
    return {"modulus": m, "tail": orbit.tail, "cycle": list(orbit.cycle), "gap_checked": gap,
            "residues_p_times_squares": sorted({p * s % m for s in squares_mod(m)})}


def _direct(p: int, upto: int = 3) -> list[dict]:
    return [direct_check(p, n) for n in range(2, upto + 1)]


def modulus_search_certify(p: int, modulus_pool: Optional[Sequence[int]] = None) -> QuadCertificate:
    pool = list(modulus_pool) if modulus_pool is not None else default_pool()
    direct = _direct(p)
    direct_ok = not any(d["is_square"] for d in direct)
    # short tails first; gap coverage by exact checks only as a fallback
    for limit in (TAIL_LIMIT, GAP_LIMIT):
        for m in pool:
            res = try_modulus(p, m, gap_limit=limit)
            if res is not None:
                verdict = "surjective" if direct_ok else "inconclusive"
                return QuadCertificate(p, direct, "search", m, res["tail"], res["cycle"], res, verdict)
    return QuadCertificate(p, direct, "search", None, None, [], {}, "inconclusive")


def rule_certify(p: int, rules: Optional[Sequence[CaseRule]] = None) -> Optional[QuadCertificate]:
    for rule in rules or case_rules():
        claim = rule.covers(p)
        if claim is None:
            continue
        res = try_modulus(p, rule.modulus)
        direct = _direct(p)
        ok = res is not None and res["tail"] <= max(TAIL_LIMIT, claim.n0) \
            and sorted(res["cycle"]) == sorted(claim.cycle) and not any(d["is_square"] for d in direct)
        return QuadCertificate(p, direct, rule.name, rule.modulus,
                               res["tail"] if res else None, res["cycle"] if res else [],
                               res or {}, "surjective" if ok else "inconclusive")
    return None


def excluded_two() -> QuadCertificate:
    # phi_2 = (x - 2)^2 is a square, so the tower degenerates at the first stage
    return QuadCertificate(2, [], "excluded", None, None, [], {"reason": "phi_2 = (x - 2)^2 is reducible"},
                           "not-applicable", [])


def certify(p: int) -> QuadCertificate:
    if p == 2:
        return excluded_two()
    return rule_certify(p) or modulus_search_certify(p)


def replay(cert: QuadCertificate) -> bool:
    """Recompute a certificate from p alone and compare the serialized forms."""
    again = rule_certify(cert.p) if cert.rule != "search" else modulus_search_certify(cert.p)
    return again is not None and again.to_json() == cert.to_json()


@dataclass
class SweepReport:
    p_max: int
    certificates: list[QuadCertificate]
    published_moduli: dict[int, dict]

    @property
    def exceptional(self) -> list[int]:
        return [c.p for c in self.certificates if c.rule == "search"]

    @property
    def in_scope(self) -> list[QuadCertificate]:
        return [c for c in self.certificates if c.rule != "excluded"]

    @property
    def certified(self) -> int:
        return sum(c.verdict == "surjective" for c in self.certificates)

    @property
    def all_certified(self) -> bool:
        return all(c.verdict == "surjective" for c in self.in_scope)

    @property
    def status(self) -> str:
        return "OK" if self.all_certified else "FAILURE"

    def to_json(self) -> dict:
        return {
            "p_max": self.p_max,
            "count": len(self.certificates),
            "certified": self.certified,
            "excluded": [c.p for c in self.certificates if c.rule == "excluded"],
            "status": self.status,
            "exceptional": self.exceptional,
            "published_exceptional_match": (self.exceptional == list(PUBLISHED_EXCEPTIONAL)
                                        if self.p_max == 5000 else None),
            "published_moduli": {str(k): v for k, v in sorted(self.published_moduli.items())},
            "certificates": [
                {"p": c.p, "rule": c.rule, "modulus": c.modulus, "tail": c.tail,
                 "cycle": c.cycle, "verdict": c.verdict}
                for c in self.certificates
            ],
        }


def primes_below(n: int) -> list[int]:
    return [q for q in range(2, n) if gmpy2.is_prime(q)]


def sweep(p_max: int = 5000) -> SweepReport:
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    certs = [certify(p) for p in primes_below(p_max)]
    published = {}
    for c in certs:
        if c.p in PUBLISHED_MODULI:
            m = PUBLISHED_MODULI[c.p]
            res = try_modulus(c.p, m)
            published[c.p] = {"modulus": m, "works": res is not None,
                          "tail": res["tail"] if res else None, "cycle": res["cycle"] if res else None}
    return SweepReport(p_max, certs, published)


# -- the f_p variant -------------------------------------------------------------

def f_value(p: int, n: int) -> int:
    return iterate_exact(quadratic_f(p), p, n)


def proposition_f_check(p: int) -> dict:
    fmap = quadratic_f(p)
    orbit0 = []
    x = fmap(0)
    while x not in orbit0:
        orbit0.append(x)
        x = fmap(x)
    parity = {}
    for n in range(2, 8):
        v = f_value(p, n)
        # eps1 = 0 when the value is odd, eps2 = 0 when p does not divide it
        parity[n] = {"odd": v % 2 == 1, "divisible_by_p": v % p == 0}
    parity_ok = all(parity[n]["odd"] for n in parity if n % 2 == 0) and \
        all(not parity[n]["divisible_by_p"] for n in parity if n % 2 == 1)
    x1_identity = symbolic_iterate(2, [0, 1], [-1, 0, -1]) == _pmul([0, 1], list(X1.f))
    x2_identity = symbolic_iterate(3, [0, 1], [-1, 0, -1]) == list(X2.f)
    v2, v3 = f_value(p, 2), f_value(p, 3)
    direct = {
        2: {"value": str(v2), "form": "p*y^2", "solvable": v2 % p == 0 and is_square(v2 // p)},
        3: {"value": str(v3), "form": "2*y^2", "solvable": v3 % 2 == 0 and is_square(v3 // 2)},
    }
    stage3 = parity_ok and x1_identity and x2_identity and not direct[2]["solvable"] \
        and not direct[3]["solvable"]
    out = {
        "p": p,
        "orbit_of_zero": orbit0,
        "parity": {str(k): v for k, v in parity.items()},
        "parity_ok": parity_ok,
        "X1_identity": x1_identity,
        "X2_identity": x2_identity,
        "direct": {str(k): v for k, v in direct.items()},
        "stage3": stage3,
        "full": None,
    }
    if p % 5 == 2:
        orbit = orbit_mod(fmap.reduce(5), p % 5, 5)
        values = orbit.values_from(2)
        blocked = all(is_obstructed(v, 2, 5) and is_obstructed(v, p, 5) for v in values)
        out["full"] = {"modulus": 5, "tail": orbit.tail, "cycle": list(orbit.cycle),
                       "values_from_2": values, "obstructed": blocked,
                       "verdict": "surjective" if blocked and stage3 else "inconclusive"}
    out["verdict"] = "surjective" if out["full"] and out["full"]["verdict"] == "surjective" else (
        "stage3" if stage3 else "inconclusive")
    return out


def x2_torsion_check() -> dict:
    """#J(X2) over F_3 and F_5 and their gcd."""
    n3, _ = jacobian_order(X2, 3)
    n5, _ = jacobian_order(X2, 5)
    from math import gcd
    return {"F3": n3, "F5": n5, "gcd": gcd(n3, n5)}


def curve_for(name: str) -> HyperCurve:
    return {"C1": C1, "C2": C2, "X1": X1, "X2": X2}[name]
