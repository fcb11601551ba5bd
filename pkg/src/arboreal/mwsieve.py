"""Mordell-Weil sieve for the genus-3 curve C2 : y^2 = x^7 - 4x^6 + 4x^5 + 2x^4 - 4x^3 + 2.

Everything here is finite bookkeeping over F_q: torsion triviality from
coprime local orders, index checks for the generator subgroup G = <P0, Q0>,
the residue-class split induced by a reduced annihilating differential, and
the CRT sieve over a set of auxiliary primes. The analytic inputs (the
descent rank bound, the reduced Chabauty differential, and the bound of one
rational point in each class where that differential does not vanish) are
recorded as assumptions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from . import finitefield as ff
from .hyperelliptic import (
    C2,
    INFINITY,
    HyperCurve,
    enumerate_jacobian,
    enumerate_points,
    jacobian,
    jacobian_order,
    subgroup_probe,
)

ASSUMPTIONS = [
    "rank J(Q) <= 2 (2-descent; not re-derived)",
    "rational torsion injects into J(F_q) for odd q of good reduction",
    "alpha_{S'}(G) = alpha_{S'}(J(Q)) follows from the index checks for l in S",
    "reduced differential is supplied as input, not computed",
    "a residue class where the reduced differential does not vanish holds at most one rational point",
]


@dataclass(frozen=True)
class RationalDivisor:
    """Mumford pair (u, v) with rational coefficients, low degree first."""

    u: tuple
    v: tuple
    label: str = ""

    @classmethod
    def from_point(cls, x, y, label: str = "") -> "RationalDivisor":
        return cls((-Fraction(x), Fraction(1)), (Fraction(y),), label)

    def reduce(self, curve: HyperCurve, q: int):
        jac = jacobian(curve, q)
        return jac.from_rational(self.u, self.v)

    def to_json(self) -> dict:
        return {"u": [str(c) for c in self.u], "v": [str(c) for c in self.v]}

    @classmethod
    def from_json(cls, data: dict, label: str = "") -> "RationalDivisor":
        return cls(tuple(Fraction(c) for c in data["u"]), tuple(Fraction(c) for c in data["v"]), label)


@dataclass
class SieveConfig:
    curve: HyperCurve
    generators: list[RationalDivisor]
    index_sets: dict[int, list[int]]
    sieve_primes: list[int]
    target_prime: int
    targets: list
    differential: list[int] = field(default_factory=list)
    torsion_primes: tuple[int, int] = (3, 11)

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "generators": {g.label: g.to_json() for g in self.generators},
            "index_sets": {str(k): v for k, v in sorted(self.index_sets.items())},
            "sieve_primes": list(self.sieve_primes),
            "target_prime": self.target_prime,
            "targets": [_point_json(t) for t in self.targets],
            "differential": list(self.differential),
            "torsion_primes": list(self.torsion_primes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SieveConfig":
        return cls(
            curve=HyperCurve.from_json(data["curve"], name=data["curve"].get("name", "")),
            generators=[RationalDivisor.from_json(g, label) for label, g in data["generators"].items()],
            index_sets={int(k): [int(x) for x in v] for k, v in data["index_sets"].items()},
            sieve_primes=[int(x) for x in data["sieve_primes"]],
            target_prime=int(data["target_prime"]),
            targets=[_point_from_json(t) for t in data["targets"]],
            differential=[int(c) for c in data.get("differential", [])],
            torsion_primes=tuple(data.get("torsion_primes", (3, 11))),
        )


def _point_json(pt):
    return pt if isinstance(pt, str) else list(pt)


def _point_from_json(pt):
    return pt if isinstance(pt, str) else tuple(int(c) for c in pt)


def c2_preset() -> SieveConfig:
    data = json.loads(resources.files("arboreal.data").joinpath("sieve_C2.json").read_text())
    return SieveConfig.from_json(data)


# -- torsion and index ----------------------------------------------------------

def torsion_gcd_check(curve: HyperCurve, q1: int, q2: int) -> dict:
    n1, _ = jacobian_order(curve, q1)
    n2, _ = jacobian_order(curve, q2)
    g = math.gcd(n1, n2)
    return {"q": [q1, q2], "orders": [n1, n2], "gcd": g, "trivial_torsion": g == 1}


@lru_cache(maxsize=None)
def ell_multiples_bruteforce(curve: HyperCurve, q: int, ell: int) -> frozenset:
    """lJ(F_q) as the image {l*D : D in J(F_q)}."""
    jac = jacobian(curve, q)
    return frozenset(jac.mul(ell, D) for D in enumerate_jacobian(curve, q))


class EllMultipleTest:
    """Exact membership test for lJ(F_q) via the l-Sylow subgroup.

    With #J = l^a * m and gcd(l, m) = 1, J splits as J_l + J' with l
    invertible on J', so x lies in lJ iff m*x lies in l*J_l. J_l is
    generated from m*D over enumerated D until its size reaches l^a.
    """

    def __init__(self, curve: HyperCurve, q: int, ell: int):
        self.jac = jacobian(curve, q)
        elements = enumerate_jacobian(curve, q)
        self.order = len(elements)
        self.ell = ell
        a, m = 0, self.order
        while m % ell == 0:
            m //= ell
            a += 1
        self.sylow_exponent, self.cofactor = a, m
        jac = self.jac
        sylow = {jac.zero}
        target = ell ** a
        for D in elements:
            if len(sylow) == target:
                break
            y = jac.mul(m, D)
            if y in sylow:
                continue
            grown = set(sylow)
            step = y
            while step not in sylow:
                grown.update(jac.add(h, step) for h in sylow)
                step = jac.add(step, y)
            sylow = grown
        if len(sylow) != target:
            raise ArithmeticError("failed to generate the l-Sylow subgroup")
        self.sylow = frozenset(sylow)
        self.sylow_multiples = frozenset(jac.mul(ell, h) for h in sylow)

    def __contains__(self, D) -> bool:
        if self.sylow_exponent == 0:
            return True
        return self.jac.mul(self.cofactor, D) in self.sylow_multiples

    @property
    def index(self) -> int:
        """[J : lJ]."""
        return len(self.sylow) // len(self.sylow_multiples)


@lru_cache(maxsize=None)
def ell_multiple_test(curve: HyperCurve, q: int, ell: int) -> EllMultipleTest:
    return EllMultipleTest(curve, q, ell)


def index_injectivity_check(curve: HyperCurve, ell: int, primes: Sequence[int],
                            generators: Sequence[RationalDivisor]) -> dict:
    """Is G/lG -> prod_{l' in S_l} J(F_l')/lJ(F_l') injective?"""
    reduced = {}
    tests = {}
    for q in primes:
        curve.require_good_reduction(q)
        reduced[q] = [g.reduce(curve, q) for g in generators]
        tests[q] = ell_multiple_test(curve, q, ell)
    witnesses = {}
    ok = True
    for coeffs in _nonzero_vectors(ell, len(generators)):
        hit = None
        for q in primes:
            D = jacobian(curve, q).combination(coeffs, reduced[q])
            if D not in tests[q]:
                hit = q
                break
        if hit is None:
            ok = False
            witnesses[",".join(map(str, coeffs))] = None
        else:
            witnesses[",".join(map(str, coeffs))] = hit
    return {
        "ell": ell,
        "primes": list(primes),
        "local_indices": {str(q): tests[q].index for q in primes},
        "injective": ok,
        "separating_prime": witnesses,
    }


def _nonzero_vectors(ell: int, n: int):
    from itertools import product
    for v in product(range(ell), repeat=n):
        if any(v):
            yield v


# -- Chabauty residue classes ----------------------------------------------------

def chabauty_residue_classifier(curve: HyperCurve, q: int, numerator: Sequence[int]) -> dict:
    """Split C(F_q) by whether the reduced differential's numerator vanishes at x.

    At infinity the differential x^i dx/2y has order 2g-2-2i; only a zero
    numerator makes it vanish identically there.
    """
    curve.require_good_reduction(q)
    num = ff.poly_mod_coeffs(numerator, q)
    multi, single = [], []
    for pt in enumerate_points(curve, q):
        if isinstance(pt, str):
            top = len(num) - 1
            vanishes = not num or (2 * curve.genus - 2 - 2 * top) > 0
        else:
            vanishes = ff.evaluate(num, pt[0], q) == 0
        (multi if vanishes else single).append(pt)
    return {"q": q, "numerator": list(numerator), "potentially_multi": multi, "at_most_one": single}


# -- the sieve --------------------------------------------------------------------

def _abel_jacobi(jac, pt):
    if isinstance(pt, str):
        return jac.zero
    return jac.from_point(*pt)


@dataclass
class LocalData:
    q: int
    orders: tuple[int, int]
    solutions: frozenset  # pairs (a mod orders[0], b mod orders[1])


def _local_setup(curve, q, gens):
    jac = jacobian(curve, q)
    P, Q = (g.reduce(curve, q) for g in gens)
    return jac, P, Q, jac.order_of(P), jac.order_of(Q)


def local_solutions(curve: HyperCurve, q: int, gens: Sequence[RationalDivisor], targets) -> LocalData:
    """{(a, b) : a*P + b*Q lands in iota(targets)} with a, b taken modulo the local orders.

    For each a and target t the unique b (mod ord Q) with b*Q = t - a*P is
    looked up in a table of multiples of Q.
    """
    jac, P, Q, oP, oQ = _local_setup(curve, q, gens)
    logQ = {}
    acc = jac.zero
    for b in range(oQ):
        logQ[acc] = b
        acc = jac.add(acc, Q)
    wanted = [_abel_jacobi(jac, t) for t in targets]
    sols = set()
    negaP = jac.zero
    negP = jac.neg(P)
    for a in range(oP):
        for w in wanted:
            b = logQ.get(jac.add(w, negaP))
            if b is not None:
                sols.add((a, b))
        negaP = jac.add(negaP, negP)
    return LocalData(q, (oP, oQ), frozenset(sols))


def local_solutions_pairs(curve: HyperCurve, q: int, gens: Sequence[RationalDivisor], targets) -> LocalData:
    """Direct enumeration over all pairs (a, b); the reference route."""
    jac, P, Q, oP, oQ = _local_setup(curve, q, gens)
    wanted = {_abel_jacobi(jac, t) for t in targets}
    sols = set()
    rowP = jac.zero
    for a in range(oP):
        acc = rowP
        for b in range(oQ):
            if acc in wanted:
                sols.add((a, b))
            acc = jac.add(acc, Q)
        rowP = jac.add(rowP, P)
    return LocalData(q, (oP, oQ), frozenset(sols))


def local_solutions_dlog(curve: HyperCurve, q: int, gens: Sequence[RationalDivisor], targets) -> LocalData:
    """Same set via discrete logs, valid when <P, Q> is cyclic and generated by P or Q."""
    jac, P, Q, oP, oQ = _local_setup(curve, q, gens)
    if oP >= oQ:
        base, other, ob, swap = P, Q, oP, False
    else:
        base, other, ob, swap = Q, P, oQ, True
    logs = {}
    acc = jac.zero
    for k in range(ob):
        logs[acc] = k
        acc = jac.add(acc, base)
    if other not in logs:
        raise ValueError("subgroup is not generated by a single generator")
    lo = logs[other]
    wanted = {logs[t] for t in (_abel_jacobi(jac, pt) for pt in targets) if t in logs}
    sols = set()
    oo = oQ if not swap else oP
    for j in range(oo):
        for k in wanted:
            i = (k - j * lo) % ob
            sols.add((j, i) if swap else (i, j))
    return LocalData(q, (oP, oQ), frozenset(sols))


def _combine(A: LocalData, B: LocalData) -> LocalData:
    M1, M2 = math.lcm(A.orders[0], B.orders[0]), math.lcm(A.orders[1], B.orders[1])
    g1, g2 = math.gcd(A.orders[0], B.orders[0]), math.gcd(A.orders[1], B.orders[1])
    buckets: dict = {}
    for s in B.solutions:
        buckets.setdefault((s[0] % g1, s[1] % g2), []).append(s)
    out = set()
    for a, b in A.solutions:
        for c, d in buckets.get((a % g1, b % g2), ()):
            out.add((_crt(a, A.orders[0], c, B.orders[0], M1), _crt(b, A.orders[1], d, B.orders[1], M2)))
    return LocalData(0, (M1, M2), frozenset(out))


def _crt(r1: int, m1: int, r2: int, m2: int, lcm: int) -> int:
    g = math.gcd(m1, m2)
    k = ((r2 - r1) // g) * pow(m1 // g, -1, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % lcm


@dataclass
class SieveReport:
    target_prime: int
    sieve_primes: list[int]
    verdicts: dict = field(default_factory=dict)

    def eliminated(self, target) -> bool:
        return self.verdicts[_key(target)]["verdict"] == "eliminated"

    def to_json(self) -> dict:
        return {
            "target_prime": self.target_prime,
            "sieve_primes": list(self.sieve_primes),
            "targets": self.verdicts,
            "assumptions": ASSUMPTIONS,
        }


def _key(pt) -> str:
    return pt if isinstance(pt, str) else f"({pt[0]},{pt[1]})"


def sieve_eliminate(config: SieveConfig, targets: Optional[Sequence] = None,
                    sieve_primes: Optional[Sequence[int]] = None) -> SieveReport:
    curve = config.curve
    primes = list(sieve_primes if sieve_primes is not None else config.sieve_primes)
    q0 = config.target_prime
    if q0 not in primes:
        raise ValueError("target prime must belong to the sieve primes")
    for q in primes:
        curve.require_good_reduction(q)
    gens = config.generators
    if len(gens) != 2:
        raise ValueError("sieve expects exactly two generators")
    probe_primes = primes[:2] if len(primes) >= 2 else primes
    groups = [jacobian(curve, q) for q in probe_primes]
    probe = subgroup_probe(groups, {g.label or str(i): tuple(g.reduce(curve, q) for q in probe_primes)
                                    for i, g in enumerate(gens)})
    if probe["cyclic"]:
        raise ValueError("sieve requires independent generators")

    background = {q: local_solutions(curve, q, gens, enumerate_points(curve, q)) for q in primes if q != q0}
    report = SieveReport(q0, primes)
    for t in (targets if targets is not None else config.targets):
        local = local_solutions(curve, q0, gens, [t])
        per_prime = {str(q0): len(local.solutions)}
        combined = local
        order = sorted(background.values(), key=lambda d: len(d.solutions) / (d.orders[0] * d.orders[1]))
        for data in order:
            if not combined.solutions:
                break
            per_prime[str(data.q)] = len(data.solutions)
            combined = _combine(combined, data)
        report.verdicts[_key(t)] = {
            "verdict": "eliminated" if not combined.solutions else "survives",
            "local_solution_counts": per_prime,
            "combined_moduli": list(combined.orders),
            "combined_size": len(combined.solutions),
        }
    return report


def run_c2_pipeline(config: Optional[SieveConfig] = None) -> dict:
    """Torsion, independence, index checks, residue classes and sieve for C2."""
    config = config or c2_preset()
    curve = config.curve
    q0 = config.target_prime
    t1, t2 = config.torsion_primes
    torsion = torsion_gcd_check(curve, t1, t2)
    j3, j5 = jacobian(curve, 3), jacobian(curve, 5)
    P, Q = config.generators
    probe = subgroup_probe([j3, j5], {P.label: (P.reduce(curve, 3), P.reduce(curve, 5)),
                                      Q.label: (Q.reduce(curve, 3), Q.reduce(curve, 5))})
    kernel = jacobian(curve, q0).add(P.reduce(curve, q0), jacobian(curve, q0).mul(18, Q.reduce(curve, q0)))
    index = {str(ell): index_injectivity_check(curve, ell, S, config.generators)
             for ell, S in sorted(config.index_sets.items())}
    classes = chabauty_residue_classifier(curve, q0, config.differential)
    known = [INFINITY, (1, 1), (1, q0 - 1)]
    sieve = sieve_eliminate(config)
    controls = sieve_eliminate(config, targets=known)
    multi = classes["potentially_multi"]
    singles = classes["at_most_one"]
    realized = [pt for pt in singles if pt in known]
    to_kill = [pt for pt in singles if pt not in known]
    all_killed = all(sieve.eliminated(t) for t in multi + to_kill if _key(t) in sieve.verdicts)
    covered = all(_key(t) in sieve.verdicts for t in multi + to_kill)
    order5, _ = jacobian_order(curve, q0)
    conclusion = (torsion["trivial_torsion"] and not probe["cyclic"]
                  and all(v["injective"] for v in index.values())
                  and covered and all_killed
                  and not any(controls.eliminated(t) for t in known))
    return {
        "curve": curve.to_json(),
        "torsion": torsion,
        "independence": {"primes": [3, 5], **probe},
        "kernel_of_reduction": {"prime": q0, "combination": "P0+18*Q0", "is_identity": kernel == j5.zero
                                if q0 == 5 else kernel == jacobian(curve, q0).zero},
        "index_coprime_to": 5 * order5,
        "index_checks": index,
        "residue_classes": {
            "q": q0,
            "count": len(multi) + len(singles),
            "potentially_multi": [_point_json(p) for p in multi],
            "at_most_one": [_point_json(p) for p in singles],
            "realized_by_known_points": [_point_json(p) for p in realized],
            "to_eliminate": [_point_json(p) for p in to_kill],
        },
        "sieve": sieve.to_json(),
        "soundness_controls": controls.to_json(),
        "rational_points": [_point_json(p) for p in known] if conclusion else None,
        "verdict": "C2(Q) = {inf, (1,1), (1,-1)}" if conclusion else "inconclusive",
    }
