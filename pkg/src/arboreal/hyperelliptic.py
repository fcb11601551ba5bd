"""Hyperelliptic curves a*y^2 = f(x) over small prime fields.

Point counts over F_{q^k}, L-polynomials and Jacobian orders work for any
model. Mumford arithmetic (Cantor's algorithm) and brute-force Jacobian
enumeration need an odd-degree model; internally the curve is written as
Y^2 = a*f(x) with Y = a*y.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, product
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import gmpy2

from . import finitefield as ff
from .finitefield import ExtField, ext_field, sqrt_mod

INFINITY = "inf"

Divisor = tuple  # (u, v): tuples of ints mod q, u monic, deg v < deg u


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) of integer polynomials (low degree first) via the Sylvester matrix."""
    f, g = ff.trim(f), ff.trim(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g)) + [0] * (size - n - 1 - i))
    return integer_det(rows)


def discriminant(f: Sequence[int]) -> int:
    f = ff.trim(f)
    n = len(f) - 1
    df = [i * c for i, c in enumerate(f)][1:]
    r = resultant(f, df)
    return (-1) ** (n * (n - 1) // 2) * r // f[-1]


@dataclass(frozen=True)
class HyperCurve:
    f: tuple[int, ...]
    a: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(ff.trim(self.f)))
        if self.a == 0:
            raise ValueError("model constant a must be non-zero")
        if len(self.f) < 3:
            raise ValueError("f must have degree at least 2")

    @property
    def deg(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.deg - 1) // 2

    @property
    def odd_degree(self) -> bool:
        return self.deg % 2 == 1

    @property
    def model(self) -> tuple[int, ...]:
        """Coefficients of a*f, the right side of Y^2 = a*f(x)."""
        return tuple(self.a * c for c in self.f)

    @property
    def discriminant(self) -> int:
        return discriminant(self.f)

    def has_good_reduction(self, q: int) -> bool:
        if q == 2 or not gmpy2.is_prime(q):
            return False
        return (self.a * self.f[-1]) % q != 0 and self.discriminant % q != 0

    def require_good_reduction(self, q: int) -> None:
        if not self.has_good_reduction(q):
            raise ValueError(f"bad reduction at {q}")

    def contains(self, x: int, y: int, q: int) -> bool:
        return (self.a * y * y - ff.evaluate(self.f, x, q)) % q == 0

    def to_json(self) -> dict:
        return {"a": self.a, "f": list(self.f)}

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "HyperCurve":
        return cls(tuple(int(c) for c in data["f"]), int(data.get("a", 1)), name or data.get("name", ""))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "HyperCurve":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text()), name=path.stem)


# The curves used by the quadratic-family arguments.
C1 = HyperCurve((2, 0, -2, 1), name="C1")
C2 = HyperCurve((2, 0, 0, -4, 2, 4, -4, 1), name="C2")
X1 = HyperCurve((2, 2, 2, 1), name="X1")
X2 = HyperCurve((-1, 0, 0, 4, 8, 10, 8, 4, 1), a=2, name="X2")


# -- point counting ------------------------------------------------------------

def count_points(curve: HyperCurve, q: int, k: int = 1) -> int:
    """#C(F_{q^k}) on the smooth projective model."""
    curve.require_good_reduction(q)
    if not 1 <= k <= 3:
        raise ValueError("k must be between 1 and 3")
    fld = ext_field(q, k)
    model = curve.model
    total = 0
    if k == 1:
        for x in range(q):
            z = ff.evaluate(model, x, q)
            total += 1 if z == 0 else (2 if pow(z, (q - 1) // 2, q) == 1 else 0)
    else:
        for x in fld.elements():
            total += 1 + fld.quadratic_character(fld.eval_poly(model, x))
    if curve.odd_degree:
        total += 1
    elif fld.is_square(fld.elt(model[-1])):
        total += 2
    return total


@dataclass(frozen=True)
class LPolynomial:
    q: int
    coeffs: tuple[int, ...]

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def __call__(self, t: int) -> int:
        return sum(c * t ** i for i, c in enumerate(self.coeffs))

    def functional_equation_holds(self) -> bool:
        g, c = self.genus, self.coeffs
        return c[0] == 1 and all(c[2 * g - i] == self.q ** (g - i) * c[i] for i in range(g + 1))

    def weil_interval(self) -> tuple[float, float]:
        s = math.sqrt(self.q)
        return (s - 1) ** (2 * self.genus), (s + 1) ** (2 * self.genus)


def l_polynomial(curve: HyperCurve, q: int) -> LPolynomial:
    g = curve.genus
    if g > 3:
        raise ValueError("genus above 3 is not supported")
    power_sums = [q ** k + 1 - count_points(curve, q, k) for k in range(1, g + 1)]
    # Newton's identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} s_i
    e = [1]
    for k in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * power_sums[i - 1] for i in range(1, k + 1))
        if acc % k:
            raise ArithmeticError("non-integral symmetric function")
        e.append(acc // k)
    c = [(-1) ** i * e[i] for i in range(g + 1)]
    c += [q ** (g - i) * c[i] for i in range(g - 1, -1, -1)]
    return LPolynomial(q, tuple(c))


def jacobian_order(curve: HyperCurve, q: int) -> tuple[int, LPolynomial]:
    lp = l_polynomial(curve, q)
    order = lp(1)
    lo, hi = lp.weil_interval()
    if not (lo - 1e-9 <= order <= hi + 1e-9):
        raise ArithmeticError(f"#J={order} outside the Weil interval [{lo:.2f}, {hi:.2f}]")
    return order, lp


def enumerate_points(curve: HyperCurve, q: int) -> list:
    """Infinity markers first, then affine points by x then y."""
    curve.require_good_reduction(q)
    model = curve.model
    pts: list = []
    if curve.odd_degree:
        pts.append(INFINITY)
    elif sqrt_mod(model[-1], q) is not None:
        pts.extend([INFINITY + "+", INFINITY + "-"])
    for x in range(q):
        fx = ff.evaluate(curve.f, x, q)
        for y in range(q):
            if (curve.a * y * y - fx) % q == 0:
                pts.append((x, y))
    return pts


# -- Mumford arithmetic ----------------------------------------------------------

class Jacobian:
    """J(F_q) of an odd-degree curve, elements as reduced Mumford pairs (u, v)."""

    def __init__(self, curve: HyperCurve, q: int):
        if not curve.odd_degree:
            raise ValueError("Cantor arithmetic restricted to odd-degree models")
        curve.require_good_reduction(q)
        self.curve = curve
        self.q = q
        self.g = curve.genus
        self.F = ff.poly_mod_coeffs(curve.model, q)
        self.zero: Divisor = ((1,), ())

    def __repr__(self):
        return f"Jacobian({self.curve.name or self.curve.f}, q={self.q})"

    def make(self, u: Iterable[int], v: Iterable[int]) -> Divisor:
        q = self.q
        u = ff.monic(ff.poly_mod_coeffs(u, q), q)
        v = ff.mod(ff.poly_mod_coeffs(v, q), u, q)
        D = (tuple(u), tuple(v))
        if not self.is_valid(D):
            raise ValueError("invalid divisor")
        return D

    def from_point(self, x: int, y: int) -> Divisor:
        """Class of [P - inf] for P = (x, y) on a*y^2 = f (so Y = a*y)."""
        return self.make([-x, 1], [self.curve.a * y])

    def from_rational(self, u: Sequence, v: Sequence) -> Divisor:
        """Reduce a Mumford pair with rational coefficients modulo q."""
        def red(c):
            from fractions import Fraction
            c = Fraction(c)
            if c.denominator % self.q == 0:
                raise ValueError("coefficient not integral at q")
            return c.numerator * pow(c.denominator, -1, self.q) % self.q
        return self.make([red(c) for c in u], [red(c) for c in v])

    def is_valid(self, D: Divisor) -> bool:
        u, v = list(D[0]), list(D[1])
        q = self.q
        if not u or u[-1] != 1 or len(u) - 1 > self.g or len(v) >= len(u):
            return False
        return not ff.mod(ff.sub(ff.mul(v, v, q), self.F, q), u, q)

    def neg(self, D: Divisor) -> Divisor:
        u, v = D
        return (u, tuple(ff.neg(list(v), self.q)))

    def add(self, D1: Divisor, D2: Divisor) -> Divisor:
        q, F = self.q, self.F
        u1, v1 = list(D1[0]), list(D1[1])
        u2, v2 = list(D2[0]), list(D2[1])
        if len(u1) == 1:
            return D2
        if len(u2) == 1:
            return D1
        d0, e1, e2 = ff.xgcd(u1, u2, q)
        if d0 == [1]:
            d = [1]
            u = ff.mul(u1, u2, q)
            v = ff.mod(ff.add(ff.mul(ff.mul(e1, u1, q), v2, q),
                              ff.mul(ff.mul(e2, u2, q), v1, q), q), u, q)
        else:
            d, c1, c2 = ff.xgcd(d0, ff.add(v1, v2, q), q)
            s1, s2, s3 = ff.mul(c1, e1, q), ff.mul(c1, e2, q), c2
            u = ff.divmod_poly(ff.mul(u1, u2, q), ff.mul(d, d, q), q)[0]
            num = ff.add(ff.add(ff.mul(ff.mul(s1, u1, q), v2, q),
                                ff.mul(ff.mul(s2, u2, q), v1, q), q),
                         ff.mul(s3, ff.add(ff.mul(v1, v2, q), F, q), q), q)
            v = ff.mod(ff.divmod_poly(num, d, q)[0], u, q)
        while len(u) - 1 > self.g:
            u = ff.divmod_poly(ff.sub(F, ff.mul(v, v, q), q), u, q)[0]
            v = ff.mod(ff.neg(v, q), u, q)
        u = ff.monic(u, q)
        return (tuple(u), tuple(ff.mod(v, u, q)))

    def double(self, D: Divisor) -> Divisor:
        return self.add(D, D)

    def mul(self, n: int, D: Divisor) -> Divisor:
        if n < 0:
            n, D = -n, self.neg(D)
        result = self.zero
        base = D
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return result

    def order_of(self, D: Divisor, bound: Optional[int] = None) -> int:
        """Order by brute-force accumulation."""
        acc, n = D, 1
        while acc != self.zero:
            acc = self.add(acc, D)
            n += 1
            if bound is not None and n > bound:
                raise ArithmeticError("order exceeds bound")
        return n

    def combination(self, coeffs: Sequence[int], gens: Sequence[Divisor]) -> Divisor:
        acc = self.zero
        for c, G in zip(coeffs, gens):
            if c:
                acc = self.add(acc, self.mul(c, G))
        return acc


def cantor(curve: HyperCurve, q: int, op: str, *args):
    """add(D1, D2), neg(D) or scalar(n, D) on J(F_q)."""
    jac = jacobian(curve, q)
    for a in args:
        if isinstance(a, tuple) and not jac.is_valid(a):
            raise ValueError("invalid divisor")
    if op == "add":
        return jac.add(*args)
    if op == "neg":
        return jac.neg(*args)
    if op == "scalar":
        return jac.mul(*args)
    raise ValueError(f"unknown Cantor operation {op!r}")


@lru_cache(maxsize=None)
def jacobian(curve: HyperCurve, q: int) -> Jacobian:
    return Jacobian(curve, q)


# -- brute-force enumeration of J(F_q) ------------------------------------------

def _monic_irreducibles(q: int, d: int) -> list[tuple[int, ...]]:
    if d == 1:
        return [((-a) % q, 1) for a in range(q)]
    out = []
    for low in product(range(q), repeat=d):
        poly = list(reversed(low)) + [1]
        if d <= 3:
            if low[-1] != 0 and not any(ff.evaluate(poly, x, q) == 0 for x in range(q)):
                out.append(tuple(poly))
        elif ff.is_irreducible(poly, q):
            out.append(tuple(poly))
    return out


def _local_roots(F: list, pi: tuple, e: int, q: int) -> list[list]:
    """All v mod pi^e with v^2 = F mod pi^e."""
    pi = list(pi)
    d = len(pi) - 1
    fr = ff.mod(F, pi, q)
    if not fr:
        return [[]] if e == 1 else []
    if d == 1:
        s = sqrt_mod(ff.evaluate(F, (-pi[0]) % q, q), q)
        if s is None:
            return []
        base = [[s], [(-s) % q]]
    else:
        fld = ExtField(q, d, pi, check=False)
        s = fld.sqrt(tuple(fr) + (0,) * (d - len(fr)))
        if s is None:
            return []
        base = [ff.trim(s), ff.trim(fld.neg(s))]
    if e == 1:
        return base
    m = pi
    for _ in range(e - 1):
        m = ff.mul(m, pi, q)
    lifted = []
    for v in base:
        for _ in range(e):
            inv = ff.inverse_mod(ff.scale(v, 2, q), m, q)
            v = ff.mod(ff.sub(v, ff.mul(ff.sub(ff.mul(v, v, q), F, q), inv, q), q), m, q)
        lifted.append(v)
    return lifted


def enumerate_jacobian(curve: HyperCurve, q: int, cap: int = 2 * 10 ** 5) -> list[Divisor]:
    """Every reduced divisor (u, v): u monic, deg v < deg u <= g, u | v^2 - F."""
    jac = jacobian(curve, q)
    g = jac.g
    if q ** g > cap:
        raise ValueError(f"q^g = {q ** g} exceeds the enumeration cap {cap}")
    F = jac.F
    irr = []
    for d in range(1, g + 1):
        irr.extend(_monic_irreducibles(q, d))
    irr.sort(key=lambda t: (len(t), t))
    degs = [len(t) - 1 for t in irr]
    local_cache: dict = {}

    def local(i, e):
        key = (i, e)
        if key not in local_cache:
            local_cache[key] = _local_roots(F, irr[i], e, q)
        return local_cache[key]

    out: list[Divisor] = [jac.zero]

    def emit(parts):
        # parts: list of (index, multiplicity)
        mods, rootsets = [], []
        for i, e in parts:
            rs = local(i, e)
            if not rs:
                return
            m = list(irr[i])
            for _ in range(e - 1):
                m = ff.mul(m, list(irr[i]), q)
            mods.append(m)
            rootsets.append(rs)
        u = [1]
        for m in mods:
            u = ff.mul(u, m, q)
        basis = []
        for m in mods:
            cof = ff.divmod_poly(u, m, q)[0]
            basis.append(ff.mul(cof, ff.inverse_mod(cof, m, q), q))
        for choice in product(*rootsets):
            v = []
            for r, b in zip(choice, basis):
                v = ff.add(v, ff.mul(r, b, q), q)
            v = ff.mod(v, u, q)
            out.append((tuple(u), tuple(v)))

    def rec(start, remaining, parts):
        if parts:
            emit(parts)
        for i in range(start, len(irr)):
            d = degs[i]
            if d > remaining:
                break
            if parts and parts[-1][0] == i:
                continue
            for e in range(1, remaining // d + 1):
                rec(i + 1, remaining - d * e, parts + [(i, e)])

    rec(0, g, [])
    out.sort()
    return out


def subgroup_probe(groups: Sequence[Jacobian], generators: dict, limit: int = 10 ** 7) -> dict:
    """Closure of the subgroup of prod(groups) generated by the labelled tuples."""
    gens = [tuple(gens_i) for gens_i in generators.values()]
    for G in gens:
        if len(G) != len(groups):
            raise ValueError("generator arity does not match the number of factor groups")
        for jac, D in zip(groups, G):
            if not jac.is_valid(D):
                raise ValueError("invalid divisor")
    zero = tuple(jac.zero for jac in groups)

    def add(x, y):
        return tuple(jac.add(a, b) for jac, a, b in zip(groups, x, y))

    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for G in gens:
                y = add(x, G)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise ArithmeticError("subgroup closure exceeds limit")
        frontier = nxt
    orders = {}
    for label, G in generators.items():
        orders[label] = math.lcm(*(jac.order_of(D) for jac, D in zip(groups, G)))
    exponent = math.lcm(*orders.values()) if orders else 1
    return {
        "order": len(seen),
        "exponent": exponent,
        "generator_orders": orders,
        "cyclic": exponent == len(seen),
    }
