"""Prime fields, small extension fields and polynomials over F_q.

Polynomials over F_q are plain lists of ints, low degree first, with
trailing zeros stripped; the zero polynomial is []. Extension field
elements are tuples of length k over the chosen modulus polynomial.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

import gmpy2

Poly = list


# -- polynomials over F_q ---------------------------------------------------

def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence[int]):
    """Degree, with -inf for the zero polynomial."""
    return len(a) - 1 if a else -math.inf


def poly_mod_coeffs(a: Sequence[int], q: int) -> Poly:
    return trim([c % q for c in a])


def add(a: Poly, b: Poly, q: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % q
    return trim(out)


def sub(a: Poly, b: Poly, q: int) -> Poly:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % q
    return trim(out)


def neg(a: Poly, q: int) -> Poly:
    return [(-c) % q for c in a]


def scale(a: Poly, s: int, q: int) -> Poly:
    s %= q
    return trim([(c * s) % q for c in a]) if s else []


def mul(a: Poly, b: Poly, q: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % q for c in out])


def divmod_poly(a: Poly, b: Poly, q: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    if len(r) <= db:
        return [], trim(r)
    quo = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = (r[k] * inv) % q
        if c:
            quo[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % q
    return trim(quo), trim(r[:db])


def mod(a: Poly, b: Poly, q: int) -> Poly:
    return divmod_poly(a, b, q)[1]


def monic(a: Poly, q: int) -> Poly:
    if not a:
        return []
    return scale(a, pow(a[-1], -1, q), q)


def xgcd(a: Poly, b: Poly, q: int) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        quo, rem = divmod_poly(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1, q), q)
        t0, t1 = t1, sub(t0, mul(quo, t1, q), q)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, q)
    return scale(r0, inv, q), scale(s0, inv, q), scale(t0, inv, q)


def gcd(a: Poly, b: Poly, q: int) -> Poly:
    return xgcd(a, b, q)[0]


def inverse_mod(a: Poly, m: Poly, q: int) -> Poly:
    g, s, _ = xgcd(a, m, q)
    if g != [1]:
        raise ZeroDivisionError("not invertible modulo m")
    return mod(s, m, q)


def evaluate(a: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % q
    return acc


def derivative(a: Poly, q: int) -> Poly:
    return trim([(i * c) % q for i, c in enumerate(a)][1:])


def powmod(a: Poly, e: int, m: Poly, q: int) -> Poly:
    result = [1]
    base = mod(a, m, q)
    while e:
        if e & 1:
            result = mod(mul(result, base, q), m, q)
        e >>= 1
        if e:
            base = mod(mul(base, base, q), m, q)
    return mod(result, m, q)


def is_irreducible(f: Poly, q: int) -> bool:
    """Rabin's test for a polynomial over F_q."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for i in range(1, n // 2 + 1):
        h = powmod(h, q, f, q)
        if len(gcd(f, sub(h, x, q), q)) > 1:
            return False
    return True


def roots(f: Poly, q: int) -> list[int]:
    return [x for x in range(q) if evaluate(f, x, q) == 0]


# -- prime-field helpers ----------------------------------------------------

def _is_prime_power(m: int) -> Optional[tuple[int, int]]:
    if m < 2:
        return None
    for e in range(m.bit_length(), 0, -1):
        r, exact = gmpy2.iroot(m, e)
        if exact and gmpy2.is_prime(r):
            return int(r), e
    return None


def sqrt_mod(v: int, q: int) -> Optional[int]:
    """Smaller square root of v modulo the odd prime q, or None."""
    v %= q
    if v == 0:
        return 0
    if pow(v, (q - 1) // 2, q) != 1:
        return None
    if q % 4 == 3:
        r = pow(v, (q + 1) // 4, q)
    else:
        # Tonelli-Shanks
        s, t = 0, q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = 2
        while pow(z, (q - 1) // 2, q) != q - 1:
            z += 1
        m, c, x, b = s, pow(z, t, q), pow(v, (t + 1) // 2, q), pow(v, t, q)
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = b2 * b2 % q
                i += 1
            w = pow(c, 1 << (m - i - 1), q)
            m, c = i, w * w % q
            x, b = x * w % q, b * w * w % q
        r = x
    return min(r, q - r)


def power_residue_solvable(v: int, u: int, m: int, e: int) -> bool:
    """Is v = u * y^e solvable modulo m (m a prime or prime power)?"""
    pp = _is_prime_power(m)
    if pp is None:
        raise ValueError(f"modulus {m} is not a prime power")
    v, u = v % m, u % m
    if v == 0:
        return True
    if u == 0:
        return False
    if pp[1] == 1:
        g = math.gcd(e, m - 1)
        return pow(v * pow(u, -1, m), (m - 1) // g, m) == 1
    if m > 10 ** 4:
        raise ValueError("prime-power modulus too large for exhaustive scan")
    return v in {u * pow(y, e, m) % m for y in range(m)}


def power_residue_solvable_bruteforce(v: int, u: int, m: int, e: int) -> bool:
    v, u = v % m, u % m
    return any((u * pow(y, e, m) - v) % m == 0 for y in range(m))


# -- extension fields -------------------------------------------------------

class ExtField:
    """F_{q^k} as F_q[x]/(modulus).

    Without an explicit modulus the lexicographically smallest monic
    irreducible of degree k is used (lower coefficients read as base-q
    digits, scanned upward), so runs are reproducible.
    """

    def __init__(self, q: int, k: int, modulus: Optional[Sequence[int]] = None,
                 check: bool = True):
        if check and (q < 3 or not gmpy2.is_prime(q)):
            raise ValueError("q must be an odd prime")
        if check and not 1 <= k <= 6:
            raise ValueError("extension degree must be between 1 and 6")
        self.q = q
        self.k = k
        if modulus is None:
            modulus = smallest_irreducible(q, k)
        modulus = poly_mod_coeffs(modulus, q)
        if len(modulus) != k + 1 or modulus[-1] != 1 or (check and not is_irreducible(modulus, q)):
            raise ValueError(f"modulus {modulus} is not a monic irreducible of degree {k}")
        self.modulus = tuple(modulus)
        self.order = q ** k
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        self._nonresidue = None

    def __repr__(self):
        return f"ExtField(q={self.q}, k={self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def elt(self, coeffs) -> tuple:
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        poly = mod(poly_mod_coeffs(coeffs, self.q), list(self.modulus), self.q)
        return tuple(poly) + (0,) * (self.k - len(poly))

    def elements(self) -> Iterator[tuple]:
        for digits in product(range(self.q), repeat=self.k):
            yield tuple(reversed(digits))

    def add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.q
        return tuple((-x) % q for x in a)

    def mul(self, a, b):
        q, k, md = self.q, self.k, self.modulus
        if k == 1:
            return ((a[0] * b[0]) % q,)
        buf = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    buf[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = buf[d] % q
            if c:
                for j in range(k):
                    buf[d - k + j] -= c * md[j]
        return tuple(c % q for c in buf[:k])

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def frobenius(self, a):
        return self.pow(a, self.q)

    def is_square(self, a) -> bool:
        return a == self.zero or self.pow(a, (self.order - 1) // 2) == self.one

    def quadratic_character(self, a) -> int:
        if a == self.zero:
            return 0
        return 1 if self.pow(a, (self.order - 1) // 2) == self.one else -1

    def nonresidue(self):
        if self._nonresidue is None:
            for a in self.elements():
                if a != self.zero and not self.is_square(a):
                    self._nonresidue = a
                    break
        return self._nonresidue

    def sqrt(self, a) -> Optional[tuple]:
        """Some square root of a, or None (Tonelli-Shanks)."""
        if a == self.zero:
            return self.zero
        Q = self.order
        if not self.is_square(a):
            return None
        if Q % 4 == 3:
            return self.pow(a, (Q + 1) // 4)
        s, t = 0, Q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = self.nonresidue()
        m, c, x, b = s, self.pow(z, t), self.pow(a, (t + 1) // 2), self.pow(a, t)
        while b != self.one:
            i, b2 = 0, b
            while b2 != self.one:
                b2 = self.mul(b2, b2)
                i += 1
            w = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(w, w)
            x, b = self.mul(x, w), self.mul(b, self.mul(w, w))
        return x

    def eval_poly(self, coeffs: Sequence[int], x):
        """Evaluate an integer polynomial at x."""
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.elt(c))
        return acc


@lru_cache(maxsize=None)
def smallest_irreducible(q: int, k: int) -> tuple[int, ...]:
    for n in range(q ** k):
        low = []
        for _ in range(k):
            low.append(n % q)
            n //= q
        cand = low + [1]
        if is_irreducible(cand, q):
            return tuple(cand)
    raise ArithmeticError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def ext_field(q: int, k: int) -> ExtField:
    return ExtField(q, k)
