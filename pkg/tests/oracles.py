"""Slow, independent reference computations used to freeze and cross-check values.

Nothing here imports the package's arithmetic; each oracle takes a
different route to the same number.
"""

import math

import mpmath


def numeric_norm(coeffs, p, dps=60):
    """Norm of sum c_j zeta^j as a rounded product over complex embeddings."""
    with mpmath.workdps(dps):
        prod = mpmath.mpc(1)
        for k in range(1, p):
            z = mpmath.exp(2j * mpmath.pi * k / p)
            prod *= sum(c * z ** j for j, c in enumerate(coeffs))
        assert abs(prod.imag) < mpmath.mpf(10) ** (-dps // 3)
        return int(mpmath.nint(prod.real))


def cyc_mul(a, b, p):
    """Multiply two power-basis vectors modulo x^p - 1 then Phi_p."""
    buf = [0] * p
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            buf[(i + j) % p] += x * y
    top = buf[p - 1]
    return [c - top for c in buf[:p - 1]]


def cyc_pow(a, n, p):
    out = [1] + [0] * (p - 2)
    for _ in range(n):
        out = cyc_mul(out, a, p)
    return out


def phi_orbit_vectors(p, n):
    """phi_p^k(1) for k = 0..n as coefficient vectors; phi_p(x) = (x-1)^p + 2 - zeta."""
    x = [1] + [0] * (p - 2)
    out = [x]
    for _ in range(n):
        d = x[:]
        d[0] -= 1
        y = cyc_pow(d, p, p)
        y[0] += 2
        y[1] -= 1
        x = y
        out.append(x)
    return out


def residue_field_root(a, b, p):
    """(N, t) with a + b*zeta -> a + b*t = 0 in F_N, found by brute force."""
    N = sum(a ** (p - 1 - k) * (-b) ** k for k in range(p))  # (a^p + b^p)/(a + b)
    N = abs(N)
    roots = [t for t in range(N) if (a + b * t) % N == 0 and sum(t ** j for j in range(p)) % N == 0]
    return N, roots


def naive_orbit(f, x0, m, steps):
    out = [x0 % m]
    for _ in range(steps):
        out.append(f(out[-1]) % m)
    return out


def stabilization(seq):
    """(tail, cycle) for a sequence long enough to repeat."""
    first = {}
    for i, v in enumerate(seq):
        if v in first:
            t = first[v]
            return t, seq[t:i]
        first[v] = i
    raise ValueError("sequence did not repeat")


def brute_points(f, a, q):
    """Affine solutions of a*y^2 = f(x) over F_q plus points at infinity."""
    count = 0
    for x in range(q):
        fx = sum(c * x ** i for i, c in enumerate(f)) % q
        for y in range(q):
            if (a * y * y - fx) % q == 0:
                count += 1
    deg = len(f) - 1
    if deg % 2:
        return count + 1
    lead = a * f[-1] % q
    chi = pow(lead, (q - 1) // 2, q)
    return count + (2 if chi == 1 else 0)


def is_pth_power(n, p):
    n = abs(n)
    r = round(n ** (1.0 / p)) if n < 2 ** 1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // p + 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** p < n:
                lo = mid + 1
            else:
                hi = mid
        return lo ** p == n
    return any((r + d) ** p == n for d in (-1, 0, 1) if r + d >= 0)


def solvable_pairs(v, u, N, e):
    return any((u * pow(y, e, N) - v) % N == 0 for y in range(N))


def crude_exponent_float(p, dps=60):
    with mpmath.workdps(dps):
        P = mpmath.mpf(p)
        h = P / 2
        return (16 * P ** (h + 9) + 14 * P ** (h + 7) + 84 * P ** (h + 6)
                + mpmath.mpf(1.5) * P ** (h + 5) + 2 * P ** 5 - 4 * P ** 4)


def n_bound_float(p, dps=60):
    with mpmath.workdps(dps):
        S = 12 * (p - 1) * mpmath.mpf(2) ** ((p - 1) ** 2) * (1 + mpmath.log(4)) ** (p * (p - 1))
        return int(mpmath.ceil(crude_exponent_float(p, dps) + S + 2))


def weil_height_float(coeffs, p, dps=60):
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for k in range(1, p):
            z = mpmath.exp(2j * mpmath.pi * k / p)
            v = abs(sum(c * z ** j for j, c in enumerate(coeffs)))
            total += max(mpmath.mpf(0), mpmath.log(v))
        return total / (p - 1)


def delta_orbit_vectors(p, n):
    """delta_p^k(0) for k = 0..n; delta_p(x) = x^p + 1 - zeta."""
    x = [0] * (p - 1)
    out = [x]
    for _ in range(n):
        y = cyc_pow(x, p, p)
        y[0] += 1
        y[1] -= 1
        x = y
        out.append(x)
    return out


def ramified_valuation_by_division(coeffs, p):
    """Largest k with (1 - zeta)^k | a, by repeated exact division."""
    a = list(coeffs)
    if not any(a):
        return math.inf
    k = 0
    while True:
        # (1 - zeta) * prod_{j=2}^{p-1} (1 - zeta^j) = p
        cof = [1] + [0] * (p - 2)
        for j in range(2, p):
            fac = [0] * (p - 1)
            fac[0] = 1
            zj = [0] * p
            zj[j % p] = 1
            top = zj[p - 1]
            zj = [c - top for c in zj[:p - 1]]
            fac = [f - z for f, z in zip(fac, zj)]
            cof = cyc_mul(cof, fac, p)
        num = cyc_mul(a, cof, p)
        if any(c % p for c in num):
            return k
        a = [c // p for c in num]
        k += 1
