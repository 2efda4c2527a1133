#!/usr/bin/env python3
"""Independent full-sweep oracle for class-group statistics over F_p, p odd prime.

For every monic squarefree f of odd degree n (genus g <= 2) and both twists
y^2 = f, y^2 = eps*f (eps the smallest non-square), computes:
  * the class number from point counts over F_p and F_{p^2} (closed form of
    L(1) for g <= 2),
  * the ell-part structure: from v_ell(h) when it is <= 1, otherwise from the
    ell-torsion count using a separate Cantor implementation,
and aggregates sum m_A and the density of curves whose ell-part is Z/ell,
for A = Z/ell.

Squarefreeness is tested by trial division by squares of irreducibles
rather than gcd(f, f').

Usage: cl_sweep_oracle.py p n ell
"""
import sys
from fractions import Fraction
from itertools import product


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def padd(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pneg(a, p):
    return [(-x) % p for x in a]


def pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv % p
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] = (a[i + j] - c * y) % p
    return trim(q), trim(a[: len(b) - 1])


def monic(a, p):
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def deg(a):
    return len(a) - 1


def monics(d, p):
    for low in product(range(p), repeat=d):
        yield list(low) + [1]


def is_irreducible(f, p):
    d = deg(f)
    for e in range(1, d // 2 + 1):
        for g in monics(e, p):
            if not pdivmod(f, g, p)[1]:
                return False
    return True


def squarefree(f, p):
    for e in range(1, deg(f) // 2 + 1):
        for g in monics(e, p):
            if is_irreducible(g, p) and not pdivmod(f, pmul(g, g, p), p)[1]:
                return False
    return True


def nonsquare(p):
    squares = {x * x % p for x in range(1, p)}
    return min(x for x in range(1, p) if x not in squares)


def count_points(F, p, eps):
    """#C(F_p) and #C(F_{p^2}), F_{p^2} = F_p[s]/(s^2 - eps)."""
    def chi1(x):
        if x == 0:
            return 0
        return 1 if pow(x, (p - 1) // 2, p) == 1 else -1

    n1 = p + 1 + sum(chi1(sum(c * pow(x, i, p) for i, c in enumerate(F)) % p) for x in range(p))

    def m2(a, b):
        return ((a[0] * b[0] + eps * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def pw2(a, e):
        r = (1, 0)
        while e:
            if e & 1:
                r = m2(r, a)
            a = m2(a, a)
            e >>= 1
        return r

    s = 0
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            v = (0, 0)
            for c in reversed(F):
                v = m2(v, x)
                v = ((v[0] + c) % p, v[1])
            if v == (0, 0):
                continue
            s += 1 if pw2(v, (p * p - 1) // 2) == (1, 0) else -1
    n2 = p * p + 1 + s
    return n1, n2


def class_number(F, p, g, eps):
    n1, n2 = count_points(F, p, eps)
    if g == 0:
        return 1
    a1 = n1 - p - 1
    if g == 1:
        return 1 + a1 + p
    a2 = (n2 - p * p - 1 + a1 * a1) // 2
    return 1 + a1 + a2 + p * a1 + p * p


# --- Cantor, written for this oracle ---

def xgcd(a, b, p):
    r0, r1, s0, s1, t0, t1 = a, b, [1], [], [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, padd(s0, pneg(pmul(q, s1, p), p), p)
        t0, t1 = t1, padd(t0, pneg(pmul(q, t1, p), p), p)
    inv = pow(r0[-1], p - 2, p)
    return [x * inv % p for x in r0], [x * inv % p for x in s0], [x * inv % p for x in t0]


def cantor(D1, D2, F, g, p):
    (u1, v1), (u2, v2) = D1, D2
    d1, e1, e2 = xgcd(u1, u2, p)
    d, c1, c2 = xgcd(d1, padd(v1, v2, p), p)
    s1, s2, s3 = pmul(c1, e1, p), pmul(c1, e2, p), c2
    u = pdivmod(pmul(u1, u2, p), pmul(d, d, p), p)[0]
    t = padd(padd(pmul(pmul(s1, u1, p), v2, p), pmul(pmul(s2, u2, p), v1, p), p),
             pmul(s3, padd(pmul(v1, v2, p), F, p), p), p)
    v = pdivmod(pdivmod(t, d, p)[0], u, p)[1]
    while deg(u) > g:
        u = monic(pdivmod(padd(F, pneg(pmul(v, v, p), p), p), u, p)[0], p)
        v = pdivmod(pneg(v, p), u, p)[1]
    return (monic(u, p), v)


def jacobian(F, g, p):
    out = []
    for d in range(g + 1):
        for u in monics(d, p):
            target = pdivmod(F, u, p)[1]
            for vc in product(range(p), repeat=d):
                v = trim(list(vc))
                if pdivmod(pmul(v, v, p), u, p)[1] == target:
                    out.append((u, v))
    return out


def ell_rank(F, g, p, ell):
    ident = ([1], [])
    killed = 0
    for D in jacobian(F, g, p):
        acc = ident
        for _ in range(ell):
            acc = cantor(acc, D, F, g, p)
        if acc == ident:
            killed += 1
    r = 0
    while ell ** r < killed:
        r += 1
    assert ell ** r == killed
    return r


def valuation(n, ell):
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def main():
    p, n, ell = map(int, sys.argv[1:4])
    g = (n - 1) // 2
    assert g <= 2
    eps = nonsquare(p)
    size = 0
    sum_m = 0
    dens = 0
    for f in monics(n, p):
        if not squarefree(f, p):
            continue
        for F in (f, [c * eps % p for c in f]):
            size += 1
            h = class_number(F, p, g, eps)
            v = valuation(h, ell)
            rank = v if v <= 1 else ell_rank(F, g, p, ell)
            sum_m += ell ** rank - 1
            dens += 1 if v == 1 else 0
    avg = Fraction(sum_m, size)
    print(f"p={p} n={n} ell={ell} S_n={size} sum_mA={sum_m} average={avg} ({float(avg):.12f}) "
          f"density_count={dens} density={dens / size:.12f}")


if __name__ == "__main__":
    main()
