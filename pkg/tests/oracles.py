"""Independent reference computations. Nothing here imports the library's
arithmetic; only plain ints, Fractions and dict polynomials are used."""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial


def pascal_triangle(rows: int) -> list:
    tri = [[1]]
    for _ in range(rows):
        prev = tri[-1]
        tri.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    return tri


def pascal(a: int, b: int) -> int:
    if b < 0 or b > a:
        return 0
    return pascal_triangle(a)[a][b]


def legendre_bruteforce(p: int, n: int) -> int:
    f, v = factorial(n), 0
    while f % p == 0:
        f //= p
        v += 1
    return v


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        s += n % p
        n //= p
    return s


def brute_weak_compositions(n: int, s: int) -> list:
    return [c for c in itertools.product(range(n + 1), repeat=s) if sum(c) == n]


# dict polynomials: {exponent tuple: Fraction}

def dpoly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def dpoly_pow(a: dict, n: int, nvars: int) -> dict:
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(n):
        out = dpoly_mul(out, a)
    return out


def embed(terms: dict) -> dict:
    """b^[k] -> prod X_i^{k_i} / k_i!  (terms keyed by exponent tuples)."""
    out: dict = {}
    for k, c in terms.items():
        den = 1
        for e in k:
            den *= factorial(e)
        out[k] = out.get(k, 0) + Fraction(c, den)
    return {e: c for e, c in out.items() if c}


def pull_back(poly: dict) -> dict:
    out = {}
    for e, c in poly.items():
        for x in e:
            c *= factorial(x)
        out[e] = c
    return out


def gamma_via_fractions(n: int, terms: dict, nvars: int) -> dict:
    """gamma_n of sum c_k b^[k] via x^n/n! in Q[X]; returns Fraction coefficients."""
    power = dpoly_pow(embed(terms), n, nvars)
    return pull_back({e: c / factorial(n) for e, c in power.items()})


def product_via_fractions(a: dict, b: dict) -> dict:
    return pull_back(dpoly_mul(embed(a), embed(b)))


def multinomial_expansion(n: int, coords: tuple) -> dict:
    """x^[n] for x = sum x_i b_i: coefficient prod x_i^{k_i} at every k of degree n."""
    out = {}
    for k in brute_weak_compositions(n, len(coords)):
        c = 1
        for x, e in zip(coords, k):
            c *= x ** e
        if c:
            out[k] = c
    return out
