"""Arithmetic over GF(929), the prime field behind PDF417 error correction.

The field generator is alpha = 3; generator polynomials for k check
codewords are g(x) = prod_{i=1..k} (x - 3^i), kept monic with
coefficients in descending power order.
"""

from __future__ import annotations

from functools import lru_cache

PRIME = 929
ALPHA = 3


def gf_mul(a: int, b: int) -> int:
    return (a * b) % PRIME


def gf_add(a: int, b: int) -> int:
    return (a + b) % PRIME


def gf_sub(a: int, b: int) -> int:
    return (a - b) % PRIME


def gf_inv(a: int) -> int:
    if a % PRIME == 0:
        raise ZeroDivisionError("no inverse of 0 in GF(929)")
    return pow(a, PRIME - 2, PRIME)


def gf_pow(a: int, n: int) -> int:
    return pow(a, n, PRIME)


def poly_eval(coeffs: list[int], x: int) -> int:
    """Evaluate a polynomial given in descending power order (Horner)."""
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % PRIME
    return acc


@lru_cache(maxsize=None)
def generator_poly(k: int) -> tuple[int, ...]:
    """Coefficients of g(x) = prod_{i=1..k} (x - 3^i), monic, descending."""
    g = [1]
    root = 1
    for _ in range(k):
        root = (root * ALPHA) % PRIME
        nxt = [0] * (len(g) + 1)
        for j, c in enumerate(g):
            nxt[j] = (nxt[j] + c) % PRIME
            nxt[j + 1] = (nxt[j + 1] - c * root) % PRIME
        g = nxt
    return tuple(g)
