"""Reed-Solomon error correction over GF(929).

Encoding appends k = 2^(level+1) check codewords so that the full
sequence, read as a polynomial (first codeword = highest power), is
divisible by g(x) = prod_{i=1..k} (x - 3^i). Decoding runs
Berlekamp-Massey, a Chien search, and the Forney formula, then re-checks
the syndromes so a miscorrection can never pass silently.
"""

from __future__ import annotations

import numpy as np

from .. import accel
from ..errors import UncorrectableSymbol
from .gf929 import PRIME, ALPHA, generator_poly, gf_inv

MIN_EC_LEVEL = 0
MAX_EC_LEVEL = 8


def ec_codeword_count(ec_level: int) -> int:
    if not MIN_EC_LEVEL <= ec_level <= MAX_EC_LEVEL:
        raise ValueError(f"ec_level must be in [0, 8], got {ec_level}")
    return 2 ** (ec_level + 1)


def correction_capability(ec_count: int) -> int:
    """Maximum number of codeword errors corrected at unknown positions."""
    return (ec_count - 1) // 2


def rs_generate(data: list[int], ec_level: int) -> list[int]:
    """Check codewords for `data` at the given level (count 2^(level+1))."""
    if not data:
        raise ValueError("data must be non-empty")
    k = ec_codeword_count(ec_level)
    gcoef = np.asarray(generator_poly(k)[1:], dtype=np.int64)
    ec = accel.rs_ec_lfsr(np.asarray(data, dtype=np.int64), gcoef)
    return [int(v) for v in ec]


def syndromes(seq: list[int], ec_count: int) -> list[int]:
    """Evaluations of the sequence polynomial at 3^1 .. 3^ec_count."""
    out = accel.rs_syndromes(np.asarray(seq, dtype=np.int64), ec_count)
    return [int(v) for v in out]


def _berlekamp_massey(synd: list[int]) -> list[int]:
    """Error locator polynomial, ascending coefficients, lam[0] = 1."""
    lam = [1]
    prev = [1]
    big_l = 0
    m = 1
    b = 1
    for n in range(len(synd)):
        delta = synd[n]
        for i in range(1, big_l + 1):
            delta = (delta + lam[i] * synd[n - i]) % PRIME
        if delta == 0:
            m += 1
        elif 2 * big_l <= n:
            keep = lam[:]
            coef = (delta * gf_inv(b)) % PRIME
            shifted = [0] * m + [(coef * c) % PRIME for c in prev]
            width = max(len(lam), len(shifted))
            lam = [( (lam[i] if i < len(lam) else 0) - (shifted[i] if i < len(shifted) else 0)) % PRIME
                   for i in range(width)]
            big_l = n + 1 - big_l
            prev = keep
            b = delta
            m = 1
        else:
            coef = (delta * gf_inv(b)) % PRIME
            shifted = [0] * m + [(coef * c) % PRIME for c in prev]
            width = max(len(lam), len(shifted))
            lam = [( (lam[i] if i < len(lam) else 0) - (shifted[i] if i < len(shifted) else 0)) % PRIME
                   for i in range(width)]
            m += 1
    while len(lam) > 1 and lam[-1] == 0:
        lam.pop()
    return lam


def rs_correct(received: list[int], ec_count: int) -> tuple[list[int], int]:
    """Correct up to floor((ec_count - 1) / 2) codeword errors.

    Returns (corrected sequence, number of corrections). Raises
    UncorrectableSymbol when the error count exceeds capability or the
    corrected sequence fails the syndrome re-check.
    """
    n = len(received)
    if n <= ec_count:
        raise ValueError("received sequence must be longer than ec_count")
    synd = syndromes(received, ec_count)
    if not any(synd):
        return list(received), 0

    lam = _berlekamp_massey(synd)
    degree = len(lam) - 1
    t = correction_capability(ec_count)
    if degree == 0 or degree > t:
        raise UncorrectableSymbol(
            f"error locator degree {degree} outside capability {t}")

    # Chien search: a root at x = 3^-j marks an error at polynomial degree j.
    inv_alpha = gf_inv(ALPHA)
    error_degrees = []
    x = 1
    for j in range(n):
        acc = 0
        xp = 1
        for c in lam:
            acc = (acc + c * xp) % PRIME
            xp = (xp * x) % PRIME
        if acc == 0:
            error_degrees.append(j)
        x = (x * inv_alpha) % PRIME
    if len(error_degrees) != degree:
        raise UncorrectableSymbol(
            f"locator degree {degree} but {len(error_degrees)} roots found")

    # Forney, b = 1 convention: omega(x) = S(x) * lambda(x) mod x^ec_count.
    omega = [0] * ec_count
    for i, s in enumerate(synd):
        if s == 0:
            continue
        for k, c in enumerate(lam):
            if i + k < ec_count:
                omega[i + k] = (omega[i + k] + s * c) % PRIME
    lam_deriv = [(i * c) % PRIME for i, c in enumerate(lam)][1:]

    corrected = list(received)
    for j in error_degrees:
        x_inv = pow(inv_alpha, j, PRIME)
        om = 0
        xp = 1
        for c in omega:
            om = (om + c * xp) % PRIME
            xp = (xp * x_inv) % PRIME
        dv = 0
        xp = 1
        for c in lam_deriv:
            dv = (dv + c * xp) % PRIME
            xp = (xp * x_inv) % PRIME
        if dv == 0:
            raise UncorrectableSymbol("Forney denominator vanished")
        magnitude = (-om * gf_inv(dv)) % PRIME
        if magnitude == 0:
            raise UncorrectableSymbol("zero error magnitude at located position")
        idx = n - 1 - j
        corrected[idx] = (corrected[idx] - magnitude) % PRIME

    if any(syndromes(corrected, ec_count)):
        raise UncorrectableSymbol("corrected sequence fails syndrome re-check")
    return corrected, degree
