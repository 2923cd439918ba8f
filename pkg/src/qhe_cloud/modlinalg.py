"""Arithmetic modulo q: matrix products, safe-prime moduli and LWE noise."""
from __future__ import annotations

import numpy as np

from . import HEError, ShapeError

# Deterministic Miller-Rabin witnesses; correct for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MAX_MODULUS_BITS = 32


class PrimeExhaustedError(HEError):
    """No prime with the requested property exists in the requested range."""


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_sophie_germain(q: int) -> bool:
    return is_prime(q) and is_prime(2 * q + 1)


def generate_sophie_germain_prime(bits: int, rng: np.random.Generator) -> int:
    """Return a prime q of exactly ``bits`` bits such that 2q+1 is also prime.

    The scan starts at a random point of ``[2**(bits-1), 2**bits)`` and wraps
    around, so every admissible q is reachable and the search always ends.
    """
    if not 2 <= bits <= MAX_MODULUS_BITS:
        raise ValueError(f"bits must be in [2, {MAX_MODULUS_BITS}], got {bits}")
    lo, hi = 1 << (bits - 1), 1 << bits
    span = hi - lo
    start = int(rng.integers(0, span))
    for offset in range(span):
        q = lo + (start + offset) % span
        if is_sophie_germain(q):
            return q
    raise PrimeExhaustedError(f"no {bits}-bit Sophie-Germain prime")


def sample_noise_vector(m: int, q: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Sparse ternary noise: each entry is 0 w.p. 1-p, else +1 or -1 (mod q)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise density must be in [0, 1], got {p}")
    if q < 2:
        raise ValueError("modulus must be >= 2")
    hit = rng.random(m) < p
    sign = rng.integers(0, 2, size=m)
    e = np.where(hit, np.where(sign == 1, 1, q - 1), 0)
    return e.astype(np.int64)


def zq_matmul(a, b, q: int) -> np.ndarray:
    """Product of ``a`` (vector or matrix) and matrix ``b`` reduced into [0, q)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if b.ndim != 2 or a.ndim not in (1, 2) or a.shape[-1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape} mod {q}")
    inner = b.shape[0]
    if (q - 1) ** 2 * max(inner, 1) < 2**63:
        return (a.astype(np.int64) % q) @ (b.astype(np.int64) % q) % q
    # would overflow int64: fall back to Python integers
    out = (a.astype(object) % q) @ (b.astype(object) % q) % q
    return out.astype(np.int64)


def centered_residue(x, q: int):
    """Representative of x mod q in [-(q//2), q//2] (ties resolve to +q/2)."""
    r = np.mod(x, q)
    r = np.where(r > q // 2, r - q, r)
    return int(r) if r.ndim == 0 else r
