"""Gentry-Sahai-Waters LWE encryption, used additively.

Keys: a Sophie-Germain prime ``q`` of ``k`` bits, lattice dimension
``n = k``, ``l = ceil(log2 q)``, ``m = n * l``. The public key stacks
``-A`` over ``s^T A + e^T``; the secret key is ``t = (s || 1)``, so
``t^T B = e^T``. A message ``mu`` is encrypted as ``C = B R + mu G (mod q)``
with a binary ``m x m`` mask ``R`` and the gadget matrix ``G``. Ciphertexts
add entry-wise; decryption picks the candidate whose ``mu t^T G`` lies
closest to ``t^T C``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import HEError, ShapeError
from . import wire
from .modlinalg import (centered_residue, generate_sophie_germain_prime,
                        sample_noise_vector, zq_matmul)

DEFAULT_K = 8
DEFAULT_NOISE = 0.02
DEFAULT_BOUND = 16


@dataclass(frozen=True)
class GswParams:
    k: int
    q: int
    n: int
    l: int
    m: int
    p: float = DEFAULT_NOISE
    bound: int = DEFAULT_BOUND  # messages live in [0, bound)


@dataclass(frozen=True)
class GswSecretKey:
    t: np.ndarray  # (s || 1), length n


@dataclass(frozen=True)
class GswPublicKey:
    b: np.ndarray  # n x m
    # the LWE noise behind b; test-only, never serialised
    noise: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class GswCiphertext:
    c: np.ndarray  # n x m
    q: int
    # encryption mask(s) and message(s) that produced c; test-only
    masks: tuple = field(default=(), repr=False, compare=False)

    @property
    def nbytes(self) -> int:
        return self.c.nbytes


class MessageRangeError(HEError, ValueError):
    """Message (or sum of messages) outside the decodable space [0, bound)."""


class GswKeys(NamedTuple):
    params: GswParams
    secret: GswSecretKey
    public: GswPublicKey


def keygen(k: int, rng: np.random.Generator, p: float = DEFAULT_NOISE,
           bound: Optional[int] = None) -> GswKeys:
    """Generate keys; ``bound=None`` picks ``min(DEFAULT_BOUND, q)``."""
    if not 3 <= k <= 16:
        raise ValueError(f"k must be in [3, 16], got {k}")
    q = generate_sophie_germain_prime(k, rng)
    if bound is None:
        bound = min(DEFAULT_BOUND, q)
    if not 1 <= bound <= q:
        raise ValueError(f"message bound must be in [1, q={q}], got {bound}")
    n = k
    l = math.ceil(math.log2(q))
    m = n * l
    s = rng.integers(0, q, size=n - 1, dtype=np.int64)
    a = rng.integers(0, q, size=(n - 1, m), dtype=np.int64)
    e = sample_noise_vector(m, q, p, rng)
    top = (-a) % q
    bottom = (zq_matmul(s, a, q) + e) % q
    b = np.vstack([top, bottom[None, :]])
    t = np.append(s, 1).astype(np.int64)
    params = GswParams(k=k, q=q, n=n, l=l, m=m, p=p, bound=bound)
    return GswKeys(params, GswSecretKey(t), GswPublicKey(b, noise=e))


def gadget_matrix(n: int, l: int) -> np.ndarray:
    """Block-diagonal ``n x n*l`` matrix with ``(1, 2, ..., 2**(l-1))`` per row."""
    if n < 1 or l < 1:
        raise ValueError("gadget dimensions must be >= 1")
    g = np.zeros((n, n * l), dtype=np.int64)
    powers = 1 << np.arange(l, dtype=np.int64)
    for i in range(n):
        g[i, i * l:(i + 1) * l] = powers
    return g


def encrypt(pk: GswPublicKey, params: GswParams, mu: int, rng: np.random.Generator,
            mask: Optional[np.ndarray] = None) -> GswCiphertext:
    """Encrypt ``mu``; ``mask`` overrides the random binary R (tests only)."""
    if not 0 <= mu < params.bound:
        raise MessageRangeError(f"message {mu} outside [0, {params.bound})")
    if mask is None:
        mask = rng.integers(0, 2, size=(params.m, params.m), dtype=np.int64)
    g = gadget_matrix(params.n, params.l)
    c = (zq_matmul(pk.b, mask, params.q) + mu * g) % params.q
    return GswCiphertext(c, params.q, masks=((mask, mu),))


def add(c1: GswCiphertext, c2: GswCiphertext) -> GswCiphertext:
    if c1.q != c2.q:
        raise ShapeError(f"moduli differ: {c1.q} vs {c2.q}")
    if c1.c.shape != c2.c.shape:
        raise ShapeError(f"ciphertext shapes differ: {c1.c.shape} vs {c2.c.shape}")
    return GswCiphertext((c1.c + c2.c) % c1.q, c1.q, masks=c1.masks + c2.masks)


def distances(sk: GswSecretKey, params: GswParams, c: GswCiphertext) -> np.ndarray:
    """L1 distance of ``t^T C`` to ``mu t^T G`` for every candidate ``mu``."""
    if c.c.shape != (params.n, params.m) or c.q != params.q:
        raise ShapeError(f"ciphertext {c.c.shape} mod {c.q} does not match the key")
    q = params.q
    w = zq_matmul(sk.t, c.c, q)
    g = gadget_matrix(params.n, params.l)
    scores = np.empty(params.bound, dtype=np.int64)
    for mu in range(params.bound):
        sg = zq_matmul(sk.t, mu * g % q, q)
        scores[mu] = np.abs(centered_residue(w - sg, q)).sum()
    return scores


def decrypt(sk: GswSecretKey, params: GswParams, c: GswCiphertext) -> int:
    # argmin returns the first (smallest) candidate on ties
    return int(np.argmin(distances(sk, params, c)))


def to_payload(c1: GswCiphertext, c2: GswCiphertext) -> wire.GswPayload:
    n, m = c1.c.shape
    return wire.GswPayload(c1.q, n, m, c1.c.tolist(), c2.c.tolist())


def from_result(result: wire.GswResult, q: int) -> GswCiphertext:
    return GswCiphertext(np.array(result.c, dtype=np.int64), q)


def he_add(x1: int, x2: int, keys: GswKeys, cloud, rng: np.random.Generator) -> int:
    params, sk, pk = keys
    if x1 < 0 or x2 < 0 or x1 + x2 >= params.bound:
        raise MessageRangeError(f"{x1} + {x2} does not fit the message space [0, {params.bound})")
    c1 = encrypt(pk, params, x1, rng)
    c2 = encrypt(pk, params, x2, rng)
    result = cloud.process("gsw", to_payload(c1, c2))
    return decrypt(sk, params, from_result(result, params.q))
