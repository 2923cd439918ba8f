"""Chen's McEliece-style XOR-homomorphic scheme over Hamming codes.

The public matrix is ``psi = S @ G @ P`` (GF(2)); a 4-bit segment ``x`` is
encrypted as ``x @ psi`` and a codeword ``c`` decrypts as
``c @ P^-1 @ R @ S^-1``. Because encryption is linear, XOR of ciphertexts
decrypts to XOR of plaintexts. Arithmetic addition adds the plaintext carry
``(x1 & x2) << 1`` to the decrypted XOR on the client.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import ShapeError
from . import wire
from .bitlinalg import (gf2_invert, gf2_matmul, identity, random_invertible,
                        random_permutation)

SEGMENT_BITS = 4


@dataclass(frozen=True)
class ChenParams:
    n: int  # message bits per segment
    k: int  # parity bits
    N: int  # codeword bits

    @classmethod
    def for_message_bits(cls, n: int) -> "ChenParams":
        if n < 2:
            raise ValueError("need at least 2 message bits per segment")
        k = math.floor(math.log2(n)) + 1
        return cls(n, k, n + k)


@dataclass(frozen=True)
class KeyMaterial:
    """The generating matrices, kept only so tests can check the key algebra."""

    s: np.ndarray
    g: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class ChenKeys:
    psi: np.ndarray    # n x N, public
    r: np.ndarray      # N x n
    s_inv: np.ndarray  # n x n
    p_inv: np.ndarray  # N x N
    params: ChenParams
    material: Optional[KeyMaterial] = field(default=None, repr=False, compare=False)


@dataclass
class ChenCiphertext:
    """Encrypted segments, index 0 holding the least significant bits."""

    segments: List[np.ndarray]

    def __post_init__(self):
        if not self.segments:
            raise ShapeError("ciphertext needs at least one segment")

    def __len__(self):
        return len(self.segments)

    @property
    def nbytes(self) -> int:
        return sum(seg.nbytes for seg in self.segments)


def hamming_code_gen(N: int, k: int, rng: np.random.Generator):
    """Build ``(S, G, P, R)`` for an ``[N, N-k]`` code.

    G holds the n identity columns plus k columns picked from the
    ones-complemented identity, all in random column order. R selects the
    identity columns back out, so ``G @ R = I_n``.
    """
    n = N - k
    if n < 1 or k < 1:
        raise ValueError(f"invalid code parameters N={N}, k={k}")
    if k > n:
        raise ValueError(f"cannot pick {k} distinct complemented columns from I_{n}")
    complement = 1 - identity(n)
    picked = rng.choice(n, size=k, replace=False)
    columns = np.concatenate([identity(n), complement[:, picked]], axis=1)
    order = rng.permutation(N)
    g = columns[:, order]

    r = np.zeros((N, n), dtype=np.uint8)
    for j, src in enumerate(order):
        if src < n:
            r[j, src] = 1

    s = random_invertible(n, rng)
    p = random_permutation(N, rng)
    return s, g, p, r


def keygen(n: int, rng: np.random.Generator) -> ChenKeys:
    params = ChenParams.for_message_bits(n)
    s, g, p, r = hamming_code_gen(params.N, params.k, rng)
    psi = gf2_matmul(gf2_matmul(s, g), p)
    return ChenKeys(psi, r, gf2_invert(s), gf2_invert(p), params, KeyMaterial(s, g, p))


def split_segments(x: int, width: int = SEGMENT_BITS) -> List[np.ndarray]:
    """Little-endian split of ``x`` into ``width``-bit row vectors (at least one)."""
    if x < 0:
        raise ValueError("only non-negative integers can be encrypted")
    count = max(1, -(-x.bit_length() // width))
    return [
        np.array([(x >> (seg * width + i)) & 1 for i in range(width)], dtype=np.uint8)
        for seg in range(count)
    ]


def encrypt_segment(bits, keys: ChenKeys) -> np.ndarray:
    return gf2_matmul(bits, keys.psi)


def decrypt_segment(codeword, keys: ChenKeys) -> np.ndarray:
    codeword = np.asarray(codeword)
    if codeword.shape != (keys.params.N,):
        raise ShapeError(f"segment must have {keys.params.N} bits, got shape {codeword.shape}")
    return gf2_matmul(gf2_matmul(gf2_matmul(codeword, keys.p_inv), keys.r), keys.s_inv)


def encrypt(x: int, keys: ChenKeys) -> ChenCiphertext:
    return ChenCiphertext([encrypt_segment(seg, keys) for seg in split_segments(int(x), keys.params.n)])


def pad(c: ChenCiphertext, count: int, keys: ChenKeys) -> ChenCiphertext:
    """Extend ``c`` to ``count`` segments with encryptions of zero."""
    extra = [encrypt_segment(np.zeros(keys.params.n, dtype=np.uint8), keys)
             for _ in range(count - len(c))]
    return ChenCiphertext(list(c.segments) + extra)


def xor_add(c1: ChenCiphertext, c2: ChenCiphertext) -> ChenCiphertext:
    if len(c1) != len(c2):
        raise ShapeError(f"segment counts differ: {len(c1)} vs {len(c2)}")
    out = []
    for i, (a, b) in enumerate(zip(c1.segments, c2.segments)):
        if a.shape != b.shape:
            raise ShapeError(f"segment {i} lengths differ: {a.shape} vs {b.shape}")
        out.append(a ^ b)
    return ChenCiphertext(out)


def decrypt(c: ChenCiphertext, keys: ChenKeys) -> int:
    result = 0
    for i, seg in enumerate(c.segments):
        bits = decrypt_segment(seg, keys)
        value = sum(int(b) << j for j, b in enumerate(bits))
        result ^= value << (i * keys.params.n)
    return result


def carry(x1: int, x2: int) -> int:
    return (x1 & x2) << 1


def to_payload(c1: ChenCiphertext, c2: ChenCiphertext) -> wire.ChenPayload:
    return wire.ChenPayload([s.tolist() for s in c1.segments], [s.tolist() for s in c2.segments])


def from_result(result: wire.ChenResult) -> ChenCiphertext:
    return ChenCiphertext([np.array(s, dtype=np.uint8) for s in result.segments])


def encrypt_pair(x1: int, x2: int, keys: ChenKeys):
    c1, c2 = encrypt(x1, keys), encrypt(x2, keys)
    count = max(len(c1), len(c2))
    return pad(c1, count, keys), pad(c2, count, keys)


def he_add(x1: int, x2: int, keys: ChenKeys, cloud) -> int:
    """``x1 + x2`` with the XOR done remotely and the carry added locally."""
    if not (0 <= x1 < 2**63 and 0 <= x2 < 2**63):
        raise ValueError("summands must lie in [0, 2**63)")
    plain_carry = carry(x1, x2)
    c1, c2 = encrypt_pair(x1, x2, keys)
    result = cloud.process("chen", to_payload(c1, c2))
    return decrypt(from_result(result), keys) + plain_carry
