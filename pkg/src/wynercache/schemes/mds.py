"""Systematic (K, K-2) maximum-distance-separable erasure code over GF(256).

Coded part i (1-based) equals data part i for i <= K-2; part K-1 is the XOR
parity P and part K the weighted parity Q = sum g^(i-1) * d_i with generator
g = 2. Any K-2 of the K coded parts reconstruct the data, byte-wise. The
weighted parity needs distinct generator powers per data part, which caps the
code at 255 data parts (K <= 257).
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..model import Bitstring, LengthMismatch, SimError

MAX_K = 257
_PRIMITIVE_POLY = 0x11D
_GENERATOR = 2

_EXP = np.zeros(512, dtype=np.uint8)
_LOG = np.zeros(256, dtype=np.int32)


def _init_tables() -> None:
    x = 1
    for i in range(255):
        _EXP[i] = x
        _LOG[x] = i
        x <<= 1
        if x & 0x100:
            x ^= _PRIMITIVE_POLY
    _EXP[255:510] = _EXP[:255]


_init_tables()


class TooFewParts(SimError):
    pass


def _gf_scale(vec: np.ndarray, c: int) -> np.ndarray:
    """Multiply every byte of ``vec`` by the constant ``c`` in GF(256)."""
    if c == 0:
        return np.zeros_like(vec)
    out = _EXP[(_LOG[vec] + _LOG[c]) % 255].astype(np.uint8)
    out[vec == 0] = 0
    return out


def _gf_pow(base: int, exponent: int) -> int:
    if base == 0:
        return 0
    return int(_EXP[(_LOG[base] * exponent) % 255])


def _gf_inv(c: int) -> int:
    if c == 0:
        raise SimError("inverse of 0 in GF(256)")
    return int(_EXP[255 - _LOG[c]])


def _as_byte_rows(parts: Sequence[Bitstring]) -> np.ndarray:
    lengths = {p.length for p in parts}
    if len(lengths) != 1:
        raise LengthMismatch(f"mixed part lengths {sorted(lengths)}")
    if next(iter(lengths)) % 8 != 0:
        raise LengthMismatch("parts must be byte aligned")
    return np.array([np.frombuffer(p.to_bytes(), dtype=np.uint8) for p in parts])


def mds_encode(data_parts: Sequence[Bitstring]) -> list[Bitstring]:
    """Append the two parity parts; returns K = len(data_parts) + 2 coded parts."""
    if len(data_parts) < 1:
        raise TooFewParts("need at least one data part")
    k_total = len(data_parts) + 2
    if k_total > MAX_K:
        raise SimError(f"K={k_total} exceeds the GF(256) limit of {MAX_K}")
    rows = _as_byte_rows(data_parts)
    p_parity = np.bitwise_xor.reduce(rows, axis=0)
    q_parity = np.zeros_like(p_parity)
    for i, row in enumerate(rows):
        q_parity ^= _gf_scale(row, _gf_pow(_GENERATOR, i))
    return [*data_parts, Bitstring.from_bytes(p_parity.tobytes()), Bitstring.from_bytes(q_parity.tobytes())]


def mds_decode(available: Mapping[int, Bitstring], k_total: int) -> list[Bitstring]:
    """Recover the K-2 data parts from any K-2 coded parts (1-based indices)."""
    if not 3 <= k_total <= MAX_K:
        raise SimError(f"K={k_total} outside 3..{MAX_K}")
    n_data = k_total - 2
    if len(available) < n_data:
        raise TooFewParts(f"need {n_data} parts, got {len(available)}")
    for idx in available:
        if not 1 <= idx <= k_total:
            raise SimError(f"part index {idx} outside 1..{k_total}")

    missing_data = [i for i in range(1, n_data + 1) if i not in available]
    if not missing_data:
        return [available[i] for i in range(1, n_data + 1)]

    present = {i: available[i] for i in sorted(available)}
    rows = {i: row for i, row in zip(present, _as_byte_rows(list(present.values())))}
    p_idx, q_idx = k_total - 1, k_total

    if len(missing_data) == 1:
        (a,) = missing_data
        if p_idx in rows:
            acc = rows[p_idx].copy()
            for i in range(1, n_data + 1):
                if i != a:
                    acc ^= rows[i]
            d_a = acc
        else:
            acc = rows[q_idx].copy()
            for i in range(1, n_data + 1):
                if i != a:
                    acc ^= _gf_scale(rows[i], _gf_pow(_GENERATOR, i - 1))
            d_a = _gf_scale(acc, _gf_inv(_gf_pow(_GENERATOR, a - 1)))
        recovered = {a: d_a}
    else:
        a, b = missing_data
        # P' = d_a ^ d_b and Q' = g^(a-1) d_a ^ g^(b-1) d_b, then solve the 2x2 system.
        p_acc = rows[p_idx].copy()
        q_acc = rows[q_idx].copy()
        for i in range(1, n_data + 1):
            if i not in missing_data:
                p_acc ^= rows[i]
                q_acc ^= _gf_scale(rows[i], _gf_pow(_GENERATOR, i - 1))
        g_a = _gf_pow(_GENERATOR, a - 1)
        g_b = _gf_pow(_GENERATOR, b - 1)
        denom_inv = _gf_inv(g_a ^ g_b)
        d_b = _gf_scale(_gf_scale(p_acc, g_a) ^ q_acc, denom_inv)
        d_a = p_acc ^ d_b
        recovered = {a: d_a, b: d_b}

    part_bits = next(iter(present.values())).length
    out = []
    for i in range(1, n_data + 1):
        if i in available:
            out.append(available[i])
        else:
            out.append(Bitstring.from_bytes(recovered[i].tobytes()))
        if out[-1].length != part_bits:
            raise LengthMismatch("inconsistent part lengths after decode")
    return out
