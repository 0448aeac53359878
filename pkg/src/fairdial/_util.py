"""Small shared helpers: seed derivation, bit iteration, stable formatting."""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """Derive a 64-bit integer seed from an arbitrary key.

    Every consumer of randomness in an experiment draws from its own stream,
    keyed by (root seed, purpose, indices...).  Streams keyed differently are
    independent, so adding trials or strategies never perturbs existing ones.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big")


def iter_bits(mask: int):
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def fmt_num(x) -> str:
    """Format a number for CSV output, deterministically and compactly."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".10g")
