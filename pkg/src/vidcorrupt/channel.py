"""Transmission-channel models over encoded bitstreams.

Bit errors flip individual bits inside NAL units; packet loss drops whole
NAL units (one unit = one packet). Both skip the protected parameter sets
(VPS/SPS/PPS) so damaged streams stay decodable, and both are pure
functions of (stream, parameter, seed).
"""

from __future__ import annotations

from fractions import Fraction

from .nal import EncodedStream
from .seeding import rng_from


def bit_error(stream: EncodedStream, ratio, seed: int) -> EncodedStream:
    """Flip each bit of every non-protected NAL unit with probability `ratio`.

    Start codes are left intact and the byte count never changes. Per unit,
    a Binomial(bits, ratio) flip count is placed uniformly without
    replacement, which is distributed identically to independent per-bit
    flips.
    """
    p = float(Fraction(ratio))
    if not 0 < p < 1:
        raise ValueError(f"bit error ratio must be in (0, 1), got {ratio}")
    rng = rng_from(seed)
    buf = bytearray(stream.data)
    for unit in stream.units:
        if unit.protected:
            continue
        nbits = unit.payload_size * 8
        flips = rng.binomial(nbits, p)
        if flips == 0:
            continue
        positions = rng.choice(nbits, size=flips, replace=False)
        base = unit.payload_offset
        for pos in positions:
            buf[base + (pos >> 3)] ^= 0x80 >> (pos & 7)
    return stream.with_data(bytes(buf))


def bit_error_flip_positions(stream: EncodedStream, ratio, seed: int) -> list[int]:
    """Absolute bit positions bit_error would flip; useful for seed searches."""
    p = float(Fraction(ratio))
    rng = rng_from(seed)
    flipped = []
    for unit in stream.units:
        if unit.protected:
            continue
        nbits = unit.payload_size * 8
        flips = rng.binomial(nbits, p)
        if flips == 0:
            continue
        positions = rng.choice(nbits, size=flips, replace=False)
        flipped.extend(unit.payload_offset * 8 + int(pos) for pos in positions)
    return flipped


def packet_loss(stream: EncodedStream, loss_percent: float, seed: int) -> EncodedStream:
    """Drop each non-protected NAL unit independently with probability loss%/100.

    Remaining units are concatenated in order with their start codes
    preserved.
    """
    if not 0 < loss_percent < 100:
        raise ValueError(f"loss percent must be in (0, 100), got {loss_percent}")
    rng = rng_from(seed)
    draws = rng.random(len(stream.units))
    keep = [u.protected or d >= loss_percent / 100.0 for u, d in zip(stream.units, draws)]
    return stream.rebuild(keep)
