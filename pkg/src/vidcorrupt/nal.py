"""Annex-B H.265 bitstream indexing.

The parser builds an index of NAL units that exactly tiles the byte stream;
channel simulations operate on that index and never re-parse corrupted
bytes. Parameter-set units (VPS/SPS/PPS) are flagged protected so channel
models can keep streams decodable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

HEVC_NAL_VPS = 32
HEVC_NAL_SPS = 33
HEVC_NAL_PPS = 34

PROTECTED_NAL_TYPES = frozenset({HEVC_NAL_VPS, HEVC_NAL_SPS, HEVC_NAL_PPS})

#: HEVC VCL NAL unit types (coded slices) are 0..31.
_VCL_MAX_TYPE = 31


class BitstreamError(ValueError):
    """The byte stream is not a start-code-aligned Annex-B stream."""


@dataclass(frozen=True)
class NalUnit:
    offset: int  # offset of the start code within the stream
    size: int  # start code + header + payload
    start_code_len: int  # 3 or 4
    nal_type: int

    @property
    def protected(self) -> bool:
        return self.nal_type in PROTECTED_NAL_TYPES

    @property
    def is_vcl(self) -> bool:
        return self.nal_type <= _VCL_MAX_TYPE

    @property
    def payload_offset(self) -> int:
        return self.offset + self.start_code_len

    @property
    def payload_size(self) -> int:
        return self.size - self.start_code_len


def _start_codes(data: bytes) -> list[tuple[int, int]]:
    """(offset, length) of every start code; a preceding zero byte makes it 4 bytes."""
    found = []
    i = data.find(b"\x00\x00\x01")
    while i != -1:
        if i > 0 and data[i - 1] == 0:
            found.append((i - 1, 4))
        else:
            found.append((i, 3))
        i = data.find(b"\x00\x00\x01", i + 3)
    return found

def parse_annex_b(data: bytes) -> tuple[NalUnit, ...]:
    """Index all NAL units; the units exactly tile `data`."""
    if len(data) < 4:
        raise BitstreamError("stream too short to contain a NAL unit")
    codes = _start_codes(data)
    if not codes or codes[0][0] != 0:
        raise BitstreamError("stream does not begin with an Annex-B start code")
    units = []
    for i, (offset, sc_len) in enumerate(codes):
        end = codes[i + 1][0] if i + 1 < len(codes) else len(data)
        if end <= offset + sc_len:
            raise BitstreamError(f"empty NAL unit at offset {offset}")
        nal_type = (data[offset + sc_len] >> 1) & 0x3F
        units.append(NalUnit(offset, end - offset, sc_len, nal_type))
    return tuple(units)


@dataclass(frozen=True)
class EncodedStream:
    """An H.265 elementary stream plus its NAL index and source metadata."""

    data: bytes
    units: tuple[NalUnit, ...]
    source_fps: Fraction
    source_dims: tuple[int, int]  # (width, height)
    n_frames: int

    @classmethod
    def parse(cls, data: bytes, source_fps, source_dims, n_frames) -> "EncodedStream":
        return cls(
            data=data,
            units=parse_annex_b(data),
            source_fps=Fraction(source_fps),
            source_dims=(int(source_dims[0]), int(source_dims[1])),
            n_frames=int(n_frames),
        )

    def unit_bytes(self, unit: NalUnit) -> bytes:
        return self.data[unit.offset : unit.offset + unit.size]

    def reassemble(self) -> bytes:
        return b"".join(self.unit_bytes(u) for u in self.units)

    def with_data(self, data: bytes) -> "EncodedStream":
        """Same index, new bytes; only valid when unit extents are unchanged."""
        if len(data) != len(self.data):
            raise BitstreamError("byte count changed; re-parse instead")
        return replace(self, data=data)

    def rebuild(self, keep: list[bool]) -> "EncodedStream":
        """Concatenate the kept units in order and re-index."""
        if len(keep) != len(self.units):
            raise ValueError("keep mask length must match unit count")
        data = b"".join(self.unit_bytes(u) for u, k in zip(self.units, keep) if k)
        return EncodedStream.parse(data, self.source_fps, self.source_dims, self.n_frames)
