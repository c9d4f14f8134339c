"""Concatenated-PPM frame streams.

The toolkit exchanges raw frames with the external codec (and with other
language bindings) as a flat concatenation of binary PPM (P6) images:
self-describing, byte-exact, and trivial to parse anywhere.
"""

from __future__ import annotations

import io

import numpy as np

from .clip import VideoClip


def ppm_stream_bytes(frames_u8: np.ndarray) -> bytes:
    frames_u8 = np.asarray(frames_u8, dtype=np.uint8)
    if frames_u8.ndim != 4 or frames_u8.shape[3] != 3:
        raise ValueError(f"expected (T, H, W, 3) uint8 frames, got {frames_u8.shape}")
    t, h, w, _ = frames_u8.shape
    header = b"P6\n%d %d\n255\n" % (w, h)
    out = io.BytesIO()
    for i in range(t):
        out.write(header)
        out.write(frames_u8[i].tobytes())
    return out.getvalue()


def _read_token(buf: io.BytesIO) -> bytes:
    tok = bytearray()
    while True:
        c = buf.read(1)
        if not c:
            return bytes(tok)
        if c == b"#":  # comment to end of line
            while c and c != b"\n":
                c = buf.read(1)
            continue
        if c.isspace():
            if tok:
                return bytes(tok)
            continue
        tok += c


def read_ppm_stream(data: bytes) -> np.ndarray:
    """Parse concatenated P6 frames into a (T, H, W, 3) uint8 array."""
    buf = io.BytesIO(data)
    frames = []
    while True:
        magic = _read_token(buf)
        if not magic:
            break
        if magic != b"P6":
            raise ValueError(f"expected P6 magic, got {magic!r}")
        w = int(_read_token(buf))
        h = int(_read_token(buf))
        maxval = int(_read_token(buf))
        if maxval != 255:
            raise ValueError(f"unsupported PPM maxval {maxval}")
        raw = buf.read(w * h * 3)
        if len(raw) != w * h * 3:
            raise ValueError("truncated PPM pixel data")
        frames.append(np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3))
    if not frames:
        raise ValueError("frame stream contains no frames")
    return np.stack(frames)


def clip_to_ppm_bytes(clip: VideoClip) -> bytes:
    return ppm_stream_bytes(clip.to_uint8())


def clip_from_ppm_bytes(data: bytes, fps) -> VideoClip:
    return VideoClip.from_uint8(read_ppm_stream(data), fps)
