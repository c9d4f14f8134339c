"""Per-frame corruption generators.

Each operator maps one valid frame to a new valid frame and never reads
neighboring frames; stochastic operators are pure functions of
(frame, params, seed).
"""

from __future__ import annotations

import math

import numpy as np
from skimage.draw import line_aa

from .seeding import rng_from

#: Streak densities in the calibrated table are counts per this many pixels.
RAIN_REFERENCE_AREA = 224 * 224

#: Rain slant is drawn once per clip from this range (degrees off vertical).
RAIN_SLANT_RANGE_DEG = 20.0

_RAIN_INTENSITY_RANGE = (0.4, 0.8)


def shot_noise(frame: np.ndarray, photons: int, seed: int) -> np.ndarray:
    """Poisson photon-count noise: each pixel becomes Poisson(x*photons)/photons."""
    if photons < 1:
        raise ValueError(f"photons must be >= 1, got {photons}")
    rng = rng_from(seed)
    out = rng.poisson(frame * photons) / photons
    return np.clip(out, 0.0, 1.0)


def gaussian_noise(frame: np.ndarray, std: float, seed: int) -> np.ndarray:
    if std < 0:
        raise ValueError(f"std must be >= 0, got {std}")
    if std == 0:
        return np.array(frame, copy=True)
    rng = rng_from(seed)
    return np.clip(frame + rng.normal(0.0, std, frame.shape), 0.0, 1.0)


def rain_slant_deg(clip_seed: int) -> float:
    """Clip-level slant angle shared by every frame of one video."""
    return float(rng_from(clip_seed).uniform(-RAIN_SLANT_RANGE_DEG, RAIN_SLANT_RANGE_DEG))


def rain(
    frame: np.ndarray,
    density: float,
    length: float,
    seed: int,
    slant_deg: float | None = None,
) -> np.ndarray:
    """Alpha-composite anti-aliased rain streaks as a brightness increase.

    The streak count scales with frame area: round(density * area / 224^2).
    Streak anchors and intensities are re-sampled per frame; the slant angle
    is normally passed in by the dispatcher (drawn once per clip) and falls
    back to a seed-derived draw for standalone use.
    """
    if density <= 0:
        raise ValueError(f"density must be > 0, got {density}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    rng = rng_from(seed)
    if slant_deg is None:
        slant_deg = float(rng.uniform(-RAIN_SLANT_RANGE_DEG, RAIN_SLANT_RANGE_DEG))

    h, w = frame.shape[:2]
    count = round(density * (w * h) / RAIN_REFERENCE_AREA)
    if count <= 0:
        return np.array(frame, copy=True)

    xs = rng.uniform(0, w, count)
    ys = rng.uniform(0, h, count)
    intensities = rng.uniform(*_RAIN_INTENSITY_RANGE, count)

    angle = math.radians(slant_deg)
    dx = length * math.sin(angle)
    dy = length * math.cos(angle)

    layer = np.zeros((h, w))
    for x0, y0, a in zip(xs, ys, intensities):
        rr, cc, val = line_aa(
            int(round(y0)), int(round(x0)), int(round(y0 + dy)), int(round(x0 + dx))
        )
        keep = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < w)
        rr, cc, val = rr[keep], cc[keep], val[keep]
        np.maximum.at(layer, (rr, cc), val * a)

    return np.clip(frame + layer[..., None], 0.0, 1.0)


def plasma_field(min_side: int, smoothness: float, rng: np.random.Generator) -> np.ndarray:
    """Diamond-square fractal on a (2^k + 1) grid, min-max normalized to [0, 1].

    The per-octave amplitude decays by 2**(-smoothness), so larger smoothness
    values yield smoother fields.
    """
    if min_side < 1:
        raise ValueError("min_side must be >= 1")
    k = max(1, math.ceil(math.log2(max(min_side - 1, 1))))
    side = (1 << k) + 1

    g = np.zeros((side, side))
    g[:: side - 1, :: side - 1] = rng.random((2, 2))

    step = side - 1
    amp = 1.0
    decay = 2.0 ** (-smoothness)
    while step >= 2:
        half = step // 2
        # diamond: square centers from the four corners
        tl = g[:-1:step, :-1:step]
        tr = g[:-1:step, step::step]
        bl = g[step::step, :-1:step]
        br = g[step::step, step::step]
        g[half::step, half::step] = (tl + tr + bl + br) / 4.0 + rng.uniform(
            -amp, amp, tl.shape
        )
        # square: edge midpoints from available axial neighbors
        for r0, c0 in ((0, half), (half, 0)):
            rows = np.arange(r0, side, step)
            cols = np.arange(c0, side, step)
            rr, cc = np.meshgrid(rows, cols, indexing="ij")
            total = np.zeros(rr.shape)
            count = np.zeros(rr.shape)
            for dr, dc in ((-half, 0), (half, 0), (0, -half), (0, half)):
                r, c = rr + dr, cc + dc
                ok = (r >= 0) & (r < side) & (c >= 0) & (c < side)
                total[ok] += g[r[ok], c[ok]]
                count += ok
            g[rr, cc] = total / count + rng.uniform(-amp, amp, rr.shape)
        step //= 2
        amp *= decay

    g -= g.min()
    peak = g.max()
    if peak > 0:
        g /= peak
    return g


def fog(frame: np.ndarray, thickness: float, smoothness: float, seed: int) -> np.ndarray:
    """Additive plasma-fractal fog, renormalized to preserve [0, 1]."""
    if thickness <= 0:
        raise ValueError(f"thickness must be > 0, got {thickness}")
    rng = rng_from(seed)
    h, w = frame.shape[:2]
    field = plasma_field(max(h, w), smoothness, rng)[:h, :w]
    out = (frame + thickness * field[..., None]) / (1.0 + thickness * field.max())
    return np.clip(out, 0.0, 1.0)


def contrast(frame: np.ndarray, portion: float) -> np.ndarray:
    """Scale the deviation from the per-frame, per-channel mean by `portion`.

    With 0 < portion <= 1 the output is a convex combination of pixel and
    mean, so no clipping is needed and the per-channel standard deviation
    scales exactly by `portion`.
    """
    if not 0 < portion <= 1:
        raise ValueError(f"portion must be in (0, 1], got {portion}")
    mu = frame.mean(axis=(0, 1), keepdims=True)
    return (frame - mu) * portion + mu


def brightness(frame: np.ndarray, addition: float) -> np.ndarray:
    """Add `addition` to the HSV value channel, clipped at 1."""
    if not 0 <= addition <= 1:
        raise ValueError(f"addition must be in [0, 1], got {addition}")
    from .color import hsv_to_rgb, rgb_to_hsv

    hsv = rgb_to_hsv(frame)
    hsv[..., 2] = np.clip(hsv[..., 2] + addition, 0.0, 1.0)
    return np.clip(hsv_to_rgb(hsv), 0.0, 1.0)


def saturate(frame: np.ndarray, scale: float, addition: float) -> np.ndarray:
    """Map HSV saturation through s*scale + addition, clipped at 1."""
    if scale < 0 or addition < 0:
        raise ValueError("scale and addition must be >= 0")
    from .color import hsv_to_rgb, rgb_to_hsv

    hsv = rgb_to_hsv(frame)
    hsv[..., 1] = np.clip(hsv[..., 1] * scale + addition, 0.0, 1.0)
    return np.clip(hsv_to_rgb(hsv), 0.0, 1.0)
