"""Pixel operations: bicubic resampling, quarter-turn rotation, compositing."""

import math

import numpy as np

from .assets import Sprite

CATMULL_ROM_A = -0.5


def cubic_kernel(d, a=CATMULL_ROM_A):
    d = np.abs(d)
    near = ((a + 2) * d - (a + 3)) * d * d + 1
    far = ((a * d - 5 * a) * d + 8 * a) * d - 4 * a
    return np.where(d <= 1, near, np.where(d < 2, far, 0.0))


def _weight_matrix(src, dst):
    # pixel-center mapping; out-of-range taps fold onto the clamped edge
    x = (np.arange(dst) + 0.5) * (src / dst) - 0.5
    base = np.floor(x).astype(np.int64)
    frac = x - base
    m = np.zeros((dst, src))
    rows = np.arange(dst)
    for tap in (-1, 0, 1, 2):
        w = cubic_kernel(frac - tap)
        np.add.at(m, (rows, np.clip(base + tap, 0, src - 1)), w)
    return m


def scale_bicubic(sprite, width, height):
    """Resize with a Catmull-Rom kernel, all four channels, edge-clamped."""
    if width < 1 or height < 1:
        raise ValueError("target size must be at least 1x1")
    if (width, height) == sprite.size:
        return sprite
    src = sprite.pixels.astype(np.float64)
    my = _weight_matrix(sprite.height, height)
    mx = _weight_matrix(sprite.width, width)
    tmp = np.tensordot(my, src, axes=(1, 0))          # (height, src_w, 4)
    out = np.tensordot(mx, tmp, axes=(1, 1))           # (width, height, 4)
    out = out.transpose(1, 0, 2)
    return Sprite(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))


def rotate90(sprite, k):
    """Rotate clockwise by ``k`` quarter turns; an exact pixel permutation."""
    if k not in (0, 1, 2, 3):
        raise ValueError("quarter turns must be 0..3")
    px = sprite.pixels
    for _ in range(k):
        px = px.transpose(1, 0, 2)[:, ::-1]
    return sprite if k == 0 else Sprite(px)


def rotate_point(x, y, width, height, k):
    """Where a continuous point of a width x height sprite lands after rotate90."""
    for _ in range(k % 4):
        x, y, width, height = height - y, x, height, width
    return x, y


def _blend_into(dst, src, x0, y0):
    h, w = dst.shape[:2]
    sh, sw = src.shape[:2]
    cx0, cy0 = max(x0, 0), max(y0, 0)
    cx1, cy1 = min(x0 + sw, w), min(y0 + sh, h)
    if cx1 <= cx0 or cy1 <= cy0:
        return
    s = src[cy0 - y0:cy1 - y0, cx0 - x0:cx1 - x0]
    d = dst[cy0:cy1, cx0:cx1]
    sa = s[..., 3:4].astype(np.float64) / 255.0
    if (sa == 1.0).all():
        d[...] = s
        return
    if (sa == 0.0).all():
        return
    da = d[..., 3:4].astype(np.float64) / 255.0
    oa = sa + da * (1.0 - sa)
    num = s[..., :3] * sa + d[..., :3] * da * (1.0 - sa)
    rgb = np.divide(num, oa, out=np.zeros_like(num), where=oa > 0)
    d[..., :3] = np.clip(np.floor(rgb + 0.5), 0, 255)
    d[..., 3:4] = np.clip(np.floor(oa * 255.0 + 0.5), 0, 255)


def composite(background, placements):
    """Source-over blend placements in ascending z onto a copy of the background.

    placements: iterable of (sprite, (x, y) integer top-left, z). Sprites may
    lie partly or wholly off-canvas; they are clipped.
    """
    placements = list(placements)
    zs = [z for _, _, z in placements]
    if len(set(zs)) != len(zs):
        raise ValueError("placement z-orders must be unique")
    out = np.array(background.pixels, copy=True)
    for sprite, (x, y), _z in sorted(placements, key=lambda p: p[2]):
        _blend_into(out, sprite.pixels, int(x), int(y))
    return Sprite(out)


def round_half_up(v):
    return int(math.floor(v + 0.5))
