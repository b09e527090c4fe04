"""Timeline -> composited frames -> encoded animation bytes."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .assets import Sprite
from .errors import EncodeError, RenderError
from .gif import encode_gif
from .png import encode_apng, encode_png
from .raster import composite, rotate90, rotate_point, round_half_up, scale_bicubic
from .timeline import sample

FORMATS = ("gif", "apng", "png-seq")


@dataclass(frozen=True)
class EncoderConfig:
    format: str = "gif"
    delay_ms: int = 33
    palette_size: int = 256
    loop: int = 0
    dither: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise EncodeError(f"unknown format {self.format!r}")
        if not 2 <= self.palette_size <= 256:
            raise EncodeError("palette size must be within [2, 256]")
        if self.format == "gif" and self.delay_ms < 10:
            raise EncodeError("GIF frame delay must be at least 10 ms")

    @classmethod
    def for_tick_rate(cls, tick_rate, **kw):
        return cls(delay_ms=max(10, round_half_up(1000 / tick_rate)), **kw)


class FrameRenderer:
    """Draws single ticks of a timeline; safe to call from several threads."""

    def __init__(self, ir, images):
        self.ir = ir
        self.images = images
        missing = {ref for ref in ir.sprites if ref not in images}
        missing |= {ref for _, ref in ir.backgrounds if ref not in images}
        if missing:
            raise RenderError(f"unresolved sprite refs: {sorted(missing)}")
        self._backgrounds = {}
        w, h = ir.canvas
        for _, ref in ir.backgrounds:
            bg = images[ref].frames[0]
            if bg.size != (w, h):
                bg = scale_bicubic(bg, w, h)
            # backgrounds are opaque; anything see-through shows black
            px = np.array(bg.pixels)
            if (px[..., 3] != 255).any():
                blank = Sprite.solid(w, h, (0, 0, 0, 255))
                bg = composite(blank, [(bg, (0, 0), 0)])
            self._backgrounds[ref] = bg
        self._blank = Sprite.solid(w, h, (0, 0, 0, 255))
        self._cache = {}

    def _sprite(self, ref, frame, width, height, k):
        key = (ref, frame, width, height, k)
        hit = self._cache.get(key)
        if hit is None:
            base = self.images[ref].frames[frame]
            hit = rotate90(scale_bicubic(base, width, height), k)
            self._cache[key] = hit
        return hit

    def placements(self, tick):
        """(sprite, integer top-left, z) for every visible entity at ``tick``."""
        state = sample(self.ir, tick)
        out = []
        for es in state.entities:
            if not es.visible:
                continue
            meta = self.ir.sprites[es.sprite]
            iw = max(1, round_half_up(es.size[0]))
            ih = max(1, round_half_up(es.size[1]))
            sprite = self._sprite(es.sprite, es.frame, iw, ih, es.quarter_turns)
            ax = meta.anchor[0] * iw / meta.size[0]
            ay = meta.anchor[1] * ih / meta.size[1]
            ax, ay = rotate_point(ax, ay, iw, ih, es.quarter_turns)
            top_left = (round_half_up(es.position[0] - ax), round_half_up(es.position[1] - ay))
            out.append((sprite, top_left, es.z))
        return state, out

    def frame(self, tick):
        state, placed = self.placements(tick)
        bg = self._backgrounds.get(state.background, self._blank)
        return composite(bg, placed)


def render_frames(ir, images, workers=1):
    """Render every tick; output is identical for any worker count."""
    renderer = FrameRenderer(ir, images)
    ticks = range(ir.duration)
    if workers <= 1:
        return [renderer.frame(t) for t in ticks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(renderer.frame, ticks))


def encode(frames, config=None):
    """Encode frames; bytes for gif/apng, a list of PNG files for png-seq."""
    config = config or EncoderConfig()
    frames = list(frames)
    if not frames:
        raise EncodeError("cannot encode zero frames")
    pixels = [f.pixels if isinstance(f, Sprite) else np.asarray(f, dtype=np.uint8) for f in frames]
    if any(p.shape != pixels[0].shape for p in pixels):
        raise EncodeError("frames must share dimensions")
    if config.format == "gif":
        return encode_gif(pixels, config.delay_ms, config.loop, config.palette_size, config.dither)
    if config.format == "apng":
        return encode_apng(pixels, config.delay_ms, config.loop)
    return [encode_png(p) for p in pixels]


def sequence_name(i):
    return f"frame_{i:05d}.png"
