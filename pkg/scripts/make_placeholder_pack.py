#!/usr/bin/env python3
"""Regenerate the bundled placeholder sprite pack.

Everything is drawn from flat shapes so the pack is small, deterministic,
and free of third-party imagery. Output: src/text2anim/data/pack/.
"""

import json
import math
import sys
from pathlib import Path

import numpy as np

from text2anim.gif import encode_gif
from text2anim.png import encode_png

OUT = Path(__file__).resolve().parent.parent / "src" / "text2anim" / "data" / "pack"
W, H = 640, 480


def canvas(w, h, color=(0, 0, 0, 0)):
    img = np.zeros((h, w, 4), dtype=np.uint8)
    img[...] = color
    return img


def rect(img, x0, y0, x1, y1, color):
    img[max(int(y0), 0):max(int(y1), 0), max(int(x0), 0):max(int(x1), 0)] = color


def ellipse(img, cx, cy, rx, ry, color):
    h, w = img.shape[:2]
    yy, xx = np.mgrid[0:h, 0:w]
    mask = ((xx + 0.5 - cx) / rx) ** 2 + ((yy + 0.5 - cy) / ry) ** 2 <= 1.0
    img[mask] = color


def vgradient(img, y0, y1, top, bottom):
    for y in range(int(y0), int(y1)):
        f = (y - y0) / max(y1 - y0 - 1, 1)
        img[y, :, :3] = [round(a + (b - a) * f) for a, b in zip(top, bottom)]
        img[y, :, 3] = 255


def stars(img, n, seed):
    rng = np.random.default_rng(seed)
    h, w = img.shape[:2]
    for x, y, b in zip(rng.integers(0, w, n), rng.integers(0, h, n), rng.integers(120, 256, n)):
        img[y, x] = (b, b, b, 255)


def segment(img, a, b, thick, color):
    (x0, y0), (x1, y1) = a, b
    rect(img, min(x0, x1) - thick, min(y0, y1) - thick, max(x0, x1) + thick, max(y0, y1) + thick, color)


def save_png(name, img):
    (OUT / name).write_bytes(encode_png(img))


# --- backgrounds ---

def street():
    img = canvas(W, H)
    vgradient(img, 0, 374, (90, 150, 230), (180, 215, 250))
    rect(img, 0, 374, W, H, (90, 90, 95, 255))
    rect(img, 0, 370, W, 374, (160, 160, 160, 255))
    for x in range(20, W, 80):
        rect(img, x, 425, x + 40, 430, (240, 220, 90, 255))
    return img


def black_sky():
    img = canvas(W, H, (0, 0, 0, 255))
    stars(img, 180, 7)
    return img


def space():
    img = canvas(W, H, (8, 10, 30, 255))
    stars(img, 220, 11)
    ellipse(img, 560, 470, 190, 190, (200, 120, 70, 255))
    ellipse(img, 520, 420, 60, 25, (170, 95, 55, 255))
    return img


def tree_scene():
    img = canvas(W, H)
    vgradient(img, 0, 432, (120, 180, 240), (200, 230, 250))
    rect(img, 0, 432, W, H, (70, 150, 60, 255))
    rect(img, 300, 200, 340, 436, (110, 70, 40, 255))
    ellipse(img, 320, 150, 170, 110, (40, 120, 45, 255))
    ellipse(img, 250, 170, 60, 40, (55, 140, 55, 255))
    ellipse(img, 400, 130, 55, 35, (55, 140, 55, 255))
    return img


CIRCUIT = [(0.2, 0.75), (0.2, 0.25), (0.8, 0.25), (0.8, 0.75), (0.2, 0.75)]


def _path_point(frac):
    pts = [(x * W, y * H) for x, y in CIRCUIT]
    lengths = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    target = frac * sum(lengths)
    for (a, b), length in zip(zip(pts, pts[1:]), lengths):
        if target <= length:
            f = target / length
            return a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f
        target -= length
    return pts[-1]


def circuit(stage):
    img = canvas(W, H, (245, 245, 240, 255))
    pts = [(x * W, y * H) for x, y in CIRCUIT]
    wire = (60, 60, 60, 255)
    for a, b in zip(pts, pts[1:]):
        segment(img, a, b, 2, wire)
    # battery on the bottom wire
    rect(img, 300, 345, 340, 375, (245, 245, 240, 255))
    rect(img, 304, 336, 310, 384, (30, 30, 30, 255))
    rect(img, 326, 346, 332, 374, (30, 30, 30, 255))
    # switch on the left wire
    sx, sy = _path_point(0.12)
    rect(img, sx - 4, sy - 18, sx + 4, sy + 18, (245, 245, 240, 255))
    ellipse(img, sx, sy + 18, 5, 5, wire)
    ellipse(img, sx, sy - 18, 5, 5, wire)
    if stage == "open":
        for i in range(30):
            rect(img, sx + i * 0.8 - 2, sy + 18 - i, sx + i * 0.8 + 2, sy + 18 - i + 2, (180, 40, 40, 255))
    else:
        rect(img, sx - 2, sy - 18, sx + 3, sy + 18, (40, 140, 40, 255))
    # bulb on the top wire
    bx, by = _path_point(0.35)
    if stage == "lit":
        for k in range(12):
            ang = k * math.pi / 6
            for r in range(40, 58):
                x, y = bx + r * math.cos(ang), by - 38 - r * math.sin(ang)
                rect(img, x - 1, y - 1, x + 2, y + 2, (250, 200, 40, 255))
        ellipse(img, bx, by - 38, 30, 30, (255, 235, 90, 255))
    else:
        ellipse(img, bx, by - 38, 30, 30, (200, 200, 200, 255))
    rect(img, bx - 12, by - 12, bx + 12, by + 2, (120, 120, 120, 255))
    return img


def ocean():
    img = canvas(W, H, (30, 90, 170, 255))
    for y in range(0, H, 24):
        rect(img, 0, y, W, y + 2, (40, 105, 185, 255))
    land_x = int(0.72 * W)
    rect(img, land_x, 0, W, H, (150, 140, 90, 255))
    rect(img, land_x + 10, 0, W, H, (90, 140, 70, 255))
    return img


def park():
    img = canvas(W, H)
    vgradient(img, 0, 400, (140, 200, 250), (210, 235, 250))
    rect(img, 0, 400, W, H, (90, 170, 80, 255))
    return img


# --- sprites ---

def car(wrecked=False):
    img = canvas(120, 56)
    body = (170, 40, 40, 255) if not wrecked else (120, 60, 55, 255)
    if not wrecked:
        rect(img, 0, 24, 120, 48, body)
        rect(img, 30, 4, 96, 24, body)
        rect(img, 38, 8, 88, 24, (0, 0, 0, 0))      # window: occupant shows through
        rect(img, 112, 28, 120, 34, (250, 240, 150, 255))
    else:
        rect(img, 14, 28, 120, 48, body)
        rect(img, 0, 34, 16, 48, (90, 90, 90, 255))
        rect(img, 34, 10, 96, 28, body)
        rect(img, 42, 14, 88, 28, (0, 0, 0, 0))
        for i in range(10):
            rect(img, 44 + 4 * i, 14 + i, 46 + 4 * i, 16 + i, (220, 220, 220, 255))
    for cx in (25, 95):
        ellipse(img, cx, 46, 10, 10, (20, 20, 20, 255))
        ellipse(img, cx, 46, 4, 4, (150, 150, 150, 255))
    return img


def driver():
    img = canvas(22, 30)
    ellipse(img, 11, 9, 8, 8, (240, 200, 160, 255))
    rect(img, 3, 4, 19, 6, (60, 40, 20, 255))
    rect(img, 2, 17, 20, 30, (40, 70, 160, 255))
    return img


def wall():
    img = canvas(40, 140, (150, 60, 40, 255))
    for row, y in enumerate(range(0, 140, 14)):
        rect(img, 0, y, 40, y + 2, (200, 190, 180, 255))
        off = 0 if row % 2 else 10
        for x in range(off, 40, 20):
            rect(img, x, y, x + 2, y + 14, (200, 190, 180, 255))
    return img


def earth():
    img = canvas(110, 110)
    ellipse(img, 55, 55, 55, 55, (40, 90, 200, 255))
    ellipse(img, 40, 40, 20, 14, (60, 160, 70, 255))
    ellipse(img, 70, 72, 16, 22, (60, 160, 70, 255))
    return img


def moon_frames():
    frames = []
    for k in range(4):
        img = canvas(36, 36, (0, 0, 0, 0))
        ellipse(img, 18, 18, 18, 18, (215, 215, 205, 255))
        # crater drifts around to read as slow rotation
        ang = k * math.pi / 2
        ellipse(img, 18 + 7 * math.cos(ang), 18 + 7 * math.sin(ang), 5, 5, (170, 170, 160, 255))
        ellipse(img, 12, 22, 3, 3, (185, 185, 175, 255))
        frames.append(img)
    return frames


def ship(stage):
    img = canvas(40, 90)
    rect(img, 12, 14, 28, 62, (220, 220, 230, 255))
    ellipse(img, 20, 16, 8, 14, (220, 220, 230, 255))
    ellipse(img, 20, 30, 4, 4, (80, 160, 230, 255))
    rect(img, 4, 48, 12, 64, (190, 40, 40, 255))
    rect(img, 28, 48, 36, 64, (190, 40, 40, 255))
    flame = {"idle": 0, "partial": 12, "full": 26}[stage]
    if flame:
        rect(img, 14, 62, 26, 62 + flame, (250, 160, 30, 255))
        rect(img, 17, 62, 23, 62 + flame * 2 // 3, (255, 240, 120, 255))
    return img


def apple():
    # drawn on an off-white field with mild noise, like a flattened photo
    rng = np.random.default_rng(3)
    img = canvas(50, 50, (255, 255, 255, 255))
    noise = rng.integers(0, 7, (50, 50))
    img[..., :3] = 255 - noise[..., None]
    ellipse(img, 25, 28, 20, 19, (200, 30, 30, 255))
    ellipse(img, 18, 22, 5, 4, (235, 110, 100, 255))
    rect(img, 24, 4, 27, 12, (90, 60, 30, 255))
    ellipse(img, 32, 8, 6, 3, (60, 150, 50, 255))
    return img


def spark():
    img = canvas(18, 18)
    ellipse(img, 9, 9, 5, 5, (255, 240, 120, 255))
    rect(img, 8, 0, 10, 18, (255, 210, 40, 255))
    rect(img, 0, 8, 18, 10, (255, 210, 40, 255))
    ellipse(img, 9, 9, 3, 3, (255, 255, 255, 255))
    return img


def hurricane():
    img = canvas(128, 128)
    yy, xx = np.mgrid[0:128, 0:128]
    dx, dy = xx + 0.5 - 64, yy + 0.5 - 64
    r = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)
    arm = np.cos(2 * theta - r / 9.0) > 0.2
    mask = (r < 62) & arm
    img[mask] = (235, 235, 240, 255)
    img[(r < 62) & ~arm & (r > 10)] = (170, 175, 190, 255)
    img[r < 7] = (30, 60, 110, 255)
    # a tail so quarter turns are visible
    rect(img, 60, 0, 68, 14, (235, 235, 240, 255))
    return img


def girl():
    img = canvas(70, 170)
    ellipse(img, 35, 30, 22, 24, (240, 200, 160, 255))
    rect(img, 12, 4, 58, 18, (120, 70, 30, 255))
    ellipse(img, 35, 40, 5, 4, (170, 60, 60, 255))
    rect(img, 14, 56, 56, 120, (220, 90, 160, 255))
    rect(img, 20, 120, 30, 170, (60, 60, 90, 255))
    rect(img, 40, 120, 50, 170, (60, 60, 90, 255))
    return img


def balloon():
    img = canvas(90, 110)
    ellipse(img, 45, 50, 44, 50, (220, 30, 40, 255))
    ellipse(img, 30, 30, 10, 14, (250, 190, 190, 255))   # camera-flash highlight
    rect(img, 40, 100, 50, 110, (180, 20, 30, 255))
    return img


def swatch(color):
    return canvas(64, 64, color)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    records = []

    def add(lemma, tags, name, img, anchor=(0, 0), key=None, regions=None, kind="static"):
        if kind == "animated":
            frames = img if isinstance(img, list) else [img]
            (OUT / name).write_bytes(encode_gif(frames, delay_ms=120, loop=0))
        else:
            save_png(name, img)
        rec = {"lemma": lemma, "tags": list(tags), "path": name, "kind": kind,
               "anchor": list(anchor), "key": key}
        if regions:
            rec["regions"] = regions
        records.append(rec)

    add("street", ["scene"], "street.png", street())
    add("sky", ["black", "scene"], "sky_black.png", black_sky())
    add("space", ["scene"], "space.png", space())
    add("tree", ["scene"], "tree_scene.png", tree_scene())
    for stage in ("open", "closed", "lit"):
        add("bulb", ["light", "scene", stage], f"circuit_{stage}.png", circuit(stage))
    add("ocean", ["scene"], "ocean.png", ocean(), regions={"land": [0.72, 0.0, 1.0, 1.0]})
    add("park", ["scene"], "park.png", park())
    add("sky", ["blue"], "sky_blue.png", swatch((90, 150, 230, 255)))
    add("sky", ["gray"], "sky_gray.png", swatch((150, 150, 155, 255)))

    add("car", [], "car.png", car(), anchor=(0, 56))
    add("car", ["wrecked"], "car_wrecked.png", car(True), anchor=(0, 56))
    add("driver", [], "driver.png", driver())
    add("wall", [], "wall.png", wall(), anchor=(0, 140))
    add("earth", [], "earth.png", earth(), anchor=(55, 55))
    add("moon", [], "moon.gif", moon_frames(), anchor=(18, 18), kind="animated")
    for stage in ("idle", "partial", "full"):
        add("ship", ["rocket", stage], f"rocket_{stage}.png", ship(stage), anchor=(20, 45))
    add("apple", [], "apple.png", apple(), anchor=(25, 25),
        key={"color": [255, 255, 255], "tolerance": 8})
    add("electricity", [], "spark.png", spark(), anchor=(9, 9))
    add("hurricane", [], "hurricane.gif", hurricane(), anchor=(64, 64), kind="animated")
    add("girl", [], "girl.png", girl(), anchor=(35, 170))
    add("balloon", [], "balloon.png", balloon(), anchor=(45, 55))

    manifest = {"assets": records}
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {len(records)} records to {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
