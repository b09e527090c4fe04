# GIF89a codec.
#
# acronyms:
#     GCT = Global Color Table
#     LCT = Local Color Table
#     GCE = Graphic Control Extension
#     LSD = Logical Screen Descriptor

import math
import struct

import numpy as np

from .errors import DecodeError, EncodeError

MAX_CODES = 4096
DEFAULT_DELAY_MS = 100

BAYER4 = np.array([
    [0, 8, 2, 10],
    [12, 4, 14, 6],
    [3, 11, 1, 9],
    [15, 7, 13, 5],
], dtype=np.float64)


# --- LZW ------------------------------------------------------------------------------------------

def lzw_encode(indices, min_code_size):
    """Compress a sequence of palette indices into a GIF LZW code stream."""
    clear = 1 << min_code_size
    eoi = clear + 1
    out = bytearray()
    bitbuf = 0
    nbits = 0
    code_size = min_code_size + 1
    next_code = eoi + 1
    table = {}

    def emit(code):
        nonlocal bitbuf, nbits
        bitbuf |= code << nbits
        nbits += code_size
        while nbits >= 8:
            out.append(bitbuf & 0xFF)
            bitbuf >>= 8
            nbits -= 8

    emit(clear)
    it = iter(indices)
    prefix = next(it)
    get = table.get
    for c in it:
        key = (prefix << 8) | c
        code = get(key)
        if code is not None:
            prefix = code
            continue
        emit(prefix)
        if next_code < MAX_CODES:
            table[key] = next_code
            next_code += 1
            if next_code - 1 == 1 << code_size and code_size < 12:
                code_size += 1
        else:
            emit(clear)
            table.clear()
            get = table.get
            code_size = min_code_size + 1
            next_code = eoi + 1
        prefix = c
    emit(prefix)
    emit(eoi)
    if nbits:
        out.append(bitbuf & 0xFF)
    return bytes(out)


def lzw_decode(data, min_code_size, npixels, offset=0):
    """Decode a GIF LZW code stream into at most ``npixels`` indices."""
    clear = 1 << min_code_size
    eoi = clear + 1
    base = [bytes([i]) for i in range(clear)] + [b"", b""]
    table = list(base)
    code_size = min_code_size + 1
    out = bytearray()
    prev = None
    bitbuf = 0
    nbits = 0
    pos = 0
    n = len(data)
    while len(out) < npixels:
        while nbits < code_size:
            if pos >= n:
                raise DecodeError("LZW data ended before image was complete", offset + pos)
            bitbuf |= data[pos] << nbits
            pos += 1
            nbits += 8
        code = bitbuf & ((1 << code_size) - 1)
        bitbuf >>= code_size
        nbits -= code_size

        if code == clear:
            table = list(base)
            code_size = min_code_size + 1
            prev = None
            continue
        if code == eoi:
            break
        if prev is None:
            if code >= clear:
                raise DecodeError(f"invalid first LZW code {code}", offset + pos)
            entry = table[code]
        elif code < len(table):
            entry = table[code]
            if len(table) < MAX_CODES:
                table.append(prev + entry[:1])
        elif code == len(table):
            entry = prev + prev[:1]
            table.append(entry)
        else:
            raise DecodeError(f"invalid LZW code {code}", offset + pos)
        out += entry
        prev = entry
        if len(table) == 1 << code_size and code_size < 12:
            code_size += 1
    if len(out) < npixels:
        raise DecodeError("LZW data ended before image was complete", offset + pos)
    return bytes(out[:npixels])


# --- Palette --------------------------------------------------------------------------------------

def _pack(rgb):
    rgb = rgb.astype(np.uint32)
    return (rgb[..., 0] << 16) | (rgb[..., 1] << 8) | rgb[..., 2]


def _unpack(packed):
    packed = np.asarray(packed, dtype=np.uint32)
    return np.stack([(packed >> 16) & 0xFF, (packed >> 8) & 0xFF, packed & 0xFF], axis=-1).astype(np.uint8)


def median_cut(colors, counts, n_colors):
    """Reduce weighted colors to at most ``n_colors`` box averages.

    colors: (N, 3) uint8 of distinct colors; counts: (N,) pixel counts.
    Boxes are split on their widest channel at the weighted median until
    the palette is full or no box holds more than one color.
    """
    colors = np.asarray(colors, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    if len(colors) == 0:
        return np.zeros((0, 3), dtype=np.uint8)
    packed = (colors[:, 0] << 16) | (colors[:, 1] << 8) | colors[:, 2]
    boxes = [np.arange(len(colors))]
    while len(boxes) < n_colors:
        best, best_range, best_channel = None, 0, 0
        for i, box in enumerate(boxes):
            if len(box) < 2:
                continue
            spans = colors[box].max(axis=0) - colors[box].min(axis=0)
            ch = int(np.argmax(spans))
            if spans[ch] > best_range:
                best, best_range, best_channel = i, int(spans[ch]), ch
        if best is None:
            break
        box = boxes[best]
        order = box[np.lexsort((packed[box], colors[box, best_channel]))]
        cum = np.cumsum(counts[order])
        cut = int(np.searchsorted(cum, cum[-1] / 2.0)) + 1
        cut = min(max(cut, 1), len(order) - 1)
        boxes[best:best + 1] = [order[:cut], order[cut:]]
    palette = []
    for box in boxes:
        w = counts[box].astype(np.float64)
        mean = (colors[box] * w[:, None]).sum(axis=0) / w.sum()
        palette.append(np.floor(mean + 0.5))
    return np.clip(np.array(palette), 0, 255).astype(np.uint8)


def _nearest(colors, palette):
    colors = colors.astype(np.int64)
    pal = palette.astype(np.int64)
    out = np.empty(len(colors), dtype=np.int64)
    for start in range(0, len(colors), 4096):
        chunk = colors[start:start + 4096]
        d = ((chunk[:, None, :] - pal[None, :, :]) ** 2).sum(axis=2)
        out[start:start + 4096] = np.argmin(d, axis=1)
    return out


# --- Encoder --------------------------------------------------------------------------------------

def _changed_rect(prev, cur):
    # one uint32 per RGBA pixel
    diff = (np.ascontiguousarray(prev).view(np.uint32) != np.ascontiguousarray(cur).view(np.uint32))[..., 0]
    rows = np.flatnonzero(diff.any(axis=1))
    if len(rows) == 0:
        return 0, 0, 1, 1
    cols = np.flatnonzero(diff.any(axis=0))
    return int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1


def encode_gif(frames, delay_ms=100, loop=0, palette_size=256, dither=False):
    """Encode RGBA frames as an animated GIF with one global palette.

    Frames without transparent pixels are stored as changed sub-rectangles
    over the previous frame; pixels with alpha < 128 force full frames
    with restore-to-background disposal so the decoded rasters match.
    """
    frames = [np.asarray(f, dtype=np.uint8) for f in frames]
    if not frames:
        raise EncodeError("cannot encode zero frames")
    h, w = frames[0].shape[:2]
    if any(f.shape != (h, w, 4) for f in frames):
        raise EncodeError("frames must share one RGBA shape")
    if not 1 <= w <= 0xFFFF or not 1 <= h <= 0xFFFF:
        raise EncodeError(f"canvas {w}x{h} outside GIF limits")
    if not 2 <= palette_size <= 256:
        raise EncodeError("palette size must be within [2, 256]")
    if delay_ms < 10:
        raise EncodeError("GIF frame delay must be at least 10 ms")

    transparent = any(bool((f[..., 3] < 128).any()) for f in frames)
    rects = []
    for i, f in enumerate(frames):
        if i == 0 or transparent:
            rects.append((0, 0, w, h))
        else:
            rects.append(_changed_rect(frames[i - 1], f))

    # color histogram over the pixels that will actually be written
    uniq_parts, count_parts = [], []
    for f, (x0, y0, x1, y1) in zip(frames, rects):
        sub = f[y0:y1, x0:x1]
        opaque = sub[..., 3] >= 128
        u, c = np.unique(_pack(sub[..., :3][opaque]), return_counts=True)
        uniq_parts.append(u)
        count_parts.append(c)
    allc = np.concatenate(uniq_parts) if uniq_parts else np.zeros(0, np.uint32)
    uniq, inverse = np.unique(allc, return_inverse=True)
    counts = np.bincount(inverse, weights=np.concatenate(count_parts), minlength=len(uniq))

    slots = palette_size - (1 if transparent else 0)
    exact = len(uniq) <= slots and not dither
    if exact:
        palette = _unpack(uniq).reshape(-1, 3)
    else:
        palette = median_cut(_unpack(uniq).reshape(-1, 3), counts, slots)
    if len(palette) == 0:
        palette = np.zeros((1, 3), dtype=np.uint8)
    trans_index = len(palette) if transparent else None
    ncolors = len(palette) + (1 if transparent else 0)
    table_bits = max(1, math.ceil(math.log2(max(ncolors, 2))))
    table = np.zeros((1 << table_bits, 3), dtype=np.uint8)
    table[:len(palette)] = palette
    min_code_size = max(2, table_bits)
    lookup = None if exact else _nearest(_unpack(uniq).reshape(-1, 3), palette)

    out = bytearray(b"GIF89a")
    out += struct.pack("<2H3B", w, h, 0x80 | ((table_bits - 1) << 4) | (table_bits - 1), 0, 0)
    out += table.tobytes()
    if len(frames) > 1 and loop is not None:
        out += b"\x21\xff\x0bNETSCAPE2.0" + struct.pack("<BBHB", 3, 1, loop, 0)

    delay_cs = max(1, int(math.floor(delay_ms / 10.0 + 0.5)))
    disposal = 2 if transparent else 1
    for f, (x0, y0, x1, y1) in zip(frames, rects):
        sub = f[y0:y1, x0:x1]
        rgb = sub[..., :3]
        if dither:
            rh, rw = rgb.shape[:2]
            yy, xx = np.mgrid[y0:y0 + rh, x0:x0 + rw]
            spread = 256.0 / max(len(palette), 2) ** (1.0 / 3.0)
            offset = (BAYER4[yy % 4, xx % 4] + 0.5) / 16.0 - 0.5
            rgb = np.clip(np.floor(rgb + offset[..., None] * spread + 0.5), 0, 255).astype(np.uint8)
            ucol, inv = np.unique(_pack(rgb).ravel(), return_inverse=True)
            idx = _nearest(_unpack(ucol).reshape(-1, 3), palette)[inv]
        else:
            pos = np.searchsorted(uniq, _pack(rgb).ravel())
            pos = np.minimum(pos, max(len(uniq) - 1, 0))
            idx = pos if exact else lookup[pos]
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        if transparent:
            idx = np.where(sub[..., 3].ravel() < 128, trans_index, idx)
        packed = (disposal << 2) | (1 if transparent else 0)
        out += struct.pack("<4BHBB", 0x21, 0xF9, 4, packed, delay_cs, trans_index or 0, 0)
        out += struct.pack("<B4HB", 0x2C, x0, y0, x1 - x0, y1 - y0, 0)
        out.append(min_code_size)
        data = lzw_encode(idx.astype(np.uint8).tobytes(), min_code_size)
        for start in range(0, len(data), 255):
            chunk = data[start:start + 255]
            out.append(len(chunk))
            out += chunk
        out.append(0)
    out.append(0x3B)
    return bytes(out)


# --- Decoder --------------------------------------------------------------------------------------

class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def read(self, n):
        if self.pos + n > len(self.data):
            raise DecodeError("unexpected end of GIF data", len(self.data))
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def byte(self):
        return self.read(1)[0]

    def subblocks(self):
        parts = []
        size = self.byte()
        while size:
            parts.append(self.read(size))
            size = self.byte()
        return b"".join(parts)


def _deinterlace(indices, width, height):
    rows = np.frombuffer(indices, dtype=np.uint8).reshape(height, width)
    order = []
    for start, step in ((0, 8), (4, 8), (2, 4), (1, 2)):
        order.extend(range(start, height, step))
    out = np.empty_like(rows)
    out[order] = rows
    return out


def decompose_animated(data):
    """Decode a GIF into fully composited RGBA frames and per-frame delays.

    Returns (frames, delays_ms). Each frame is the complete visible raster
    after applying the previous frame's disposal method; areas never
    painted are transparent black.
    """
    r = _Reader(bytes(data))
    sig = r.read(6)
    if sig not in (b"GIF87a", b"GIF89a"):
        raise DecodeError("not a GIF file", 0)
    width, height, flags, _bg, _aspect = struct.unpack("<2H3B", r.read(7))
    if width == 0 or height == 0:
        raise DecodeError("zero-sized logical screen", 6)
    gct = None
    if flags & 0x80:
        gct = np.frombuffer(r.read(3 << ((flags & 7) + 1)), dtype=np.uint8).reshape(-1, 3)

    canvas = np.zeros((height, width, 4), dtype=np.uint8)
    frames, delays = [], []
    gce = None
    pending = None  # (disposal, rect, snapshot) of the previous image

    while True:
        at = r.pos
        block = r.byte()
        if block == 0x3B:
            break
        if block == 0x21:
            label = r.byte()
            if label == 0xF9:
                body = r.subblocks()
                if len(body) < 4:
                    raise DecodeError("short graphic control extension", at)
                packed, delay_cs, tindex = struct.unpack("<BHB", body[:4])
                gce = ((packed >> 2) & 7, delay_cs, tindex if packed & 1 else None)
            else:
                r.subblocks()
            continue
        if block != 0x2C:
            raise DecodeError(f"unknown block type 0x{block:02x}", at)

        x0, y0, iw, ih, iflags = struct.unpack("<4HB", r.read(9))
        table = gct
        if iflags & 0x80:
            table = np.frombuffer(r.read(3 << ((iflags & 7) + 1)), dtype=np.uint8).reshape(-1, 3)
        if table is None:
            raise DecodeError("image without a color table", at)
        min_code_size = r.byte()
        if not 2 <= min_code_size <= 11:
            raise DecodeError(f"bad LZW minimum code size {min_code_size}", r.pos - 1)
        data_at = r.pos
        lzw = r.subblocks()
        if iw == 0 or ih == 0:
            gce = None
            continue
        indices = lzw_decode(lzw, min_code_size, iw * ih, offset=data_at)
        if iflags & 0x40:
            idx = _deinterlace(indices, iw, ih)
        else:
            idx = np.frombuffer(indices, dtype=np.uint8).reshape(ih, iw)

        if pending is not None:
            disposal, (px0, py0, px1, py1), snapshot = pending
            if disposal == 2:
                canvas[py0:py1, px0:px1] = 0
            elif disposal == 3 and snapshot is not None:
                canvas = snapshot
        disposal, delay_cs, tindex = gce or (0, 0, None)
        snapshot = canvas.copy() if disposal == 3 else None

        cx0, cy0 = min(x0, width), min(y0, height)
        cx1, cy1 = min(x0 + iw, width), min(y0 + ih, height)
        if cx1 > cx0 and cy1 > cy0:
            vis = idx[: cy1 - cy0, : cx1 - cx0]
            if int(vis.max(initial=0)) >= len(table):
                padded = np.zeros((256, 3), dtype=np.uint8)
                padded[: len(table)] = table
                table = padded
            rgb = table[vis]
            region = canvas[cy0:cy1, cx0:cx1]
            mask = np.ones(vis.shape, dtype=bool) if tindex is None else vis != tindex
            region[..., :3][mask] = rgb[mask]
            region[..., 3][mask] = 255
        frames.append(canvas.copy())
        delays.append(delay_cs * 10 if delay_cs else DEFAULT_DELAY_MS)
        pending = (disposal, (cx0, cy0, cx1, cy1), snapshot)
        gce = None

    if not frames:
        raise DecodeError("GIF contains no images", r.pos)
    return frames, delays
