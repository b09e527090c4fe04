"""Lossless PNG and APNG writers for RGBA frames."""

import struct
import zlib

import numpy as np

from .errors import EncodeError

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _chunk(kind, body):
    return struct.pack(">I", len(body)) + kind + body + struct.pack(">I", zlib.crc32(kind + body) & 0xFFFFFFFF)


def _ihdr(width, height):
    # 8-bit RGBA, no interlace
    return _chunk(b"IHDR", struct.pack(">2I5B", width, height, 8, 6, 0, 0, 0))


def _filtered(rgba):
    # filter type 1 (Sub) on every row
    h = rgba.shape[0]
    raw = rgba.reshape(h, -1).astype(np.int16)
    sub = raw.copy()
    sub[:, 4:] -= raw[:, :-4]
    rows = (sub & 0xFF).astype(np.uint8)
    return np.hstack([np.ones((h, 1), dtype=np.uint8), rows]).tobytes()


def _check(frames):
    frames = [np.asarray(f, dtype=np.uint8) for f in frames]
    if not frames:
        raise EncodeError("cannot encode zero frames")
    shape = frames[0].shape
    if len(shape) != 3 or shape[2] != 4 or any(f.shape != shape for f in frames):
        raise EncodeError("frames must share one RGBA shape")
    return frames


def encode_png(rgba):
    (rgba,) = _check([rgba])
    h, w = rgba.shape[:2]
    return (PNG_SIGNATURE + _ihdr(w, h)
            + _chunk(b"IDAT", zlib.compress(_filtered(rgba), 6))
            + _chunk(b"IEND", b""))


def encode_apng(frames, delay_ms=100, loop=0):
    frames = _check(frames)
    h, w = frames[0].shape[:2]
    out = bytearray(PNG_SIGNATURE + _ihdr(w, h))
    out += _chunk(b"acTL", struct.pack(">2I", len(frames), loop or 0))
    seq = 0
    for i, frame in enumerate(frames):
        # dispose none, blend source: every frame is a full replacement
        out += _chunk(b"fcTL", struct.pack(">5I2H2B", seq, w, h, 0, 0, int(delay_ms), 1000, 0, 0))
        seq += 1
        data = zlib.compress(_filtered(frame), 6)
        if i == 0:
            out += _chunk(b"IDAT", data)
        else:
            out += _chunk(b"fdAT", struct.pack(">I", seq) + data)
            seq += 1
    out += _chunk(b"IEND", b"")
    return bytes(out)
