"""Image base: manifest loading, modifier-constrained lookup, sprite decoding."""

import io
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DecodeError, ManifestSyntax, MissingFile, NoAsset
from .gif import decompose_animated

DEFAULT_KEY_COLOR = (255, 255, 255)
DEFAULT_KEY_TOLERANCE = 8
GIF_DEFAULT_DELAY_MS = 100


class Sprite:
    """RGBA raster, row-major, non-premultiplied, shape (height, width, 4)."""

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
        if pixels.ndim != 3 or pixels.shape[2] != 4 or pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError(f"sprite pixels must be (h>=1, w>=1, 4), got {pixels.shape}")
        pixels.setflags(write=False)
        self.pixels = pixels

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def size(self):
        return self.width, self.height

    @classmethod
    def solid(cls, width, height, rgba):
        return cls(np.broadcast_to(np.array(rgba, dtype=np.uint8), (height, width, 4)))

    def tobytes(self):
        return self.pixels.tobytes()

    def __eq__(self, other):
        return isinstance(other, Sprite) and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"Sprite({self.width}x{self.height})"


# rendered frames share the sprite representation
Frame = Sprite


@dataclass(frozen=True, eq=False)
class AnimatedSprite:
    frames: tuple
    delays: tuple

    def __post_init__(self):
        if not self.frames:
            raise ValueError("animated sprite needs at least one frame")
        if len(self.delays) != len(self.frames):
            raise ValueError("one delay per frame required")
        if any(d <= 0 for d in self.delays):
            raise ValueError("frame delays must be positive")
        if len({f.size for f in self.frames}) != 1:
            raise ValueError("all frames must share dimensions")

    @property
    def size(self):
        return self.frames[0].size


@dataclass(frozen=True)
class AssetRecord:
    lemma: str
    tags: tuple
    path: str
    kind: str = "static"
    anchor: tuple = (0.0, 0.0)
    key: tuple | None = None  # ((r, g, b), tolerance)
    regions: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def ref(self):
        return self.path


def alpha_key(sprite, color=DEFAULT_KEY_COLOR, tolerance=DEFAULT_KEY_TOLERANCE):
    """Make pixels within ``tolerance`` of ``color`` (every channel) transparent."""
    if not 0 <= tolerance <= 255:
        raise ValueError("tolerance must be within [0, 255]")
    px = sprite.pixels
    diff = np.abs(px[..., :3].astype(np.int16) - np.array(color, dtype=np.int16))
    mask = (diff <= tolerance).all(axis=2)
    out = px.copy()
    out[..., 3][mask] = 0
    return Sprite(out)


def decode_image(data):
    """Decode PNG or GIF bytes into an AnimatedSprite (one frame for stills)."""
    data = bytes(data)
    if data[:6] in (b"GIF87a", b"GIF89a"):
        frames, delays = decompose_animated(data)
        return AnimatedSprite(tuple(Sprite(f) for f in frames), tuple(delays))
    try:
        with Image.open(io.BytesIO(data)) as im:
            rgba = np.array(im.convert("RGBA"))
    except Exception as exc:
        raise DecodeError(f"cannot decode image: {exc}", 0) from None
    return AnimatedSprite((Sprite(rgba),), (GIF_DEFAULT_DELAY_MS,))


@lru_cache(maxsize=256)
def _load_file(path, key):
    anim = decode_image(Path(path).read_bytes())
    if key is not None:
        color, tol = key
        anim = AnimatedSprite(tuple(alpha_key(f, color, tol) for f in anim.frames), anim.delays)
    return anim


def _parse_record(i, obj):
    if not isinstance(obj, dict):
        raise ManifestSyntax(f"asset {i}: expected an object")
    try:
        lemma = obj["lemma"]
        path = obj["path"]
        tags = tuple(obj.get("tags") or ())
        kind = obj.get("kind", "static")
        anchor = tuple(float(v) for v in obj.get("anchor") or (0, 0))
        key = obj.get("key")
        regions = {name: tuple(float(v) for v in box) for name, box in (obj.get("regions") or {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestSyntax(f"asset {i}: {exc!r}") from None
    if not isinstance(lemma, str) or not lemma or not isinstance(path, str) or not path:
        raise ManifestSyntax(f"asset {i}: lemma and path must be nonempty strings")
    if kind not in ("static", "animated"):
        raise ManifestSyntax(f"asset {i}: kind must be 'static' or 'animated'")
    if len(anchor) != 2:
        raise ManifestSyntax(f"asset {i}: anchor must be [x, y]")
    if any(len(box) != 4 for box in regions.values()):
        raise ManifestSyntax(f"asset {i}: regions are [x0, y0, x1, y1] fractions")
    if key is not None:
        try:
            color = tuple(int(c) for c in key.get("color", DEFAULT_KEY_COLOR))
            tol = int(key.get("tolerance", DEFAULT_KEY_TOLERANCE))
        except (AttributeError, TypeError, ValueError) as exc:
            raise ManifestSyntax(f"asset {i}: bad key {exc!r}") from None
        if len(color) != 3 or not 0 <= tol <= 255:
            raise ManifestSyntax(f"asset {i}: key needs an RGB color and tolerance in [0, 255]")
        key = (color, tol)
    return AssetRecord(lemma, tags, path, kind, anchor, key, regions)


def read_manifest(path):
    """Parse a manifest without touching the referenced files."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise MissingFile(str(path)) from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestSyntax(f"{path}: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("assets"), list):
        raise ManifestSyntax(f"{path}: expected an object with an 'assets' list")
    return [_parse_record(i, obj) for i, obj in enumerate(data["assets"])]


def _image_size(path):
    with Image.open(path) as im:
        return im.size


def _anchor_ok(record, size):
    ax, ay = record.anchor
    return 0 <= ax <= size[0] and 0 <= ay <= size[1]


class AssetBase:
    """Immutable collection of asset records rooted at the manifest directory."""

    def __init__(self, records, root):
        self._records = tuple(records)
        self.root = Path(root)
        by_lemma = {}
        for rec in self._records:
            by_lemma.setdefault(rec.lemma, []).append(rec)
        self._by_lemma = {k: tuple(v) for k, v in by_lemma.items()}
        self._by_ref = {rec.ref: rec for rec in self._records}

    @property
    def records(self):
        return self._records

    def __len__(self):
        return len(self._records)

    def query(self, lemma, modifiers=()):
        return query(self, lemma, modifiers)

    def record(self, ref):
        return self._by_ref[ref]

    def load(self, record):
        """Decoded (and keyed, when configured) sprite frames for a record."""
        return _load_file(str(self.root / record.path), record.key)


def query(base, lemma, modifiers=()):
    """Pick the record for ``lemma`` whose tags best match ``modifiers``.

    Most shared tags wins; ties go to the record with fewest extra tags,
    then to the lexicographically smallest path.
    """
    candidates = base._by_lemma.get(lemma)
    if not candidates:
        raise NoAsset(lemma)
    mods = set(modifiers)

    def rank(rec):
        tags = set(rec.tags)
        return (-len(tags & mods), len(tags - mods), rec.path)

    return min(candidates, key=rank)


def load_manifest(path):
    path = Path(path)
    records = read_manifest(path)
    root = path.parent
    for rec in records:
        full = root / rec.path
        if not full.is_file():
            raise MissingFile(str(full))
        try:
            size = _image_size(full)
        except Exception as exc:
            raise DecodeError(f"{full}: {exc}", 0) from None
        if not _anchor_ok(rec, size):
            raise ManifestSyntax(f"{rec.path}: anchor {rec.anchor} outside {size[0]}x{size[1]}")
    return AssetBase(records, root)


def validate_manifest(path):
    """List every problem in a manifest; an empty list means the pack is clean."""
    path = Path(path)
    try:
        records = read_manifest(path)
    except (ManifestSyntax, MissingFile) as exc:
        return [str(exc)]
    problems = []
    seen = {}
    for rec in records:
        full = path.parent / rec.path
        if not full.is_file():
            problems.append(f"missing file: {rec.path}")
        else:
            try:
                size = _image_size(full)
            except Exception as exc:
                problems.append(f"undecodable file: {rec.path} ({exc})")
            else:
                if not _anchor_ok(rec, size):
                    problems.append(f"bad anchor: {rec.path} anchor {list(rec.anchor)} outside {size[0]}x{size[1]}")
        ident = (rec.lemma, tuple(sorted(rec.tags)))
        if ident in seen:
            problems.append(f"duplicate record: lemma {rec.lemma!r} tags {list(ident[1])} ({seen[ident]}, {rec.path})")
        else:
            seen[ident] = rec.path
    return problems


def default_manifest_path():
    return Path(str(resources.files("text2anim").joinpath("data/pack/manifest.json")))


def resolve_manifest_path(explicit=None):
    if explicit:
        return Path(explicit)
    env = os.environ.get("TEXT2ANIM_ASSETS")
    if env:
        return Path(env)
    return default_manifest_path()
