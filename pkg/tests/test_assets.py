import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from text2anim.assets import (AssetBase, AssetRecord, Sprite, alpha_key, decode_image,
                              load_manifest, query, resolve_manifest_path, validate_manifest)
from text2anim.errors import DecodeError, ManifestSyntax, MissingFile, NoAsset
from text2anim.gif import encode_gif


def _png(path, rgba):
    Image.fromarray(np.asarray(rgba, dtype=np.uint8), "RGBA").save(path)


def _manifest(tmp_path, records, files=()):
    for name in files:
        _png(tmp_path / name, np.full((4, 6, 4), 200, np.uint8))
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"assets": records}))
    return path


def _base(*records):
    return AssetBase([AssetRecord(lemma, tuple(tags), path) for lemma, tags, path in records], ".")


def test_load_two_records(tmp_path):
    path = _manifest(tmp_path, [
        {"lemma": "sky", "tags": ["blue"], "path": "a.png"},
        {"lemma": "sky", "tags": ["gray"], "path": "b.png", "anchor": [6, 4]},
    ], files=["a.png", "b.png"])
    base = load_manifest(path)
    assert len(base) == 2
    sprite = base.load(base.query("sky", ["gray"])).frames[0]
    assert sprite.size == (6, 4)


def test_missing_file(tmp_path):
    path = _manifest(tmp_path, [{"lemma": "sky", "path": "gone.png"}])
    with pytest.raises(MissingFile):
        load_manifest(path)
    with pytest.raises(MissingFile):
        load_manifest(tmp_path / "nothing.json")


def test_empty_manifest(tmp_path):
    base = load_manifest(_manifest(tmp_path, []))
    assert len(base) == 0
    with pytest.raises(NoAsset):
        base.query("sky")


@pytest.mark.parametrize("records", [
    [{"path": "a.png"}],
    [{"lemma": "sky", "path": "a.png", "kind": "video"}],
    [{"lemma": "sky", "path": "a.png", "anchor": [1]}],
    [{"lemma": "sky", "path": "a.png", "key": {"tolerance": 300}}],
    "not a list",
])
def test_manifest_syntax(tmp_path, records):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"assets": records}))
    with pytest.raises(ManifestSyntax):
        load_manifest(path)


def test_bad_anchor_rejected(tmp_path):
    path = _manifest(tmp_path, [{"lemma": "sky", "path": "a.png", "anchor": [7, 0]}], files=["a.png"])
    with pytest.raises(ManifestSyntax):
        load_manifest(path)


def test_validate_lists_every_problem(tmp_path):
    path = _manifest(tmp_path, [
        {"lemma": "sky", "tags": ["blue"], "path": "a.png"},
        {"lemma": "sky", "tags": ["blue"], "path": "b.png"},
        {"lemma": "car", "path": "missing.png"},
        {"lemma": "car", "tags": ["red"], "path": "a.png", "anchor": [50, 50]},
    ], files=["a.png", "b.png"])
    problems = validate_manifest(path)
    assert any(p.startswith("duplicate record") for p in problems)
    assert any(p.startswith("missing file") for p in problems)
    assert any(p.startswith("bad anchor") for p in problems)
    assert len(problems) == 3


def test_bundled_pack_is_clean():
    assert validate_manifest(resolve_manifest_path()) == []


def test_resolve_manifest_env(monkeypatch, tmp_path):
    monkeypatch.setenv("TEXT2ANIM_ASSETS", str(tmp_path / "env.json"))
    assert resolve_manifest_path() == tmp_path / "env.json"
    assert resolve_manifest_path(tmp_path / "x.json") == tmp_path / "x.json"


def test_query_examples():
    base = _base(("sky", ["blue"], "blue.png"), ("sky", ["gray"], "gray.png"), ("sky", [], "plain.png"))
    assert query(base, "sky", ["blue"]).path == "blue.png"
    assert query(base, "sky", []).path == "plain.png"
    with pytest.raises(NoAsset):
        query(base, "unicorn", [])


def test_query_tie_breaks_on_path():
    base = _base(("car", ["red"], "b.png"), ("car", ["blue"], "a.png"))
    assert query(base, "car", []).path == "a.png"


TAGS = ["blue", "gray", "red", "big", "small", "scene", "wrecked"]


@st.composite
def record_sets(draw):
    n = draw(st.integers(1, 6))
    recs = []
    for i in range(n):
        tags = draw(st.lists(st.sampled_from(TAGS), unique=True, max_size=3))
        recs.append(("thing", tags, f"p{i}.png"))
    return _base(*recs)


@settings(max_examples=200, deadline=None)
@given(record_sets(), st.lists(st.sampled_from(TAGS), unique=True, max_size=3))
def test_query_deterministic_and_specificity_monotone(base, mods):
    winner = query(base, "thing", mods)
    assert query(base, "thing", mods) is winner
    for tag in winner.tags:
        if tag not in mods:
            assert query(base, "thing", mods + [tag]) == winner


def test_alpha_key_examples():
    white = Sprite.solid(3, 2, (255, 255, 255, 255))
    assert (alpha_key(white, tolerance=0).pixels[..., 3] == 0).all()
    red = Sprite.solid(3, 2, (200, 10, 10, 255))
    assert alpha_key(red, tolerance=0) == red
    near = Sprite.solid(1, 1, (250, 251, 249, 255))
    assert alpha_key(near, tolerance=8).pixels[0, 0, 3] == 0
    assert alpha_key(near, tolerance=4).pixels[0, 0, 3] == 255
    with pytest.raises(ValueError):
        alpha_key(near, tolerance=256)


@settings(max_examples=100, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 8), st.integers(1, 8), st.just(4))),
       st.integers(0, 40))
def test_alpha_key_idempotent(px, tol):
    once = alpha_key(Sprite(px), tolerance=tol)
    assert once.size == Sprite(px).size
    assert alpha_key(once, tolerance=tol) == once
    # only alpha ever changes
    assert np.array_equal(once.pixels[..., :3], px[..., :3])


def test_decode_gif_and_png(tmp_path):
    red = np.zeros((2, 2, 4), np.uint8)
    red[...] = (255, 0, 0, 255)
    anim = decode_image(encode_gif([red]))
    assert len(anim.frames) == 1 and (anim.frames[0].pixels == red).all()
    _png(tmp_path / "x.png", red)
    anim = decode_image((tmp_path / "x.png").read_bytes())
    assert anim.frames[0].pixels.tolist() == red.tolist()
    with pytest.raises(DecodeError):
        decode_image(b"\x89PNG garbage")


def test_keyed_record_loads_transparent(pack):
    apple = pack.load(pack.query("apple"))
    px = apple.frames[0].pixels
    assert px[0, 0, 3] == 0
    assert px[px.shape[0] // 2, px.shape[1] // 2, 3] == 255
