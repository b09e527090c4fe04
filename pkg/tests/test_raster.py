import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from text2anim.assets import Sprite
from text2anim.raster import composite, rotate90, rotate_point, scale_bicubic

from oracles import naive_bicubic, naive_over

sprites = arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9), st.just(4))).map(Sprite)


def test_scale_constant():
    s = Sprite.solid(10, 10, (12, 200, 77, 255))
    out = scale_bicubic(s, 25, 25)
    assert out == Sprite.solid(25, 25, (12, 200, 77, 255))


def test_scale_identity():
    rng = np.random.default_rng(0)
    s = Sprite(rng.integers(0, 256, (5, 7, 4), dtype=np.uint8))
    assert scale_bicubic(s, 7, 5) == s


@pytest.mark.parametrize("seed", range(5))
def test_scale_matches_oracle_various_sizes(seed):
    rng = np.random.default_rng(100 + seed)
    px = rng.integers(0, 256, (rng.integers(2, 9), rng.integers(2, 9), 4), dtype=np.uint8)
    w, h = int(rng.integers(1, 14)), int(rng.integers(1, 14))
    got = scale_bicubic(Sprite(px), w, h).pixels.astype(int)
    assert np.abs(got - naive_bicubic(px, w, h)).max() <= 1


def test_scale_rejects_empty_target():
    with pytest.raises(ValueError):
        scale_bicubic(Sprite.solid(2, 2, (0, 0, 0, 255)), 0, 3)


@settings(max_examples=100, deadline=None)
@given(sprites, st.tuples(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255), st.integers(0, 255)),
       st.integers(1, 20), st.integers(1, 20))
def test_scale_preserves_constants(shape_from, rgba, w, h):
    s = Sprite.solid(shape_from.width, shape_from.height, rgba)
    assert scale_bicubic(s, w, h) == Sprite.solid(w, h, rgba)


def test_rotate_two_by_one():
    a, b = (1, 2, 3, 255), (4, 5, 6, 255)
    s = Sprite(np.array([[a, b]], np.uint8))
    r = rotate90(s, 1)
    assert r.size == (1, 2)
    assert r.pixels[:, 0].tolist() == [list(a), list(b)]
    assert rotate90(s, 0) is s
    with pytest.raises(ValueError):
        rotate90(s, 4)


@settings(max_examples=100, deadline=None)
@given(sprites, st.integers(0, 3))
def test_rotation_is_a_permutation(s, k):
    r = rotate90(s, k)
    assert sorted(map(tuple, r.pixels.reshape(-1, 4))) == sorted(map(tuple, s.pixels.reshape(-1, 4)))
    assert rotate90(rotate90(s, k), (4 - k) % 4) == s


def test_rotate_point_tracks_pixels():
    px = np.zeros((3, 5, 4), np.uint8)
    px[0, 4] = 255     # top-right corner pixel
    r = rotate90(Sprite(px), 1)
    x, y = rotate_point(4.5, 0.5, 5, 3, 1)
    assert r.pixels[int(y), int(x), 0] == 255


def _bg(w=6, h=5):
    rng = np.random.default_rng(9)
    px = rng.integers(0, 256, (h, w, 4), dtype=np.uint8)
    px[..., 3] = 255
    return Sprite(px)


def test_opaque_replaces_rect():
    bg = _bg()
    s = Sprite.solid(2, 3, (1, 2, 3, 255))
    out = composite(bg, [(s, (1, 1), 0)]).pixels
    assert (out[1:4, 1:3] == (1, 2, 3, 255)).all()
    mask = np.ones(out.shape[:2], bool)
    mask[1:4, 1:3] = False
    assert np.array_equal(out[mask], bg.pixels[mask])


def test_transparent_leaves_background():
    bg = _bg()
    assert composite(bg, [(Sprite.solid(3, 3, (9, 9, 9, 0)), (0, 0), 0)]) == bg


def test_higher_z_wins_regardless_of_list_order():
    bg = _bg()
    lo = Sprite.solid(3, 3, (255, 0, 0, 255))
    hi = Sprite.solid(3, 3, (0, 0, 255, 255))
    out = composite(bg, [(hi, (1, 1), 2), (lo, (0, 0), 1)]).pixels
    assert tuple(out[2, 2]) == (0, 0, 255, 255)
    assert tuple(out[0, 0]) == (255, 0, 0, 255)
    with pytest.raises(ValueError):
        composite(bg, [(hi, (0, 0), 1), (lo, (0, 0), 1)])


def test_off_canvas_clipped():
    bg = _bg()
    s = Sprite.solid(4, 4, (0, 0, 0, 255))
    assert composite(bg, [(s, (-10, -10), 0), (s, (100, 0), 1)]) == bg
    out = composite(bg, [(s, (-2, -2), 0)]).pixels
    assert (out[:2, :2] == (0, 0, 0, 255)).all()


@settings(max_examples=60, deadline=None)
@given(sprites, sprites, st.integers(-4, 6), st.integers(-4, 6), st.integers(-4, 6), st.integers(-4, 6))
def test_composite_matches_oracle_and_associates(s1, s2, x1, y1, x2, y2):
    bg = _bg()
    both = composite(bg, [(s1, (x1, y1), 1), (s2, (x2, y2), 2)])
    stepwise = composite(composite(bg, [(s1, (x1, y1), 0)]), [(s2, (x2, y2), 0)])
    assert both == stepwise
    want = naive_over(naive_over(bg.pixels, s1.pixels, x1, y1), s2.pixels, x2, y2)
    assert np.array_equal(both.pixels, want)
