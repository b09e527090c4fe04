import json
from dataclasses import replace
from pathlib import Path

import pytest

from text2anim.assets import default_manifest_path, load_manifest
from text2anim.parser import parse_sentence
from text2anim.scene import compile_scene
from text2anim.timeline import ResolvedScene, SpriteMeta

FIXTURES = Path(__file__).parent / "fixtures"
SCENES = FIXTURES / "scenes"
SENTENCES = json.loads((SCENES / "sentences.json").read_text())


@pytest.fixture(scope="session")
def pack():
    return load_manifest(default_manifest_path())


@pytest.fixture(scope="session")
def sentences():
    return dict(SENTENCES)


def synthetic_scene(sentence, params=None, sprites=None, canvas=(640, 480), tick_rate=30,
                    backgrounds=None, regions=None):
    """A ResolvedScene with made-up sprite refs, for timeline tests without image files.

    sprites: {slot: {variant: (w, h, ax, ay)}}; slots not listed get 20x20 centred.
    """
    spec = compile_scene(parse_sentence(sentence))
    if params:
        spec = replace(spec, params={**spec.params, **params})
    sprites = sprites or {}
    refs, metas = {}, {}
    from text2anim.scene import TEMPLATES
    template = TEMPLATES[spec.template]
    for ent in spec.entities:
        refs[ent.slot] = {}
        for variant in template.variants.get(ent.slot, {"default": ()}):
            w, h, ax, ay = sprites.get(ent.slot, {}).get(variant, (20, 20, 10, 10))
            ref = f"{ent.slot}_{variant}"
            refs[ent.slot][variant] = ref
            metas[ref] = SpriteMeta((w, h), (ax, ay))
    bgs = backgrounds or {stage: f"bg_{stage}" for stage in template.stages}
    return ResolvedScene(spec, canvas, tick_rate, refs, bgs, metas, regions or {})


# acceptance criteria record one line each; printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {line}")
