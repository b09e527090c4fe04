"""Glue from sentence to frames: parse, compile, resolve assets, build timeline."""

from dataclasses import dataclass

from .assets import load_manifest
from .parser import parse_sentence
from .render import render_frames
from .scene import TEMPLATES, compile_scene
from .timeline import DEFAULT_CANVAS, DEFAULT_TICK_RATE, ResolvedScene, SpriteMeta, build_timeline


def resolve_scene(spec, base, canvas=DEFAULT_CANVAS, tick_rate=DEFAULT_TICK_RATE):
    """Answer every sprite and background query a scene's template needs."""
    template = TEMPLATES[spec.template]
    records = {}
    refs = {}
    for ent in spec.entities:
        variants = template.variants.get(ent.slot, {"default": ()})
        refs[ent.slot] = {}
        for name, tags in variants.items():
            rec = base.query(ent.mention.lemma, list(ent.mention.modifiers) + list(tags))
            refs[ent.slot][name] = rec.ref
            records[rec.ref] = rec
    backgrounds = {}
    regions = {}
    bg_lemma = spec.background["lemma"]
    bg_mods = list(spec.background["modifiers"])
    for stage, tags in template.stages.items():
        rec = base.query(bg_lemma, bg_mods + list(tags))
        backgrounds[stage] = rec.ref
        records[rec.ref] = rec
        for name, (x0, y0, x1, y1) in rec.regions.items():
            regions.setdefault(name, (x0 * canvas[0], y0 * canvas[1], x1 * canvas[0], y1 * canvas[1]))
    sprites = {}
    for ref, rec in records.items():
        anim = base.load(rec)
        delays = tuple(anim.delays) if rec.kind == "animated" and len(anim.frames) > 1 else None
        sprites[ref] = SpriteMeta(anim.size, rec.anchor, delays)
    return ResolvedScene(spec, tuple(canvas), int(tick_rate), refs, backgrounds, sprites, regions)


def load_images(base, ir):
    refs = set(ir.sprites) | {ref for _, ref in ir.backgrounds}
    return {ref: base.load(base.record(ref)) for ref in sorted(refs)}


@dataclass
class Plan:
    tree: object
    spec: object
    scene: object = None
    ir: object = None


def plan_sentence(text, lexicon=None):
    tree = parse_sentence(text, lexicon)
    return Plan(tree, compile_scene(tree, lexicon))


def build(text, base, canvas=DEFAULT_CANVAS, tick_rate=DEFAULT_TICK_RATE, lexicon=None):
    plan = plan_sentence(text, lexicon)
    plan.scene = resolve_scene(plan.spec, base, canvas, tick_rate)
    plan.ir = build_timeline(plan.scene)
    return plan


def render_sentence(text, base, canvas=DEFAULT_CANVAS, tick_rate=DEFAULT_TICK_RATE, workers=1, lexicon=None):
    plan = build(text, base, canvas, tick_rate, lexicon)
    frames = render_frames(plan.ir, load_images(base, plan.ir), workers)
    return plan, frames


def open_assets(path):
    return load_manifest(path)
