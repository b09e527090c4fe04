"""Command-line interface: parse, plan, render, assets validate.

Exit codes: 0 ok, 1 usage, 2 parse/scene, 3 assets, 4 timeline/render.
"""

import argparse
import hashlib
import sys
from dataclasses import dataclass
from pathlib import Path

from . import canonical
from .assets import load_manifest, resolve_manifest_path, validate_manifest
from .errors import AssetError, ParseError, RenderError, Text2AnimError
from .lexicon import default_lexicon, load_lexicon
from .parser import parse_sentence
from .pipeline import build, load_images
from .render import EncoderConfig, encode, render_frames, sequence_name
from .scene import compile_scene

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_ASSETS, EXIT_RENDER = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def exit_code_for(exc):
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, AssetError):
        return EXIT_ASSETS
    if isinstance(exc, (RenderError, OSError)):
        return EXIT_RENDER
    return EXIT_RENDER


@dataclass(frozen=True)
class RunConfig:
    command: str
    sentence: str = ""
    assets: str | None = None
    output: str | None = None
    fps: int = 30
    size: tuple = (640, 480)
    format: str = "gif"
    np_mode: bool = False
    workers: int = 1

    def __post_init__(self):
        if not 1 <= self.fps <= 60:
            raise UsageError("--fps must be within [1, 60]")
        if self.size[0] < 16 or self.size[1] < 16:
            raise UsageError("--size must be at least 16x16")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")


def _size(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None


def build_parser():
    p = _Parser(prog="text2anim", description="Compile controlled-English sentences into animations.")
    p.add_argument("--lexicon", help="lexicon JSON (default: bundled)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="print the dependency tree")
    sp.add_argument("sentence")
    sp.add_argument("--np", action="store_true", help="accept a bare noun phrase")

    sp = sub.add_parser("plan", help="print the scene spec (or timeline with --ir)")
    sp.add_argument("sentence")
    sp.add_argument("--ir", action="store_true", help="print the timeline IR instead")
    _render_flags(sp)

    sp = sub.add_parser("render", help="render an animation file")
    sp.add_argument("sentence")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--format", choices=("gif", "apng", "png-seq"))
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--dither", action="store_true", help="ordered dithering for GIF palettes")
    _render_flags(sp)

    sp = sub.add_parser("assets", help="asset pack tools")
    asub = sp.add_subparsers(dest="assets_command", required=True, parser_class=_Parser)
    vp = asub.add_parser("validate", help="check a manifest for problems")
    vp.add_argument("manifest", nargs="?")
    vp.add_argument("--assets", dest="assets_flag")
    return p


def _render_flags(sp):
    sp.add_argument("--assets", help="asset manifest (default: $TEXT2ANIM_ASSETS or bundled pack)")
    sp.add_argument("--fps", type=int, default=30)
    sp.add_argument("--size", type=_size, default=(640, 480))


def _sentence(args):
    if not args.sentence.strip():
        raise UsageError("sentence is empty")
    return args.sentence


def _lexicon(args):
    return load_lexicon(args.lexicon) if args.lexicon else default_lexicon()


def cmd_parse(args, out):
    tree = parse_sentence(_sentence(args), _lexicon(args), np_mode=args.np)
    print(canonical.dumps(tree), file=out)
    print(tree.render_text(), file=out)
    return EXIT_OK


def _config(args, command):
    return RunConfig(command=command, sentence=args.sentence, assets=args.assets,
                     output=getattr(args, "output", None), fps=args.fps, size=tuple(args.size),
                     format=getattr(args, "format", None) or "gif",
                     workers=getattr(args, "workers", 1))


def cmd_plan(args, out):
    sentence = _sentence(args)
    cfg = _config(args, "plan")
    lexicon = _lexicon(args)
    if not args.ir:
        spec = compile_scene(parse_sentence(sentence, lexicon), lexicon)
        print(canonical.dumps(spec), file=out)
        return EXIT_OK
    base = load_manifest(resolve_manifest_path(cfg.assets))
    plan = build(sentence, base, cfg.size, cfg.fps, lexicon)
    print(canonical.dumps(plan.ir), file=out)
    return EXIT_OK


def _infer_format(args):
    if args.format:
        return args.format
    suffix = Path(args.output).suffix.lower()
    return "apng" if suffix in (".png", ".apng") else "gif"


def cmd_render(args, out):
    sentence = _sentence(args)
    cfg = _config(args, "render")
    lexicon = _lexicon(args)
    base = load_manifest(resolve_manifest_path(cfg.assets))
    plan = build(sentence, base, cfg.size, cfg.fps, lexicon)
    frames = render_frames(plan.ir, load_images(base, plan.ir), cfg.workers)
    fmt = _infer_format(args)
    config = EncoderConfig.for_tick_rate(cfg.fps, format=fmt, dither=args.dither)
    data = encode(frames, config)
    digest = hashlib.sha256()
    target = Path(cfg.output)
    if fmt == "png-seq":
        target.mkdir(parents=True, exist_ok=True)
        for i, blob in enumerate(data):
            (target / sequence_name(i)).write_bytes(blob)
            digest.update(blob)
    else:
        target.write_bytes(data)
        digest.update(data)
    print(f"frames: {len(frames)}", file=out)
    print(f"duration: {plan.ir.duration} ticks ({plan.ir.duration / cfg.fps:.3f} s)", file=out)
    print(f"sha256: {digest.hexdigest()}", file=out)
    print(f"output: {target}", file=out)
    return EXIT_OK


def cmd_assets(args, out):
    path = resolve_manifest_path(args.manifest or args.assets_flag)
    problems = validate_manifest(path)
    for line in problems:
        print(line, file=out)
    if problems:
        return EXIT_ASSETS
    print(f"ok: {path}", file=out)
    return EXIT_OK


COMMANDS = {"parse": cmd_parse, "plan": cmd_plan, "render": cmd_render, "assets": cmd_assets}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except Text2AnimError as exc:
        index = getattr(exc, "index", None)
        where = f" [token {index}]" if index is not None and index >= 0 else ""
        print(f"error ({type(exc).__name__}){where}: {exc}", file=err)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=err)
        return EXIT_RENDER


def run():
    sys.exit(main())
