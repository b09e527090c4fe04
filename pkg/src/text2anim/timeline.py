"""Tick-based timeline IR: motion segments, tracks, template instantiation,
pure per-tick sampling, and collision-event resolution.

Coordinates are canvas pixels, origin top-left, y growing downward. A
track's position is where the sprite's anchor point lands on the canvas.
"""

import bisect
import math
from dataclasses import dataclass, field, replace

from .errors import MissingParam, NeverCollides, RenderError, TickOutOfRange
from .raster import round_half_up

DEFAULT_TICK_RATE = 30
DEFAULT_CANVAS = (640, 480)
MAX_DURATION = 36000   # 20 minutes at 30 ticks/s


# --- motion segments ------------------------------------------------------------------------------

@dataclass(frozen=True)
class _Segment:
    start: int
    end: int

    def __post_init__(self):
        if self.end - self.start < 1:
            raise ValueError(f"{type(self).__name__} needs end > start, got [{self.start}, {self.end})")

    @property
    def length(self):
        return self.end - self.start


@dataclass(frozen=True)
class Linear(_Segment):
    p0: tuple = (0.0, 0.0)
    v: tuple = (0.0, 0.0)
    kind = "Linear"


@dataclass(frozen=True)
class Accelerated(_Segment):
    p0: tuple = (0.0, 0.0)
    v0: tuple = (0.0, 0.0)
    a: tuple = (0.0, 0.0)
    kind = "Accelerated"


@dataclass(frozen=True)
class OrbitArc(_Segment):
    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    theta0: float = 0.0
    dtheta: float = 1.0
    kind = "Orbit"

    def __post_init__(self):
        super().__post_init__()
        if not self.radius > 0:
            raise ValueError("orbit radius must be positive")


@dataclass(frozen=True)
class Bezier(_Segment):
    points: tuple = ((0.0, 0.0),) * 4
    kind = "Bezier"


@dataclass(frozen=True)
class Hold(_Segment):
    p0: tuple = (0.0, 0.0)
    kind = "Hold"


def position_at(seg, t):
    """Point of ``seg`` at ``t`` ticks after its start."""
    if isinstance(seg, Linear):
        return (seg.p0[0] + seg.v[0] * t, seg.p0[1] + seg.v[1] * t)
    if isinstance(seg, Accelerated):
        return (seg.p0[0] + seg.v0[0] * t + 0.5 * seg.a[0] * t * t,
                seg.p0[1] + seg.v0[1] * t + 0.5 * seg.a[1] * t * t)
    if isinstance(seg, OrbitArc):
        theta = math.radians(seg.theta0 + seg.dtheta * t)
        return (seg.center[0] + seg.radius * math.cos(theta),
                seg.center[1] - seg.radius * math.sin(theta))
    if isinstance(seg, Bezier):
        u = t / seg.length
        m = 1.0 - u
        b = (m * m * m, 3 * m * m * u, 3 * m * u * u, u * u * u)
        p = seg.points
        return (sum(w * q[0] for w, q in zip(b, p)), sum(w * q[1] for w, q in zip(b, p)))
    if isinstance(seg, Hold):
        return seg.p0
    raise TypeError(f"unknown segment {seg!r}")


def segment_to_dict(seg):
    d = {"kind": seg.kind, "start": seg.start, "end": seg.end}
    for name in ("p0", "v", "v0", "a", "center", "radius", "theta0", "dtheta"):
        if hasattr(seg, name):
            value = getattr(seg, name)
            d[name] = list(value) if isinstance(value, tuple) else value
    if isinstance(seg, Bezier):
        d["points"] = [list(p) for p in seg.points]
    return d


# --- tracks and IR --------------------------------------------------------------------------------

@dataclass(frozen=True)
class SwapEvent:
    tick: int | None       # None until a collision trigger is resolved
    sprite: str
    trigger: str = "tick"  # "tick" | "collision"

    def to_dict(self):
        return {"tick": self.tick, "sprite": self.sprite, "trigger": self.trigger}


@dataclass(frozen=True)
class SpriteMeta:
    size: tuple            # native (w, h)
    anchor: tuple          # (x, y) in native pixels
    delays: tuple | None = None

    def to_dict(self):
        return {"size": list(self.size), "anchor": list(self.anchor),
                "delays": list(self.delays) if self.delays else None}


@dataclass(frozen=True)
class Track:
    entity: str
    sprite: str
    z: int
    segments: tuple
    scale_keys: tuple = ()           # (tick, w, h)
    rotation_interval: int | None = None
    swaps: tuple = ()
    # motion installed at the collision tick: ("hold",) | ("linear", v) | ("accelerated", v0, a)
    after_collision: tuple | None = None

    def to_dict(self):
        return {
            "entity": self.entity,
            "sprite": self.sprite,
            "z": self.z,
            "segments": [segment_to_dict(s) for s in self.segments],
            "scale_keys": [list(k) for k in self.scale_keys],
            "rotation_interval": self.rotation_interval,
            "swaps": [s.to_dict() for s in self.swaps],
            "after_collision": [list(x) if isinstance(x, tuple) else x for x in self.after_collision]
            if self.after_collision else None,
        }


@dataclass(frozen=True)
class CollisionRule:
    mover: str
    target: str
    tick: int | None = None


@dataclass(frozen=True)
class TimelineIR:
    template: str
    canvas: tuple
    tick_rate: int
    duration: int
    backgrounds: tuple               # (tick, ref), strictly increasing ticks
    tracks: tuple
    sprites: dict                    # ref -> SpriteMeta
    collision: CollisionRule | None = None
    markers: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.duration < 1:
            raise ValueError("timeline duration must be at least one tick")
        zs = [t.z for t in self.tracks]
        if len(set(zs)) != len(zs):
            raise ValueError("track z-orders must be unique")
        ticks = [t for t, _ in self.backgrounds]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("background swap ticks must be strictly increasing")

    def track(self, entity):
        for t in self.tracks:
            if t.entity == entity:
                return t
        raise KeyError(entity)

    @property
    def resolved(self):
        return all(s.tick is not None for t in self.tracks for s in t.swaps) and (
            self.collision is None or self.collision.tick is not None)

    def to_dict(self):
        return {
            "template": self.template,
            "canvas": list(self.canvas),
            "tick_rate": self.tick_rate,
            "duration": self.duration,
            "backgrounds": [[t, ref] for t, ref in self.backgrounds],
            "tracks": [t.to_dict() for t in self.tracks],
            "sprites": {ref: m.to_dict() for ref, m in sorted(self.sprites.items())},
            "collision": None if self.collision is None else {
                "mover": self.collision.mover, "target": self.collision.target,
                "tick": self.collision.tick},
            "markers": dict(self.markers),
        }


@dataclass(frozen=True)
class EntityState:
    entity: str
    position: tuple
    size: tuple
    quarter_turns: int
    sprite: str
    frame: int
    visible: bool
    z: int
    anchor: tuple


@dataclass(frozen=True)
class SceneState:
    tick: int
    background: str | None
    entities: tuple

    def entity(self, name):
        for e in self.entities:
            if e.entity == name:
                return e
        raise KeyError(name)


@dataclass(frozen=True)
class ResolvedScene:
    """A SceneSpec with every sprite query answered and the output frame fixed."""
    spec: object
    canvas: tuple
    tick_rate: int
    refs: dict          # slot -> {variant: ref}
    backgrounds: dict   # stage -> ref
    sprites: dict       # ref -> SpriteMeta
    regions: dict = field(default_factory=dict)   # name -> (x0, y0, x1, y1) canvas px


# --- sampling -------------------------------------------------------------------------------------

def _segment_index(track, tick):
    starts = [s.start for s in track.segments]
    i = bisect.bisect_right(starts, tick) - 1
    if i < 0 or tick >= track.segments[i].end:
        raise RenderError(f"track {track.entity}: no motion segment covers tick {tick}")
    return i


def track_position(track, tick):
    seg = track.segments[_segment_index(track, tick)]
    return position_at(seg, tick - seg.start)


def _interp_keys(keys, tick):
    if tick <= keys[0][0]:
        return keys[0][1], keys[0][2]
    if tick >= keys[-1][0]:
        return keys[-1][1], keys[-1][2]
    i = bisect.bisect_right([k[0] for k in keys], tick) - 1
    t0, w0, h0 = keys[i]
    t1, w1, h1 = keys[i + 1]
    f = (tick - t0) / (t1 - t0)
    return w0 + (w1 - w0) * f, h0 + (h1 - h0) * f


def quarter_turns(interval, tick):
    return (tick // interval) % 4 if interval else 0


def active_sprite(track, tick):
    ref = track.sprite
    for ev in track.swaps:
        if ev.tick is not None and ev.tick <= tick:
            ref = ev.sprite
    return ref


def frame_index(delays, tick, tick_rate):
    """Frame of an animated sprite shown at ``tick``, looping over its delays."""
    if not delays or len(delays) == 1:
        return 0
    cycle = sum(delays)
    # elapsed ms = tick * 1000 / tick_rate, kept in integers scaled by tick_rate
    elapsed = (tick * 1000) % (cycle * tick_rate)
    acc = 0
    for i, d in enumerate(delays):
        acc += d * tick_rate
        if elapsed < acc:
            return i
    return len(delays) - 1


def box_at(pos, size, anchor_px):
    x0 = pos[0] - anchor_px[0]
    y0 = pos[1] - anchor_px[1]
    return (x0, y0, x0 + size[0], y0 + size[1])


def sample(ir, tick):
    if not 0 <= tick < ir.duration:
        raise TickOutOfRange(tick, ir.duration)
    if not ir.resolved:
        raise RenderError("timeline has unresolved collision events")
    background = None
    for t, ref in ir.backgrounds:
        if t <= tick:
            background = ref
    states = []
    cw, ch = ir.canvas
    for track in ir.tracks:
        ref = active_sprite(track, tick)
        meta = ir.sprites[ref]
        pos = track_position(track, tick)
        size = _interp_keys(track.scale_keys, tick) if track.scale_keys else tuple(float(v) for v in meta.size)
        anchor = (meta.anchor[0] * size[0] / meta.size[0], meta.anchor[1] * size[1] / meta.size[1])
        x0, y0, x1, y1 = box_at(pos, size, anchor)
        visible = x1 > 0 and y1 > 0 and x0 < cw and y0 < ch
        states.append(EntityState(
            entity=track.entity,
            position=pos,
            size=size,
            quarter_turns=quarter_turns(track.rotation_interval, tick),
            sprite=ref,
            frame=frame_index(meta.delays, tick, ir.tick_rate),
            visible=visible,
            z=track.z,
            anchor=anchor,
        ))
    return SceneState(tick, background, tuple(states))


# --- collisions -----------------------------------------------------------------------------------

def _extent(ir, track, extents):
    if extents and track.entity in extents:
        w, h, ax, ay = extents[track.entity]
        return (w, h), (ax, ay)
    meta = ir.sprites[track.sprite]
    return meta.size, meta.anchor


def boxes_overlap(a, b):
    # closed boxes: touching edges count as contact
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


def _linear_window(p, v, lo_bound, hi_bound):
    """Ticks t where lo_bound <= p + v*t <= hi_bound, as a real interval."""
    if v == 0:
        return (-math.inf, math.inf) if lo_bound <= p <= hi_bound else (math.inf, -math.inf)
    t1 = (lo_bound - p) / v
    t2 = (hi_bound - p) / v
    return (min(t1, t2), max(t1, t2))


def _first_contact(ir, mover, target, extents):
    msize, manchor = _extent(ir, mover, extents)
    tsize, tanchor = _extent(ir, target, extents)

    def hit(t):
        a = box_at(track_position(mover, t), msize, manchor)
        b = box_at(track_position(target, t), tsize, tanchor)
        return boxes_overlap(a, b)

    for seg in mover.segments:
        static_target = all(isinstance(s, Hold) for s in target.segments) and len(target.segments) == 1
        if isinstance(seg, Linear) and static_target:
            b = box_at(target.segments[0].p0, tsize, tanchor)
            # mover box x0(t) = p.x - anchor.x + v.x * t must satisfy b.x0 - w <= x0(t) <= b.x1
            wx = _linear_window(seg.p0[0] - manchor[0], seg.v[0], b[0] - msize[0], b[2])
            wy = _linear_window(seg.p0[1] - manchor[1], seg.v[1], b[1] - msize[1], b[3])
            lo, hi = max(wx[0], wy[0]), min(wx[1], wy[1])
            if lo > hi + 1e-9:
                continue
            first = seg.start + max(0, math.ceil(lo - 1e-9))
            last = seg.start + (math.floor(hi + 1e-9) if hi != math.inf else seg.length)
            # guard the float rounding of the closed form with direct checks
            first = max(first - 1, seg.start)
            while first < seg.end and first <= last + 1 and not hit(first):
                first += 1
            if first < seg.end and hit(first):
                return first
        else:
            for t in range(seg.start, seg.end):
                if hit(t):
                    return t
    return None


def _truncate(track, tick):
    """Keep the track's motion before ``tick`` and install its post-collision motion."""
    pos = track_position(track, tick)
    kept = []
    for seg in track.segments:
        if seg.end <= tick:
            kept.append(seg)
        elif seg.start < tick:
            kept.append(replace(seg, end=tick))
    end = track.segments[-1].end
    spec = track.after_collision
    if spec[0] == "hold":
        tail = Hold(tick, end, pos)
    elif spec[0] == "linear":
        tail = Linear(tick, end, pos, tuple(spec[1]))
    elif spec[0] == "accelerated":
        tail = Accelerated(tick, end, pos, tuple(spec[1]), tuple(spec[2]))
    else:
        raise RenderError(f"unknown post-collision motion {spec[0]!r}")
    swaps = tuple(replace(s, tick=tick) if s.trigger == "collision" else s for s in track.swaps)
    return replace(track, segments=tuple(kept) + (tail,), swaps=swaps)


def resolve_collisions(ir, extents=None):
    """Rewrite collision-triggered events as concrete-tick events.

    extents: optional {entity: (w, h, anchor_x, anchor_y)} overriding the
    native sprite extents recorded in the IR.
    """
    if ir.collision is None or ir.collision.tick is not None:
        return ir
    mover = ir.track(ir.collision.mover)
    target = ir.track(ir.collision.target)
    tick = _first_contact(ir, mover, target, extents)
    if tick is None or tick >= ir.duration:
        raise NeverCollides(f"{mover.entity} never reaches {target.entity} within {ir.duration} ticks")
    tracks = tuple(_truncate(t, tick) if t.after_collision else t for t in ir.tracks)
    markers = dict(ir.markers, collision=tick)
    return replace(ir, tracks=tracks, collision=replace(ir.collision, tick=tick), markers=markers)


# --- template instantiation -----------------------------------------------------------------------

def _param(scene, name):
    params = scene.spec.params
    if name not in params:
        raise MissingParam(scene.spec.template, name)
    return params[name]


def _at(scene, name):
    fx, fy = _param(scene, name)
    return (fx * scene.canvas[0], fy * scene.canvas[1])


def _ref(scene, slot, variant="default"):
    return scene.refs[slot][variant]


def _z(scene, slot):
    return scene.spec.entity(slot).z


def _has(scene, slot):
    return scene.spec.entity(slot) is not None


def _duration(scene):
    d = int(_param(scene, "duration"))
    if not 1 <= d <= MAX_DURATION:
        raise RenderError(f"duration {d} outside [1, {MAX_DURATION}]")
    return d


def _ir(scene, duration, tracks, backgrounds=None, **kw):
    if backgrounds is None:
        backgrounds = ((0, scene.backgrounds["default"]),)
    return TimelineIR(
        template=scene.spec.template,
        canvas=tuple(scene.canvas),
        tick_rate=scene.tick_rate,
        duration=duration,
        backgrounds=tuple(backgrounds),
        tracks=tuple(sorted(tracks, key=lambda t: t.z)),
        sprites=dict(scene.sprites),
        **kw,
    )


def _collide(scene):
    duration = _duration(scene)
    speed = float(_param(scene, "speed"))
    car_at = _at(scene, "vehicle_at")
    wall_at = _at(scene, "obstacle_at")
    sign = 1.0 if wall_at[0] > car_at[0] else -1.0
    v = (sign * speed, 0.0)
    offset = _param(scene, "occupant_offset")
    eject = tuple(float(c) for c in _param(scene, "eject_velocity"))
    gravity = float(_param(scene, "eject_gravity"))
    tracks = [
        Track("obstacle", _ref(scene, "obstacle"), _z(scene, "obstacle"), (Hold(0, duration, wall_at),)),
        Track("vehicle", _ref(scene, "vehicle"), _z(scene, "vehicle"), (Linear(0, duration, car_at, v),),
              swaps=(SwapEvent(None, _ref(scene, "vehicle", "wrecked"), "collision"),),
              after_collision=("hold",)),
    ]
    if _has(scene, "occupant"):
        p0 = (car_at[0] + offset[0], car_at[1] + offset[1])
        after = ("accelerated", eject, (0.0, gravity)) if gravity else ("linear", eject)
        tracks.append(Track("occupant", _ref(scene, "occupant"), _z(scene, "occupant"),
                            (Linear(0, duration, p0, v),), after_collision=after))
    return _ir(scene, duration, tracks, collision=CollisionRule("vehicle", "obstacle"))


def _orbit(scene):
    duration = _duration(scene)
    center = _at(scene, "center_at")
    radius = float(_param(scene, "radius")) * scene.canvas[0]
    tracks = [Track("orbiter", _ref(scene, "orbiter"), _z(scene, "orbiter"),
                    (OrbitArc(0, duration, center, radius,
                              float(_param(scene, "theta0")), float(_param(scene, "dtheta"))),))]
    if _has(scene, "center"):
        tracks.append(Track("center", _ref(scene, "center"), _z(scene, "center"),
                            (Hold(0, duration, center),)))
    return _ir(scene, duration, tracks)


def _off_canvas(scene, pos, meta):
    x0, y0, x1, y1 = box_at(pos, meta.size, meta.anchor)
    w, h = scene.canvas
    return x1 < 0 or y1 < 0 or x0 > w or y0 > h


def _staged_accelerate(scene):
    start = _at(scene, "start_at")
    hx, hy = _param(scene, "heading")
    norm = math.hypot(hx, hy) or 1.0
    heading = (hx / norm, hy / norm)
    t1, t2 = (int(t) for t in _param(scene, "stage_ticks"))
    s0, s1, s2 = (float(s) for s in _param(scene, "stage_speeds"))
    if not 0 < t1 < t2:
        raise RenderError("stage ticks must satisfy 0 < first < second")
    refs = [_ref(scene, "mover", v) for v in ("idle", "partial", "full")]

    def vel(s):
        return (heading[0] * s, heading[1] * s)

    p1 = (start[0] + vel(s0)[0] * t1, start[1] + vel(s0)[1] * t1)
    p2 = (p1[0] + vel(s1)[0] * (t2 - t1), p1[1] + vel(s1)[1] * (t2 - t1))
    full = scene.sprites[refs[2]]
    # run until the full-throttle sprite has left the canvas
    duration = t2 + 4 * scene.tick_rate
    if s2 > 0:
        for t in range(t2, MAX_DURATION):
            pos = (p2[0] + vel(s2)[0] * (t - t2), p2[1] + vel(s2)[1] * (t - t2))
            if _off_canvas(scene, pos, full):
                duration = t + 1
                break

    first = Hold(0, t1, start) if s0 == 0 else Linear(0, t1, start, vel(s0))
    if _param(scene, "path") == "bezier":
        end = (p2[0] + vel(s2)[0] * (duration - t2), p2[1] + vel(s2)[1] * (duration - t2))
        controls = _param(scene, "controls")
        if controls:
            c1, c2 = ((c[0] * scene.canvas[0], c[1] * scene.canvas[1]) for c in controls)
        else:
            c1 = (p1[0] + (end[0] - p1[0]) / 3, p1[1] + (end[1] - p1[1]) / 3)
            c2 = (p1[0] + 2 * (end[0] - p1[0]) / 3, p1[1] + 2 * (end[1] - p1[1]) / 3)
        segments = (first, Bezier(t1, duration, (p1, c1, c2, end)))
    else:
        segments = (first, Linear(t1, t2, p1, vel(s1)), Linear(t2, duration, p2, vel(s2)))
    swaps = (SwapEvent(t1, refs[1]), SwapEvent(t2, refs[2]))
    track = Track("mover", refs[0], _z(scene, "mover"), segments, swaps=swaps)
    return _ir(scene, duration, [track], markers={"stages": [t1, t2]})


def _gravity_fall(scene):
    duration = _duration(scene)
    start = _at(scene, "start_at")
    ground = float(_param(scene, "ground")) * scene.canvas[1]
    g = float(_param(scene, "gravity"))
    hang = int(_param(scene, "hang_ticks"))
    if g <= 0:
        raise RenderError("gravity must be positive")
    ref = _ref(scene, "faller")
    meta = scene.sprites[ref]
    land_y = ground - (meta.size[1] - meta.anchor[1])
    drop = land_y - start[1]
    hang = min(max(hang, 0), duration - 1)
    segments = []
    if hang:
        segments.append(Hold(0, hang, start))
    if drop > 0:
        fall = math.ceil(math.sqrt(2 * drop / g))
        end = min(hang + fall, duration)
        segments.append(Accelerated(hang, end, start, (0.0, 0.0), (0.0, g)))
        if end < duration:
            segments.append(Hold(end, duration, (start[0], land_y)))
        markers = {"landing": end}
    else:
        segments.append(Hold(hang, duration, start))
        markers = {}
    track = Track("faller", ref, _z(scene, "faller"), tuple(segments))
    return _ir(scene, duration, [track], markers=markers)


def _circuit(scene):
    duration = _duration(scene)
    pts = [(x * scene.canvas[0], y * scene.canvas[1]) for x, y in _param(scene, "path")]
    legs = [(a, b) for a, b in zip(pts, pts[1:]) if a != b]
    if not legs:
        raise RenderError("circuit path needs at least two distinct points")
    lengths = [math.dist(a, b) for a, b in legs]
    total = sum(lengths)
    if duration < len(legs):
        raise RenderError("duration too short for the circuit path")
    bounds = [0]
    acc = 0.0
    for i, length in enumerate(lengths):
        acc += length
        b = round_half_up(duration * acc / total) if i < len(legs) - 1 else duration
        # every leg gets at least one tick and leaves room for the rest
        b = min(max(b, bounds[-1] + 1), duration - (len(legs) - 1 - i))
        bounds.append(b)
    segments = []
    travelled = [0.0]
    for (a, b), t0, t1, length in zip(legs, bounds, bounds[1:], lengths):
        n = t1 - t0
        segments.append(Linear(t0, t1, a, ((b[0] - a[0]) / n, (b[1] - a[1]) / n)))
        travelled.append(travelled[-1] + length)

    def distance(t):
        i = bisect.bisect_right(bounds, t) - 1
        i = min(i, len(segments) - 1)
        return travelled[i] + lengths[i] * (t - bounds[i]) / (bounds[i + 1] - bounds[i])

    def reach(frac):
        target = frac * total
        for t in range(duration):
            if distance(t) >= target - 1e-9:
                return t
        return None

    stages = [(0, scene.backgrounds["open"])]
    for stage, frac in (("closed", _param(scene, "switch_at")), ("lit", _param(scene, "bulb_at"))):
        t = reach(float(frac))
        if t is None:
            continue
        if t <= stages[-1][0]:
            stages[-1] = (stages[-1][0], scene.backgrounds[stage])
        else:
            stages.append((t, scene.backgrounds[stage]))
    track = Track("current", _ref(scene, "current"), _z(scene, "current"), tuple(segments))
    markers = {"stages": [t for t, _ in stages]}
    return _ir(scene, duration, [track], backgrounds=stages, markers=markers)


def _grow_rotate(scene):
    duration = _duration(scene)
    start = _at(scene, "start_at")
    v = tuple(float(c) for c in _param(scene, "velocity"))
    s0 = float(_param(scene, "scale_start"))
    s1 = float(_param(scene, "scale_peak"))
    s2 = float(_param(scene, "scale_end"))
    grow = max(int(_param(scene, "grow_ticks")), 1)
    interval = int(_param(scene, "rotation_interval"))
    region = scene.regions.get(_param(scene, "landfall_region"))
    ref = _ref(scene, "storm")
    meta = scene.sprites[ref]

    def growth(t):
        return s0 + (s1 - s0) * min(t / grow, 1.0)

    landfall = None
    if region is not None:
        for t in range(duration):
            s = growth(t)
            pos = (start[0] + v[0] * t, start[1] + v[1] * t)
            box = box_at(pos, (meta.size[0] * s, meta.size[1] * s), (meta.anchor[0] * s, meta.anchor[1] * s))
            if boxes_overlap(box, region):
                landfall = t
                break

    last = duration - 1
    keys = {0: s0}
    if grow < (landfall if landfall is not None else last):
        keys[grow] = s1
    if landfall is not None:
        keys[landfall] = growth(landfall)
        if landfall < last:
            keys[last] = s2
    elif last not in keys:
        keys[last] = growth(last)
    scale_keys = tuple((t, meta.size[0] * s, meta.size[1] * s) for t, s in sorted(keys.items()))
    track = Track("storm", ref, _z(scene, "storm"), (Linear(0, duration, start, v),),
                  scale_keys=scale_keys, rotation_interval=interval if interval > 0 else None)
    markers = {"landfall": landfall}
    return _ir(scene, duration, [track], markers=markers)


def _phased_inflate(scene):
    phase = int(_param(scene, "phase_ticks"))
    pause = max(1, round_half_up(float(_param(scene, "pause_seconds")) * scene.tick_rate))
    if phase < 1:
        raise RenderError("phase_ticks must be at least 1")
    duration = 3 * phase + 2 * pause
    s_start = float(_param(scene, "scale_start"))
    s_end = float(_param(scene, "scale_end"))
    mouth = _at(scene, "mouth_at")
    ref = _ref(scene, "inflatable")
    meta = scene.sprites[ref]
    w, h = meta.size
    ax, ay = meta.anchor

    def anchor_pos(s):
        # the sprite's bottom-center stays on the mouth point
        return (mouth[0] + (ax - w / 2) * s, mouth[1] - (h - ay) * s)

    scales = [s_start + (s_end - s_start) * k / 3 for k in range(4)]
    segments, keys = [], [(0, w * scales[0], h * scales[0])]
    t = 0
    for k in range(3):
        p0, p1 = anchor_pos(scales[k]), anchor_pos(scales[k + 1])
        segments.append(Linear(t, t + phase, p0, ((p1[0] - p0[0]) / phase, (p1[1] - p0[1]) / phase)))
        t += phase
        keys.append((t, w * scales[k + 1], h * scales[k + 1]))
        if k < 2:
            segments.append(Hold(t, t + pause, p1))
            t += pause
            keys.append((t, w * scales[k + 1], h * scales[k + 1]))
    tracks = [Track("inflatable", ref, _z(scene, "inflatable"), tuple(segments), scale_keys=tuple(keys))]
    if _has(scene, "inflater"):
        tracks.append(Track("inflater", _ref(scene, "inflater"), _z(scene, "inflater"),
                            (Hold(0, duration, _at(scene, "agent_at")),)))
    return _ir(scene, duration, tracks, markers={"pause_ticks": pause})


def _linear_travel(scene):
    duration = _duration(scene)
    v = tuple(float(c) for c in _param(scene, "velocity"))
    track = Track("mover", _ref(scene, "mover"), _z(scene, "mover"),
                  (Linear(0, duration, _at(scene, "start_at"), v),))
    return _ir(scene, duration, [track])


_BUILDERS = {
    "Collide": _collide,
    "Orbit": _orbit,
    "StagedAccelerate": _staged_accelerate,
    "GravityFall": _gravity_fall,
    "CircuitSequence": _circuit,
    "GrowRotateTravel": _grow_rotate,
    "PhasedInflate": _phased_inflate,
    "LinearTravel": _linear_travel,
}


def instantiate(scene):
    """Build the TimelineIR for a resolved scene.

    Collide timelines come back with collision-triggered events still
    pending; pass them through resolve_collisions before sampling.
    """
    return _BUILDERS[scene.spec.template](scene)


def build_timeline(scene):
    return resolve_collisions(instantiate(scene))


def coverage_problems(ir):
    """Tracks whose segments fail to tile [0, duration) exactly."""
    problems = []
    for track in ir.tracks:
        expect = 0
        for seg in track.segments:
            if seg.start != expect:
                problems.append(f"{track.entity}: gap or overlap at tick {expect}")
                break
            expect = seg.end
        else:
            if expect != ir.duration:
                problems.append(f"{track.entity}: segments end at {expect}, not {ir.duration}")
        ticks = [k[0] for k in track.scale_keys]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            problems.append(f"{track.entity}: scale keys not strictly increasing")
    return problems
