"""Dependency tree -> SceneSpec: roles, template choice, background, z-order."""

import copy
from dataclasses import dataclass, field

from .errors import MissingRole, NoPredicate, NotAnAction, UnknownLexeme
from .lexicon import default_lexicon

ROLES = ("Agent", "Patient", "Location", "Source")
TEMPLATE_IDS = (
    "Collide", "Orbit", "StagedAccelerate", "GravityFall",
    "CircuitSequence", "GrowRotateTravel", "PhasedInflate", "LinearTravel",
)

PREP_ROLES = {
    "from": "Source",
    "in": "Location",
    "at": "Location",
    "on": "Location",
    "to": "Location",
    "across": "Location",
    "through": "Location",
    "over": "Location",
    "into": "Patient",
    "onto": "Patient",
}

# verb + particle pairs read jointly; the particle's object is the Patient
PHRASAL_VERBS = {
    ("turn", "on"): "CircuitSequence",
}

ACTION_TEMPLATES = {
    "crash": "Collide",
    "orbit": "Orbit",
    "accelerate": "StagedAccelerate",
    "fall": "GravityFall",
    "form": "GrowRotateTravel",
    "inflate": "PhasedInflate",
}

NOMINAL_CATEGORIES = ("PhysicalEntity", "Location")


@dataclass(frozen=True)
class EntityMention:
    lemma: str
    modifiers: tuple
    role: str
    token: int
    clause: int = 0

    def to_dict(self):
        return {"lemma": self.lemma, "modifiers": list(self.modifiers), "role": self.role,
                "token": self.token, "clause": self.clause}


@dataclass(frozen=True)
class SceneEntity:
    mention: EntityMention
    slot: str
    z: int

    def to_dict(self):
        d = self.mention.to_dict()
        d.update(slot=self.slot, z=self.z)
        return d


@dataclass(frozen=True)
class SceneSpec:
    template: str
    background: dict          # {"lemma": ..., "modifiers": [...]}
    entities: tuple           # SceneEntity, ascending z
    mentions: tuple           # every extracted EntityMention
    params: dict = field(default_factory=dict)

    def entity(self, slot):
        for e in self.entities:
            if e.slot == slot:
                return e
        return None

    def to_dict(self):
        return {
            "template": self.template,
            "background": {"lemma": self.background["lemma"],
                           "modifiers": list(self.background["modifiers"])},
            "entities": [e.to_dict() for e in self.entities],
            "mentions": [m.to_dict() for m in self.mentions],
            "params": copy.deepcopy(self.params),
        }


@dataclass(frozen=True)
class Template:
    name: str
    required: tuple                    # roles that must be present in the main clause
    default_background: tuple          # (lemma, modifiers)
    backdrop_roles: tuple = ("Location",)
    # sprite variants per slot: variant name -> extra query tags
    variants: dict = field(default_factory=dict)
    # background stages: stage name -> extra query tags
    stages: dict = field(default_factory=lambda: {"default": ()})
    defaults: dict = field(default_factory=dict)


TEMPLATES = {
    "Collide": Template(
        "Collide", ("Agent", "Patient"), ("street", ()),
        variants={"vehicle": {"default": (), "wrecked": ("wrecked",)}},
        defaults={
            "duration": 150,
            "speed": 3.0,
            "vehicle_at": [0.55, 0.8],
            "obstacle_at": [0.03, 0.8],
            "occupant_offset": [62.0, -50.0],
            "eject_velocity": [-3.0, -4.0],
            "eject_gravity": 0.0,
        },
    ),
    "Orbit": Template(
        "Orbit", ("Agent", "Patient"), ("sky", ("black",)),
        defaults={"duration": 150, "center_at": [0.5, 0.55], "radius": 0.45,
                  "theta0": 0.0, "dtheta": 1.0},
    ),
    "StagedAccelerate": Template(
        "StagedAccelerate", ("Agent",), ("space", ()),
        variants={"mover": {"idle": ("idle",), "partial": ("partial",), "full": ("full",)}},
        defaults={"start_at": [0.2, 0.78], "heading": [0.6, -0.8], "stage_ticks": [30, 90],
                  "stage_speeds": [0.0, 1.5, 6.0], "path": "line", "controls": []},
    ),
    "GravityFall": Template(
        "GravityFall", ("Agent",), ("tree", ()), backdrop_roles=("Location", "Source"),
        defaults={"duration": 150, "start_at": [0.5, 0.3], "ground": 0.9, "gravity": 0.6,
                  "hang_ticks": 20},
    ),
    "CircuitSequence": Template(
        "CircuitSequence", ("Agent", "Patient"), ("circuit", ()), backdrop_roles=("Patient",),
        stages={"open": ("open",), "closed": ("closed",), "lit": ("lit",)},
        defaults={"duration": 150,
                  "path": [[0.2, 0.75], [0.2, 0.25], [0.8, 0.25], [0.8, 0.75], [0.2, 0.75]],
                  "switch_at": 0.12, "bulb_at": 0.35},
    ),
    "GrowRotateTravel": Template(
        "GrowRotateTravel", ("Agent",), ("ocean", ()),
        defaults={"duration": 150, "start_at": [0.12, 0.45], "velocity": [3.0, 0.4],
                  "scale_start": 0.35, "scale_peak": 1.0, "scale_end": 0.3, "grow_ticks": 100,
                  "rotation_interval": 15, "landfall_region": "land"},
    ),
    "PhasedInflate": Template(
        "PhasedInflate", ("Agent", "Patient"), ("park", ()),
        defaults={"agent_at": [0.3, 0.92], "mouth_at": [0.36, 0.6], "scale_start": 0.15,
                  "scale_end": 1.0, "phase_ticks": 30, "pause_seconds": 1.0},
    ),
    "LinearTravel": Template(
        "LinearTravel", ("Agent",), ("street", ()),
        defaults={"duration": 150, "start_at": [0.1, 0.8], "velocity": [3.0, 0.0]},
    ),
}


def _predicates(tree):
    preds = [tree.root] + sorted(e.dependent for e in tree.edges
                                 if e.head == tree.root and e.label == "conj")
    return {p: i for i, p in enumerate(preds)}


def _particles(tree, verb):
    lemma = tree.tokens[verb].lemma
    return tuple(tree.tokens[e.dependent].lemma for e in tree.children(verb)
                 if e.label == "prep" and (lemma, tree.tokens[e.dependent].lemma) in PHRASAL_VERBS)


def extract_mentions(tree, lexicon=None):
    """Semantic roles for every nominal clause argument, in sentence order."""
    lexicon = lexicon or default_lexicon()
    if tree.tokens[tree.root].pos != "Verb":
        return []
    clauses = _predicates(tree)
    mentions = []
    for e in tree.edges:
        role, pred = None, e.head
        if e.label == "nsubj":
            role = "Agent"
        elif e.label in ("nsubjpass", "dobj"):
            role = "Patient"
        elif e.label == "pobj":
            prep = tree.tokens[e.head]
            verb_edge = tree.incoming(e.head)
            pred = verb_edge.head if verb_edge else None
            verb = tree.tokens[pred].lemma if pred is not None else None
            if (verb, prep.lemma) in PHRASAL_VERBS:
                role = "Patient"
            else:
                role = PREP_ROLES.get(prep.lemma)
        if role is None or pred not in clauses:
            continue
        tok = tree.tokens[e.dependent]
        if lexicon.category(tok.lemma) not in NOMINAL_CATEGORIES:
            continue
        mods = tuple(tree.tokens[c.dependent].lemma
                     for c in sorted(tree.children(e.dependent), key=lambda c: c.dependent)
                     if c.label in ("amod", "compound"))
        mentions.append(EntityMention(tok.lemma, mods, role, tok.index, clauses[pred]))
    return sorted(mentions, key=lambda m: m.token)


def map_action(lemma, particles=(), lexicon=None):
    lexicon = lexicon or default_lexicon()
    category = lexicon.category(lemma)
    if category is None:
        raise UnknownLexeme(-1, lemma)
    if category != "Action":
        raise NotAnAction(lemma)
    for particle in particles:
        template = PHRASAL_VERBS.get((lemma, particle))
        if template:
            return template
    return ACTION_TEMPLATES.get(lemma, "LinearTravel")


def _first(mentions, role, clause=0):
    for m in mentions:
        if m.role == role and m.clause == clause:
            return m
    return None


def _bind(template, mentions):
    """Template slots -> mentions, in ascending draw order."""
    agent = _first(mentions, "Agent")
    patient = _first(mentions, "Patient")
    if template == "Collide":
        occupant = _first(mentions, "Patient", 1) or _first(mentions, "Agent", 1)
        # occupant drawn before the vehicle so it shows through the windows
        return [("obstacle", patient), ("occupant", occupant), ("vehicle", agent)]
    if template == "Orbit":
        return [("center", patient), ("orbiter", agent)]
    if template == "StagedAccelerate":
        return [("mover", agent)]
    if template == "GravityFall":
        return [("faller", agent)]
    if template == "CircuitSequence":
        return [("current", agent)]
    if template == "GrowRotateTravel":
        return [("storm", agent)]
    if template == "PhasedInflate":
        return [("inflater", agent), ("inflatable", patient)]
    return [("mover", agent)]


def compile_scene(tree, lexicon=None):
    lexicon = lexicon or default_lexicon()
    root = tree.tokens[tree.root]
    if root.pos != "Verb":
        raise NoPredicate()
    template_id = map_action(root.lemma, _particles(tree, tree.root), lexicon)
    template = TEMPLATES[template_id]
    mentions = extract_mentions(tree, lexicon)

    for role in template.required:
        if _first(mentions, role) is None:
            raise MissingRole(template_id, role)

    backdrop = None
    for role in template.backdrop_roles:
        backdrop = _first(mentions, role)
        if backdrop is not None:
            break
    if backdrop is not None:
        background = {"lemma": backdrop.lemma, "modifiers": list(backdrop.modifiers) + ["scene"]}
    else:
        lemma, mods = template.default_background
        background = {"lemma": lemma, "modifiers": list(mods) + ["scene"]}

    entities = []
    for slot, mention in _bind(template_id, mentions):
        if mention is None or mention is backdrop:
            continue
        entities.append(SceneEntity(mention, slot, len(entities)))

    return SceneSpec(
        template=template_id,
        background=background,
        entities=tuple(entities),
        mentions=tuple(mentions),
        params=copy.deepcopy(template.defaults),
    )


def check_scene(spec):
    """Re-check structural invariants of a compiled scene; returns violations."""
    problems = []
    zs = [e.z for e in spec.entities]
    if len(set(zs)) != len(zs):
        problems.append("z-orders not unique")
    tokens = [m.token for m in spec.mentions]
    if len(set(tokens)) != len(tokens):
        problems.append("a token carries more than one role")
    template = TEMPLATES.get(spec.template)
    if template is None:
        problems.append(f"unknown template {spec.template}")
        return problems
    for role in template.required:
        if not any(m.role == role and m.clause == 0 for m in spec.mentions):
            problems.append(f"missing required role {role}")
    return problems
