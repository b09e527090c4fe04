import pytest

from text2anim import canonical
from text2anim.errors import MissingRole, NoPredicate, NotAnAction, UnknownLexeme
from text2anim.lexicon import LexEntry, default_lexicon
from text2anim.parser import parse_sentence
from text2anim.scene import check_scene, compile_scene, extract_mentions, map_action

from conftest import SCENES


def roles(text):
    return {(m.lemma, m.role, m.modifiers) for m in extract_mentions(parse_sentence(text))}


def test_roles_rocket():
    assert roles("A rocket ship accelerates in space.") == {
        ("ship", "Agent", ("rocket",)), ("space", "Location", ())}


def test_roles_orbit():
    assert roles("The moon orbits the earth.") == {("moon", "Agent", ()), ("earth", "Patient", ())}


def test_roles_source_and_contact():
    assert roles("An apple falls from a tree.") == {("apple", "Agent", ()), ("tree", "Source", ())}
    got = {(m.lemma, m.role, m.clause) for m in
           extract_mentions(parse_sentence("A car crashes into a wall and the driver is ejected."))}
    assert got == {("car", "Agent", 0), ("wall", "Patient", 0), ("driver", "Patient", 1)}


def test_roles_empty_without_predicate():
    assert extract_mentions(parse_sentence("sky", np_mode=True)) == []


@pytest.mark.parametrize("lemma,template", [
    ("orbit", "Orbit"), ("inflate", "PhasedInflate"), ("crash", "Collide"),
    ("accelerate", "StagedAccelerate"), ("fall", "GravityFall"), ("form", "GrowRotateTravel"),
    ("walk", "LinearTravel"), ("move", "LinearTravel"),
])
def test_map_action(lemma, template):
    assert map_action(lemma) == template


def test_map_action_phrasal_and_errors():
    assert map_action("turn", ("on",)) == "CircuitSequence"
    assert map_action("turn") == "LinearTravel"
    with pytest.raises(NotAnAction):
        map_action("moon")
    with pytest.raises(UnknownLexeme):
        map_action("quux")


def test_hypothetical_action_defaults_to_linear():
    lex = default_lexicon().with_entries([LexEntry("skate", ("Verb",), "Action")])
    assert map_action("skate", lexicon=lex) == "LinearTravel"
    spec = compile_scene(parse_sentence("A girl skates.", lex), lex)
    assert spec.template == "LinearTravel"


@pytest.mark.parametrize("name", ["collide", "orbit", "rocket", "apple", "circuit", "hurricane", "balloon"])
def test_fixture_byte_for_byte(sentences, name):
    spec = compile_scene(parse_sentence(sentences[name]))
    assert canonical.dumps(spec) + "\n" == (SCENES / f"{name}.json").read_text()
    assert check_scene(spec) == []


def test_collide_draws_driver_below_car(sentences):
    spec = compile_scene(parse_sentence(sentences["collide"]))
    assert spec.entity("occupant").z < spec.entity("vehicle").z


def test_missing_role():
    with pytest.raises(MissingRole) as info:
        compile_scene(parse_sentence("The earth is orbited."))
    assert (info.value.template, info.value.role) == ("Orbit", "Agent")
    with pytest.raises(MissingRole) as info:
        compile_scene(parse_sentence("The moon orbits."))
    assert info.value.role == "Patient"


def test_no_predicate_tree():
    with pytest.raises(NoPredicate):
        compile_scene(parse_sentence("blue sky", np_mode=True))


def test_modifier_propagation_and_background():
    spec = compile_scene(parse_sentence("The big red ball rolls in the blue sky."))
    ball = spec.entity("mover").mention
    assert ball.modifiers == ("big", "red")
    assert spec.background == {"lemma": "sky", "modifiers": ["blue", "scene"]}


def test_role_exclusivity_on_corpus(sentences):
    for text in sentences.values():
        spec = compile_scene(parse_sentence(text))
        tokens = [m.token for m in spec.mentions]
        assert len(tokens) == len(set(tokens))
        assert compile_scene(parse_sentence(text)) == spec
