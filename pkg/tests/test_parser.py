import pytest
from hypothesis import given, settings, strategies as st

from text2anim.errors import EmptyInput, NoPredicate, UnknownLexeme, UnsupportedConstruction
from text2anim.parser import (DepEdge, DepTree, Token, parse, parse_sentence, tag, tokenize,
                              validate_tree)

FIG2 = "A rocket ship accelerates in space."


def edges(tree):
    return {(e.label, e.head, e.dependent) for e in tree.edges}


def test_tokenize_strips_punctuation_and_case():
    assert [t.surface for t in tokenize(FIG2)] == ["a", "rocket", "ship", "accelerates", "in", "space"]
    assert [t.surface for t in tokenize("sky")] == ["sky"]
    assert [t.index for t in tokenize("  The  moon, orbits! ")] == [0, 1, 2]


@pytest.mark.parametrize("text", ["", "   ", "... !"])
def test_tokenize_empty(text):
    with pytest.raises(EmptyInput):
        tokenize(text)


def test_tag_examples():
    toks = tag(tokenize("accelerates blue"))
    assert (toks[0].lemma, toks[0].pos) == ("accelerate", "Verb")
    assert (toks[1].lemma, toks[1].pos) == ("blue", "Adj")
    with pytest.raises(UnknownLexeme) as info:
        tag(tokenize("zorgle"))
    assert info.value.index == 0
    with pytest.raises(UnknownLexeme) as info:
        tag(tokenize("The moon zorgles."))
    assert info.value.index == 2


def test_tag_disambiguates_noun_verb():
    # "orbit" is both; after a noun it is the verb, after a determiner the noun
    assert [t.pos for t in tag(tokenize("The moon orbits the earth"))][2] == "Verb"
    assert [t.pos for t in tag(tokenize("the orbit"))][1] == "Noun"
    assert [t.pos for t in tag(tokenize("a light bulb"))] == ["Det", "Noun", "Noun"]


def test_blue_sky_noun_phrase():
    tree = parse_sentence("blue sky", np_mode=True)
    assert tree.root == 1
    assert tree.edges == (DepEdge(1, 0, "amod"),)
    assert validate_tree(tree) == []


def test_single_word_noun_phrase():
    tree = parse_sentence("sky", np_mode=True)
    assert tree.root == 0 and tree.edges == ()
    assert validate_tree(tree) == []


def test_rocket_ship_tree():
    tree = parse_sentence(FIG2)
    assert tree.root == 3
    assert edges(tree) == {("det", 2, 0), ("compound", 2, 1), ("nsubj", 3, 2),
                           ("prep", 3, 4), ("pobj", 4, 5)}


def test_coordinated_passive_clause():
    tree = parse_sentence("A car crashes into a wall and the driver is ejected.")
    assert tree.root == 2
    assert edges(tree) == {
        ("det", 1, 0), ("nsubj", 2, 1), ("prep", 2, 3), ("det", 5, 4), ("pobj", 3, 5),
        ("cc", 10, 6), ("det", 8, 7), ("nsubjpass", 10, 8), ("aux", 10, 9), ("conj", 2, 10),
    }


def test_direct_object_and_phrasal_particle():
    tree = parse_sentence("The moon orbits the earth.")
    assert ("dobj", 2, 4) in edges(tree)
    tree = parse_sentence("Electricity turns on a light bulb.")
    assert edges(tree) == {("nsubj", 1, 0), ("prep", 1, 2), ("det", 5, 3),
                           ("compound", 5, 4), ("pobj", 2, 5)}


def test_car_moves():
    tree = parse_sentence("A car moves.")
    assert tree.tokens[tree.root].lemma == "move"


def test_no_predicate():
    with pytest.raises(NoPredicate):
        parse_sentence("the blue sky")


@pytest.mark.parametrize("text", [
    "the car the wall crashes",    # two subject phrases
    "crashes the car and",          # dangling conjunction
    "blue",                         # adjective without a noun
    "into the car crashes",         # preposition before the verb
])
def test_unsupported(text):
    with pytest.raises((UnsupportedConstruction, NoPredicate)):
        parse_sentence(text)


def test_np_mode_rejects_clause():
    with pytest.raises(UnsupportedConstruction):
        parse_sentence("the car moves", np_mode=True)


def test_corpus_trees_valid(sentences):
    for text in sentences.values():
        assert validate_tree(parse_sentence(text)) == []


def _tree(n, pairs, root):
    toks = tuple(Token(i, f"w{i}", f"w{i}", "Noun") for i in range(n))
    return DepTree(toks, tuple(DepEdge(h, d, "det") for h, d in pairs), root)


def test_validate_flags_violations():
    assert any(v.startswith("asymmetry") for v in validate_tree(_tree(2, [(0, 1), (1, 1)], 0)))
    assert any(v.startswith("single root") for v in validate_tree(_tree(3, [(0, 1)], 0)))
    assert any(v.startswith("in-degree") for v in validate_tree(_tree(3, [(0, 2), (1, 2), (0, 1)], 0)))
    assert any(v.startswith("connected") for v in validate_tree(_tree(3, [(1, 2), (2, 1)], 0)))
    assert any(v.startswith("index") for v in validate_tree(_tree(2, [(0, 5)], 0)))
    bad_label = DepTree(_tree(2, [], 0).tokens, (DepEdge(0, 1, "nmod"),), 0)
    assert any(v.startswith("label") for v in validate_tree(bad_label))


# --- property tests over a small generated grammar ---

DETS = ["a", "the"]
ADJS = ["blue", "big", "red", "small"]
NOUNS = ["car", "wall", "moon", "rocket", "ship", "girl", "balloon", "tree", "apple", "ocean"]
VERBS = ["accelerates", "inflates", "moves", "rolls", "drops"]
PREPS = ["in", "into", "from", "across", "over"]


@st.composite
def noun_phrase(draw):
    words = []
    if draw(st.booleans()):
        words.append(draw(st.sampled_from(DETS)))
    words += draw(st.lists(st.sampled_from(ADJS), max_size=2))
    words += draw(st.lists(st.sampled_from(NOUNS), min_size=1, max_size=2))
    return words


@st.composite
def clause(draw):
    words = draw(noun_phrase()) + [draw(st.sampled_from(VERBS))]
    if draw(st.booleans()):
        words += draw(noun_phrase())
    for _ in range(draw(st.integers(0, 2))):
        words += [draw(st.sampled_from(PREPS))] + draw(noun_phrase())
    return words


@st.composite
def sentence(draw):
    words = draw(clause())
    if draw(st.booleans()):
        words += ["and"] + draw(clause())
    return " ".join(words) + "."


@settings(max_examples=300, deadline=None)
@given(sentence())
def test_generated_sentences_form_valid_trees(text):
    tree = parse_sentence(text)
    assert validate_tree(tree) == []
    assert len(tree.edges) == len(tree.tokens) - 1
    assert all(e.head != e.dependent for e in tree.edges)
    assert parse_sentence(text) == tree


@settings(max_examples=200, deadline=None)
@given(noun_phrase())
def test_noun_phrases_head_is_last_noun(words):
    tree = parse_sentence(" ".join(words), np_mode=True)
    assert validate_tree(tree) == []
    assert tree.root == len(words) - 1
    assert all(e.head == tree.root for e in tree.edges)
