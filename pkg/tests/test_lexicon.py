import json

import pytest

from text2anim.errors import LexiconError
from text2anim.lexicon import LexEntry, Lexicon, default_lexicon, load_lexicon, parse_lexicon


@pytest.fixture(scope="module")
def lex():
    return default_lexicon()


@pytest.mark.parametrize("surface,lemma,pos", [
    ("accelerates", "accelerate", ("Verb",)),
    ("blue", "blue", ("Adj",)),
    ("orbits", "orbit", ("Verb", "Noun")),
    ("crashes", "crash", ("Verb", "Noun")),
    ("fell", "fall", ("Verb", "Noun")),
    ("is", "be", ("Aux",)),
    ("ejected", "eject", ("Verb",)),
    ("cities", "city", ("Noun",)),
    ("grey", "gray", ("Adj",)),
])
def test_lookup_lemmatizes(lex, surface, lemma, pos):
    entry = lex.lookup(surface)
    assert entry.lemma == lemma
    assert entry.pos == pos


def test_lookup_unknown(lex):
    assert lex.lookup("zorgle") is None
    assert lex.lookup("s") is None


def test_categories(lex):
    assert lex.category("moon") == "PhysicalEntity"
    assert lex.category("space") == "Location"
    assert lex.category("orbit") == "Action"
    assert lex.category("blue") == "Property"
    assert lex.category("the") == "Function"
    assert lex.category("unicorn") is None


def test_corpus_vocabulary_is_covered(lex, sentences):
    for text in sentences.values():
        for word in text.rstrip(".").split():
            assert lex.lookup(word.lower()) is not None, word


def test_rejects_bad_entries():
    with pytest.raises(LexiconError):
        Lexicon([LexEntry("x", ("Verbish",), "Action")])
    with pytest.raises(LexiconError):
        Lexicon([LexEntry("x", ("Noun",), "Thing")])
    with pytest.raises(LexiconError):
        Lexicon([LexEntry("x", ("Noun",), "PhysicalEntity")] * 2)
    with pytest.raises(LexiconError):
        parse_lexicon({"nope": []})
    with pytest.raises(LexiconError):
        parse_lexicon([{"lemma": "x"}])
    with pytest.raises(LexiconError):
        load_lexicon("/nonexistent/lexicon.json")


def test_load_and_extend(tmp_path):
    path = tmp_path / "lex.json"
    path.write_text(json.dumps([
        {"lemma": "dog", "pos": ["Noun"], "category": "PhysicalEntity"},
        {"lemma": "run", "pos": ["Verb"], "category": "Action", "irregular_forms": {"ran": "run"}},
    ]))
    lex = load_lexicon(path)
    assert len(lex) == 2
    assert lex.lookup("ran").lemma == "run"
    assert lex.lookup("dogs").lemma == "dog"
    bigger = lex.with_entries([LexEntry("cat", ("Noun",), "PhysicalEntity")])
    assert "cat" in bigger and "cat" not in lex
