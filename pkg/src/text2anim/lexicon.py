"""Closed-vocabulary lexicon: lemma entries, categories, and lemmatization."""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import LexiconError

POS_TAGS = ("Det", "Adj", "Noun", "Verb", "Aux", "Prep", "Conj")
CATEGORIES = ("PhysicalEntity", "Location", "Action", "Property", "Function")

# tried in order after the irregular table and the bare lemma
SUFFIX_RULES = (("ies", "y"), ("es", ""), ("s", ""))


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    pos: tuple
    category: str
    irregular_forms: dict = field(default_factory=dict, compare=False, hash=False)


class Lexicon:
    """Immutable mapping from lemma to entry, with surface-form lookup."""

    def __init__(self, entries):
        self._entries = {}
        self._irregular = {}
        for entry in entries:
            if not entry.pos:
                raise LexiconError(f"lexicon entry {entry.lemma!r} has no part of speech")
            bad = [p for p in entry.pos if p not in POS_TAGS]
            if bad:
                raise LexiconError(f"lexicon entry {entry.lemma!r}: unknown pos {bad}")
            if entry.category not in CATEGORIES:
                raise LexiconError(f"lexicon entry {entry.lemma!r}: unknown category {entry.category!r}")
            if entry.lemma in self._entries:
                raise LexiconError(f"duplicate lexicon entry {entry.lemma!r}")
            self._entries[entry.lemma] = entry
            for surface, lemma in entry.irregular_forms.items():
                self._irregular[surface] = lemma

    def __contains__(self, lemma):
        return lemma in self._entries

    def __getitem__(self, lemma):
        return self._entries[lemma]

    def __len__(self):
        return len(self._entries)

    def lemmas(self):
        return sorted(self._entries)

    def category(self, lemma):
        entry = self._entries.get(lemma)
        return entry.category if entry else None

    def lookup(self, surface):
        """Return the entry for an inflected surface form, or None."""
        lemma = self._irregular.get(surface)
        if lemma is not None and lemma in self._entries:
            return self._entries[lemma]
        if surface in self._entries:
            return self._entries[surface]
        for suffix, replacement in SUFFIX_RULES:
            if surface.endswith(suffix) and len(surface) > len(suffix):
                candidate = surface[: -len(suffix)] + replacement
                if candidate in self._entries:
                    return self._entries[candidate]
        return None

    def with_entries(self, extra):
        return Lexicon(list(self._entries.values()) + list(extra))


def parse_lexicon(data):
    if not isinstance(data, list):
        raise LexiconError("lexicon must be a JSON list of entries")
    entries = []
    for i, obj in enumerate(data):
        try:
            entries.append(LexEntry(
                lemma=obj["lemma"],
                pos=tuple(obj["pos"]),
                category=obj["category"],
                irregular_forms=dict(obj.get("irregular_forms") or {}),
            ))
        except (KeyError, TypeError) as exc:
            raise LexiconError(f"lexicon entry {i}: {exc}") from None
    return Lexicon(entries)


def load_lexicon(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise LexiconError(f"{path}: {exc}") from None
    return parse_lexicon(data)


@lru_cache(maxsize=1)
def default_lexicon():
    text = resources.files("text2anim").joinpath("data/lexicon.json").read_text(encoding="utf-8")
    return parse_lexicon(json.loads(text))
