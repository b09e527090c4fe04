"""Deterministic dependency parser for the controlled-English subset.

Pipeline: tokenize -> tag -> parse. Arc construction is rule-based and
total on the supported grammar: noun phrases are chunked first, then
clause-level arcs (subject, object, prepositions, auxiliaries,
coordination) are attached to the clause predicate.
"""

import string
from dataclasses import dataclass

from .errors import (
    EmptyInput,
    NoPredicate,
    UnknownLexeme,
    UnsupportedConstruction,
)
from .lexicon import default_lexicon

LABELS = ("det", "amod", "compound", "nsubj", "nsubjpass", "dobj", "aux", "prep", "pobj", "conj", "cc")

_STRIP = string.punctuation + "“”‘’"
_NOMINAL = ("Det", "Adj", "Noun")


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    lemma: str | None = None
    pos: str | None = None

    def to_dict(self):
        return {"index": self.index, "surface": self.surface, "lemma": self.lemma, "pos": self.pos}


@dataclass(frozen=True)
class DepEdge:
    head: int
    dependent: int
    label: str

    def to_dict(self):
        return {"head": self.head, "dependent": self.dependent, "label": self.label}


@dataclass(frozen=True)
class DepTree:
    tokens: tuple
    edges: tuple
    root: int

    def to_dict(self):
        return {
            "root": self.root,
            "tokens": [t.to_dict() for t in self.tokens],
            "edges": [e.to_dict() for e in self.edges],
        }

    def children(self, head):
        return [e for e in self.edges if e.head == head]

    def incoming(self, dependent):
        for e in self.edges:
            if e.dependent == dependent:
                return e
        return None

    def render_text(self):
        """Indented tree, one token per line, children in sentence order."""
        lines = []

        def walk(index, label, depth):
            tok = self.tokens[index]
            lines.append(f"{'  ' * depth}{label}: {tok.surface} [{tok.pos}] #{index}")
            for e in sorted(self.children(index), key=lambda e: e.dependent):
                walk(e.dependent, e.label, depth + 1)

        walk(self.root, "root", 0)
        return "\n".join(lines)


def tokenize(text):
    words = []
    for raw in text.split():
        word = raw.strip(_STRIP).lower()
        if word:
            words.append(word)
    if not words:
        raise EmptyInput()
    return [Token(index=i, surface=w) for i, w in enumerate(words)]


def _choose_pos(candidates, prev_pos):
    if len(candidates) == 1:
        return candidates[0]
    if "Verb" in candidates and prev_pos in ("Aux", "Noun"):
        return "Verb"
    if prev_pos in (None, "Det", "Adj", "Prep", "Verb") and "Noun" in candidates:
        return "Noun"
    if "Prep" in candidates and prev_pos == "Verb":
        return "Prep"
    return candidates[0]


def tag(tokens, lexicon=None):
    lexicon = lexicon or default_lexicon()
    out = []
    prev_pos = None
    for tok in tokens:
        entry = lexicon.lookup(tok.surface)
        if entry is None:
            raise UnknownLexeme(tok.index, tok.surface)
        pos = _choose_pos(entry.pos, prev_pos)
        out.append(Token(tok.index, tok.surface, entry.lemma, pos))
        prev_pos = pos
    return out


class _Chunk:
    __slots__ = ("indices",)

    def __init__(self):
        self.indices = []

    @property
    def head(self):
        return self.indices[-1]


def _chunk(tokens):
    """Group Det/Adj/Noun runs into noun phrases; other tokens pass through."""
    items = []
    current = None

    def close():
        if current is not None and tokens[current.head].pos != "Noun":
            raise UnsupportedConstruction(current.head, "noun phrase without a head noun")

    for tok in tokens:
        if tok.pos in _NOMINAL:
            if current is not None and tok.pos != "Noun" and tokens[current.head].pos == "Noun":
                close()
                current = None
            if current is None:
                current = _Chunk()
                items.append(current)
            current.indices.append(tok.index)
        else:
            close()
            current = None
            items.append(tok.index)
    close()
    return items


def _np_edges(tokens, chunk):
    edges = []
    head = chunk.head
    for i in chunk.indices[:-1]:
        pos = tokens[i].pos
        label = {"Det": "det", "Adj": "amod", "Noun": "compound"}[pos]
        edges.append(DepEdge(head, i, label))
    return edges


def _clause_edges(tokens, items):
    verbs = [it for it in items if not isinstance(it, _Chunk) and tokens[it].pos == "Verb"]
    first = items[0].indices[0] if isinstance(items[0], _Chunk) else items[0]
    if not verbs:
        raise UnsupportedConstruction(first, "clause without a verb")
    if len(verbs) > 1:
        raise UnsupportedConstruction(verbs[1], "more than one verb in a clause")
    pred = verbs[0]
    split = items.index(pred)
    pre, post = items[:split], items[split + 1:]

    edges = []
    subject = None
    auxes = []
    for it in pre:
        if isinstance(it, _Chunk):
            if subject is not None or auxes:
                raise UnsupportedConstruction(it.indices[0], "unattached noun phrase before the verb")
            subject = it
        elif tokens[it].pos == "Aux":
            auxes.append(it)
        else:
            raise UnsupportedConstruction(it, f"{tokens[it].pos} before the verb")

    for a in auxes:
        edges.append(DepEdge(pred, a, "aux"))
    if subject is not None:
        edges.append(DepEdge(pred, subject.head, "nsubjpass" if auxes else "nsubj"))

    has_object = False
    pending_prep = None
    for it in post:
        if isinstance(it, _Chunk):
            if pending_prep is not None:
                edges.append(DepEdge(pending_prep, it.head, "pobj"))
                pending_prep = None
            elif not has_object:
                edges.append(DepEdge(pred, it.head, "dobj"))
                has_object = True
            else:
                raise UnsupportedConstruction(it.indices[0], "unattached noun phrase after the verb")
        elif tokens[it].pos == "Prep":
            edges.append(DepEdge(pred, it, "prep"))
            pending_prep = it
        else:
            raise UnsupportedConstruction(it, f"{tokens[it].pos} after the verb")
    return pred, edges


def parse(tokens, np_mode=False):
    """Build a dependency tree from tagged tokens.

    ``np_mode`` accepts a bare noun phrase (no predicate); the root is then
    the phrase's head noun.
    """
    tokens = list(tokens)
    if not tokens:
        raise EmptyInput()
    for tok in tokens:
        if tok.pos is None:
            raise UnsupportedConstruction(tok.index, "untagged token")

    items = _chunk(tokens)
    edges = []
    for it in items:
        if isinstance(it, _Chunk):
            edges.extend(_np_edges(tokens, it))

    if np_mode:
        if len(items) != 1 or not isinstance(items[0], _Chunk):
            bad = next(it for it in items if not isinstance(it, _Chunk))
            raise UnsupportedConstruction(bad, "noun-phrase mode expects a single noun phrase")
        root = items[0].head
    else:
        if not any(t.pos == "Verb" for t in tokens):
            raise NoPredicate()
        clauses = [[]]
        conjs = []
        for it in items:
            if not isinstance(it, _Chunk) and tokens[it].pos == "Conj":
                conjs.append(it)
                clauses.append([])
            else:
                clauses[-1].append(it)
        for conj, clause in zip(conjs, clauses[1:]):
            if not clause or not any(
                not isinstance(it, _Chunk) and tokens[it].pos == "Verb" for it in clause
            ):
                raise UnsupportedConstruction(conj, "only clause-level coordination is supported")
        if not clauses[0]:
            raise UnsupportedConstruction(conjs[0], "sentence starts with a conjunction")
        preds = []
        for clause in clauses:
            pred, clause_edges = _clause_edges(tokens, clause)
            preds.append(pred)
            edges.extend(clause_edges)
        root = preds[0]
        for conj, pred in zip(conjs, preds[1:]):
            edges.append(DepEdge(root, pred, "conj"))
            edges.append(DepEdge(pred, conj, "cc"))

    tree = DepTree(tuple(tokens), tuple(sorted(edges, key=lambda e: e.dependent)), root)
    attached = {e.dependent for e in tree.edges} | {root}
    for tok in tokens:
        if tok.index not in attached:
            raise UnsupportedConstruction(tok.index, "token left unattached")
    return tree


def parse_sentence(text, lexicon=None, np_mode=False):
    return parse(tag(tokenize(text), lexicon), np_mode=np_mode)


def validate_tree(tree):
    """Return the list of violated tree invariants (empty when valid)."""
    violations = []
    n = len(tree.tokens)
    for i, tok in enumerate(tree.tokens):
        if tok.index != i:
            violations.append(f"token order: position {i} holds index {tok.index}")
        if not tok.surface:
            violations.append(f"token {i}: empty surface")
        if tok.lemma is not None and not tok.lemma:
            violations.append(f"token {i}: empty lemma")

    indeg = [0] * n
    children = {i: [] for i in range(n)}
    for e in tree.edges:
        if e.head == e.dependent:
            violations.append(f"asymmetry: edge {e.label} has head = dependent = {e.head}")
            continue
        if not (0 <= e.head < n and 0 <= e.dependent < n):
            violations.append(f"index: edge {e.head}->{e.dependent} out of range")
            continue
        if e.label not in LABELS:
            violations.append(f"label: unknown label {e.label!r}")
        indeg[e.dependent] += 1
        children[e.head].append(e.dependent)

    roots = [i for i in range(n) if indeg[i] == 0]
    if len(roots) != 1:
        violations.append(f"single root: {len(roots)} tokens without a head {roots}")
    if not (0 <= tree.root < n) or (0 <= tree.root < n and indeg[tree.root] != 0):
        violations.append(f"root: declared root {tree.root} has a head or is out of range")
    multi = [i for i in range(n) if indeg[i] > 1]
    if multi:
        violations.append(f"in-degree: tokens with several heads {multi}")
    if len(tree.edges) != n - 1:
        violations.append(f"edge count: {len(tree.edges)} edges for {n} tokens")

    if 0 <= tree.root < n:
        seen = set()
        stack = [tree.root]
        cyclic = False
        while stack:
            node = stack.pop()
            if node in seen:
                cyclic = True
                continue
            seen.add(node)
            stack.extend(children[node])
        if cyclic:
            violations.append("acyclic: a node is reachable twice from the root")
        if len(seen) != n:
            violations.append(f"connected: {n - len(seen)} tokens unreachable from the root")
    return violations
