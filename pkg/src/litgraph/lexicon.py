"""Concept inventory: loading, validation, and the surface-form index.

Lexicon files are JSON Lines, one object per concept:

    {"id": "prefrontal_cortex", "name": "prefrontal cortex",
     "category": "brain_region", "synonyms": ["prefrontal cortex", "pfc"]}

A stoplist file (one banned surface form per line, '#' comments) removes
error-prone synonyms such as abbreviations that collide with ordinary
words.  Surface forms are compared by their case-folded token sequence,
matching the extractor's case-insensitive behavior.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DuplicateConceptIdError, EmptyLexiconError, LexiconParseError
from .extractor import fold_tokens


class ConceptCategory(str, enum.Enum):
    BRAIN_DISEASE = "brain_disease"
    COGNITIVE_FUNCTION = "cognitive_function"
    MEDICINE = "medicine"
    BRAIN_REGION = "brain_region"
    NEURON = "neuron"
    GENE_PROTEIN = "gene_protein"
    PATHWAY = "pathway"
    NEUROTRANSMITTER = "neurotransmitter"


@dataclass
class ConceptEntry:
    concept_id: str
    canonical_name: str
    category: ConceptCategory
    synonyms: list[str]
    enabled: bool = True

    def surface_token_forms(self) -> list[tuple[str, ...]]:
        """Distinct folded token sequences of this entry's synonyms."""
        seen = []
        for s in self.synonyms:
            toks = fold_tokens(s)
            if toks and toks not in seen:
                seen.append(toks)
        return seen


@dataclass(frozen=True)
class SynonymCollision:
    """Two or more concepts claimed the same surface form."""

    surface: tuple[str, ...]
    winner: str
    losers: tuple[str, ...]


@dataclass
class Lexicon:
    entries: list[ConceptEntry]
    collisions: list[SynonymCollision] = field(default_factory=list)
    stopped_synonyms: list[tuple[str, str]] = field(default_factory=list)  # (concept_id, synonym)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def enabled_entries(self) -> list[ConceptEntry]:
        return [e for e in self.entries if e.enabled]

    def by_id(self) -> dict[str, ConceptEntry]:
        return {e.concept_id: e for e in self.entries}


class _ScanNode:
    """Trie node of the combined scan structure (see SurfaceIndex)."""

    __slots__ = ("concept_id", "children")

    def __init__(self):
        self.concept_id: Optional[str] = None
        self.children: dict[str, _ScanNode] = {}


class SurfaceIndex:
    """Token-level index over all enabled surface forms.

    ``single_token_map`` holds one-token synonyms, ``phrase_trie`` the
    multi-token ones.  ``scan_root`` merges both into a single trie so the
    scanner spends at most one lookup per (position, depth): the depth-1
    lookup answers both "is this a single-token concept" and "could a
    phrase start here".
    """

    def __init__(self, single_token_map: dict[str, str],
                 phrase_trie: _ScanNode, max_phrase_len: int):
        self.single_token_map = single_token_map
        self.phrase_trie = phrase_trie
        self.max_phrase_len = max_phrase_len
        # Depth-1 nodes are copied so that marking single-token accepts on
        # them never mutates the phrase trie; deeper nodes are shared.
        self.scan_root: dict[str, _ScanNode] = {}
        for token, child in phrase_trie.children.items():
            top = _ScanNode()
            top.concept_id = child.concept_id
            top.children = child.children
            self.scan_root[token] = top
        for token, concept_id in single_token_map.items():
            node = self.scan_root.get(token)
            if node is None:
                node = _ScanNode()
                self.scan_root[token] = node
            node.concept_id = concept_id

    def __len__(self):
        return len(self.single_token_map) + _count_accepting(self.phrase_trie)


def _count_accepting(node: _ScanNode) -> int:
    total = 1 if node.concept_id is not None else 0
    for child in node.children.values():
        total += _count_accepting(child)
    return total


def load_stoplist(stream) -> set[tuple[str, ...]]:
    """Banned surface forms, one per line; '#' starts a comment."""
    banned = set()
    for raw in stream:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = fold_tokens(line)
        if toks:
            banned.add(toks)
    return banned


_CATEGORY_VALUES = {c.value for c in ConceptCategory}


def parse_lexicon_line(line: str, line_no: int) -> ConceptEntry:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LexiconParseError(line_no, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise LexiconParseError(line_no, "expected a JSON object")
    for key in ("id", "name", "category", "synonyms"):
        if key not in obj:
            raise LexiconParseError(line_no, f"missing field {key!r}")
    if obj["category"] not in _CATEGORY_VALUES:
        raise LexiconParseError(line_no, f"unknown category {obj['category']!r}")
    if not isinstance(obj["synonyms"], list) or not all(isinstance(s, str) for s in obj["synonyms"]):
        raise LexiconParseError(line_no, "synonyms must be a list of strings")
    if not obj["id"] or not isinstance(obj["id"], str):
        raise LexiconParseError(line_no, "id must be a non-empty string")
    synonyms = list(obj["synonyms"])
    if obj["name"] not in synonyms:
        synonyms.insert(0, obj["name"])
    return ConceptEntry(
        concept_id=obj["id"],
        canonical_name=obj["name"],
        category=ConceptCategory(obj["category"]),
        synonyms=synonyms,
    )


def load_lexicon(stream, stoplist: Optional[set[tuple[str, ...]]] = None) -> Lexicon:
    """Parse and validate a lexicon stream.

    Stoplisted synonyms are removed; cross-concept surface collisions are
    resolved deterministically (lowest concept_id keeps the form) and
    reported.  An entry left without synonyms is disabled, never dropped.
    """
    entries: list[ConceptEntry] = []
    seen_ids: set[str] = set()
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        entry = parse_lexicon_line(line, line_no)
        if entry.concept_id in seen_ids:
            raise DuplicateConceptIdError(
                f"concept_id {entry.concept_id!r} appears more than once (line {line_no})")
        seen_ids.add(entry.concept_id)
        entries.append(entry)
    return _validate(entries, stoplist or set())


def from_entries(entries: Iterable[ConceptEntry],
                 stoplist: Optional[set[tuple[str, ...]]] = None) -> Lexicon:
    """Validate programmatically-built entries (same rules as load_lexicon)."""
    entries = list(entries)
    seen: set[str] = set()
    for e in entries:
        if e.concept_id in seen:
            raise DuplicateConceptIdError(f"concept_id {e.concept_id!r} appears more than once")
        seen.add(e.concept_id)
    return _validate(entries, stoplist or set())


def _validate(entries: list[ConceptEntry], stoplist: set[tuple[str, ...]]) -> Lexicon:
    stopped: list[tuple[str, str]] = []
    for entry in entries:
        kept = []
        for syn in entry.synonyms:
            toks = fold_tokens(syn)
            if not toks:
                stopped.append((entry.concept_id, syn))
            elif toks in stoplist:
                stopped.append((entry.concept_id, syn))
            else:
                kept.append(syn)
        entry.synonyms = kept
        if not kept:
            entry.enabled = False

    # Cross-concept collision resolution: lowest concept_id wins the form.
    claims: dict[tuple[str, ...], list[str]] = {}
    for entry in entries:
        if not entry.enabled:
            continue
        for toks in entry.surface_token_forms():
            claims.setdefault(toks, []).append(entry.concept_id)
    collisions: list[SynonymCollision] = []
    losers: dict[str, set[tuple[str, ...]]] = {}
    for toks, owners in sorted(claims.items()):
        if len(owners) < 2:
            continue
        owners = sorted(owners)
        collisions.append(SynonymCollision(
            surface=toks, winner=owners[0], losers=tuple(owners[1:])))
        for loser in owners[1:]:
            losers.setdefault(loser, set()).add(toks)
    for entry in entries:
        lost = losers.get(entry.concept_id)
        if not lost:
            continue
        entry.synonyms = [s for s in entry.synonyms if fold_tokens(s) not in lost]
        if not entry.synonyms:
            entry.enabled = False
    return Lexicon(entries=entries, collisions=collisions, stopped_synonyms=stopped)


def compile_surface_index(lexicon: Lexicon) -> SurfaceIndex:
    """Build the scan index over all enabled surface forms."""
    single: dict[str, str] = {}
    trie_root = _ScanNode()
    max_len = 0
    for entry in lexicon.enabled_entries():
        for toks in entry.surface_token_forms():
            max_len = max(max_len, len(toks))
            if len(toks) == 1:
                single[toks[0]] = entry.concept_id
            else:
                node = trie_root
                for tok in toks:
                    nxt = node.children.get(tok)
                    if nxt is None:
                        nxt = _ScanNode()
                        node.children[tok] = nxt
                    node = nxt
                node.concept_id = entry.concept_id
    if max_len == 0:
        raise EmptyLexiconError("no enabled surface forms to index")
    return SurfaceIndex(single, trie_root, max_len)


def resolve(tokens, index: SurfaceIndex) -> Optional[str]:
    """concept_id iff the exact folded token sequence is a surface form."""
    toks = tuple(tokens)
    if not toks:
        raise ValueError("resolve() requires a non-empty token sequence")
    if len(toks) == 1:
        return index.single_token_map.get(toks[0])
    node = index.phrase_trie
    for tok in toks:
        node = node.children.get(tok)
        if node is None:
            return None
    return node.concept_id
