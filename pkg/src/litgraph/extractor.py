"""Text processing: sentences, tokens, concept mentions, relation triples.

The tokenizer defined here is the single tokenization contract of the
whole system: lexicon surface forms, species names and article text all
go through :func:`tokenize`, so a surface form matches exactly when its
token sequence appears in the text.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, NamedTuple, Optional

from .errors import ConfigError, InvalidTripleError

# Maximal runs of letters/digits; hyphens and apostrophes are kept when
# they sit between two alphanumeric characters ("set-shifting",
# "parkinson's", "a1-receptor").  Everything else separates tokens.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’’-][^\W_]+)*", re.UNICODE)

# Trailing strings that suppress a sentence boundary after '.'.
_ABBREVIATIONS = ("e.g.", "i.e.", "et al.", "vs.", "fig.", "cf.", "approx.")

_TERMINALS = ".!?"


class Token(NamedTuple):
    folded: str
    start: int
    end: int


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class ConceptMention:
    concept_id: str
    sentence_index: int
    token_start: int
    token_end: int
    field: str = "abstract"  # "title" or "abstract"


@dataclass(frozen=True, order=True)
class RelationTriple:
    """One evidence row: a canonical concept pair plus its provenance."""

    concept_a: str
    concept_b: str
    article_id: str
    sentence_text: str
    sentence_index: int
    pub_date: date
    extraction_date: date
    species: tuple[str, ...] = ()
    citation: str = ""

    def __post_init__(self):
        if self.concept_a == self.concept_b:
            raise InvalidTripleError(f"self-relation {self.concept_a!r}")
        if self.concept_a > self.concept_b:
            raise InvalidTripleError(
                f"triple pair not canonical: {self.concept_a!r} > {self.concept_b!r}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.concept_a, self.concept_b)


def tokenize(text: str) -> list[Token]:
    """Split text into case-folded tokens with [start, end) char spans."""
    return [
        Token(m.group(0).casefold(), m.start(), m.end())
        for m in _TOKEN_RE.finditer(text)
    ]


def fold_tokens(text: str) -> tuple[str, ...]:
    """Folded token sequence of a surface form (no spans)."""
    return tuple(m.group(0).casefold() for m in _TOKEN_RE.finditer(text))


def _ends_with_abbreviation(text: str, end: int) -> bool:
    """True if text[:end] ends with a known abbreviation at a word boundary."""
    lowered = text[max(0, end - 8):end].lower()
    for abbrev in _ABBREVIATIONS:
        if not lowered.endswith(abbrev):
            continue
        before = end - len(abbrev) - 1
        if before < 0 or not (text[before].isalnum() or text[before] == "."):
            return True
    return False


def split_sentences(text: str) -> list[Sentence]:
    """Segment text into sentences.

    A sentence ends at '.', '!' or '?' followed by whitespace and then an
    uppercase letter or digit, unless the terminator belongs to a known
    abbreviation.  The concatenation of the returned sentence texts plus
    the whitespace between them reconstructs the input.
    """
    spans: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] in _TERMINALS:
            j = i + 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            if (
                k > j
                and k < n
                and (text[k].isupper() or text[k].isdigit())
                and not _ends_with_abbreviation(text, j)
            ):
                spans.append((start, j))
                start = k
                i = k
                continue
        i += 1
    if start < n:
        spans.append((start, n))

    sentences = []
    for s, e in spans:
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            chunk = text[s:e]
            sentences.append(Sentence(text=chunk, tokens=tuple(tokenize(chunk))))
    return sentences


@dataclass
class ScanStats:
    """Instrumentation for the single-pass scan complexity bound."""

    comparisons: int = 0
    tokens: int = 0


def match_concepts(tokens, index, stats: Optional[ScanStats] = None):
    """Find concept mentions in a folded token sequence.

    Leftmost-longest, non-overlapping: at each position not covered by a
    previous match, the longest registered surface form starting there is
    emitted and scanning resumes after it.  Each position costs at most
    ``index.max_phrase_len`` token lookups, so a sentence is scanned once.
    """
    mentions: list[tuple[str, int, int]] = []
    folded = [t.folded if isinstance(t, Token) else t for t in tokens]
    root = index.scan_root
    max_len = index.max_phrase_len
    comparisons = 0
    i = 0
    n = len(folded)
    while i < n:
        node = root.get(folded[i])
        comparisons += 1
        if node is None:
            i += 1
            continue
        best_concept = node.concept_id
        best_len = 1
        depth = 1
        cur = node
        j = i + 1
        while j < n and depth < max_len and cur.children:
            nxt = cur.children.get(folded[j])
            comparisons += 1
            if nxt is None:
                break
            depth += 1
            j += 1
            cur = nxt
            if cur.concept_id is not None:
                best_concept = cur.concept_id
                best_len = depth
        if best_concept is not None:
            mentions.append((best_concept, i, i + best_len))
            i += best_len
        else:
            i += 1
    if stats is not None:
        stats.comparisons += comparisons
        stats.tokens += n
    return mentions


class SpeciesLexicon:
    """Maps folded surface-form token sequences to species identifiers."""

    def __init__(self, surface_map: dict[tuple[str, ...], str]):
        if not surface_map:
            raise ConfigError("species lexicon has no surface forms")
        self._forms = dict(surface_map)
        self.max_len = max(len(k) for k in self._forms)

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[str, Iterable[str]]]) -> "SpeciesLexicon":
        surface_map: dict[tuple[str, ...], str] = {}
        for species_id, surface_forms in entries:
            for form in surface_forms:
                toks = fold_tokens(form)
                if not toks:
                    raise ConfigError(f"species surface form {form!r} has no tokens")
                prev = surface_map.get(toks)
                if prev is not None and prev != species_id:
                    raise ConfigError(
                        f"surface form {form!r} claimed by both {prev!r} and {species_id!r}")
                surface_map[toks] = species_id
        return cls(surface_map)

    @classmethod
    def default(cls) -> "SpeciesLexicon":
        return cls.from_entries(DEFAULT_SPECIES)

    @classmethod
    def load(cls, stream) -> "SpeciesLexicon":
        """Read a JSONL stream of {"species": str, "surface_forms": [str]}."""
        import json

        entries = []
        for line in stream:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            entries.append((obj["species"], obj["surface_forms"]))
        return cls.from_entries(entries)

    def scan(self, tokens: tuple[str, ...]) -> list[str]:
        """Species mentioned in a token stream, first-appearance order."""
        found: list[str] = []
        seen = set()
        i = 0
        n = len(tokens)
        while i < n:
            matched = 0
            matched_id = None
            for length in range(min(self.max_len, n - i), 0, -1):
                sid = self._forms.get(tokens[i:i + length])
                if sid is not None:
                    matched = length
                    matched_id = sid
                    break
            if matched:
                if matched_id not in seen:
                    seen.add(matched_id)
                    found.append(matched_id)
                i += matched
            else:
                i += 1
        return found


DEFAULT_SPECIES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("human", ("human", "humans")),
    ("mouse", ("mouse", "mice", "murine")),
    ("rat", ("rat", "rats")),
    ("macaque", ("macaque", "macaques", "monkey", "monkeys", "rhesus")),
    ("zebrafish", ("zebrafish",)),
    ("drosophila", ("drosophila", "fruit fly", "fruit flies", "fly", "flies")),
    ("c_elegans", ("c. elegans", "caenorhabditis elegans")),
)


def infer_species(title: str, abstract: str, species: SpeciesLexicon) -> list[str]:
    """Distinct species named anywhere in title or abstract."""
    found: list[str] = []
    for sid in species.scan(fold_tokens(title)) + species.scan(fold_tokens(abstract)):
        if sid not in found:
            found.append(sid)
    return found


def iter_sentences(article) -> Iterable[tuple[int, str, Sentence]]:
    """Sentences of title then abstract with a global running index."""
    idx = 0
    for sentence in split_sentences(article.title):
        yield idx, "title", sentence
        idx += 1
    if article.abstract:
        for sentence in split_sentences(article.abstract):
            yield idx, "abstract", sentence
            idx += 1


def extract_mentions(article, index, stats: Optional[ScanStats] = None):
    """All concept mentions of an article, grouped by sentence."""
    out = []
    for sent_idx, field_name, sentence in iter_sentences(article):
        hits = match_concepts(sentence.tokens, index, stats)
        mentions = [
            ConceptMention(cid, sent_idx, start, end, field_name)
            for cid, start, end in hits
        ]
        out.append((sent_idx, sentence, mentions))
    return out


def extract_relations(article, index, species: SpeciesLexicon,
                      extraction_date: date,
                      stats: Optional[ScanStats] = None) -> list[RelationTriple]:
    """Emit one triple per unordered concept pair co-mentioned in a sentence.

    Duplicate mentions of one concept inside a sentence collapse; a pair
    appearing in several sentences yields one triple per sentence.  The
    article-level species inference is attached to every triple.
    """
    species_list = tuple(infer_species(article.title, article.abstract, species))
    triples: list[RelationTriple] = []
    for sent_idx, sentence, mentions in extract_mentions(article, index, stats):
        distinct = sorted({m.concept_id for m in mentions})
        for a, b in itertools.combinations(distinct, 2):
            triples.append(RelationTriple(
                concept_a=a,
                concept_b=b,
                article_id=article.article_id,
                sentence_text=sentence.text,
                sentence_index=sent_idx,
                pub_date=article.pub_date,
                extraction_date=extraction_date,
                species=species_list,
                citation=article.citation,
            ))
    return triples
