"""Shared fixtures and small generators used across the test suite."""

from __future__ import annotations

import io
import json
import random
from datetime import date

import pytest

from litgraph.extractor import RelationTriple, SpeciesLexicon
from litgraph.lexicon import (
    ConceptCategory,
    ConceptEntry,
    compile_surface_index,
    from_entries,
)

CATEGORIES = [c.value for c in ConceptCategory]

# One [PASS]/[FAIL] line per acceptance check, echoed after the test
# summary because fd-level capture swallows prints from passing tests.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance checks")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_entry(concept_id, synonyms, category="brain_region"):
    return ConceptEntry(
        concept_id=concept_id,
        canonical_name=synonyms[0],
        category=ConceptCategory(category),
        synonyms=list(synonyms),
    )


def make_lexicon(spec):
    """Build a lexicon from {concept_id: [synonyms]} or (id, syns, cat) rows."""
    entries = []
    for item in spec if not isinstance(spec, dict) else spec.items():
        if len(item) == 2:
            cid, syns = item
            cat = "brain_region"
        else:
            cid, syns, cat = item
        entries.append(make_entry(cid, syns, cat))
    return from_entries(entries)


def make_index(spec):
    return compile_surface_index(make_lexicon(spec))


def make_triple(a, b, article_id="a1", sentence="S.", sentence_index=0,
                pub_date=date(2020, 1, 1), extraction_date=date(2024, 1, 1),
                species=(), citation=""):
    return RelationTriple(
        concept_a=a, concept_b=b, article_id=article_id,
        sentence_text=sentence, sentence_index=sentence_index,
        pub_date=pub_date, extraction_date=extraction_date,
        species=tuple(species), citation=citation,
    )


def random_triples(rng, concepts, n_articles, max_pairs_per_article=4,
                   start=date(2018, 1, 1), span_days=2000):
    """Random valid triples over a fixed concept universe."""
    triples = []
    for art in range(n_articles):
        article_id = f"art{art:04d}"
        pub = date.fromordinal(start.toordinal() + rng.randrange(span_days))
        n_pairs = rng.randint(1, max_pairs_per_article)
        for s in range(n_pairs):
            a, b = rng.sample(concepts, 2)
            if a > b:
                a, b = b, a
            triples.append(make_triple(
                a, b, article_id=article_id, sentence=f"sentence {s}.",
                sentence_index=s, pub_date=pub))
    return triples


@pytest.fixture
def species():
    return SpeciesLexicon.default()


@pytest.fixture
def tiny_lexicon():
    return make_lexicon([
        ("alzheimers_disease", ["Alzheimer's disease", "AD"], "brain_disease"),
        ("hippocampus", ["hippocampus", "hippocampal formation"], "brain_region"),
        ("memory", ["memory", "episodic memory"], "cognitive_function"),
        ("dopamine", ["dopamine"], "neurotransmitter"),
        ("prefrontal_cortex", ["prefrontal cortex", "PFC"], "brain_region"),
        ("set_shifting", ["set-shifting", "set shifting"], "cognitive_function"),
    ])


@pytest.fixture
def tiny_index(tiny_lexicon):
    return compile_surface_index(tiny_lexicon)


def write_lexicon_file(path, spec):
    rows = []
    for item in spec:
        if len(item) == 2:
            cid, syns = item
            cat = "brain_region"
        else:
            cid, syns, cat = item
        rows.append({"id": cid, "name": syns[0], "category": cat,
                     "synonyms": list(syns)})
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def articles_jsonl(records):
    """Serialize article dicts to the update-file format."""
    buf = io.StringIO()
    for rec in records:
        buf.write(json.dumps(rec) + "\n")
    return buf.getvalue()
