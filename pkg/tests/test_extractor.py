from datetime import date

import pytest

from litgraph.corpus import ArticleRecord
from litgraph.errors import ConfigError, InvalidTripleError
from litgraph.extractor import (
    RelationTriple,
    ScanStats,
    SpeciesLexicon,
    extract_relations,
    infer_species,
    iter_sentences,
)

from conftest import make_index, make_triple

EXTRACTED = date(2024, 1, 1)


def article(title, abstract="", article_id="a1", pub=date(2020, 1, 1), citation=""):
    return ArticleRecord(article_id=article_id, title=title, abstract=abstract,
                         pub_date=pub, citation=citation)


class TestTriples:
    def test_self_relation_rejected(self):
        with pytest.raises(InvalidTripleError):
            make_triple("a", "a")

    def test_non_canonical_order_rejected(self):
        with pytest.raises(InvalidTripleError):
            make_triple("b", "a")

    def test_key_is_the_pair(self):
        assert make_triple("a", "b").key == ("a", "b")


class TestSpecies:
    def test_default_lexicon_finds_common_names(self, species):
        assert infer_species("A study in mice", "", species) == ["mouse"]
        assert infer_species("", "We tested rats and humans.", species) == [
            "rat", "human"]

    def test_multiword_species_form(self, species):
        assert infer_species("C. elegans neurons", "", species) == ["c_elegans"]

    def test_first_appearance_order_no_duplicates(self, species):
        found = infer_species("Humans and mice", "mice before humans", species)
        assert found == ["human", "mouse"]

    def test_title_scanned_before_abstract(self, species):
        assert infer_species("zebrafish", "human", species) == ["zebrafish", "human"]

    def test_custom_lexicon_conflict_rejected(self):
        with pytest.raises(ConfigError):
            SpeciesLexicon.from_entries([
                ("a", ["shared name"]), ("b", ["shared name"])])

    def test_empty_lexicon_rejected(self):
        with pytest.raises(ConfigError):
            SpeciesLexicon.from_entries([])


class TestSentenceIteration:
    def test_title_then_abstract_with_running_index(self):
        art = article("Title one. Title two.", "Abs one. Abs two. Abs three.")
        rows = list(iter_sentences(art))
        assert [(i, f) for i, f, _ in rows] == [
            (0, "title"), (1, "title"),
            (2, "abstract"), (3, "abstract"), (4, "abstract")]
        assert rows[2][2].text == "Abs one."

    def test_empty_abstract_yields_title_only(self):
        rows = list(iter_sentences(article("Only a title")))
        assert [(i, f) for i, f, _ in rows] == [(0, "title")]


class TestExtractRelations:
    SPEC = [
        ("alzheimers_disease", ["Alzheimer's disease", "AD"], "brain_disease"),
        ("hippocampus", ["hippocampus"], "brain_region"),
        ("memory", ["memory", "episodic memory"], "cognitive_function"),
        ("dopamine", ["dopamine"], "neurotransmitter"),
    ]

    def extract(self, art, species):
        return extract_relations(art, make_index(self.SPEC), species, EXTRACTED)

    def test_pair_per_sentence_canonical_order(self, species):
        art = article("Memory and the hippocampus.", citation="Doe 2020")
        (t,) = self.extract(art, species)
        assert (t.concept_a, t.concept_b) == ("hippocampus", "memory")
        assert t.article_id == "a1"
        assert t.sentence_index == 0
        assert t.sentence_text == "Memory and the hippocampus."
        assert t.pub_date == date(2020, 1, 1)
        assert t.extraction_date == EXTRACTED
        assert t.citation == "Doe 2020"

    def test_three_concepts_give_three_pairs(self, species):
        art = article("Dopamine, memory and hippocampus interact.")
        keys = sorted(t.key for t in self.extract(art, species))
        assert keys == [
            ("dopamine", "hippocampus"),
            ("dopamine", "memory"),
            ("hippocampus", "memory"),
        ]

    def test_duplicate_mentions_collapse_within_sentence(self, species):
        art = article("Memory, more memory, and hippocampus.")
        assert len(self.extract(art, species)) == 1

    def test_synonym_and_canonical_collapse_to_one_concept(self, species):
        # "episodic memory" and "memory" resolve to the same concept, so a
        # sentence containing both yields no pair by itself.
        art = article("Episodic memory is memory.")
        assert self.extract(art, species) == []

    def test_pair_repeats_across_sentences(self, species):
        art = article("Memory needs hippocampus.",
                      "Hippocampus supports memory. Unrelated text here.")
        triples = self.extract(art, species)
        assert [t.sentence_index for t in triples] == [0, 1]
        assert {t.key for t in triples} == {("hippocampus", "memory")}

    def test_no_pair_across_sentence_boundary(self, species):
        art = article("Memory is studied.", "Hippocampus is measured.")
        assert self.extract(art, species) == []

    def test_species_attached_article_wide(self, species):
        art = article("Memory and hippocampus in mice.",
                      "Humans show the same memory and hippocampus link.")
        triples = self.extract(art, species)
        assert len(triples) == 2
        for t in triples:
            assert t.species == ("mouse", "human")

    def test_single_concept_article_yields_nothing(self, species):
        art = article("The hippocampus.", "Only the hippocampus again.")
        assert self.extract(art, species) == []

    def test_scan_stats_cover_title_and_abstract(self, species):
        art = article("Memory and hippocampus.", "Dopamine affects memory.")
        stats = ScanStats()
        extract_relations(art, make_index(self.SPEC), species, EXTRACTED, stats)
        assert stats.tokens == 3 + 3
        assert 0 < stats.comparisons <= stats.tokens * 2
