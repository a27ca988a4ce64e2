"""Scanner correctness against a brute-force oracle.

The oracle tries, at every position, every registered surface form by
direct token-window comparison, longest first, and skips past accepted
matches.  It is quadratic but obviously correct, which makes it the
reference for the single-pass trie scanner.
"""

import random

from litgraph.extractor import ScanStats, match_concepts
from litgraph.lexicon import compile_surface_index

from conftest import make_index, make_lexicon


def naive_match(folded_tokens, lexicon):
    """Leftmost-longest non-overlapping matching by window comparison."""
    forms = {}
    for entry in lexicon.enabled_entries():
        for toks in entry.surface_token_forms():
            forms[toks] = entry.concept_id
    max_len = max((len(f) for f in forms), default=0)
    out = []
    i = 0
    n = len(folded_tokens)
    while i < n:
        hit = None
        for length in range(min(max_len, n - i), 0, -1):
            window = tuple(folded_tokens[i:i + length])
            if window in forms:
                hit = (forms[window], i, i + length)
                break
        if hit:
            out.append(hit)
            i = hit[2]
        else:
            i += 1
    return out


def scan(tokens, spec):
    return match_concepts(tokens, make_index(spec))


def test_single_token_match():
    assert scan(["the", "hippocampus", "fires"], [("hc", ["hippocampus"])]) == [
        ("hc", 1, 2)]


def test_phrase_match_with_span():
    hits = scan(["left", "prefrontal", "cortex", "lesion"],
                [("pfc", ["prefrontal cortex"])])
    assert hits == [("pfc", 1, 3)]


def test_longest_match_wins():
    spec = [("pfc", ["prefrontal cortex"]), ("ctx", ["cortex"]),
            ("pfcl", ["prefrontal cortex lesion"])]
    hits = scan(["prefrontal", "cortex", "lesion"], spec)
    assert hits == [("pfcl", 0, 3)]


def test_matches_do_not_overlap():
    # After "prefrontal cortex" is consumed, "cortex" cannot match inside it.
    spec = [("pfc", ["prefrontal cortex"]), ("ctx", ["cortex"])]
    hits = scan(["prefrontal", "cortex", "and", "cortex"], spec)
    assert hits == [("pfc", 0, 2), ("ctx", 3, 4)]


def test_failed_long_probe_still_finds_later_match():
    # "hippocampal" alone is no concept; the scanner must not lose the
    # subsequent single-token match after the failed phrase probe.
    spec = [("hf", ["hippocampal formation"]), ("mem", ["memory"])]
    hits = scan(["hippocampal", "memory"], spec)
    assert hits == [("mem", 1, 2)]


def test_prefix_concept_accepted_when_extension_fails():
    spec = [("hc", ["hippocampus"]), ("hcx", ["hippocampus proper"])]
    hits = scan(["hippocampus", "atrophy"], spec)
    assert hits == [("hc", 0, 1)]


def test_adjacent_matches():
    spec = [("a", ["alpha"]), ("b", ["beta"])]
    assert scan(["alpha", "beta"], spec) == [("a", 0, 1), ("b", 1, 2)]


def test_empty_token_list():
    assert scan([], [("a", ["alpha"])]) == []


def random_instance(rng):
    """One randomized (lexicon, token stream) pair with overlapping forms."""
    vocab = [f"w{i}" for i in range(rng.randint(3, 12))]
    n_concepts = rng.randint(1, 10)
    used = set()
    spec = []
    for c in range(n_concepts):
        syns = []
        for _ in range(rng.randint(1, 3)):
            form = " ".join(rng.choices(vocab, k=rng.randint(1, 4)))
            syns.append(form)
        # Distinct synonym sets per concept keep collision resolution
        # deterministic without loss of scanner coverage.
        key = tuple(sorted(syns))
        if key in used:
            continue
        used.add(key)
        spec.append((f"c{c:02d}", syns))
    if not spec:
        spec = [("c00", [vocab[0]])]
    tokens = rng.choices(vocab, k=rng.randint(0, 60))
    return spec, tokens


def test_randomized_equivalence_with_oracle():
    rng = random.Random(20240601)
    for trial in range(300):
        spec, tokens = random_instance(rng)
        lexicon = make_lexicon(spec)
        if not lexicon.enabled_entries():
            continue
        index = compile_surface_index(lexicon)
        expected = naive_match(tokens, lexicon)
        got = match_concepts(tokens, index)
        assert got == expected, f"trial {trial}: {spec!r} on {tokens!r}"


def test_comparison_bound_holds_on_random_instances():
    rng = random.Random(99)
    for _ in range(300):
        spec, tokens = random_instance(rng)
        lexicon = make_lexicon(spec)
        if not lexicon.enabled_entries():
            continue
        index = compile_surface_index(lexicon)
        stats = ScanStats()
        match_concepts(tokens, index, stats)
        assert stats.tokens == len(tokens)
        assert stats.comparisons <= max(1, len(tokens)) * index.max_phrase_len


def test_stats_accumulate_across_calls():
    index = make_index([("a", ["alpha"])])
    stats = ScanStats()
    match_concepts(["alpha", "x"], index, stats)
    match_concepts(["alpha"], index, stats)
    assert stats.tokens == 3
    assert stats.comparisons >= 3


def test_token_objects_and_plain_strings_agree(tiny_index):
    from litgraph.extractor import tokenize
    text = "Episodic memory depends on the hippocampus and prefrontal cortex."
    tokens = tokenize(text)
    plain = [t.folded for t in tokens]
    assert match_concepts(tokens, tiny_index) == match_concepts(plain, tiny_index)
