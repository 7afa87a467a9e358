"""Acceptance gate A1-A8.  Each test records one PASS/FAIL line, printed after the run."""

import gc
import random
import statistics
import time
from functools import lru_cache

from conftest import AB, corpus_expressions, criterion, place, two_token_automata, words
from nre.a2fa import SummaryDfa, accepts, eliminate_epsilon, is_empty, to_nfa
from nre.containment import CounterexampleError, confirm, gen_contains, sp_contains
from nre.corpus import BIBLIO_CLAIMS, GENERAL_PAIRS, SEMIPATH_PAIRS, biblio_graph
from nre.evaluate import eval_check, eval_nre
from nre.graph import GraphDb, decode, expand_markers, node_name, trans
from nre.oneway import complement_oneway, intersect_oneway, is_empty_oneway
from nre.oracle import EnumSpec, enum_kbranch, enum_semipaths, naive_eval, oracle_contains
from nre.syntax import labels, nesting_depth, parse, size
from nre.translate import compile_gen, compile_sp, encoding_validator, gamma, mark_gen, mark_se

LABELS = ("a", "b")


@lru_cache(maxsize=None)
def sp_verdict(lhs, rhs, strategy="exact"):
    return sp_contains(parse(lhs), parse(rhs), strategy, max_len=6)


@lru_cache(maxsize=None)
def gen_verdict(lhs, rhs):
    return gen_contains(parse(lhs), parse(rhs))


def test_a1_semipath_oracle_agreement():
    with criterion("A1", "semipath containment = oracle over semipaths <= 5") as c:
        pairs = [(parse(x), parse(y)) for x, y in SEMIPATH_PAIRS]
        assert len(pairs) >= 30
        assert all(size(e) <= 8 and nesting_depth(e) <= 2 and labels(e) <= set(LABELS) for p in pairs for e in p)
        start = time.perf_counter()
        disagree = []
        for (x, y), (e1, e2) in zip(SEMIPATH_PAIRS, pairs):
            v = sp_verdict(x, y)
            o = oracle_contains(e1, e2, EnumSpec(LABELS, 5))
            if v.outcome != o.outcome:
                disagree.append((x, y, v.outcome, o.outcome))
        elapsed = time.perf_counter() - start
        c.detail = f"{len(pairs)} pairs, {elapsed:.1f}s"
        assert not disagree, disagree
        assert elapsed <= 300


def test_a2_general_oracle_agreement():
    with criterion("A2", "general containment = oracle over 2-branch trees <= 4 edges") as c:
        pairs = [(parse(x), parse(y)) for x, y in GENERAL_PAIRS]
        assert len(pairs) >= 15
        assert all(nesting_depth(e) <= 2 for p in pairs for e in p)
        start = time.perf_counter()
        disagree = []
        for (x, y), (e1, e2) in zip(GENERAL_PAIRS, pairs):
            v = gen_verdict(x, y)
            for k in (1, 2):
                if k < nesting_depth(e1):
                    continue
                o = oracle_contains(e1, e2, EnumSpec(LABELS, 4, k), "kbranch")
                # a k=1 counterexample is also a 2-branch one, so only containment can differ
                if v.outcome != o.outcome and not (k < 2 and o.contained):
                    disagree.append((x, y, k, v.outcome, o.outcome))
        elapsed = time.perf_counter() - start
        c.detail = f"{len(pairs)} pairs, {elapsed:.1f}s"
        assert not disagree, disagree
        assert elapsed <= 600


def test_a3_compiled_membership_matches_semantics():
    with criterion("A3", "compiled automata membership = naive endpoint relations") as c:
        exprs = [e for e in corpus_expressions() if nesting_depth(e) <= 2]
        checked = 0
        # strings: every semipath <= 4 and every S/E placement
        marked = []
        for sp in enum_semipaths(EnumSpec(LABELS, 4)):
            n = len(sp.nodes)
            marked.append((sp, [(i, j, tuple(place(sp.letters, i, j))) for i in range(1, n + 1) for j in range(1, n + 1)]))
        for e in exprs:
            d = SummaryDfa(mark_se(compile_sp(e, AB)))
            for sp, cases in marked:
                rel = naive_eval(e, sp.to_graph())
                for i, j, w in cases:
                    assert d.accepts(w) == ((sp.nodes[i - 1], sp.nodes[j - 1]) in rel), (e, w)
                    checked += 1
        # trees: every k-branch semipath <= 4 edges, k <= 2, every marked pair
        for k in (1, 2):
            trees = []
            for t in enum_kbranch(EnumSpec(LABELS, 4, k)):
                trees.append((t, [(u, v, tuple(trans(expand_markers(t, u, v)))) for u in t.domain for v in t.domain]))
            for e in exprs:
                if nesting_depth(e) > k:
                    continue
                d = SummaryDfa(mark_gen(compile_gen(e, k, AB), k))
                for t, cases in trees:
                    rel = naive_eval(e, t.to_graph())
                    for u, v, w in cases:
                        assert d.accepts(w) == ((node_name(u), node_name(v)) in rel), (e, t, u, v)
                        checked += 1
        c.detail = f"{len(exprs)} expressions, {checked} marked words, 0 mismatches"


def test_a4_bibliography_claims():
    with criterion("A4", "the five bibliography memberships hold via eval and naive_eval") as c:
        g = biblio_graph()
        for query, u, v, expected in BIBLIO_CLAIMS:
            e = parse(query)
            assert eval_check(e, g, u, v) is expected, (query, u, v)
            assert ((u, v) in eval_nre(e, g)) is expected
            assert ((u, v) in naive_eval(e, g)) is expected
        c.detail = f"{len(BIBLIO_CLAIMS)} claims"


def test_a5_encoding_soundness():
    with criterion("A5", "validator accepts encodings, decode inverts trans, garbage rejected") as c:
        count = 0
        for k in (1, 2):
            v = encoding_validator(k, AB)
            for t in enum_kbranch(EnumSpec(LABELS, 4, k)):
                assert decode(trans(t), k) == t
                # the validator covers trees with at least one edge
                assert v.accepts(trans(t)) is bool(t.labels)
                count += 1
        rng = random.Random(2024)
        v = encoding_validator(2, AB)
        tokens = sorted(gamma(2, AB), key=str)
        rejected = 0
        while rejected < 1000:
            w = [rng.choice(tokens) for _ in range(rng.randint(1, 10))]
            t = decode(w, 2)
            if t is not None and t.labels:
                continue
            assert not v.accepts(w), w
            rejected += 1
        c.detail = f"{count} trees, {rejected} random non-encodings"


def random_graph(m, rng):
    n = m // 2
    edges = set()
    while len(edges) < m:
        edges.add((f"n{rng.randrange(n)}", rng.choice(LABELS), f"n{rng.randrange(n)}"))
    return GraphDb.from_edges(edges, ["sink"])


def test_a6_linear_evaluation_scaling():
    with criterion("A6", "eval_check time per doubling of |G| <= 2.5x") as c:
        e = parse("(a . [b*])*")
        assert size(e) == 6
        rng = random.Random(6)
        sizes = (10_000, 20_000, 40_000)
        graphs = {m: random_graph(m, rng) for m in sizes}
        for g in graphs.values():
            assert eval_check(e, g, "n0", "sink") is False  # warm the adjacency indexes
        times = {m: [] for m in sizes}
        # interleave the sizes so background noise hits all of them alike
        for _ in range(5):
            for m, g in graphs.items():
                gc.collect()
                gc.disable()
                try:
                    start = time.perf_counter()
                    eval_check(e, g, "n0", "sink")
                    times[m].append(time.perf_counter() - start)
                finally:
                    gc.enable()
        medians = [statistics.median(times[m]) for m in sizes]
        ratios = [b / a for a, b in zip(medians, medians[1:])]
        c.detail = "medians " + ", ".join(f"{t * 1000:.1f}ms" for t in medians) + "; ratios " + ", ".join(
            f"{r:.2f}" for r in ratios)
        assert all(r <= 2.5 for r in ratios), c.detail


def test_a7_automata_engine_consistency():
    with criterion("A7", "epsilon elimination, one-way conversion, complement and emptiness agree") as c:
        automata = two_token_automata()
        tokens = sorted(automata[0][1].alphabet, key=str)
        ws = words(tokens, 6)
        for e, a in automata:
            plain = eliminate_epsilon(a)
            nfa = to_nfa(plain)
            for w in ws:
                assert accepts(plain, w) == accepts(a, w) == nfa.accepts(w), (e, w)
        for e, a in automata[:10]:
            nfa = to_nfa(a)
            assert is_empty_oneway(intersect_oneway(nfa, complement_oneway(nfa))) is None, e
        for e, a in automata:
            exact, bounded = is_empty(a), is_empty(a, "bounded", max_len=6)
            assert (exact is None) == (bounded is None), e
            if exact is not None:
                assert len(exact) == len(bounded)
        c.detail = f"{len(automata)} automata, {len(ws)} words each"


def test_a8_counterexamples_reverify():
    with criterion("A8", "every NOT CONTAINED verdict re-verifies with naive_eval") as c:
        verdicts = []
        for x, y in SEMIPATH_PAIRS:
            verdicts += [(x, y, sp_verdict(x, y)), (x, y, sp_verdict(x, y, "bounded"))]
        for x, y in GENERAL_PAIRS:
            verdicts.append((x, y, gen_verdict(x, y)))
        found = 0
        for x, y, v in verdicts:
            if v.not_contained:
                found += 1
                g = v.counterexample
                assert v.pair in naive_eval(parse(x), g) and v.pair not in naive_eval(parse(y), g), (x, y)
                confirm(parse(x), parse(y), g, v.pair)
        # the runtime check itself fires on a bogus pair
        g = GraphDb.from_edges([("u1", "a", "u2")])
        try:
            confirm(parse("a"), parse("a"), g, ("u1", "u2"))
        except CounterexampleError:
            pass
        else:
            raise AssertionError("confirm accepted a non-separating pair")
        c.detail = f"{found} counterexamples from {len(verdicts)} verdicts"
