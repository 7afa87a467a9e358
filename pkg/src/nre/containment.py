"""Containment of NREs as emptiness of a product of automata.

The semipath procedure searches words ``w1 S w2 E w3`` that the left-hand automaton
accepts and the right-hand one rejects; the general procedure does the same over
encodings of k-branch semipaths, with k the nesting depth of the left-hand side.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .a2fa import A2fa, SummaryDfa, accepts
from .evaluate import _relation
from .graph import (E_MARK, S_MARK, GraphDb, KBranchTree, Semipath, contract_markers, decode, expand_markers,
                    node_name, render_word, trans)
from .oneway import BudgetExceeded, Complement, Product, SubsetDfa, shortest_word
from .oracle import EnumSpec, enum_kbranch, naive_eval
from .syntax import Nre, labels, nesting_depth
from .translate import (MarkedA2fa, compile_gen, compile_sp, encoding_validator, mark_gen, mark_se, shape_automaton,
                        symbols_for, tree_shape_automaton)
from .verdict import CONTAINED, NOT_CONTAINED, UNKNOWN, Verdict

STRATEGIES = ("exact", "bounded", "both")


class CounterexampleError(AssertionError):
    """A counterexample failed its independent re-check; this is always a bug."""


def confirm(e1: Nre, e2: Nre, g: GraphDb, pair: tuple) -> None:
    if pair not in naive_eval(e1, g) or pair in naive_eval(e2, g):
        raise CounterexampleError(f"pair {pair} does not separate the expressions on {sorted(g.edges)}")


def _place(word: Sequence, i: int, j: int, s=S_MARK, e=E_MARK) -> list:
    """Put S in front of the i-th token (or the end) and E in front of the j-th; S first on ties."""
    out = []
    for p, t in enumerate([*word, None], 1):
        if p == i:
            out.append(s)
        if p == j:
            out.append(e)
        if t is not None:
            out.append(t)
    return out


def endpoints(a: A2fa, word: Sequence) -> set:
    """All (i, j) for which ``a`` accepts the word with S before node i and E before node j."""
    d = SummaryDfa(a)
    n = len(word) + 1
    return {(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if d.accepts(_place(word, i, j))}


def tacit_endpoints(m: MarkedA2fa, word: Sequence) -> set:
    """(i, j) such that an accepting run starts its real work at node i and reaches the mark at node j.

    Works on the unmarked automaton by vetoing moves: leaving the backward scan is only
    allowed at node i, and entering the marked state only at node j.
    """
    a = m.automaton
    start, q0, qm = a.initial, m.core.initial, m.marked
    n = len(word) + 1
    out = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            def allow(src, dst, i=i, j=j):
                if src[0] == start and dst[0] == q0 and src[1] != i + 1:
                    return False
                if dst[0] == qm and src[0] != qm and dst[1] != j + 1:
                    return False
                return True

            if accepts(a, word, allow):
                out.add((i, j))
    return out


def split_marked(word: Sequence) -> tuple[list, int, int]:
    """Inverse of the S/E placement: (letters, i, j)."""
    letters, i, j = [], None, None
    for t in word:
        if t == S_MARK:
            i = len(letters) + 1
        elif t == E_MARK:
            j = len(letters) + 1
        else:
            letters.append(t)
    if i is None or j is None:
        raise ValueError("word lacks a marker")
    return letters, i, j


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; pick one of {', '.join(STRATEGIES)}")


def _first_violation(e1: Nre, e2: Nre, g: GraphDb):
    r1, r2 = _relation(e1, g), _relation(e2, g)
    extra = sorted((u, v) for u, vs in r1.items() for v in vs if v not in r2.get(u, ()))
    return extra[0] if extra else None


def _combine(exact: Verdict, bounded: Verdict) -> Verdict:
    if bounded.not_contained and not exact.not_contained and exact.outcome != UNKNOWN:
        raise CounterexampleError("bounded search refuted a containment the exact procedure accepted")
    return exact if exact.outcome != UNKNOWN else bounded


# -- semipaths -------------------------------------------------------------------


def sp_contains(e1: Nre, e2: Nre, strategy: str = "exact", max_len: int = 6,
                budget: Optional[int] = None) -> Verdict:
    """Is e1 contained in e2 over simple semipaths?"""
    _check_strategy(strategy)
    if strategy == "bounded":
        return _sp_bounded(e1, e2, max_len)
    exact = _sp_exact(e1, e2, budget)
    return _combine(exact, _sp_bounded(e1, e2, max_len)) if strategy == "both" else exact


def _sp_exact(e1: Nre, e2: Nre, budget: Optional[int]) -> Verdict:
    syms = symbols_for(labels(e1) | labels(e2))
    d1 = SummaryDfa(mark_se(compile_sp(e1, syms)))
    d2 = SummaryDfa(mark_se(compile_sp(e2, syms)))
    shape = SubsetDfa(shape_automaton(set(syms) | {S_MARK, E_MARK}))
    try:
        word = shortest_word(Product([shape, d1, Complement(d2)]), budget=budget)
    except BudgetExceeded as exc:
        return Verdict(UNKNOWN, note=str(exc))
    if word is None:
        return Verdict(CONTAINED)
    letters, i, j = split_marked(word)
    sp = Semipath.canonical(letters)
    g = sp.to_graph()
    pair = (sp.nodes[i - 1], sp.nodes[j - 1])
    confirm(e1, e2, g, pair)
    return Verdict(NOT_CONTAINED, g, pair, witness=" ".join(map(str, word)), shape=sp)


def _sp_bounded(e1: Nre, e2: Nre, max_len: int) -> Verdict:
    syms = symbols_for(labels(e1) | labels(e2))
    for n in range(max_len + 1):
        for letters in itertools.product(syms, repeat=n):
            sp = Semipath.canonical(letters)
            g = sp.to_graph()
            pair = _first_violation(e1, e2, g)
            if pair:
                confirm(e1, e2, g, pair)
                i, j = sp.nodes.index(pair[0]) + 1, sp.nodes.index(pair[1]) + 1
                word = _place(letters, i, j)
                return Verdict(NOT_CONTAINED, g, pair, witness=" ".join(map(str, word)), shape=sp, bounded=True)
    return Verdict(UNKNOWN, bounded=True, note=f"no counterexample among semipaths of length <= {max_len}")


# -- k-branch semipaths ---------------------------------------------------------


def gen_contains(e1: Nre, e2: Nre, strategy: str = "exact", max_len: int = 4,
                 budget: Optional[int] = None, k: Optional[int] = None) -> Verdict:
    """Is e1 contained in e2 over all graphs?  Searches k-branch semipaths, k = nesting depth of e1.

    ``max_len`` bounds the number of tree edges for the bounded strategy.
    """
    _check_strategy(strategy)
    k = k if k is not None else nesting_depth(e1)
    if strategy == "bounded":
        return _gen_bounded(e1, e2, k, max_len)
    exact = _gen_exact(e1, e2, k, budget)
    return _combine(exact, _gen_bounded(e1, e2, k, max_len)) if strategy == "both" else exact


def _gen_exact(e1: Nre, e2: Nre, k: int, budget: Optional[int]) -> Verdict:
    syms = symbols_for(labels(e1) | labels(e2))
    parts = [
        SubsetDfa(tree_shape_automaton(k, syms)),
        SubsetDfa(encoding_validator(k, syms, markers=True)),
        SummaryDfa(mark_gen(compile_gen(e1, k, syms), k)),
        Complement(SummaryDfa(mark_gen(compile_gen(e2, k, syms), k))),
    ]
    try:
        word = shortest_word(Product(parts), budget=budget)
    except BudgetExceeded as exc:
        return Verdict(UNKNOWN, note=str(exc))
    if word is None:
        return Verdict(CONTAINED, note=f"searched {k}-branch semipaths")
    marked = decode(word, k)
    if marked is None:
        raise CounterexampleError(f"witness {render_word(word)} is not a tree encoding")
    t, u, v = contract_markers(marked)
    g = t.to_graph()
    pair = (node_name(u), node_name(v))
    confirm(e1, e2, g, pair)
    return Verdict(NOT_CONTAINED, g, pair, witness=render_word(word), shape=t)


def _gen_bounded(e1: Nre, e2: Nre, k: int, max_edges: int) -> Verdict:
    base = sorted(labels(e1) | labels(e2))
    for t in enum_kbranch(EnumSpec(tuple(base), max_edges, k)):
        g = t.to_graph()
        pair = _first_violation(e1, e2, g)
        if pair:
            confirm(e1, e2, g, pair)
            return Verdict(NOT_CONTAINED, g, pair, shape=t, bounded=True)
    return Verdict(UNKNOWN, bounded=True, note=f"no counterexample among {k}-branch semipaths with <= {max_edges} edges")


def contains(e1: Nre, e2: Nre, mode: str = "semipath", **opts) -> Verdict:
    if mode == "semipath":
        return sp_contains(e1, e2, **opts)
    if mode == "general":
        return gen_contains(e1, e2, **opts)
    raise ValueError(f"unknown mode {mode!r}")


def tree_witness(t: KBranchTree, u, v) -> str:
    """The marked encoding the general procedure would search for (handy for debugging)."""
    return render_word(trans(expand_markers(t, u, v)))
