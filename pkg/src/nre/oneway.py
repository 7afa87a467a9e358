"""One-way automata: epsilon-NFAs, lazy determinization, complement, product and shortest-word search.

Every deterministic view used by the searches exposes the same three members:
``initial``, ``step(state, token)`` and ``accepting(state)``.
"""

from __future__ import annotations

import os
from collections import defaultdict, deque
from typing import Iterable, Optional, Sequence

from .graph import render_token

EPS = None
DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """A configurable state or node cap was hit; the question is still open."""


def state_budget(override: Optional[int] = None) -> int:
    if override is not None:
        return override
    return int(os.environ.get("NRE_STATE_BUDGET", DEFAULT_BUDGET))


def token_key(token) -> str:
    return render_token(token)


class Nfa:
    def __init__(self, alphabet: Iterable, initial: Iterable, finals: Iterable, delta=None, eps=None):
        self.alphabet = frozenset(alphabet)
        self.initial = frozenset(initial)
        self.finals = frozenset(finals)
        self.delta = {key: frozenset(v) for key, v in (delta or {}).items() if v}
        self.eps = {p: frozenset(v) for p, v in (eps or {}).items() if v}

    @property
    def states(self) -> frozenset:
        out = set(self.initial) | set(self.finals)
        for (p, _), qs in self.delta.items():
            out.add(p)
            out |= qs
        for p, qs in self.eps.items():
            out.add(p)
            out |= qs
        return frozenset(out)

    def closure(self, states: Iterable) -> frozenset:
        seen = set(states)
        work = list(seen)
        while work:
            for q in self.eps.get(work.pop(), ()):
                if q not in seen:
                    seen.add(q)
                    work.append(q)
        return frozenset(seen)

    def move(self, states: frozenset, token) -> frozenset:
        out = set()
        for p in states:
            out |= self.delta.get((p, token), frozenset())
        return self.closure(out)

    def accepts(self, word: Sequence) -> bool:
        cur = self.closure(self.initial)
        for t in word:
            cur = self.move(cur, t)
            if not cur:
                return False
        return bool(cur & self.finals)

    def __repr__(self):
        return f"Nfa({len(self.states)} states, {len(self.alphabet)} tokens)"


class NfaBuilder:
    """Incremental construction with integer states."""

    def __init__(self, alphabet: Iterable):
        self.alphabet = frozenset(alphabet)
        self.count = 0
        self.delta = defaultdict(set)
        self.eps = defaultdict(set)

    def new(self) -> int:
        self.count += 1
        return self.count - 1

    def add(self, p: int, token, q: int) -> None:
        if token is EPS:
            self.eps[p].add(q)
        else:
            self.delta[p, token].add(q)

    def build(self, initial: Iterable, finals: Iterable) -> Nfa:
        return Nfa(self.alphabet, initial, finals, self.delta, self.eps)


def word_nfa(alphabet: Iterable, word: Sequence) -> Nfa:
    b = NfaBuilder(alphabet)
    cur = start = b.new()
    for t in word:
        nxt = b.new()
        b.add(cur, t, nxt)
        cur = nxt
    return b.build([start], [cur])


def universal_nfa(alphabet: Iterable) -> Nfa:
    b = NfaBuilder(alphabet)
    q = b.new()
    for t in b.alphabet:
        b.add(q, t, q)
    return b.build([q], [q])


# -- deterministic views ------------------------------------------------------


class SubsetDfa:
    """Lazy subset construction; states are frozensets of NFA states."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.alphabet = nfa.alphabet
        self.initial = nfa.closure(nfa.initial)
        self._memo = {}

    def step(self, state: frozenset, token) -> frozenset:
        key = (state, token)
        if key not in self._memo:
            self._memo[key] = self.nfa.move(state, token)
        return self._memo[key]

    def accepting(self, state: frozenset) -> bool:
        return bool(state & self.nfa.finals)

    def dead(self, state: frozenset) -> bool:
        return not state


class Complement:
    """Deterministic and complete views complement by flipping acceptance."""

    def __init__(self, dfa):
        self.dfa = dfa
        self.alphabet = dfa.alphabet
        self.initial = dfa.initial

    def step(self, state, token):
        return self.dfa.step(state, token)

    def accepting(self, state) -> bool:
        return not self.dfa.accepting(state)

    def dead(self, state) -> bool:
        return False


class Product:
    """Synchronous product of deterministic views; accepts when every part accepts."""

    def __init__(self, parts: Sequence):
        self.parts = list(parts)
        self.alphabet = frozenset.intersection(*(frozenset(p.alphabet) for p in self.parts))
        self.initial = tuple(p.initial for p in self.parts)

    def step(self, state: tuple, token) -> tuple:
        return tuple(p.step(s, token) for p, s in zip(self.parts, state))

    def accepting(self, state: tuple) -> bool:
        return all(p.accepting(s) for p, s in zip(self.parts, state))

    def dead(self, state: tuple) -> bool:
        return any(getattr(p, "dead", lambda s: False)(s) for p, s in zip(self.parts, state))


def shortest_word(dfa, alphabet: Optional[Iterable] = None, budget: Optional[int] = None,
                  max_len: Optional[int] = None) -> Optional[list]:
    """Breadth-first search for a shortest accepted word (ties broken by token order).

    Raises BudgetExceeded when more than ``budget`` states would be explored.
    """
    budget = state_budget(budget)
    tokens = sorted(alphabet if alphabet is not None else dfa.alphabet, key=token_key)
    dead = getattr(dfa, "dead", lambda s: False)
    start = dfa.initial
    parent = {start: None}
    work = deque([(start, 0)])
    while work:
        s, depth = work.popleft()
        if dfa.accepting(s):
            word = []
            while parent[s] is not None:
                s, t = parent[s]
                word.append(t)
            return word[::-1]
        if max_len is not None and depth >= max_len:
            continue
        for t in tokens:
            n = dfa.step(s, t)
            if n in parent or dead(n):
                continue
            if len(parent) >= budget:
                raise BudgetExceeded(f"state budget of {budget} exhausted before emptiness was settled")
            parent[n] = (s, t)
            work.append((n, depth + 1))
    return None


def explore(dfa, alphabet: Optional[Iterable] = None, budget: Optional[int] = None) -> Nfa:
    """Materialize the reachable part of a deterministic view as an explicit (deterministic) Nfa."""
    budget = state_budget(budget)
    tokens = sorted(alphabet if alphabet is not None else dfa.alphabet, key=token_key)
    ids = {dfa.initial: 0}
    order = [dfa.initial]
    delta = {}
    i = 0
    while i < len(order):
        s = order[i]
        for t in tokens:
            n = dfa.step(s, t)
            if n not in ids:
                if len(ids) >= budget:
                    raise BudgetExceeded(f"determinization exceeded {budget} states")
                ids[n] = len(order)
                order.append(n)
            delta[ids[s], t] = {ids[n]}
        i += 1
    finals = [ids[s] for s in order if dfa.accepting(s)]
    return Nfa(tokens, [0], finals, delta)


def determinize(nfa: Nfa, budget: Optional[int] = None) -> Nfa:
    return explore(SubsetDfa(nfa), budget=budget)


def complement_oneway(nfa: Nfa, budget: Optional[int] = None) -> Nfa:
    return explore(Complement(SubsetDfa(nfa)), nfa.alphabet, budget)


def intersect_oneway(n1: Nfa, n2: Nfa) -> Nfa:
    if n1.alphabet != n2.alphabet:
        raise ValueError("intersection needs automata over the same alphabet")
    b = NfaBuilder(n1.alphabet)
    ids = {}

    def sid(pair):
        if pair not in ids:
            ids[pair] = b.new()
        return ids[pair]

    start = [(p, q) for p in n1.closure(n1.initial) for q in n2.closure(n2.initial)]
    work = list(start)
    seen = set(start)
    while work:
        p, q = work.pop()
        for t in n1.alphabet:
            # closing each target keeps the product epsilon-free
            for p2 in n1.move(frozenset([p]), t):
                for q2 in n2.move(frozenset([q]), t):
                    b.add(sid((p, q)), t, sid((p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        work.append((p2, q2))
    finals = [sid(s) for s in seen if s[0] in n1.finals and s[1] in n2.finals]
    return b.build([sid(s) for s in start], finals)


def is_empty_oneway(nfa: Nfa, budget: Optional[int] = None) -> Optional[list]:
    """A shortest accepted word, or None when the language is empty."""
    return shortest_word(SubsetDfa(nfa), budget=budget)
