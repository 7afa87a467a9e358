"""NRE -> alternating two-way automata, plus the one-way helper languages.

Two word formats share one set of inductive cases:

* semipath words: one token per edge, a ``Symbol`` read forwards or inverted;
* tree words: ``(i, label, j)`` tokens as produced by ``graph.trans``.

Every compiled automaton starts at the & and scans back to a nondeterministically chosen
start; every final state then runs forward off the end of the word.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

from .a2fa import A2fa
from .graph import E_MARK, END, LEAF, S_MARK, START
from .oneway import EPS, Nfa, NfaBuilder
from .syntax import Alt, Atom, Concat, Epsilon, Nest, Nre, Star, Symbol, labels


def symbols_for(base_labels: Iterable[str]) -> list:
    """Every label in both directions."""
    out = []
    for a in sorted(base_labels):
        out += [Symbol(a), Symbol(a, True)]
    return out


def gamma(k: int, symbols: Iterable, markers: bool = False) -> frozenset:
    """Well-formed tree tokens: edges go to the same or a higher class; leaves and markers stay."""
    symbols = list(symbols)
    toks = {(i, s, j) for i in range(1, k + 1) for j in range(i, k + 1) for s in symbols}
    toks |= {(c, LEAF, c) for c in range(1, k + 1)}
    if markers:
        toks |= {(c, m, c) for c in range(1, k + 1) for m in (S_MARK, E_MARK)}
    return frozenset(toks)


@dataclass(frozen=True)
class MarkedA2fa:
    automaton: A2fa  # wrapped: scan back from &, finals run to the end
    core: A2fa  # the inductive construction itself, initial q0 and the marked state

    @property
    def marked(self) -> str:
        return self.core.marked


class _Builder:
    def __init__(self):
        self.names = set()
        self.delta = defaultdict(set)
        self.universal = set()

    def fresh(self, role: str) -> str:
        name, i = role, 1
        while name in self.names:
            name, i = f"{role}_{i}", i + 1
        self.names.add(name)
        return name

    def add(self, q: str, token, p: str, move: int = 0) -> None:
        self.delta[q, token].add((p, move))

    def embed(self, nfa: Nfa, role: str) -> tuple[list, list]:
        """Copy a one-way automaton in with fresh names; returns (initial states, final states)."""
        names = {s: self.fresh(f"{role}.{s}") for s in sorted(nfa.states)}
        for (s, t), targets in nfa.delta.items():
            for r in targets:
                self.add(names[s], t, names[r], 1)
        for s, targets in nfa.eps.items():
            for r in targets:
                self.add(names[s], EPS, names[r])
        return [names[s] for s in sorted(nfa.initial)], [names[s] for s in sorted(nfa.finals)]

    def embed_twoway(self, a: A2fa, role: str) -> dict:
        names = {s: self.fresh(f"{role}.{s}") for s in sorted(a.states)}
        for (s, t), targets in a.delta.items():
            for r, m in targets:
                self.add(names[s], t, names[r], m)
        self.universal |= {names[s] for s in a.universal}
        return names


@dataclass
class _Frag:
    initial: str
    finals: set
    marked: str


class _Compiler:
    """Shared inductive cases; subclasses supply the atoms and the token sets."""

    def __init__(self, alphabet: frozenset):
        self.alphabet = alphabet
        self.b = _Builder()

    def every(self):
        """Tokens a state may sit on inside the word (the % is never a node)."""
        return sorted(self.alphabet | {END}, key=str)

    def atom(self, s: Symbol) -> _Frag:
        raise NotImplementedError

    def build(self, e: Nre) -> _Frag:
        b = self.b
        if isinstance(e, Atom):
            return self.atom(e.symbol)
        if isinstance(e, Epsilon):
            q0, qf = b.fresh("q0"), b.fresh("qf")
            b.add(q0, EPS, qf)
            return _Frag(q0, {qf}, qf)
        q0 = b.fresh("q0")
        if isinstance(e, Alt):
            f1, f2 = self.build(e.left), self.build(e.right)
            qf = b.fresh("qf")
            b.add(q0, EPS, f1.initial)
            b.add(q0, EPS, f2.initial)
            b.add(f1.marked, EPS, qf)
            b.add(f2.marked, EPS, qf)
            return _Frag(q0, {qf} | (f1.finals - {f1.marked}) | (f2.finals - {f2.marked}), qf)
        if isinstance(e, Concat):
            f1, f2 = self.build(e.left), self.build(e.right)
            qf = b.fresh("qf")
            b.add(q0, EPS, f1.initial)
            b.add(f1.marked, EPS, f2.initial)
            b.add(f2.marked, EPS, qf)
            return _Frag(q0, {qf} | (f1.finals - {f1.marked}) | (f2.finals - {f2.marked}), qf)
        if isinstance(e, Star):
            f1 = self.build(e.inner)
            qf = b.fresh("qf")
            b.add(q0, EPS, f1.initial)
            b.add(f1.initial, EPS, qf)
            b.add(f1.marked, EPS, qf)
            b.add(f1.marked, EPS, f1.initial)
            return _Frag(q0, {qf} | (f1.finals - {f1.marked}), qf)
        if isinstance(e, Nest):
            f1 = self.build(e.inner)
            p, qf = b.fresh("p"), b.fresh("qf")
            b.universal.add(p)
            b.add(q0, EPS, p)
            b.add(p, EPS, qf)
            b.add(p, EPS, f1.initial)
            # the check branch succeeds by running off the end
            for t in self.every():
                b.add(f1.marked, t, f1.marked, 1)
            return _Frag(q0, {qf} | f1.finals, qf)
        raise TypeError(f"not an NRE: {e!r}")

    def compile(self, e: Nre) -> MarkedA2fa:
        b = self.b
        start = b.fresh("q0'")
        frag = self.build(e)
        core = A2fa(b.names - {start}, frag.initial, frag.finals, self.alphabet, dict(b.delta), b.universal, frag.marked)
        delta = defaultdict(set, {k: set(v) for k, v in b.delta.items()})
        for t in self.every():
            delta[start, t] |= {(frag.initial, 0), (start, -1)}
            for q in frag.finals:
                delta[q, t].add((q, 1))
        wrapped = A2fa(b.names, start, frag.finals, self.alphabet, delta, b.universal, frag.marked)
        return MarkedA2fa(wrapped, core)


class _SemipathCompiler(_Compiler):
    def atom(self, s: Symbol) -> _Frag:
        b = self.b
        q0, qf, qr = b.fresh("q0"), b.fresh("qf"), b.fresh("qr")
        b.add(q0, s, qf, 1)
        # the edge may also lie behind us, read in the opposite direction
        for t in self.every():
            b.add(q0, t, qr, -1)
        b.add(qr, s.inv(), qf, 0)
        return _Frag(q0, {qf}, qf)


def compile_sp(e: Nre, alphabet: Optional[Iterable] = None) -> MarkedA2fa:
    """Automaton over semipath words; ``alphabet`` defaults to the labels of ``e`` both ways."""
    alphabet = frozenset(alphabet) if alphabet is not None else frozenset(symbols_for(labels(e)))
    return _SemipathCompiler(alphabet).compile(e)


# -- tree words ------------------------------------------------------------------


def _check_range(*idx, k):
    if k < 1 or not all(1 <= i <= k for i in idx) or list(idx) != sorted(idx):
        raise ValueError(f"need 1 <= {' <= '.join(map(str, idx))} <= k = {k}")


def _inner_tokens(j: int, k: int, symbols, literal: bool) -> list:
    toks = [(l, s, l2) for l in range(j, k + 1) for l2 in range(l, k + 1) for s in symbols]
    if not literal:
        # nested side branches end in their own leaf tokens
        toks += [(l, LEAF, l) for l in range(j + 1, k + 1)]
    return toks


def build_Lij(i: int, j: int, k: int, symbols: Iterable, literal: bool = False) -> Nfa:
    """One complete branch hanging off a class-i node into class j: edge, interior, closing leaf."""
    _check_range(i, j, k=k)
    symbols = list(symbols)
    b = NfaBuilder(gamma(k, symbols))
    q0, q1, qf = b.new(), b.new(), b.new()
    for s in symbols:
        b.add(q0, (i, s, j), q1)
    for t in _inner_tokens(j, k, symbols, literal):
        b.add(q1, t, q1)
    b.add(q1, (j, LEAF, j), qf)
    return b.build([q0], [qf])


def build_Bi(i: int, k: int, symbols: Iterable, literal: bool = False) -> Nfa:
    """Any run of complete side branches of a class-i node (classes above i)."""
    _check_range(i, k=k)
    symbols = list(symbols)
    b = NfaBuilder(gamma(k, symbols))
    hub = b.new()
    for j in range(i + 1, k + 1):
        part = build_Lij(i, j, k, symbols, literal)
        ids = {s: b.new() for s in sorted(part.states)}
        for (s, t), targets in part.delta.items():
            for r in targets:
                b.add(ids[s], t, ids[r])
        for s in part.initial:
            b.add(hub, EPS, ids[s])
        for s in part.finals:
            b.add(ids[s], EPS, hub)
    return b.build([hub], [hub])


def build_Bj_minus(j: int, k: int, symbols: Iterable) -> A2fa:
    """Backward scanner: from an edge token, step over one complete class-j branch to its first token."""
    _check_range(j, k=k)
    symbols = list(symbols)
    tokens = gamma(k, symbols)
    delta = defaultdict(set)
    for t in tokens:
        delta["q0", t].add(("q1", -1))
    delta["q1", (j, LEAF, j)].add(("q2", -1))
    for l in range(j, k + 1):
        for l2 in range(l, k + 1):
            for s in symbols:
                delta["q2", (l, s, l2)].add(("q2", -1))
        delta["q2", (l, LEAF, l)].add(("q2", -1))
    for i in range(1, j):
        for s in symbols:
            delta["q2", (i, s, j)].add(("qf", 0))
    return A2fa({"q0", "q1", "q2", "qf"}, "q0", {"qf"}, tokens, delta)


class _TreeCompiler(_Compiler):
    def __init__(self, k: int, symbols: list, literal: bool):
        self.k = k
        self.symbols = symbols
        self.literal = literal
        super().__init__(gamma(k, symbols))

    def every(self):
        return sorted(self.alphabet | {END}, key=str)

    def atom(self, s: Symbol) -> _Frag:
        b, k = self.b, self.k
        q0, qf, qr1, qr2 = b.fresh("q0"), b.fresh("qf"), b.fresh("qr1"), b.fresh("qr2")
        for i in range(1, k + 1):
            for j in range(i, k + 1):
                b.add(q0, (i, s, j), qf, 1)
                b.add(qr1, (i, s.inv(), j), qr2, 0)
        for t in self.alphabet:
            b.add(q0, t, qr1, -1)
        b.add(qr2, EPS, qf)
        for i in range(1, k):
            # skip earlier side branches before taking the edge
            starts, ends = b.embed(build_Bi(i, k, self.symbols, self.literal), f"B{i}")
            for p in starts:
                b.add(q0, EPS, p)
            for p in ends:
                b.add(p, EPS, q0)
        for j in range(2, k + 1):
            # walk back over earlier sibling branches to the parent's first token
            names = b.embed_twoway(build_Bj_minus(j, k, self.symbols), f"B{j}-")
            b.add(qr2, EPS, names["q0"])
            b.add(names["qf"], EPS, qr2)
        return _Frag(q0, {qf}, qf)


def compile_gen(e: Nre, k: int, symbols: Optional[Iterable] = None, literal: bool = False) -> MarkedA2fa:
    """Automaton over k-branch tree words."""
    if k < 1:
        raise ValueError("k must be at least 1")
    symbols = sorted(symbols) if symbols is not None else symbols_for(labels(e))
    return _TreeCompiler(k, symbols, literal).compile(e)


# -- endpoint markers -------------------------------------------------------------


def mark_se(m: MarkedA2fa, s_tokens: Optional[Iterable] = None, e_tokens: Optional[Iterable] = None) -> A2fa:
    """Automaton accepting the word with S before the first node and E before the second.

    Markers are invisible to the core construction: every head move that lands on a
    marker keeps going in the same direction.  Defaults to the semipath markers; pass
    the ``(c, S, c)`` / ``(c, E, c)`` tokens for tree words.
    """
    core = m.core
    s_tokens = frozenset(s_tokens if s_tokens is not None else {S_MARK})
    e_tokens = frozenset(e_tokens if e_tokens is not None else {E_MARK})
    markers = s_tokens | e_tokens
    real = core.alphabet | {START, END}
    alphabet = core.alphabet | markers
    everything = alphabet | {START, END}
    names = set(core.states)

    def fresh(base):
        name, i = base, 1
        while name in names:
            name, i = f"{base}_{i}", i + 1
        names.add(name)
        return name

    delta = defaultdict(set)
    skips = {}

    def skip(r, d):
        if (r, d) not in skips:
            skips[r, d] = fresh(f"{r}{'>>' if d > 0 else '<<'}")
        return skips[r, d]

    for (q, t), targets in core.delta.items():
        for r, d in targets:
            delta[q, t].add((r, 0) if d == 0 else (skip(r, d), d))
    start, check, done = fresh("q0S"), fresh("qmE"), fresh("qfE")
    for t in everything - s_tokens:
        delta[start, t].add((start, -1))
    for t in s_tokens:
        delta[start, t].add((skip(core.initial, 1), 1))
    for (r, d), name in skips.items():
        for t in markers:
            delta[name, t].add((name, d))
        for t in real:
            delta[name, t].add((r, 0))
    for t in real - {START}:
        delta[core.marked, t].add((check, -1))
    for t in e_tokens:
        delta[check, t].add((done, 1))
    for t in s_tokens:
        delta[check, t].add((check, -1))
    finals = (core.finals - {core.marked}) | {done}
    for q in finals:
        for t in everything:
            delta[q, t].add((q, 1))
    return A2fa(names, start, finals, alphabet, delta, core.universal, None)


def mark_gen(m: MarkedA2fa, k: int) -> A2fa:
    return mark_se(m, {(c, S_MARK, c) for c in range(1, k + 1)}, {(c, E_MARK, c) for c in range(1, k + 1)})


# -- shape automata and the tree-encoding validator ------------------------------


def shape_automaton(alphabet: Iterable, s_token=S_MARK, e_token=E_MARK) -> Nfa:
    """w1 S w2 E w3 over a marker-free alphabet."""
    plain = frozenset(alphabet) - {s_token, e_token}
    b = NfaBuilder(plain | {s_token, e_token})
    q = [b.new() for _ in range(3)]
    for t in plain:
        for s in q:
            b.add(s, t, s)
    b.add(q[0], s_token, q[1])
    b.add(q[1], e_token, q[2])
    return b.build([q[0]], [q[2]])


def tree_shape_automaton(k: int, symbols: Iterable) -> Nfa:
    """Exactly one S token and one E token, in either order, each opening a node's encoding.

    A marker opens a node's encoding exactly when it is the first token or follows a
    non-leaf token; together with the validator this makes the marker the sole child.
    """
    symbols = list(symbols)
    plain = gamma(k, symbols)
    s_toks = {(c, S_MARK, c) for c in range(1, k + 1)}
    e_toks = {(c, E_MARK, c) for c in range(1, k + 1)}
    b = NfaBuilder(plain | s_toks | e_toks)
    # state = (seen S, seen E, last token was a leaf)
    ids = {(s, e, leaf): b.new() for s in (0, 1) for e in (0, 1) for leaf in (0, 1)}
    for (s, e, leaf), q in ids.items():
        for t in plain:
            b.add(q, t, ids[s, e, int(t[1] == LEAF)])
        if not leaf:
            if not s:
                for t in s_toks:
                    b.add(q, t, ids[1, e, 0])
            if not e:
                for t in e_toks:
                    b.add(q, t, ids[s, 1, 0])
    return b.build([ids[0, 0, 0]], [ids[1, 1, 0], ids[1, 1, 1]])


def encoding_validator(k: int, symbols: Iterable, markers: bool = False) -> Nfa:
    """Words that encode a k-branch semipath with at least one edge.

    Built from the grammar  node(c) = (side(c) (c,x,c))* (c,$,c)  where side(c) is an
    optional child branch (c,x,l) node(l) for each class l > c in ascending order.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    edge_labels = list(symbols) + ([S_MARK, E_MARK] if markers else [])
    b = NfaBuilder(gamma(k, symbols, markers))

    def node(c: int, nonempty: bool = False) -> tuple[int, int]:
        """Fragment for node(c); returns (entry, exit)."""
        entry, loop, leaf_in, out = b.new(), b.new(), b.new(), b.new()
        b.add(entry, EPS, loop)
        cur = loop
        for l in range(c + 1, k + 1):
            nxt = b.new()
            b.add(cur, EPS, nxt)  # no class-l child
            child_in, child_out = node(l)
            for x in edge_labels:
                b.add(cur, (c, x, l), child_in)
            b.add(child_out, EPS, nxt)
            cur = nxt
        for x in edge_labels:
            b.add(cur, (c, x, c), leaf_in)
        b.add(leaf_in, EPS, loop)
        tail = leaf_in if nonempty else loop
        b.add(tail, (c, LEAF, c), out)
        return entry, out

    entry, out = node(1, nonempty=True)
    return b.build([entry], [out])
