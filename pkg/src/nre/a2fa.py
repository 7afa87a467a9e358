"""Alternating two-way finite automata over %-and-&-delimited words.

Positions are 1-based over ``% w &``: the % sits at 1, the & at ``len(w) + 2``.
Runs start at the & and accept by stepping one past it in a final state.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence

from .graph import END, START, render_token
from .oneway import EPS, BudgetExceeded, Nfa, explore, shortest_word, token_key

MOVES = (-1, 0, 1)
FALSE = frozenset()
TRUE = frozenset({0})  # one empty conjunction


@dataclass(frozen=True, eq=False)
class A2fa:
    states: frozenset
    initial: str
    finals: frozenset
    alphabet: frozenset  # tokens other than % and &
    delta: Mapping = field(default_factory=dict)  # (state, token or EPS) -> frozenset of (state, move)
    universal: frozenset = frozenset()
    marked: Optional[str] = None

    def __post_init__(self):
        for name in ("states", "finals", "alphabet", "universal"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "delta", {k: frozenset(v) for k, v in self.delta.items() if v})
        if self.initial not in self.states or not self.finals <= self.states or not self.universal <= self.states:
            raise ValueError("initial, final and universal states must be states")
        if self.marked is not None and self.marked not in self.states:
            raise ValueError("marked state must be a state")
        tokens = self.tokens
        for (q, t), targets in self.delta.items():
            if q not in self.states or (t is not EPS and t not in tokens):
                raise ValueError(f"transition on unknown state or token: {q!r}, {t!r}")
            for p, m in targets:
                if p not in self.states or m not in MOVES:
                    raise ValueError(f"bad target {(p, m)!r} from {q!r}")
                if t is EPS and m != 0:
                    raise ValueError("epsilon transitions cannot move the head")

    @property
    def tokens(self) -> frozenset:
        return self.alphabet | {START, END}

    @property
    def has_epsilon(self) -> bool:
        return any(t is EPS for _, t in self.delta)

    def successors(self, q, token) -> frozenset:
        return self.delta.get((q, token), FALSE) | self.delta.get((q, EPS), FALSE)

    # -- export ---------------------------------------------------------------

    def to_json(self) -> str:
        def tok(t):
            return "eps" if t is EPS else render_token(t)

        moves = sorted(
            ([q, tok(t), p, m] for (q, t), ts in self.delta.items() for p, m in ts),
            key=lambda r: (r[0], r[1], r[2], r[3]),
        )
        return json.dumps({
            "states": sorted(self.states),
            "initial": self.initial,
            "universal": sorted(self.universal),
            "finals": sorted(self.finals),
            "marked": self.marked,
            "alphabet": sorted(render_token(t) for t in self.alphabet),
            "delta": moves,
        }, indent=1)

    def to_dot(self) -> str:
        lines = ["digraph a2fa {", "  rankdir=LR;", '  start [shape=point];']
        for q in sorted(self.states):
            shape = "doublecircle" if q in self.universal else "circle"
            extra = ", style=bold, color=blue" if q in self.finals else ""
            lines.append(f'  "{q}" [shape={shape}{extra}];')
        lines.append(f'  start -> "{self.initial}";')
        grouped = defaultdict(list)
        for (q, t), ts in self.delta.items():
            for p, m in ts:
                grouped[q, p].append(("eps" if t is EPS else render_token(t)) + f"/{m:+d}")
        for (q, p), labs in sorted(grouped.items()):
            lines.append(f'  "{q}" -> "{p}" [label="{", ".join(sorted(labs))}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


class Config(NamedTuple):
    state: str
    word: tuple  # the delimited word, % ... &
    position: int


def delimit(word: Sequence) -> tuple:
    return (START, *word, END)


def step(a: A2fa, c: Config) -> set:
    n = len(c.word)
    if not 1 <= c.position <= n:
        return set()
    out = set()
    for p, m in a.successors(c.state, c.word[c.position - 1]):
        if m == -1 and c.position == 1:
            continue
        out.add(Config(p, c.word, c.position + m))
    return out


# -- membership as an alternating reachability game ---------------------------


EdgeFilter = Callable[[tuple, tuple], bool]


def _game(a: A2fa, word: Sequence, allow: Optional[EdgeFilter] = None) -> tuple[dict, tuple, dict]:
    """Rank of every winning config (least-fixpoint stage) plus the successor map."""
    w = delimit(word)
    n = len(w)
    root = (a.initial, n)
    succ = {}
    blocked = set()  # universal configs with a vetoed obligation
    work = [root]
    succ[root] = None
    while work:
        q, i = work.pop()
        out = []
        if i <= n:
            for p, m in a.successors(q, w[i - 1]):
                if m == -1 and i == 1:
                    continue
                c = (p, i + m)
                if allow is not None and not allow((q, i), c):
                    if q in a.universal:
                        blocked.add((q, i))
                    continue
                out.append(c)
        out = sorted(set(out))
        succ[q, i] = out
        for c in out:
            if c not in succ:
                succ[c] = None
                work.append(c)
    preds = defaultdict(list)
    for c, out in succ.items():
        for d in out:
            preds[d].append(c)
    missing = {c: len(out) for c, out in succ.items()}
    rank = {}
    frontier = [c for c in succ if c[1] == n + 1 and c[0] in a.finals]
    stage = 0
    for c in frontier:
        rank[c] = stage
    while frontier:
        stage += 1
        nxt = []
        for d in frontier:
            for c in preds[d]:
                if c in rank or c in blocked:
                    continue
                if c[0] in a.universal:
                    missing[c] -= 1
                    if missing[c] == 0:
                        rank[c] = stage
                        nxt.append(c)
                else:
                    rank[c] = stage
                    nxt.append(c)
        frontier = nxt
    return rank, root, succ


def accepts(a: A2fa, word: Sequence, allow: Optional[EdgeFilter] = None) -> bool:
    """Does an accepting computation tree exist?  ``allow`` can veto individual moves."""
    rank, root, _ = _game(a, word, allow)
    return root in rank


@dataclass(frozen=True)
class ComputationTree:
    config: Config
    children: tuple = ()

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def leaves(self):
        return [t for t in self.nodes() if not t.children]


def accepting_tree(a: A2fa, word: Sequence, node_budget: int = 100_000) -> Optional[ComputationTree]:
    """An accepting computation tree, or None.  Raises BudgetExceeded when the tree grows too large."""
    rank, root, succ = _game(a, word)
    if root not in rank:
        return None
    w = delimit(word)
    n = len(w)
    count = 0

    def build(c) -> ComputationTree:
        nonlocal count
        count += 1
        if count > node_budget:
            raise BudgetExceeded(f"computation tree exceeds {node_budget} nodes")
        q, i = c
        if i == n + 1 and q in a.finals:
            return ComputationTree(Config(q, w, i))
        if q in a.universal:
            kids = tuple(build(d) for d in succ[c])
        else:
            best = min((d for d in succ[c] if d in rank), key=lambda d: (rank[d], d))
            kids = (build(best),)
        return ComputationTree(Config(q, w, i), kids)

    return build(root)


def check_tree(a: A2fa, tree: ComputationTree) -> bool:
    """Structural validation: root, child rules, accepting leaves."""
    root = tree.config
    if root.state != a.initial or root.position != len(root.word):
        return False
    for node in tree.nodes():
        c = node.config
        kids = {k.config for k in node.children}
        if not node.children:
            if not (c.position == len(c.word) + 1 and c.state in a.finals):
                return False
            continue
        if c.state in a.universal:
            if kids != step(a, c) or len(kids) != len(node.children):
                return False
        elif len(node.children) != 1 or not kids <= step(a, c):
            return False
    return True


# -- epsilon elimination -------------------------------------------------------


def eliminate_epsilon(a: A2fa) -> A2fa:
    """Replace every stay-put epsilon move by a detour through a fresh state.

    Away from the & the detour steps right then back left; on the & (which has no right
    neighbour inside the word) it steps left then right.
    """
    if not a.has_epsilon:
        return a
    names = set(a.states)

    def fresh(base: str) -> str:
        name, i = base, 1
        while name in names:
            name, i = f"{base}_{i}", i + 1
        names.add(name)
        return name

    delta = defaultdict(set)
    for (q, t), targets in a.delta.items():
        if t is not EPS:
            delta[q, t] |= targets
    detour = {}
    for q in sorted(a.states):
        for p, _ in sorted(a.delta.get((q, EPS), ())):
            if p not in detour:
                fwd, back = fresh(f"{p}>"), fresh(f"{p}<")
                detour[p] = (fwd, back)
                for t in a.tokens:
                    delta[fwd, t].add((p, -1))
                    delta[back, t].add((p, 1))
            fwd, back = detour[p]
            for t in a.tokens:
                delta[q, t].add((back, -1) if t == END else (fwd, 1))
    extra = {s for pair in detour.values() for s in pair}
    return A2fa(a.states | extra, a.initial, a.finals, a.alphabet, delta, a.universal, a.marked)


def trim(a: A2fa) -> A2fa:
    """Drop states unreachable from the initial state."""
    seen = {a.initial}
    work = [a.initial]
    out = defaultdict(set)
    for (q, _), ts in a.delta.items():
        out[q] |= {p for p, _ in ts}
    while work:
        for p in out[work.pop()]:
            if p not in seen:
                seen.add(p)
                work.append(p)
    delta = {(q, t): ts for (q, t), ts in a.delta.items() if q in seen}
    marked = a.marked if a.marked in seen else None
    return A2fa(frozenset(seen), a.initial, a.finals & seen, a.alphabet, delta, a.universal & seen, marked)


# -- two-way elimination by boundary summaries ----------------------------------


def _minimize(terms: Iterable[int]) -> frozenset:
    """Keep only inclusion-minimal conjunctions (bitmasks)."""
    out = []
    for m in sorted(set(terms), key=lambda x: (bin(x).count("1"), x)):
        if not any(k & m == k for k in out):
            out.append(m)
    return frozenset(out)


def _and(x: frozenset, y: frozenset) -> frozenset:
    if not x or not y:
        return FALSE
    return _minimize(a | b for a in x for b in y)


class SummaryDfa:
    """Deterministic one-way view of an A2FA, read left to right over the inner word.

    The state after a prefix maps every state that can be entered from the right by a
    backward move to the least monotone formula (a DNF over bitmasks of exit states)
    describing when that entry wins, in terms of which forward exits win.
    """

    def __init__(self, a: A2fa):
        self.a = a
        self.alphabet = a.alphabet
        self.order = sorted(a.states)
        self.index = {q: i for i, q in enumerate(self.order)}
        back = set()
        self.succ = defaultdict(list)
        for q in self.order:
            for t in a.tokens:
                moves = sorted((self.index[p], m) for p, m in a.successors(q, t))
                if moves:
                    self.succ[self.index[q], t] = moves
                    back |= {p for p, m in moves if m == -1}
        self.back = sorted(back)
        self.slot = {p: i for i, p in enumerate(self.back)}
        self.universal = [q in a.universal for q in self.order]
        self.finals = [q in a.finals for q in self.order]
        self.initial = self._advance(None, START)
        self._memo = {}
        self._verdicts = {}

    def _advance(self, f: Optional[tuple], token) -> tuple:
        n = len(self.order)
        active = [q for q in range(n) if (q, token) in self.succ]
        moves = {q: [(p, m) for p, m in self.succ[q, token] if not (m == -1 and f is None)] for q in active}
        deps = defaultdict(set)
        for q, ms in moves.items():
            for p, m in ms:
                if m == 0:
                    deps[p].add(q)
                elif m == -1:
                    for conj in f[self.slot[p]]:
                        s = 0
                        while conj >> s:
                            if conj >> s & 1:
                                deps[s].add(q)
                            s += 1
        phi = [FALSE] * n

        def value(p, m):
            if m == 0:
                return phi[p]
            if m == 1:
                return frozenset({1 << p})
            out = []
            for conj in f[self.slot[p]]:
                acc = TRUE
                s = 0
                while conj >> s and acc:
                    if conj >> s & 1:
                        acc = _and(acc, phi[s])
                    s += 1
                out.extend(acc)
            return _minimize(out)

        work = deque(active)
        queued = set(active)
        while work:
            q = work.popleft()
            queued.discard(q)
            ms = moves[q]
            if not ms:
                new = FALSE
            elif self.universal[q]:
                new = TRUE
                for p, m in ms:
                    new = _and(new, value(p, m))
                    if not new:
                        break
            else:
                new = _minimize(x for p, m in ms for x in value(p, m))
            if new != phi[q]:
                phi[q] = new
                for r in deps[q]:
                    if r not in queued:
                        queued.add(r)
                        work.append(r)
        return tuple(phi[p] for p in self.back)

    def step(self, f: tuple, token) -> tuple:
        key = (f, token)
        out = self._memo.get(key)
        if out is None:
            out = self._memo[key] = self._advance(f, token)
        return out

    def accepting(self, f: tuple) -> bool:
        out = self._verdicts.get(f)
        if out is None:
            out = self._verdicts[f] = self._accepting(f)
        return out

    def _accepting(self, f: tuple) -> bool:
        n = len(self.order)
        val = [False] * n
        changed = True
        while changed:
            changed = False
            for q in range(n):
                if val[q]:
                    continue
                outs = []
                for p, m in self.succ.get((q, END), ()):
                    if m == 1:
                        outs.append(self.finals[p])
                    elif m == 0:
                        outs.append(val[p])
                    else:
                        outs.append(any(all(val[s] for s in range(n) if conj >> s & 1)
                                        for conj in f[self.slot[p]]))
                win = bool(outs) and (all(outs) if self.universal[q] else any(outs))
                if win:
                    val[q] = changed = True
        return val[self.index[self.a.initial]]

    def accepts(self, word: Sequence) -> bool:
        f = self.initial
        for t in word:
            f = self.step(f, t)
        return self.accepting(f)


def to_nfa(a: A2fa, budget: Optional[int] = None) -> Nfa:
    """Language-equal one-way automaton over the inner alphabet (deterministic and complete)."""
    return explore(SummaryDfa(a), a.alphabet, budget)


def is_empty(a: A2fa, strategy: str = "exact", max_len: int = 6, budget: Optional[int] = None) -> Optional[list]:
    """A shortest accepted inner word, or None.

    ``bounded`` only inspects words up to ``max_len`` through direct membership tests,
    so None from it means "nothing short", not "empty".
    """
    if strategy == "exact":
        return shortest_word(SummaryDfa(a), a.alphabet, budget)
    if strategy == "bounded":
        tokens = sorted(a.alphabet, key=token_key)
        layer = [[]]
        for length in range(max_len + 1):
            for w in layer:
                if accepts(a, w):
                    return w
            if length < max_len:
                layer = [w + [t] for w in layer for t in tokens]
        return None
    raise ValueError(f"unknown strategy {strategy!r}")
