"""Fixed test corpora, a seeded random expression generator and the bibliographic example graph."""

from __future__ import annotations

import random
from typing import Optional

from .graph import GraphDb
from .syntax import Alt, Atom, Concat, Epsilon, Nest, Nre, Star, Symbol, nesting_depth, parse, size

# (lhs, rhs) over labels {a, b}; sizes <= 8, nesting depth <= 2
SEMIPATH_PAIRS = [
    ("a", "a | b"),
    ("a | b", "a"),
    ("[a] . b", "b"),
    ("b", "[a] . b"),
    ("a . b", "a . b | b"),
    ("a*", "(a | b)*"),
    ("(a | b)*", "a*"),
    ("a . a", "a*"),
    ("a*", "a . a*"),
    ("a . a*", "a*"),
    ("[a]", "eps"),
    ("eps", "[a]"),
    ("[a . b]", "[a]"),
    ("[a]", "[a . b]"),
    ("(a . [b])*", "a*"),
    ("a^-", "a"),
    ("a . a^-", "eps"),
    ("a . a^-", "[a]"),
    ("[a] . [b]", "[b] . [a]"),
    ("a . [b]", "[a^-] . a"),
    ("[a^-] . a", "a . [b]"),
    ("(a . b)*", "(a | b)*"),
    ("(a . a)*", "a*"),
    ("a*", "(a . a)*"),
    ("[a*]", "eps"),
    ("[a | b]", "[a] | [b]"),
    ("[a] | [b]", "[a | b]"),
    ("a*", "(a . [b])*"),
    ("[a] . a", "a . [a^-]"),
    ("a . [a^-]", "[a] . a"),
    ("b^- . a", "(a | b^-)*"),
    ("[a]*", "eps"),
    ("[b . a]", "[b]"),
    ("a . b^-", "[a] . a . b^-"),
    ("a . b . a^-", "a . (b | b^-) . a^-"),
]

# pairs for the general procedure; nesting depth <= 2
GENERAL_PAIRS = [
    ("a", "a | b"),
    ("a | b", "a"),
    ("[a] . b", "b"),
    ("b", "[a] . b"),
    ("[a . b]", "[a]"),
    ("[a]", "[a . b]"),
    ("[a] . [b]", "[b] . [a]"),
    ("[a]", "eps"),
    ("eps", "[a]"),
    ("(a . [b])*", "a*"),
    ("[a] . [a^-]", "[a . a^-]"),
    ("[a . a^-]", "[a] . [a^-]"),
    ("[a] . b", "[a^-] . b"),
    ("a . [b]", "a"),
    ("[a | b]", "[a] | [b]"),
    ("[a] . [b]", "[a . b]"),
    ("a . a^-", "[a]"),
    ("[a] . [b] . [a^-]", "b | [b]"),
]

# nesting depth 3; slower, kept out of the acceptance corpora
DEEP_PAIRS = [
    ("[a . [b]]", "[a]"),
    ("[a . [b]]", "[a . b]"),
    ("[[a] . b]", "[b]"),
    ("[a . [b^-]]", "[a . b]"),
]


def semipath_pairs() -> list:
    return [(parse(x), parse(y)) for x, y in SEMIPATH_PAIRS]


def general_pairs() -> list:
    return [(parse(x), parse(y)) for x, y in GENERAL_PAIRS]


def expressions(pairs=None) -> list:
    """Distinct expressions of a pair list, first occurrence order."""
    out = []
    for x, y in pairs if pairs is not None else SEMIPATH_PAIRS + GENERAL_PAIRS:
        for s in (x, y):
            e = parse(s)
            if e not in out:
                out.append(e)
    return out


def random_nre(rng: random.Random, max_size: int = 8, labels=("a", "b"), max_depth: Optional[int] = 2,
               inverses: bool = True) -> Nre:
    """A random expression with at most ``max_size`` AST nodes."""

    def gen(budget: int) -> Nre:
        if budget <= 1:
            if rng.random() < 0.1:
                return Epsilon()
            return Atom(Symbol(rng.choice(labels), inverses and rng.random() < 0.3))
        op = rng.choice(["atom", "concat", "alt", "star", "nest"])
        if op == "atom":
            return gen(1)
        if op in ("star", "nest"):
            inner = gen(budget - 1)
            return Star(inner) if op == "star" else Nest(inner)
        left = rng.randint(1, budget - 2) if budget > 2 else 1
        right = max(1, budget - 1 - left)
        node = Concat if op == "concat" else Alt
        return node(gen(left), gen(right))

    while True:
        e = gen(rng.randint(1, max_size))
        if size(e) <= max_size and (max_depth is None or nesting_depth(e) <= max_depth):
            return e


# -- a small bibliographic database ------------------------------------------------

BIBLIO_EDGES = [
    ("paper1", "creator", ":John_E._Hopkroft"),
    ("paper1", "creator", ":Moshe_Y._Vardi"),
    ("paper1", "partOf", "proc1"),
    ("proc1", "series", "conf:focs"),
    ("journal1", "creator", ":Moshe_Y._Vardi"),
    ("journal1", "creator", ":Pierre_Wolper"),
    ("paper2", "creator", ":Jeffrey_D._Ullman"),
    ("paper2", "partOf", "proc2"),
    ("proc2", "series", "conf:focs"),
    ("paper3", "creator", ":Ronald_Fagin"),
    ("paper3", "partOf", "proc3"),
    ("proc3", "series", "conf:pods"),
]

# author -> conference series of one of their papers
BIBLIO_VENUE = "creator^- . partOf . series"
# coauthorship chains
BIBLIO_COAUTHOR = "(creator^- . creator)+"
# coauthorship chains through conference papers only
BIBLIO_CONF_COAUTHOR = "(creator^- . [partOf . series] . creator)+"

# (query, source, target, expected membership)
BIBLIO_CLAIMS = [
    (BIBLIO_VENUE, ":Jeffrey_D._Ullman", "conf:focs", True),
    (BIBLIO_VENUE, ":Ronald_Fagin", "conf:pods", True),
    (BIBLIO_COAUTHOR, ":John_E._Hopkroft", ":Pierre_Wolper", True),
    (BIBLIO_CONF_COAUTHOR, ":John_E._Hopkroft", ":Moshe_Y._Vardi", True),
    (BIBLIO_CONF_COAUTHOR, ":John_E._Hopkroft", ":Pierre_Wolper", False),
]


def biblio_graph() -> GraphDb:
    """Three conference papers and one journal article with their authors and venues."""
    return GraphDb.from_edges(BIBLIO_EDGES)
