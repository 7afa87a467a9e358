import pytest

from nre.syntax import Symbol

A, A_INV, B, B_INV = Symbol("a"), Symbol("a", True), Symbol("b"), Symbol("b", True)
AB = [A, A_INV, B, B_INV]


def place(word, i, j):
    """S before node i and E before node j of a semipath word (S first when i == j)."""
    out = []
    for p, t in enumerate([*word, None], 1):
        if p == i:
            out.append("S")
        if p == j:
            out.append("E")
        if t is not None:
            out.append(t)
    return out


@pytest.fixture
def ab():
    return list(AB)


def words(tokens, max_len):
    out = [[]]
    layer = [[]]
    for _ in range(max_len):
        layer = [w + [t] for w in layer for t in tokens]
        out += layer
    return out


def one_label(e):
    """The same expression with every label renamed to ``a`` (a 2-token alphabet: a, a^-)."""
    from nre.syntax import Alt, Atom, Concat, Epsilon, Nest, Star
    if isinstance(e, Epsilon):
        return e
    if isinstance(e, Atom):
        return Atom(Symbol("a", e.symbol.inverse))
    if isinstance(e, (Concat, Alt)):
        return type(e)(one_label(e.left), one_label(e.right))
    if isinstance(e, Star):
        return Star(one_label(e.inner))
    return Nest(one_label(e.inner))


def corpus_expressions():
    from nre.corpus import GENERAL_PAIRS, SEMIPATH_PAIRS, expressions
    return expressions(SEMIPATH_PAIRS + GENERAL_PAIRS)


def two_token_automata():
    """Distinct compiled automata of the corpus, folded onto the alphabet {a, a^-}."""
    from nre.translate import compile_sp
    seen, out = set(), []
    for e in corpus_expressions():
        f = one_label(e)
        if f not in seen:
            seen.add(f)
            out.append((f, compile_sp(f, [A, A_INV]).automaton))
    return out


# -- acceptance report ------------------------------------------------------------

ACCEPTANCE = {}


class criterion:
    """Context manager recording PASS/FAIL for one acceptance criterion."""

    def __init__(self, name, title):
        self.name, self.title = name, title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if kind is None:
            ACCEPTANCE[self.name] = ("PASS", self.title, self.detail)
        else:
            ACCEPTANCE[self.name] = ("FAIL", self.title, f"{kind.__name__}: {exc}".splitlines()[0][:200])
        return False


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{name} {status}  {title}" + (f"  ({detail})" if detail else ""))
