"""State expressions.

Grammar (whitespace is ignored)::

    state  := term (('+' | '-') term)*
    term   := ['-'] [rational '*'] factor ('*' factor)*
    factor := 'e[' ints ']' | 'b(' name ',' int ')' | 'f(' name ',' int ')'
            | 'u(' sector ';' name ',' int ')' | 'vac'
    sector := ints | '[' ints ']'

``b``/``f`` atoms belong to the lattice side and ``u`` atoms to the
geometric side; ``e[...]`` and ``vac`` are shared. The sector label
``e[...]`` may appear anywhere in a term: states are always normalised to
``e^a`` times bosons times fermions, fermions in the order written.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ParseError",
    "Vac",
    "Sector",
    "Boson",
    "Fermion",
    "UAtom",
    "Term",
    "parse_state",
    "format_expr",
    "to_fock",
    "to_hclass",
    "format_fock",
    "format_hclass",
]


class ParseError(SyntaxError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}", ("<state>", line, col, text))
        self.line = line
        self.column = col


@dataclass(frozen=True)
class Vac:
    pass


@dataclass(frozen=True)
class Sector:
    coords: tuple


@dataclass(frozen=True)
class Boson:
    name: str
    depth: int


@dataclass(frozen=True)
class Fermion:
    name: str
    depth: int


@dataclass(frozen=True)
class UAtom:
    sector: tuple
    name: str
    depth: int


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self) -> int:
        self.ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        tok = self.text[start:self.pos]
        if tok in ("", "+", "-"):
            self.pos = start
            self.error("expected an integer")
        return int(tok)

    def rational(self):
        """A rational literal if one starts here, else None (position restored)."""
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            return None
        num = int(self.text[start:self.pos])
        den = 1
        if self.text.startswith("/", self.pos):
            self.pos += 1
            s2 = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == s2:
                self.error("expected a denominator")
            den = int(self.text[s2:self.pos])
            if den == 0:
                self.pos = s2
                self.error("zero denominator")
        return Fraction(num, den)

    def name(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_'"):
            self.pos += 1
        if self.pos == start:
            self.error("expected a name")
        return self.text[start:self.pos]

    def ints(self, close: str) -> tuple:
        out = []
        if self.peek(close):
            return ()
        out.append(self.integer())
        while self.peek(","):
            self.pos += 1
            out.append(self.integer())
        return tuple(out)

    def factor(self):
        if self.peek("vac"):
            self.pos += 3
            return Vac()
        if self.peek("e["):
            self.pos += 2
            coords = self.ints("]")
            self.expect("]")
            return Sector(coords)
        for tag, cls in (("b(", Boson), ("f(", Fermion)):
            if self.peek(tag):
                self.pos += 2
                nm = self.name()
                self.expect(",")
                self.ws()
                at = self.pos
                d = self.integer()
                if d < 1:
                    self.pos = at
                    self.error("mode depth must be >= 1")
                self.expect(")")
                return cls(nm, d)
        if self.peek("u("):
            self.pos += 2
            if self.peek("["):
                self.pos += 1
                sec = self.ints("]")
                self.expect("]")
            else:
                sec = self.ints(";")
            self.expect(";")
            nm = self.name()
            self.expect(",")
            self.ws()
            at = self.pos
            d = self.integer()
            if d < 1:
                self.pos = at
                self.error("class depth must be >= 1")
            self.expect(")")
            return UAtom(sec, nm, d)
        self.error("expected a factor (vac, e[...], b(...), f(...) or u(...))")

    def term(self, sign: int) -> Term:
        if self.peek("-"):
            self.pos += 1
            sign = -sign
        coeff = self.rational()
        factors = []
        if coeff is None:
            coeff = Fraction(1)
            factors.append(self.factor())
        else:
            self.expect("*")
            factors.append(self.factor())
        while self.peek("*"):
            self.pos += 1
            factors.append(self.factor())
        return Term(coeff * sign, tuple(factors))

    def state(self) -> tuple:
        terms = [self.term(1)]
        while True:
            if self.peek("+"):
                self.pos += 1
                terms.append(self.term(1))
            elif self.peek("-"):
                self.pos += 1
                terms.append(self.term(-1))
            else:
                break
        self.ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return tuple(terms)


def parse_state(text: str) -> tuple:
    """Parse into a tuple of :class:`Term`; raises :class:`ParseError`."""
    return _Parser(text).state()


def _fmt_q(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_factor(f) -> str:
    if isinstance(f, Vac):
        return "vac"
    if isinstance(f, Sector):
        return "e[" + ",".join(map(str, f.coords)) + "]"
    if isinstance(f, Boson):
        return f"b({f.name},{f.depth})"
    if isinstance(f, Fermion):
        return f"f({f.name},{f.depth})"
    return "u([" + ",".join(map(str, f.sector)) + f"];{f.name},{f.depth})"


def format_expr(terms) -> str:
    """Print an AST; ``parse_state(format_expr(t)) == t`` for parsed ASTs."""
    out = []
    for k, t in enumerate(terms):
        c = t.coeff
        body = "*".join(_fmt_factor(f) for f in t.factors)
        neg = c < 0
        mag = -c if neg else c
        piece = body if mag == 1 else f"{_fmt_q(mag)} * {body}"
        if k == 0:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out)


def _lookup(names, nm, kind):
    try:
        return list(names).index(nm)
    except ValueError:
        raise KeyError(f"unknown {kind} name {nm!r}; known: {list(names)}") from None


def _sector(group, coords):
    if len(coords) == 0:
        return group.zero()
    if len(coords) == 1 and coords[0] == 0:
        return group.zero()
    return group.canon(coords)


def to_fock(terms, space):
    """Evaluate an AST of lattice atoms in a :class:`FockSpace`."""
    from .fock import FockState

    L = space.L
    out = FockState()
    for t in terms:
        sector = L.bplus.zero()
        bos, fer = [], []
        for f in t.factors:
            if isinstance(f, Sector):
                sector = L.bplus.add(sector, _sector(L.bplus, f.coords))
            elif isinstance(f, Boson):
                bos.append((_lookup(L.even_names, f.name, "even"), f.depth))
            elif isinstance(f, Fermion):
                fer.append((_lookup(L.odd_names, f.name, "odd"), f.depth))
            elif isinstance(f, UAtom):
                raise ValueError("u(...) atoms belong to geometric expressions")
        out = out + FockState.monomial(sector, bos, fer, t.coeff)
    return out


def to_hclass(terms, hs):
    """Evaluate an AST of geometric atoms in a :class:`HomologySpace`."""
    names = [c.name for c in hs.M.kbasis]
    out = None
    for t in terms:
        cur = hs.unit() * t.coeff
        for f in t.factors:
            if isinstance(f, Sector):
                cur = hs.phi_push(cur, hs.unit(_sector(hs.B, f.coords)))
            elif isinstance(f, UAtom):
                q = _lookup(names, f.name, "K-basis")
                cur = hs.phi_push(cur, hs.u(_sector(hs.B, f.sector), [(q, f.depth)]))
            elif isinstance(f, (Boson, Fermion)):
                raise ValueError("b(...)/f(...) atoms belong to lattice expressions")
        out = cur if out is None else out + cur
    return out


def format_fock(s, L) -> str:
    """Canonical expression for a Fock state (``"0"`` for the zero state)."""
    if not s:
        return "0"
    terms = []
    for (sec, b, f), c in sorted(s.items()):
        fac = []
        if any(sec):
            fac.append(Sector(tuple(sec)))
        for v, i, n in b:
            fac += [Boson(L.even_names[v], i)] * n
        fac += [Fermion(L.odd_names[w], j) for w, j in f]
        if not fac:
            fac = [Vac()]
        terms.append(Term(Fraction(c), tuple(fac)))
    return format_expr(terms)


def format_hclass(eta, hs) -> str:
    if not eta:
        return "0"
    names = [c.name for c in hs.M.kbasis]
    terms = []
    for (sec, m), c in sorted(eta.items()):
        fac = []
        if any(sec):
            fac.append(Sector(tuple(sec)))
        for q, i, n in m:
            fac += [UAtom(tuple(0 for _ in sec), names[q], i)] * n
        if not fac:
            fac = [Vac()]
        terms.append(Term(Fraction(c), tuple(fac)))
    return format_expr(terms)
