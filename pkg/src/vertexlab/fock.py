"""The Fock space V_A of a super-lattice.

A basis monomial is a triple ``(sector, bosons, fermions)``:

* ``sector`` -- canonical element of B+ (the ``e^alpha`` label);
* ``bosons`` -- sorted tuple of ``(v, i, n)``: ``b_{-i}(v)^n`` with ``v`` an
  index into the free basis of A+;
* ``fermions`` -- strictly increasing tuple of ``(w, j)``: the product
  ``f_{-j}(w_1) f_{-j}(w_2) ...`` in that order, ``w`` indexing the free
  basis of A-.

States are dicts from monomials to nonzero rationals. The lattice factor
sits to the left of the fermionic factor, so odd operators acting on the
fermions pick up the parity of ``e^alpha``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .abelian import SuperLattice, apply_iota

__all__ = [
    "FockState",
    "FockSpace",
    "canon_fermions",
    "bos_mul",
    "bos_weight",
]


def canon_fermions(seq):
    """Sort a product of fermion creators; return ``(sign, tuple)`` or ``(0, None)``."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    # insertion sort, counting transpositions
    for k in range(1, len(seq)):
        j = k
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def _ferm_insert(ferm: tuple, f):
    """Left-multiply the sorted product ``ferm`` by the creator ``f``."""
    pos = 0
    for g in ferm:
        if g == f:
            return 0, None
        if g > f:
            break
        pos += 1
    return (-1 if pos & 1 else 1), ferm[:pos] + (f,) + ferm[pos:]


def bos_mul(a: tuple, b: tuple) -> tuple:
    """Multiply two boson monomials (sorted ``(v, i, n)`` tuples)."""
    if not a:
        return b
    if not b:
        return a
    d = {(v, i): n for v, i, n in a}
    for v, i, n in b:
        d[(v, i)] = d.get((v, i), 0) + n
    return tuple(sorted((v, i, n) for (v, i), n in d.items()))


def _bos_add(bos: tuple, v: int, i: int) -> tuple:
    out = []
    done = False
    for (w, j, n) in bos:
        if not done and (w, j) == (v, i):
            out.append((w, j, n + 1))
            done = True
        elif not done and (w, j) > (v, i):
            out.append((v, i, 1))
            out.append((w, j, n))
            done = True
        else:
            out.append((w, j, n))
    if not done:
        out.append((v, i, 1))
    return tuple(out)


def _bos_remove(bos: tuple, k: int) -> tuple:
    v, i, n = bos[k]
    if n == 1:
        return bos[:k] + bos[k + 1:]
    return bos[:k] + ((v, i, n - 1),) + bos[k + 1:]


def bos_weight(bos: tuple) -> int:
    return sum(i * n for _, i, n in bos)


def _add_into(target: dict, key, c):
    v = target.get(key, 0) + c
    if v:
        target[key] = v
    else:
        target.pop(key, None)


class FockState:
    """Sparse exact-rational combination of basis monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def vacuum(cls, nsector: int) -> "FockState":
        return cls({((0,) * nsector, (), ()): Fraction(1)})

    @classmethod
    def monomial(cls, sector, bosons=(), fermions=(), coeff=1) -> "FockState":
        """Build ``coeff * e^sector * prod b_{-i}(v) * prod f_{-j}(w)``.

        ``bosons`` is a list of ``(v, i)`` (repeats allowed) and
        ``fermions`` an ordered list of ``(w, j)``; the fermion order is
        canonicalised with its Koszul sign.
        """
        b = ()
        for v, i in bosons:
            if i < 1:
                raise ValueError("boson depth must be >= 1")
            b = _bos_add(b, v, i)
        for w, j in fermions:
            if j < 1:
                raise ValueError("fermion depth must be >= 1")
        sign, f = canon_fermions(fermions)
        if sign == 0:
            return cls()
        return cls({(tuple(sector), b, f): Fraction(coeff) * sign})

    def items(self):
        return self.terms.items()

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, FockState):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return type(self)(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, c):
        if isinstance(c, (FockState,)):
            return NotImplemented
        if c == 0:
            return type(self)()
        return type(self)({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}({self.terms!r})"

    def sectors(self) -> set:
        return {k[0] for k in self.terms}

    def canon(self) -> "FockState":
        """Re-canonicalise (idempotent; states are always kept canonical)."""
        out = {}
        for (s, b, f), c in self.terms.items():
            sign, ff = canon_fermions(f)
            if sign:
                bb = ()
                for v, i, n in b:
                    for _ in range(n):
                        bb = _bos_add(bb, v, i)
                _add_into(out, (s, bb, ff), c * sign)
        return type(self)(out)

    @staticmethod
    def from_parts(lat: dict, ferm: dict, sign=1) -> dict:
        """Tensor a lattice dict ``{(s, b): c}`` with a fermion dict ``{f: c}``."""
        out = {}
        for (s, b), c1 in lat.items():
            for f, c2 in ferm.items():
                _add_into(out, (s, b, f), sign * c1 * c2)
        return out


class FockSpace:
    """Mode operators and gradings on V_A for a fixed super-lattice."""

    def __init__(self, L: SuperLattice):
        self.L = L
        self.rp = L.even.group.free_rank
        self.rm = L.odd.group.free_rank
        self.nb = L.bplus.ngens
        self.chip = tuple(tuple(Fraction(c) for c in row) for row in L.even.free_block())
        self.chim = tuple(tuple(Fraction(c) for c in row) for row in L.odd.free_block())
        self._iota = {}
        self._gram = {}

    # -- lattice data -------------------------------------------------
    def iota(self, alpha) -> tuple:
        """Free coordinates of iota(alpha) in A+ (the image in A+ (x) Q)."""
        alpha = tuple(alpha)
        r = self._iota.get(alpha)
        if r is None:
            r = apply_iota(self.L, alpha)[: self.rp]
            self._iota[alpha] = r
        return r

    def chi(self, x, y) -> Fraction:
        m = self.chip
        return sum(
            (x[i] * m[i][j] * y[j] for i in range(self.rp) if x[i] for j in range(self.rp) if y[j]),
            Fraction(0),
        )

    def chi_odd(self, x, y) -> Fraction:
        m = self.chim
        return sum(
            (x[i] * m[i][j] * y[j] for i in range(self.rm) if x[i] for j in range(self.rm) if y[j]),
            Fraction(0),
        )

    def pair_sectors(self, alpha, beta) -> int:
        key = (tuple(alpha), tuple(beta))
        r = self._gram.get(key)
        if r is None:
            r = int(self.chi(self.iota(alpha), self.iota(beta)))
            self._gram[key] = r
        return r

    def sector_parity(self, alpha) -> int:
        return self.pair_sectors(alpha, alpha) % 2

    def even_vec(self, v) -> tuple:
        return self._vec(v, self.rp)

    def odd_vec(self, w) -> tuple:
        return self._vec(w, self.rm)

    @staticmethod
    def _vec(v, r):
        if isinstance(v, int):
            if not 0 <= v < r:
                raise ValueError(f"basis index {v} out of range")
            return tuple(Fraction(int(k == v)) for k in range(r))
        v = tuple(Fraction(c) for c in v)
        if len(v) != r:
            raise ValueError(f"vector {v} not expressible in a basis of size {r}")
        return v

    # -- states -------------------------------------------------------
    def vacuum(self) -> FockState:
        return FockState.vacuum(self.nb)

    def sector_state(self, alpha) -> FockState:
        return FockState({(self.L.bplus.canon(alpha), (), ()): Fraction(1)})

    def state(self, sector=None, bosons=(), fermions=(), coeff=1) -> FockState:
        sector = self.L.bplus.zero() if sector is None else self.L.bplus.canon(sector)
        return FockState.monomial(sector, bosons, fermions, coeff)

    # -- gradings -----------------------------------------------------
    def mono_degree(self, key, printed=True) -> int:
        s, b, f = key
        d = sum(2 * i * n for _, i, n in b)
        q = self.pair_sectors(s, s)
        if printed:
            return d + sum(2 * j - 1 for _, j in f) + 2 - q
        # fermion depth j counts 2j here: {f_1, f_-1} is a scalar
        return d + sum(2 * j for _, j in f) + q

    def degree(self, s: FockState, printed=True):
        """Common degree of the monomials of ``s`` or ``"inhomogeneous"``.

        ``printed=True`` is the grading with vacuum in degree 2, shift
        ``2 - chi(a, a)`` and fermion depth ``j`` in degree ``2j - 1``.
        ``printed=False`` is the grading under which the state-to-field map
        is graded: vacuum in degree 0, shift ``+chi(a, a)``, fermion depth
        ``j`` in degree ``2j``. It is even on fermions, so use :meth:`parity`
        for signs.
        """
        degs = {self.mono_degree(k, printed) for k in s.terms}
        if not degs:
            return None
        if len(degs) > 1:
            return "inhomogeneous"
        return degs.pop()

    def field_degree(self, s: FockState):
        return self.degree(s, printed=False)

    def parity(self, s: FockState):
        ps = {self.mono_degree(k) % 2 for k in s.terms}
        if len(ps) != 1:
            return None if not ps else "inhomogeneous"
        return ps.pop()

    # -- modes --------------------------------------------------------
    def b_mode(self, v, n: int, s: FockState) -> FockState:
        vv = self.even_vec(v)
        out = {}
        if n < 0:
            for (sec, b, f), c in s.terms.items():
                for k, x in enumerate(vv):
                    if x:
                        _add_into(out, (sec, _bos_add(b, k, -n), f), c * x)
        elif n == 0:
            for (sec, b, f), c in s.terms.items():
                val = self.chi(self.iota(sec), vv)
                if val:
                    out[(sec, b, f)] = c * val
        else:
            row = [self.chi(vv, self.even_vec(k)) for k in range(self.rp)]
            for (sec, b, f), c in s.terms.items():
                for pos, (w, i, e) in enumerate(b):
                    if i == n and row[w]:
                        _add_into(out, (sec, _bos_remove(b, pos), f), c * e * n * row[w])
        return FockState(out)

    def f_mode(self, w, n: int, s: FockState) -> FockState:
        """Fermionic mode ``f_n(w)`` acting as ``id (x) f_n`` with its Koszul sign."""
        ww = self.odd_vec(w)
        out = {}
        if n == 0:
            return FockState()
        row = None if n < 0 else [self.chi_odd(ww, self.odd_vec(k)) for k in range(self.rm)]
        for (sec, b, f), c in s.terms.items():
            c = -c if self.sector_parity(sec) else c
            if n < 0:
                for k, x in enumerate(ww):
                    if x:
                        sign, nf = _ferm_insert(f, (k, -n))
                        if sign:
                            _add_into(out, (sec, b, nf), c * x * sign)
            else:
                for pos, (k, j) in enumerate(f):
                    if j == n and row[k]:
                        sign = -1 if pos & 1 else 1
                        _add_into(out, (sec, b, f[:pos] + f[pos + 1:]), c * sign * n * row[k])
        return FockState(out)

    # -- enumeration --------------------------------------------------
    def basis(self, sector, weight: int) -> list:
        """All basis monomials of the given sector with creation weight exactly ``weight``."""
        sector = self.L.bplus.canon(sector)
        out = []
        for wb in range(weight + 1):
            for bos in _boson_monomials(self.rp, wb):
                for ferm in _fermion_monomials(self.rm, weight - wb):
                    out.append((sector, bos, ferm))
        return out

    def basis_upto(self, sector, depth: int) -> list:
        return [m for w in range(depth + 1) for m in self.basis(sector, w)]


def _partitions(n: int, maxpart=None):
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _boson_monomials(r: int, weight: int):
    if weight == 0:
        yield ()
        return
    if r == 0:
        return
    # distribute parts of a partition over colours, as multisets of (v, i)
    seen = set()
    for part in _partitions(weight):
        for colours in itertools.product(range(r), repeat=len(part)):
            b = ()
            for v, i in zip(colours, part):
                b = _bos_add(b, v, i)
            if b not in seen:
                seen.add(b)
                yield b


def _fermion_monomials(r: int, weight: int):
    if weight == 0:
        yield ()
        return
    if r == 0:
        return
    slots = [(w, j) for j in range(1, weight + 1) for w in range(r)]
    slots.sort()

    def rec(start, remaining, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        for k in range(start, len(slots)):
            w, j = slots[k]
            if j <= remaining:
                acc.append(slots[k])
                yield from rec(k + 1, remaining - j, acc)
                acc.pop()

    yield from rec(0, weight, [])
