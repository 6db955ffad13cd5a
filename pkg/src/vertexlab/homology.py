"""Joyce's vertex algebra on the Chern-character model of moduli homology.

Homology of the sector ``alpha`` is modelled as the super-symmetric algebra
on classes ``u_{alpha,v,i}`` (``v`` in the K-basis, ``i >= 1``), dual to
the Kunneth components ``mu_{alpha,v,i}`` of the universal Chern
character. A u-monomial is a sorted tuple of ``(q, i, n)`` with ``q`` a
K-basis index; odd ``q`` occur with ``n = 1`` and their order carries the
Koszul sign.

The field of ``u`` on ``w`` is assembled from four pieces: the Ext Chern
character (``ext_ch``), cap products (``cap``), the translation push
forward (``psi_push``) and the direct-sum push forward (``phi_push``).
None of this code shares logic with the Fock side.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .abelian import apply_iota
from .cocycle import build_epsilon, form_cocycle
from .geometry import VarietyModel, effective_forms, euler_matrix, superlattice_of

__all__ = [
    "HClass",
    "HomologySpace",
    "mono_mul",
    "mono_degree",
    "mu_pair",
    "contract",
    "default_epsilon",
]


def _add(target: dict, key, c):
    v = target.get(key, 0) + c
    if v:
        target[key] = v
    else:
        target.pop(key, None)


def _odd_sort(seq: list):
    """Sort a list of odd factors, returning (sign, tuple) or (0, None)."""
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    seq = list(seq)
    for k in range(1, len(seq)):
        j = k
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


class HClass:
    """Sparse rational combination of ``(sector, u-monomial)`` keys."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

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
        if not isinstance(other, HClass):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add(out, k, c)
        return HClass(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, c):
        if isinstance(c, HClass):
            return NotImplemented
        return HClass({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"HClass({self.terms!r})" if self.terms else "HClass(0)"


def mono_mul(parity, m1: tuple, m2: tuple):
    """Product of two u-monomials: (sign, monomial) or (0, None)."""
    if not m1 or not m2:
        return 1, m1 or m2
    odd = [(q, i) for q, i, _ in m1 if parity[q]] + [(q, i) for q, i, _ in m2 if parity[q]]
    sign, odd_sorted = _odd_sort(odd)
    if not sign:
        return 0, None
    ev = {}
    for q, i, n in m1 + m2:
        if not parity[q]:
            ev[(q, i)] = ev.get((q, i), 0) + n
    out = [(q, i, n) for (q, i), n in ev.items()] + [(q, i, 1) for q, i in odd_sorted]
    return sign, tuple(sorted(out))


def mono_degree(parity, m: tuple, odd_shift: int = 1) -> int:
    """Homological degree: 2i per even factor and 2i - odd_shift per odd factor."""
    return sum((2 * i - odd_shift) if parity[q] else 2 * i * n for q, i, n in m)


def mono_parity(parity, m: tuple) -> int:
    return sum(1 for q, _, _ in m if parity[q]) % 2


def contract(parity, m: tuple, q: int, i: int):
    """Left contraction by ``mu_{q,i}`` (``i >= 1``) on a u-monomial.

    Acts as ``1/(i-1)!`` times the (graded) derivative in ``u_{q,i}``.
    Returns ``(coefficient, monomial)`` or ``None``.
    """
    norm = Fraction(1, factorial(i - 1))
    pos = 0
    for k, (r, j, n) in enumerate(m):
        if r == q and j == i:
            if parity[q]:
                c = -norm if pos & 1 else norm
                return c, m[:k] + m[k + 1:]
            rest = m[:k] + ((r, j, n - 1),) + m[k + 1:] if n > 1 else m[:k] + m[k + 1:]
            return norm * n, rest
        if parity[r]:
            pos += 1
    return None


def mu_pair(parity, mu: tuple, u: tuple) -> Fraction:
    """Pairing of a mu-monomial (sequence of ``(q, i)`` with repeats) and a u-monomial.

    Computed as the constant term of successive contraction, first factor
    first, so that it is the pairing for which cap is adjoint to cup.
    """
    cur = {u: Fraction(1)}
    for q, i in mu:
        nxt = {}
        for m, c in cur.items():
            r = contract(parity, m, q, i)
            if r:
                _add(nxt, r[1], c * r[0])
        cur = nxt
        if not cur:
            return Fraction(0)
    return cur.get((), Fraction(0))


def default_epsilon(M: VarietyModel, variant: str):
    """``(-1)^chi`` in the general variant; the standard solution otherwise."""
    L = superlattice_of(M, variant)
    if variant == "general":
        chi = euler_matrix(M)
        ev = M.even
        nb = L.bplus.ngens
        cols = [apply_iota(L, L.bplus.gen(k)) for k in range(nb)]
        mat = [
            [
                sum(cols[a][r] * chi[ev[r]][ev[s]] * cols[b][s] for r in range(len(ev)) for s in range(len(ev)))
                for b in range(nb)
            ]
            for a in range(nb)
        ]
        return form_cocycle(L.bplus, [[int(c) for c in row] for row in mat])
    return build_epsilon(L)


class HomologySpace:
    """The geometric vertex algebra attached to a variety model."""

    def __init__(self, M: VarietyModel, variant: str = "cy", eps=None):
        self.M = M
        self.variant = variant
        self.L = superlattice_of(M, variant)
        self.B = self.L.bplus
        self.eps = eps if eps is not None else default_epsilon(M, variant)
        n = len(M.kbasis)
        self.nq = n
        self.parity = tuple(c.parity for c in M.kbasis)
        even, odd = effective_forms(M, variant)
        chi = [[Fraction(0)] * n for _ in range(n)]
        for a, qa in enumerate(M.even):
            for b, qb in enumerate(M.even):
                chi[qa][qb] = Fraction(even[a][b])
        for a, qa in enumerate(M.odd):
            for b, qb in enumerate(M.odd):
                chi[qa][qb] = Fraction(odd[a][b])
        self.chit = tuple(tuple(r) for r in chi)
        self._a = {}
        self._ext = {}
        self._psi = {}
        self._fact = {}

    # -- sector data --------------------------------------------------
    def a(self, alpha) -> tuple:
        """K-basis coordinates ``a_v(alpha)`` of a sector (zero on odd classes)."""
        alpha = self.B.canon(alpha)
        r = self._a.get(alpha)
        if r is None:
            img = apply_iota(self.L, alpha)
            vec = [Fraction(0)] * self.nq
            for k, q in enumerate(self.M.even):
                vec[q] = Fraction(img[k])
            r = tuple(vec)
            self._a[alpha] = r
        return r

    def chi(self, x, y) -> Fraction:
        m = self.chit
        return sum((x[i] * m[i][j] * y[j] for i in range(self.nq) if x[i] for j in range(self.nq) if y[j]), Fraction(0))

    def chi_sectors(self, alpha, beta) -> int:
        return int(self.chi(self.a(alpha), self.a(beta)))

    # -- classes ------------------------------------------------------
    def unit(self, alpha=None) -> HClass:
        alpha = self.B.zero() if alpha is None else self.B.canon(alpha)
        return HClass({(alpha, ()): 1})

    def u(self, alpha, factors=(), coeff=1) -> HClass:
        """``coeff * prod u_{alpha,q,i}`` for ``factors`` a list of ``(q, i)``."""
        alpha = self.B.canon(alpha)
        m = ()
        sign = 1
        for q, i in factors:
            if i < 1:
                raise ValueError("u-classes need i >= 1")
            s, m = mono_mul(self.parity, m, ((q, i, 1),))
            if not s:
                return HClass()
            sign *= s
        return HClass({(alpha, m): Fraction(coeff) * sign})

    def hat_degree(self, eta: HClass, printed: bool = True):
        """Common hat-degree of ``eta``, ``"inhomogeneous"`` or None if zero.

        ``printed=True``: homological degree + 2 - chi(a, a). ``printed=False``:
        homological degree + chi(a, a) with odd factors counted as 2i, the
        field-compatible grading.
        """
        degs = set()
        for (alpha, m) in eta.terms:
            q = self.chi_sectors(alpha, alpha)
            d = mono_degree(self.parity, m, 1 if printed else 0)
            degs.add(d + 2 - q if printed else d + q)
        if not degs:
            return None
        if len(degs) > 1:
            return "inhomogeneous"
        return degs.pop()

    def parity_of(self, alpha, m) -> int:
        return (mono_parity(self.parity, m) + self.chi_sectors(alpha, alpha)) % 2

    # -- the four building blocks --------------------------------------
    def cap(self, eta: HClass, mu) -> HClass:
        """``eta`` capped with the mu-monomial ``mu`` (list of ``(q, i)``, ``i >= 0``).

        ``i = 0`` factors are the scalars ``a_q(alpha)``; the others contract
        in order, first factor first.
        """
        out = {}
        for (alpha, m), c in eta.terms.items():
            a = self.a(alpha)
            cur = {m: c}
            for q, i in mu:
                nxt = {}
                for mm, cc in cur.items():
                    if i == 0:
                        if a[q]:
                            _add(nxt, mm, cc * a[q])
                        continue
                    r = contract(self.parity, mm, q, i)
                    if r:
                        _add(nxt, r[1], cc * r[0])
                cur = nxt
            for mm, cc in cur.items():
                _add(out, (alpha, mm), cc)
        return HClass(out)

    def phi_push(self, e1: HClass, e2: HClass) -> HClass:
        out = {}
        for (a1, m1), c1 in e1.terms.items():
            for (a2, m2), c2 in e2.terms.items():
                s, m = mono_mul(self.parity, m1, m2)
                if s:
                    _add(out, (self.B.add(a1, a2), m), s * c1 * c2)
        return HClass(out)

    def _dstar(self, alpha, m: tuple) -> dict:
        """The raising operator ``sum i u_{q,i+1} d/du_{q,i} + sum a_q(alpha) u_{q,1}``."""
        out = {}
        par = self.parity
        for k, (q, i, n) in enumerate(m):
            rest = m[:k] + ((q, i, n - 1),) + m[k + 1:] if n > 1 else m[:k] + m[k + 1:]
            if par[q]:
                # replace in place: the odd factor keeps its slot in the sequence
                odd = [(r, j) for r, j, _ in m if par[r]]
                pos = odd.index((q, i))
                odd[pos] = (q, i + 1)
                sign, srt = _odd_sort(odd)
                if not sign:
                    continue
                ev = tuple(x for x in m if not par[x[0]])
                mm = tuple(sorted(ev + tuple((r, j, 1) for r, j in srt)))
                _add(out, mm, sign * i)
            else:
                s, mm = mono_mul(par, ((q, i + 1, 1),), rest)
                _add(out, mm, n * i)
        a = self.a(alpha)
        for q in range(self.nq):
            if a[q]:
                s, mm = mono_mul(par, ((q, 1, 1),), m)
                if s:
                    _add(out, mm, a[q] * s)
        return out

    def _psi_series(self, alpha, m: tuple, upto: int) -> list:
        key = (alpha, m)
        ser = self._psi.get(key)
        if ser is None:
            ser = [{m: Fraction(1)}]
            self._psi[key] = ser
        while len(ser) <= upto:
            k = len(ser)
            nxt = {}
            for mm, c in ser[-1].items():
                for m2, c2 in self._dstar(alpha, mm).items():
                    _add(nxt, m2, c * c2 / k)
            ser.append(nxt)
        return ser

    def _psi_factored(self, alpha, m: tuple, upto: int) -> list:
        """Same series as ``_psi_series``, via ``exp(t d*) m = exp(tD)(m) exp(t d*)(1)``.

        ``D`` (the derivation part of d*) sends ``u_{q,i}`` to ``i u_{q,i+1}``,
        so each factor contributes ``sum_s binom(i+s-1, s) t^s u_{q,i+s}``.
        """
        key = (alpha, m)
        hit = self._fact.get(key)
        if hit is not None and len(hit) > upto:
            return hit
        par = self.parity
        series = [dict(d) for d in self._psi_series(alpha, (), upto)[: upto + 1]]
        factors = []
        for q, i, n in reversed(m):
            factors.extend([(q, i)] * n)
        for q, i in factors:
            new = []
            for t in range(upto + 1):
                acc = {}
                for s_ in range(t + 1):
                    coef = comb(i + s_ - 1, s_)
                    f = ((q, i + s_, 1),)
                    for mm, c in series[t - s_].items():
                        sg, prod = mono_mul(par, f, mm)
                        if sg:
                            _add(acc, prod, sg * coef * c)
                new.append(acc)
            series = new
        self._fact[key] = series
        return series

    def psi_push(self, k: int, eta: HClass) -> HClass:
        """Coefficient of ``t^k`` in the translation push-forward of ``t^k (x) eta``."""
        if k < 0:
            raise ValueError("k must be non-negative")
        out = {}
        for (alpha, m), c in eta.terms.items():
            for mm, cc in self._psi_series(alpha, m, k)[k].items():
                _add(out, (alpha, mm), c * cc)
        return HClass(out)

    def ext_ch(self, i: int, alpha, beta) -> dict:
        """Degree-``i`` Chern character of the Ext complex as a mu (x) mu expression.

        Keys are pairs of mu-monomials, each ``()`` or ``((q, j),)`` with
        ``j >= 1``; the ``j = 0`` (resp. ``k = 0``) factors have been
        replaced by the scalars ``a_q(alpha)`` (resp. ``a_q(beta)``).
        """
        alpha, beta = self.B.canon(alpha), self.B.canon(beta)
        key = (i, alpha, beta)
        r = self._ext.get(key)
        if r is not None:
            return r
        aa, ab = self.a(alpha), self.a(beta)
        out = {}
        for v in range(self.nq):
            for w in range(self.nq):
                x = self.chit[v][w]
                if not x:
                    continue
                for j in range(i + 1):
                    k = i - j
                    c = x if k % 2 == 0 else -x
                    if j == 0:
                        c = c * aa[v]
                    if k == 0:
                        c = c * ab[w]
                    if not c:
                        continue
                    m1 = ((v, j),) if j else ()
                    m2 = ((w, k),) if k else ()
                    _add(out, (m1, m2), c)
        self._ext[key] = out
        return out

    # -- the field ----------------------------------------------------
    def _exp_stage(self, alpha, beta, U: tuple, W: tuple) -> dict:
        """``(U (x) W) cap exp(sum (-1)^{i-1}(i-1)! z^{-i} ch_i)`` as {power: {(U', W'): c}}."""
        par = self.parity
        imax = max((i for _, i, _ in U), default=0) + max((i for _, i, _ in W), default=0)
        X = []
        for i in range(1, imax + 1):
            pref = factorial(i - 1) * (1 if i % 2 else -1)
            for (m1, m2), c in self.ext_ch(i, alpha, beta).items():
                X.append((i, m1, m2, c * pref))
        total = {0: {(U, W): Fraction(1)}}
        cur = {0: {(U, W): Fraction(1)}}
        order = 0
        while cur:
            order += 1
            nxt = {}
            for p, states in cur.items():
                for (u1, w1), c in states.items():
                    for i, m1, m2, cx in X:
                        if m1:
                            r = contract(par, u1, *m1[0])
                            if r is None:
                                continue
                            c1, u2 = r
                        else:
                            c1, u2 = 1, u1
                        if m2:
                            r = contract(par, w1, *m2[0])
                            if r is None:
                                continue
                            c2, w2 = r
                            if par[m2[0][0]] and mono_parity(par, u2):
                                c2 = -c2
                        else:
                            c2, w2 = 1, w1
                        _add(nxt.setdefault(p - i, {}), (u2, w2), c * cx * c1 * c2 / order)
            cur = {p: s for p, s in nxt.items() if s}
            for p, s in cur.items():
                tgt = total.setdefault(p, {})
                for k, c in s.items():
                    _add(tgt, k, c)
        return {p: s for p, s in total.items() if s}

    def _pair_stage(self, alpha, U, beta, W):
        shift = self.chi_sectors(alpha, beta)
        stage = self._exp_stage(alpha, beta, U, W)
        lo = min(stage) + shift
        return stage, shift, lo

    def max_mode(self, u: HClass, w: HClass):
        """Largest n with a possibly nonzero ``u_n w``, or None if u or w is zero."""
        best = None
        for (alpha, U) in u.terms:
            for (beta, W) in w.terms:
                _, _, lo = self._pair_stage(alpha, U, beta, W)
                n = -1 - lo
                best = n if best is None else max(best, n)
        return best

    def joyce_modes(self, u: HClass, w: HClass, modes) -> dict:
        modes = list(modes)
        out = {n: {} for n in modes}
        par = self.parity
        for (alpha, U), cu in u.terms.items():
            a_par = self.parity_of(alpha, U)
            for (beta, W), cw in w.terms.items():
                sign = self.eps(alpha, beta)
                if a_par and self.chi_sectors(beta, beta) % 2:
                    sign = -sign
                stage, shift, _ = self._pair_stage(alpha, U, beta, W)
                gamma = self.B.add(alpha, beta)
                for n in modes:
                    P = -n - 1
                    acc = out[n]
                    for p, states in stage.items():
                        k = P - (p + shift)
                        if k < 0:
                            continue
                        for (u1, w1), c in states.items():
                            for u2, c2 in self._psi_factored(alpha, u1, k)[k].items():
                                s, mm = mono_mul(par, u2, w1)
                                if s:
                                    _add(acc, (gamma, mm), sign * s * cu * cw * c * c2)
        return {n: HClass(d) for n, d in out.items()}

    def joyce_mode(self, u: HClass, n: int, w: HClass) -> HClass:
        return self.joyce_modes(u, w, [n])[n]

    # -- closed form for generators -----------------------------------
    def generator_mode(self, q: int, n: int, eta: HClass) -> HClass:
        """Mode ``n`` of the field of ``u_{0,q,1}`` from its closed form."""
        out = HClass()
        for (alpha, m), c in eta.terms.items():
            piece = HClass({(alpha, m): c})
            sign = -1 if (self.parity[q] and self.chi_sectors(alpha, alpha) % 2) else 1
            i = -n - 1
            if i >= 0:
                gen = HClass({(self.B.zero(), ((q, i + 1, 1),)): 1})
                out = out + sign * self.phi_push(gen, piece)
            else:
                k = n
                for w in range(self.nq):
                    x = self.chit[q][w]
                    if x:
                        out = out + (sign * factorial(k) * x) * self.cap(piece, [(w, k)])
        return out
