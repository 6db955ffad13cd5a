"""State-to-field correspondence on V_A and the vertex-algebra axiom checks.

Fields are never materialised as series. For a monomial
``u = e^a prod b_{-i}(v) prod f_{-j}(w)`` and a monomial ``w`` we run the
annihilating half of the normal-ordered product on ``w`` once (this yields
finitely many powers of ``z``), and then, for each requested mode, fill
the remaining power of ``z`` with the creating half.

The state is the tensor product of a lattice factor (sector + bosons) and
a fermionic factor; ``koszul`` selects the sign used to act with
``x (x) y`` on ``x' (x) y'``:

* ``"standard"`` -- ``(-1)^{p(y) p(x')}``;
* ``"printed"`` -- ``(-1)^{(p(x) + p(y)) p(x')}``.

Both yield vertex algebras here (they differ by a bimultiplicative
rescaling of the cocycle); ``"printed"`` is the default because it is the
convention matched by the geometric field formula.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .fock import FockSpace, FockState, _add_into, _bos_add, _bos_remove, _ferm_insert, bos_mul, canon_fermions

__all__ = [
    "VertexAlgebra",
    "translate",
    "gamma_mode",
    "y_mode",
    "check_vacuum_creation",
    "check_skew",
    "check_weak_assoc",
    "check_locality",
    "gbinom",
    "sample_states",
    "axiom_suite",
]


def gbinom(m, k: int):
    """Generalised binomial coefficient ``m choose k`` for integer ``m``, ``k >= 0``."""
    if k < 0:
        return 0
    if m >= 0:
        return math.comb(m, k) if k <= m else 0
    # (-1)^k C(k - m - 1, k)
    return (-1) ** k * math.comb(k - m - 1, k)


def _max_depth_lat(ld: dict) -> int:
    return max((i for (_, b) in ld for (_, i, _) in b), default=0)


def _max_depth_ferm(fd: dict) -> int:
    return max((j for f in fd for (_, j) in f), default=0)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class VertexAlgebra:
    """The generalised super-lattice vertex algebra on a :class:`FockSpace`."""

    def __init__(self, space: FockSpace, eps, koszul: str = "printed"):
        if koszul not in ("printed", "standard"):
            raise ValueError("koszul must be 'printed' or 'standard'")
        self.V = space
        self.eps = eps
        self.koszul = koszul
        self._lat1 = {}
        self._ferm1 = {}
        self._create = {}
        r = space.rp
        self._chirow = [[space.chi(space.even_vec(a), space.even_vec(b)) for b in range(r)] for a in range(r)]
        rm = space.rm
        self._chirow_odd = [
            [space.chi_odd(space.odd_vec(a), space.odd_vec(b)) for b in range(rm)] for a in range(rm)
        ]

    # -- lattice factor -----------------------------------------------
    def _lat_annihilate(self, vrow, m: int, ld: dict) -> dict:
        """``b_m(v)`` for ``m >= 0`` on a lattice dict; ``vrow[k] = chi(v, e_k)``."""
        out = {}
        V = self.V
        if m == 0:
            for (sec, b), c in ld.items():
                it = V.iota(sec)
                val = sum((vrow[k] * it[k] for k in range(V.rp) if it[k]), Fraction(0))
                if val:
                    _add_into(out, (sec, b), c * val)
            return out
        for (sec, b), c in ld.items():
            for pos, (w, i, e) in enumerate(b):
                if i == m and vrow[w]:
                    _add_into(out, (sec, _bos_remove(b, pos)), c * e * m * vrow[w])
        return out

    def _lat_stage(self, alpha, factors: tuple, xkey) -> list:
        """Annihilating half of ``Y(x, z)`` applied to the lattice monomial ``xkey``.

        Each derivative factor contributes either its creating or its
        annihilating half. Returns a list of ``(creators, {power: lattice
        dict})``, one entry per choice of creating factors, with the
        annihilating halves, ``c_alpha``, ``E^+``, ``z^{alpha_0}`` and
        ``e^alpha`` already applied.
        """
        key = (alpha, factors, xkey)
        hit = self._lat1.get(key)
        if hit is not None:
            return hit
        choices = {}
        for S in itertools.product((False, True), repeat=len(factors)):
            cre = tuple(sorted(f for f, s in zip(factors, S) if s))
            ann = tuple(sorted(f for f, s in zip(factors, S) if not s))
            choices[(cre, ann)] = choices.get((cre, ann), 0) + 1
        out = []
        for (cre, ann), mult in sorted(choices.items()):
            terms = self._lat_annihilating(alpha, ann, xkey)
            if terms:
                if mult != 1:
                    terms = {e: {k: c * mult for k, c in ld.items()} for e, ld in terms.items()}
                out.append((cre, terms))
        self._lat1[key] = out
        return out

    def _lat_annihilating(self, alpha, ann: tuple, xkey) -> dict:
        V = self.V
        beta = xkey[0]
        terms = {0: {xkey: Fraction(1)}}
        for v, i in ann:
            vrow = self._chirow[v]
            new = {}
            for e, ld in terms.items():
                for m in range(0, _max_depth_lat(ld) + 1):
                    r = self._lat_annihilate(vrow, m, ld)
                    if not r:
                        continue
                    coef = (-1) ** (i - 1) * math.comb(m + i - 1, i - 1)
                    tgt = new.setdefault(e - m - i, {})
                    for k, c in r.items():
                        _add_into(tgt, k, c * coef)
            terms = {e: ld for e, ld in new.items() if ld}
        sign = self.eps(alpha, beta)
        ia = V.iota(alpha)
        if any(ia):
            arow = [
                sum((ia[a] * self._chirow[a][k] for a in range(V.rp) if ia[a]), Fraction(0))
                for k in range(V.rp)
            ]
            for j in range(1, max((_max_depth_lat(ld) for ld in terms.values()), default=0) + 1):
                new = {}
                for e, ld in terms.items():
                    t = ld
                    k = 0
                    while t:
                        tgt = new.setdefault(e - j * k, {})
                        for kk, c in t.items():
                            _add_into(tgt, kk, c)
                        t = self._lat_annihilate(arow, j, t)
                        k += 1
                        scale = Fraction(-1, j * k)
                        t = {kk: c * scale for kk, c in t.items()}
                terms = {e: ld for e, ld in new.items() if ld}
        shift = V.pair_sectors(alpha, beta)
        gamma = V.L.bplus.add(alpha, beta)
        out = {}
        for e, ld in terms.items():
            moved = {(gamma, b): c * sign for (_, b), c in ld.items()}
            if moved:
                out[e + shift] = moved
        return out

    def _creation_series(self, alpha, factors: tuple, upto: int) -> list:
        """Coefficients of ``z^t`` (t <= upto) of the creating half as boson polynomials."""
        key = (alpha, factors)
        hit = self._create.get(key)
        if hit is not None and len(hit) > upto:
            return hit
        size = upto + 1
        V = self.V
        ia = V.iota(alpha)
        E = [{(): Fraction(1)}]
        for t in range(1, size):
            acc = {}
            for j in range(1, t + 1):
                for b, c in E[t - j].items():
                    for k in range(V.rp):
                        if ia[k]:
                            _add_into(acc, _bos_add(b, k, j), c * ia[k])
            E.append({b: c / t for b, c in acc.items()})
        series = E
        for v, i in factors:
            fac = [{((v, s + i, 1),): math.comb(s + i - 1, i - 1)} for s in range(size)]
            prod = []
            for t in range(size):
                acc = {}
                for s in range(t + 1):
                    for b1, c1 in series[t - s].items():
                        for b2, c2 in fac[s].items():
                            _add_into(acc, bos_mul(b1, b2), c1 * c2)
                prod.append(acc)
            series = prod
        self._create[key] = series
        return series

    def _lat_mode(self, alpha, stage: list, p: int) -> dict:
        """Lattice-factor mode ``x_p x'`` from a precomputed stage list."""
        P = -p - 1
        out = {}
        for cre, terms in stage:
            need = [P - e for e in terms if P - e >= 0]
            if not need:
                continue
            series = self._creation_series(alpha, cre, max(need))
            for e, ld in terms.items():
                t = P - e
                if t < 0:
                    continue
                for b1, c1 in series[t].items():
                    for (sec, b2), c2 in ld.items():
                        _add_into(out, (sec, bos_mul(b1, b2)), c1 * c2)
        return out

    # -- fermionic factor ---------------------------------------------
    def _ferm_contract(self, wrow, m: int, fd: dict) -> dict:
        out = {}
        for f, c in fd.items():
            for pos, (k, j) in enumerate(f):
                if j == m and wrow[k]:
                    sign = -1 if pos & 1 else 1
                    _add_into(out, f[:pos] + f[pos + 1:], c * sign * m * wrow[k])
        return out

    def _ferm_stage(self, y: tuple, yprime: tuple) -> list:
        key = (y, yprime)
        hit = self._ferm1.get(key)
        if hit is not None:
            return hit
        r = len(y)
        out = []
        for S in itertools.product((False, True), repeat=r):
            comp = [k for k in range(r) if not S[k]]
            inv = sum(sum(1 for c in comp if c < k) for k in range(r) if S[k])
            sign = -1 if inv & 1 else 1
            terms = {0: {yprime: Fraction(1)}}
            for k in reversed(comp):
                w, j = y[k]
                wrow = self._chirow_odd[w]
                new = {}
                for e, fd in terms.items():
                    for m in range(1, _max_depth_ferm(fd) + 1):
                        rr = self._ferm_contract(wrow, m, fd)
                        if not rr:
                            continue
                        coef = (-1) ** (j - 1) * math.comb(m + j - 1, j - 1)
                        tgt = new.setdefault(e - m - j, {})
                        for kk, c in rr.items():
                            _add_into(tgt, kk, c * coef)
                terms = {e: fd for e, fd in new.items() if fd}
            if terms:
                out.append((tuple(k for k in range(r) if S[k]), sign, terms))
        self._ferm1[key] = out
        return out

    def _ferm_mode(self, y: tuple, stage: list, q: int) -> dict:
        P = -q - 1
        out = {}
        for creators, sign, terms in stage:
            for e, fd in terms.items():
                budget = P - e
                if budget < 0:
                    continue
                for comp in _compositions(budget, len(creators)):
                    cur = {f: c * sign for f, c in fd.items()}
                    for k, s in reversed(list(zip(creators, comp))):
                        w, j = y[k]
                        coef = math.comb(s + j - 1, j - 1)
                        nxt = {}
                        for f, c in cur.items():
                            sg, nf = _ferm_insert(f, (w, s + j))
                            if sg:
                                _add_into(nxt, nf, c * sg * coef)
                        cur = nxt
                        if not cur:
                            break
                    for f, c in cur.items():
                        _add_into(out, f, c)
        return out

    # -- public API ---------------------------------------------------
    def _pair_data(self, umono, wmono):
        alpha, bu, fu = umono
        beta, bw, fw = wmono
        factors = tuple((v, i) for v, i, n in bu for _ in range(n))
        lat = self._lat_stage(alpha, factors, (beta, bw))
        ferm = self._ferm_stage(fu, fw)
        if not lat or not ferm:
            return None
        eL = min(e for _, terms in lat for e in terms)
        eF = min(e for _, _, terms in ferm for e in terms)
        V = self.V
        px_prime = V.sector_parity(beta)
        py = len(fu) & 1
        if self.koszul == "printed":
            sgn = -1 if ((V.sector_parity(alpha) + py) * px_prime) & 1 else 1
        else:
            sgn = -1 if (py * px_prime) & 1 else 1
        return alpha, factors, lat, ferm, eL, eF, sgn, fu

    def max_mode(self, u: FockState, w: FockState):
        """Largest ``n`` with ``u_n w`` possibly nonzero (None if all vanish)."""
        best = None
        for um in u.terms:
            for wm in w.terms:
                d = self._pair_data(um, wm)
                if d is None:
                    continue
                n = -1 - d[4] - d[5]
                best = n if best is None else max(best, n)
        return best

    def y_modes(self, u: FockState, w: FockState, modes) -> dict:
        """``{n: u_n w}`` for each requested ``n``."""
        modes = list(modes)
        acc = {n: {} for n in modes}
        for um, cu in u.terms.items():
            for wm, cw in w.terms.items():
                d = self._pair_data(um, wm)
                if d is None:
                    continue
                alpha, factors, lat, ferm, eL, eF, sgn, fu = d
                c0 = cu * cw * sgn
                xs = {}
                for n in modes:
                    for p in range(n + eF, -eL):
                        X = xs.get(p)
                        if X is None:
                            X = xs[p] = self._lat_mode(alpha, lat, p)
                        if not X:
                            continue
                        Y = self._ferm_mode(fu, ferm, n - 1 - p)
                        if not Y:
                            continue
                        tgt = acc[n]
                        for (sec, b), c1 in X.items():
                            for f, c2 in Y.items():
                                _add_into(tgt, (sec, b, f), c0 * c1 * c2)
        return {n: FockState(d) for n, d in acc.items()}

    def y_mode(self, u: FockState, n: int, w: FockState) -> FockState:
        return self.y_modes(u, w, [n])[n]

    def gamma_mode(self, alpha, n: int, s: FockState) -> FockState:
        """Coefficient of ``z^{-n-1}`` in the bare operator Gamma_alpha(z) applied to ``s``."""
        alpha = self.V.L.bplus.canon(alpha)
        out = {}
        for (beta, b, f), c in s.terms.items():
            lat = self._lat_stage(alpha, (), (beta, b))
            if not lat:
                continue
            X = self._lat_mode(alpha, lat, n)
            for (sec, bb), c1 in X.items():
                _add_into(out, (sec, bb, f), c * c1)
        return FockState(out)

    def translate(self, s: FockState) -> FockState:
        """The translation operator T (a degree-2 derivation)."""
        V = self.V
        out = {}
        for (sec, b, f), c in s.terms.items():
            ia = V.iota(sec)
            for k in range(V.rp):
                if ia[k]:
                    _add_into(out, (sec, _bos_add(b, k, 1), f), c * ia[k])
            for pos, (v, i, n) in enumerate(b):
                nb = _bos_add(_bos_remove(b, pos), v, i + 1)
                _add_into(out, (sec, nb, f), c * n * i)
            for pos, (w, j) in enumerate(f):
                sign, nf = canon_fermions(f[:pos] + ((w, j + 1),) + f[pos + 1:])
                if sign:
                    _add_into(out, (sec, b, nf), c * j * sign)
        return FockState(out)

    def translate_power(self, s: FockState, k: int) -> FockState:
        for _ in range(k):
            s = self.translate(s)
        return s

    def parity(self, s: FockState) -> int:
        p = self.V.parity(s)
        if p == "inhomogeneous":
            raise ValueError("state is not homogeneous")
        return p or 0


# ---------------------------------------------------------------------
# module-level API


def translate(va: VertexAlgebra, s: FockState) -> FockState:
    return va.translate(s)


def gamma_mode(va: VertexAlgebra, alpha, n: int, s: FockState) -> FockState:
    return va.gamma_mode(alpha, n, s)


def y_mode(va: VertexAlgebra, u: FockState, n: int, w: FockState) -> FockState:
    return va.y_mode(u, n, w)


def _show(s: FockState):
    return {repr(k): str(c) for k, c in sorted(s.terms.items(), key=repr)}


def check_vacuum_creation(va: VertexAlgebra, u: FockState, z_window: int = 6) -> dict:
    """Vacuum axiom, creation axiom ``u_{-k-1}|0> = T^k u / k!`` and ``u_n|0> = 0``."""
    vac = va.V.vacuum()
    failures = []
    modes = range(-z_window - 1, z_window + 1)
    got = va.y_modes(vac, u, modes)
    for n in modes:
        want = u if n == -1 else FockState()
        if got[n] != want:
            failures.append({"check": "vacuum", "n": n})
    created = va.y_modes(u, vac, modes)
    t = u
    for k in range(z_window + 1):
        if k:
            t = va.translate(t)
        want = t * Fraction(1, math.factorial(k))
        if created[-k - 1] != want:
            failures.append({"check": "creation", "k": k})
    for n in range(0, z_window + 1):
        if created[n]:
            failures.append({"check": "annihilates-vacuum", "n": n})
    return {"ok": not failures, "failures": failures}


def check_skew(va: VertexAlgebra, u: FockState, w: FockState, z_window: int = 6) -> dict:
    """Skew-symmetry ``u_m w = (-1)^{p(u)p(w)} sum_k (-1)^{m+1+k} T^k(w_{m+k} u)/k!``."""
    pu, pw = va.parity(u), va.parity(w)
    sgn = -1 if (pu * pw) & 1 else 1
    top = va.max_mode(w, u)
    modes = list(range(-z_window, z_window + 1))
    lhs = va.y_modes(u, w, modes)
    hi = max(modes) if top is None else max(top, max(modes))
    rev = va.y_modes(w, u, range(min(modes), hi + 1))
    failures = []
    powers = {}  # j -> [T^0 rev[j], T^1 rev[j], ...]

    def tpow(j, k):
        seq = powers.setdefault(j, [rev[j]])
        while len(seq) <= k:
            seq.append(va.translate(seq[-1]))
        return seq[k]

    for m in modes:
        acc = FockState()
        if top is not None:
            for k in range(0, top - m + 1):
                if not rev[m + k]:
                    continue
                term = tpow(m + k, k)
                coef = Fraction((-1) ** ((m + 1 + k) & 1) * sgn, math.factorial(k))
                acc = acc + term * coef
        if acc != lhs[m]:
            failures.append({"m": m, "lhs": _show(lhs[m]), "rhs": _show(acc)})
            if len(failures) >= 5:
                break
    return {"ok": not failures, "sign": sgn, "failures": failures}


def check_weak_assoc(
    va: VertexAlgebra, u: FockState, v: FockState, w: FockState, n_max: int = 8, z_window: int = 3
) -> dict:
    """Search the least ``N <= n_max`` making weak associativity hold on a window.

    Coefficients of ``z1^a z2^b`` with ``|a|, |b| <= z_window`` are compared
    exactly for ``(z1 + z2)^N Y(Y(u, z1) v, z2) w`` and
    ``(z1 + z2)^N Y(u, z1 + z2) Y(v, z2) w``.
    """
    W = z_window
    p_lo, p_hi = -W - 1, n_max + W - 1
    uv = va.y_modes(u, v, range(p_lo, p_hi + 1))
    # (u_p v)_q w for every p, q needed by the left side
    q_lo = -W - 1
    q_hi = n_max + W - 1
    left_cache = {p: va.y_modes(uv[p], w, range(q_lo, q_hi + 1)) if uv[p] else None for p in uv}
    qmax = va.max_mode(v, w)
    right_cache = {}

    def u_of_vqw(q, p):
        key = (q, p)
        if key not in right_cache:
            vq = vw.get(q)
            right_cache[key] = va.y_mode(u, p, vq) if vq else FockState()
        return right_cache[key]

    vw = {}
    if qmax is not None:
        vw = va.y_modes(v, w, range(-W - 1, qmax + 1))

    def lhs(a, b, N):
        acc = FockState()
        for k in range(N + 1):
            p = k - a - 1
            q = N - k - b - 1
            lc = left_cache.get(p)
            if lc is None:
                continue
            t = lc.get(q)
            if t:
                acc = acc + t * math.comb(N, k)
        return acc

    def rhs(a, b, N):
        acc = FockState()
        if qmax is None:
            return acc
        # k = N - p - 1 - a >= 0 and q = k - b - 1 <= qmax
        p_top = N - 1 - a
        p_bot = N - a - b - 2 - qmax
        for p in range(p_bot, p_top + 1):
            k = N - p - 1 - a
            q = k - b - 1
            if q not in vw or not vw[q]:
                continue
            cf = gbinom(N - p - 1, k)
            if cf == 0:
                continue
            t = u_of_vqw(q, p)
            if t:
                acc = acc + t * cf
        return acc

    window = [(a, b) for a in range(-W, W + 1) for b in range(-W, W + 1)]
    for N in range(n_max + 1):
        if all(lhs(a, b, N) == rhs(a, b, N) for a, b in window):
            return {"ok": True, "N": N}
    return {"ok": False, "N": None}


def check_locality(
    va: VertexAlgebra, u: FockState, v: FockState, probes, n_max: int = 8, z_window: int = 3
) -> dict:
    """Least ``N`` with ``(z - w)^N [Y(u, z), Y(v, w)] = 0`` on the probes and window."""
    W = z_window
    sgn = -1 if (va.parity(u) * va.parity(v)) & 1 else 1
    lo, hi = -W, W + n_max
    data = []
    for x in probes:
        vx = va.y_modes(v, x, range(lo, hi + 1))
        ux = va.y_modes(u, x, range(lo, hi + 1))
        rng = range(lo, hi + 1)
        uvx, vux = {}, {}
        for n in rng:
            got = va.y_modes(u, vx[n], rng) if vx[n] else {}
            for m in rng:
                uvx[(m, n)] = got.get(m, FockState())
        for m in rng:
            got = va.y_modes(v, ux[m], rng) if ux[m] else {}
            for n in rng:
                vux[(m, n)] = got.get(n, FockState())
        data.append((uvx, vux))
    for N in range(n_max + 1):
        good = True
        for uvx, vux in data:
            for a in range(-W, W + 1):
                for b in range(-W, W + 1):
                    acc = FockState()
                    for k in range(N + 1):
                        m, n = a + N - k, b + k
                        cf = math.comb(N, k) * (-1) ** k
                        acc = acc + (uvx[(m, n)] - sgn * vux[(m, n)]) * cf
                    if acc:
                        good = False
                        break
                if not good:
                    break
            if not good:
                break
        if good:
            return {"ok": True, "N": N}
    return {"ok": False, "N": None}


def sample_states(va: VertexAlgebra, rng, count: int, depth: int = 2, radius: int = 1) -> list:
    """Seeded homogeneous monomials with sectors in the box and creation depth <= ``depth``."""
    from .cocycle import window_elements

    pool = [k for sec in window_elements(va.V.L.bplus, radius) for k in va.V.basis_upto(sec, depth)]
    return [FockState({rng.choice(pool): Fraction(1)}) for _ in range(count)]


def axiom_suite(
    va: VertexAlgebra,
    seed: int = 0,
    pairs: int = 50,
    z_window: int = 6,
    triples: int = 4,
    n_max: int = 8,
    assoc_window: int = 2,
    depth: int = 2,
) -> dict:
    """Vacuum/creation on a window basis, skew on seeded pairs, associativity and locality on triples."""
    import random

    from .cocycle import window_elements

    rng = random.Random(seed)
    V = va.V
    basis = [FockState({k: Fraction(1)}) for sec in window_elements(V.L.bplus, 1) for k in V.basis_upto(sec, 1)]
    vac_fail = [repr(next(iter(s.terms))) for s in basis if not check_vacuum_creation(va, s, z_window)["ok"]]
    skew_fail = []
    for u, w in zip(sample_states(va, rng, pairs, depth), sample_states(va, rng, pairs, depth)):
        r = check_skew(va, u, w, z_window)
        if not r["ok"]:
            skew_fail.append({"u": _show(u), "w": _show(w), "first": r["failures"][0]})
    assoc_N, assoc_fail = [], 0
    loc_N, loc_fail = [], 0
    for _ in range(triples):
        u, v, w = sample_states(va, rng, 3, 1)
        r = check_weak_assoc(va, u, v, w, n_max, assoc_window)
        assoc_N.append(r["N"])
        assoc_fail += not r["ok"]
        r = check_locality(va, u, v, [w], n_max, assoc_window)
        loc_N.append(r["N"])
        loc_fail += not r["ok"]
    return {
        "ok": not vac_fail and not skew_fail and not assoc_fail and not loc_fail,
        "seed": seed,
        "vacuum_creation": {"ok": not vac_fail, "states": len(basis), "failures": vac_fail[:5]},
        "skew": {"ok": not skew_fail, "pairs": pairs, "z_window": z_window, "failures": skew_fail[:3]},
        "weak_associativity": {"ok": not assoc_fail, "N": assoc_N, "n_max": n_max},
        "locality": {"ok": not loc_fail, "N": loc_N, "n_max": n_max},
    }
