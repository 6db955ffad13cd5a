"""Sign cocycles on the sector group B+.

A cocycle here is anything callable as ``eps(alpha, beta) -> +1 | -1``.
:class:`SignCocycle` is the bimultiplicative closed form
``eps(a, b) = prod s_ij ** (a_i b_j)``; :class:`RawCocycle` is a finite
table, which is what a coboundary twist produces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .abelian import FGAbelianGroup, SuperLattice

__all__ = [
    "TorsionObstruction",
    "WindowError",
    "SignCocycle",
    "RawCocycle",
    "build_epsilon",
    "form_cocycle",
    "window_elements",
    "verify_cocycle",
    "twist",
    "cohomologous",
    "coboundary_sign",
]


class TorsionObstruction(ValueError):
    pass


class WindowError(KeyError):
    pass


@dataclass(frozen=True)
class SignCocycle:
    group: FGAbelianGroup
    signs: tuple

    def __post_init__(self):
        s = tuple(tuple(int(c) for c in row) for row in self.signs)
        n = self.group.ngens
        if len(s) != n or any(len(row) != n for row in s):
            raise ValueError("sign matrix has wrong shape")
        if any(c not in (1, -1) for row in s for c in row):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", s)
        odd = [d % 2 for d in self.group.torsion]
        r = self.group.free_rank
        for k, is_odd in enumerate(odd):
            t = r + k
            if is_odd and (-1 in s[t] or any(row[t] == -1 for row in s)):
                raise TorsionObstruction(
                    f"sign on torsion generator {t} of odd order {self.group.torsion[k]} "
                    "is not well defined"
                )
        object.__setattr__(self, "_neg", tuple(
            (i, j) for i in range(n) for j in range(n) if s[i][j] == -1
        ))

    def __call__(self, a, b) -> int:
        p = 0
        for i, j in self._neg:
            p += a[i] * b[j]
        return -1 if p & 1 else 1

    def parity_matrix(self) -> np.ndarray:
        return (np.array(self.signs, dtype=np.int64) == -1).astype(np.int64)

    def to_json(self) -> dict:
        return {"kind": "bimultiplicative", "signs": [list(r) for r in self.signs]}


class RawCocycle:
    """A sign table on finitely many pairs of sectors."""

    def __init__(self, group: FGAbelianGroup, values: dict, window: int):
        self.group = group
        self.window = window
        self.values = {(group.canon(a), group.canon(b)): int(v) for (a, b), v in values.items()}

    def __call__(self, a, b) -> int:
        key = (tuple(a), tuple(b))
        try:
            return self.values[key]
        except KeyError:
            raise WindowError(f"pair {key} outside the table window {self.window}") from None

    def to_json(self) -> dict:
        rows = [[list(a), list(b), v] for (a, b), v in sorted(self.values.items())]
        return {"kind": "table", "window": self.window, "entries": rows}


def build_epsilon(L: SuperLattice) -> SignCocycle:
    """Standard ordered-basis solution of the cocycle equations."""
    g = L.gram()
    n = L.bplus.ngens
    s = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            if (g[i][j] + g[i][i] * g[j][j]) % 2:
                s[i][j] = -1
    return SignCocycle(L.bplus, s)


def form_cocycle(group: FGAbelianGroup, matrix) -> SignCocycle:
    """The cocycle ``(-1)^{M(a, b)}`` of an integer matrix on generators."""
    return SignCocycle(group, [[-1 if c % 2 else 1 for c in row] for row in matrix])


def window_elements(group: FGAbelianGroup, k: int) -> list:
    ranges = [range(-k, k + 1)] * group.free_rank + [range(d) for d in group.torsion]
    return [tuple(x) for x in itertools.product(*ranges)]


class _Indexer:
    """Mixed-radix index of the elements with free coordinates in [-R, R]."""

    def __init__(self, group: FGAbelianGroup, radius: int):
        self.R = radius
        self.radices = [2 * radius + 1] * group.free_rank + list(group.torsion)
        self.offsets = [radius] * group.free_rank + [0] * len(group.torsion)
        self.size = int(np.prod(self.radices)) if self.radices else 1

    def index(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for k, (rad, off) in enumerate(zip(self.radices, self.offsets)):
            idx = idx * rad + (coords[..., k] + off)
        return idx


def _sign_array(eps, group: FGAbelianGroup, elems: np.ndarray) -> np.ndarray:
    """Matrix of eps values on ``elems``; 0 marks pairs outside a table."""
    if isinstance(eps, SignCocycle):
        P = eps.parity_matrix()
        par = (elems @ P @ elems.T) % 2
        return (1 - 2 * par).astype(np.int8)
    n = len(elems)
    out = np.zeros((n, n), dtype=np.int8)
    tup = [tuple(int(c) for c in e) for e in elems]
    for i, a in enumerate(tup):
        for j, b in enumerate(tup):
            try:
                out[i, j] = eps(a, b)
            except WindowError:
                pass
    return out


def verify_cocycle(eps, L: SuperLattice, window: int, max_report: int = 10) -> dict:
    """Exhaustively check the three cocycle equations on a coordinate window."""
    G = L.bplus
    small = np.array(window_elements(G, window), dtype=np.int64).reshape(-1, G.ngens)
    big_list = window_elements(G, 2 * window)
    big = np.array(big_list, dtype=np.int64).reshape(-1, G.ngens)
    ix = _Indexer(G, 2 * window)
    E = _sign_array(eps, G, big)
    gram = np.array(L.gram(), dtype=np.int64).reshape(G.ngens, G.ngens)
    tors = np.array(G.torsion, dtype=np.int64)
    r = G.free_rank

    def reduce(c):
        if len(tors):
            c = c.copy()
            c[..., r:] %= tors
        return c

    si = ix.index(small)
    S = ix.index(reduce(small[:, None, :] + small[None, :, :]))
    zero = ix.index(np.zeros((1, G.ngens), dtype=np.int64))[0]
    violations = []
    checked = 0
    skipped = 0

    def note(kind, *elts):
        if len(violations) < max_report:
            violations.append({"equation": kind, "at": [[int(c) for c in e] for e in elts]})

    # normalisation
    for k, e in enumerate(small):
        for val in (E[si[k], zero], E[zero, si[k]]):
            if val == 0:
                skipped += 1
                continue
            checked += 1
            if val != 1:
                note("normalization", e)
                break
    # graded symmetry
    g = (small @ gram @ small.T) % 2
    d = np.diag(g)
    expo = (g + np.outer(d, d)) % 2
    lhs = E[np.ix_(si, si)].astype(np.int64)
    rhs = (1 - 2 * expo) * E[np.ix_(si, si)].T
    known = (lhs != 0) & (rhs != 0)
    checked += int(known.sum())
    skipped += int((~known).sum())
    for a, b in np.argwhere(known & (lhs != rhs)):
        note("graded-symmetry", small[a], small[b])
    # 2-cocycle identity eps(a,b) eps(a+b,c) = eps(a,b+c) eps(b,c); axes (a,b,c)
    A = si[:, None, None]
    B = si[None, :, None]
    C = si[None, None, :]
    BC = S[None, :, :]
    AB = S[:, :, None]
    left = E[A, B].astype(np.int64) * E[AB, C]
    right = E[A, BC].astype(np.int64) * E[B, C]
    known = (left != 0) & (right != 0)
    checked += int(known.sum())
    skipped += int(known.size - known.sum())
    bad = np.argwhere(known & (left != right))
    for a, b, c in bad[: max_report]:
        note("cocycle", small[a], small[b], small[c])
    nbad = len(violations)
    return {
        "ok": nbad == 0,
        "window": window,
        "checked": checked,
        "skipped": skipped,
        "violations": violations,
    }


def coboundary_sign(eta, a, b, group: FGAbelianGroup) -> int:
    return eta[a] * eta[b] * eta[group.add(a, b)]


def twist(eps, eta: dict, group: FGAbelianGroup) -> RawCocycle:
    """Multiply ``eps`` by the coboundary of ``eta`` wherever it is defined.

    ``eta`` maps canonical sector tuples to +1/-1 and must send 0 to +1.
    The resulting table covers the pairs ``(a, b)`` with ``a``, ``b`` and
    ``a + b`` all in the domain of ``eta``.
    """
    eta = {group.canon(k): int(v) for k, v in eta.items()}
    if eta.get(group.zero(), 1) != 1:
        raise ValueError("eta(0) must be 1")
    eta.setdefault(group.zero(), 1)
    radius = max((max((abs(c) for c in k[: group.free_rank]), default=0) for k in eta), default=0)
    values = {}
    for a in eta:
        for b in eta:
            ab = group.add(a, b)
            if ab in eta:
                values[(a, b)] = eps(a, b) * eta[a] * eta[b] * eta[ab]
    return RawCocycle(group, values, radius)


def _solve_gf2(rows: list, nvars: int):
    """Solve a GF(2) system given as (bitmask, rhs) rows; None if inconsistent."""
    pivots = {}
    for mask, rhs in rows:
        for col, (pmask, prhs) in pivots.items():
            if mask >> col & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                return None
            continue
        col = mask.bit_length() - 1
        for c, (pm, pr) in list(pivots.items()):
            if pm >> col & 1:
                pivots[c] = (pm ^ mask, pr ^ rhs)
        pivots[col] = (mask, rhs)
    x = [0] * nvars
    for col, (mask, rhs) in pivots.items():
        # free variables are 0, so the pivot takes the right-hand side
        x[col] = rhs
    return x


def cohomologous(eps1, eps2, L: SuperLattice, window: int):
    """Find ``eta`` with ``twist(eps1, eta) == eps2`` on the window, or None."""
    G = L.bplus
    elems = window_elements(G, window)
    zero = G.zero()
    unknown = [e for e in elems if e != zero]
    pos = {e: k for k, e in enumerate(unknown)}
    rows = []
    for a in elems:
        for b in elems:
            ab = G.add(a, b)
            if ab not in pos and ab != zero:
                continue
            mask = 0
            for e in (a, b, ab):
                if e != zero:
                    mask ^= 1 << pos[e]
            rhs = 0 if eps1(a, b) == eps2(a, b) else 1
            rows.append((mask, rhs))
    sol = _solve_gf2(rows, len(unknown))
    if sol is None:
        return None
    eta = {zero: 1}
    for e, bit in zip(unknown, sol):
        eta[e] = -1 if bit else 1
    return eta
