"""Cross-checks between the Fock-space algebra and the geometric algebra.

The identification sends ``u_{alpha,v,i}`` to ``b_{-i}(v) e^alpha`` for even
``v`` and to ``f_{-i}(v) e^alpha`` for odd ``v``.
"""

from __future__ import annotations

import random
import time

from .cocycle import RawCocycle, WindowError, cohomologous, twist, window_elements
from .fock import FockSpace, FockState
from .geometry import VarietyModel
from .homology import HClass, HomologySpace, mono_mul
from .vertex import VertexAlgebra

__all__ = [
    "SideMap",
    "Sides",
    "compare_fields",
    "spanning_check",
    "epsilon_independence",
    "random_coboundary",
]


class SideMap:
    def __init__(self, M: VarietyModel):
        self.parity = tuple(c.parity for c in M.kbasis)
        self.ev = {q: k for k, q in enumerate(M.even)}
        self.od = {q: k for k, q in enumerate(M.odd)}
        self.ev_inv = dict(enumerate(M.even))
        self.od_inv = dict(enumerate(M.odd))

    def to_fock(self, eta: HClass) -> FockState:
        out = FockState()
        for (alpha, m), c in eta.items():
            bos, fer = [], []
            for q, i, n in m:
                if self.parity[q]:
                    fer.append((self.od[q], i))
                else:
                    bos.extend([(self.ev[q], i)] * n)
            out = out + FockState.monomial(alpha, bos, fer, c)
        return out

    def to_hclass(self, s: FockState) -> HClass:
        out = {}
        for (alpha, b, f), c in s.items():
            m = tuple(sorted((self.ev_inv[v], i, n) for v, i, n in b))
            sign = 1
            for w, j in f:
                sg, m = mono_mul(self.parity, m, ((self.od_inv[w], j, 1),))
                sign *= sg
            if sign:
                key = (alpha, m)
                out[key] = out.get(key, 0) + sign * c
        return HClass(out)


class Sides:
    """Both algebras for one variety model, variant and cocycle."""

    def __init__(self, M: VarietyModel, variant: str = "cy", eps=None, koszul: str = "printed"):
        self.M = M
        self.variant = variant
        self.hs = HomologySpace(M, variant, eps)
        self.eps = self.hs.eps
        self.L = self.hs.L
        self.V = FockSpace(self.L)
        self.va = VertexAlgebra(self.V, self.eps, koszul)
        self.map = SideMap(M)

    def generators(self) -> list:
        """``(label, HClass)`` for ``u_{0,v,1}`` and the sector units ``1_{+-e_k}``."""
        hs = self.hs
        zero = hs.B.zero()
        gens = [(f"u(0;{c.name},1)", hs.u(zero, [(q, 1)])) for q, c in enumerate(self.M.kbasis)]
        for k in range(hs.B.ngens):
            signs = (1, -1) if k < hs.B.free_rank else (1,)
            for s in signs:
                e = [0] * hs.B.ngens
                e[k] = s
                gens.append((f"1{list(hs.B.canon(e))}", hs.unit(e)))
        return gens

    def box(self, radius: int) -> list:
        return window_elements(self.hs.B, radius)

    def basis(self, radius: int, depth: int) -> list:
        return [k for sec in self.box(radius) for k in self.V.basis_upto(sec, depth)]

    def compare_pair(self, u: HClass, w: HClass, modes) -> list:
        """Modes where the two sides differ, with both values."""
        geo = self.hs.joyce_modes(u, w, modes)
        fk = self.va.y_modes(self.map.to_fock(u), self.map.to_fock(w), modes)
        bad = []
        for n in modes:
            other = self.map.to_hclass(fk[n])
            if other != geo[n]:
                bad.append((n, other, geo[n]))
        return bad


def _show(eta: HClass) -> dict:
    return {f"{list(a)}|{list(m)}": str(c) for (a, m), c in sorted(eta.items())}


def spanning_check(sides: Sides, radius: int, depth: int, limit=None) -> dict:
    """Rebuild each window basis monomial from the vacuum using generator modes.

    Sector steps use the lowest nonzero mode of ``1_{+-e_k}``; creators use
    negative modes of ``u_{0,v,1}``. Both algebras must produce the same
    nonzero multiple of the target.
    """
    hs, V, va, mp = sides.hs, sides.V, sides.va, sides.map
    B = hs.B
    zero = B.zero()
    unit_steps = {}
    for k in range(B.ngens):
        for s in (1, -1):
            e = [0] * B.ngens
            e[k] = s
            unit_steps[(k, s)] = hs.unit(e)
    gen = {q: hs.u(zero, [(q, 1)]) for q in range(hs.nq)}
    targets = sides.basis(radius, depth)
    if limit is not None:
        targets = targets[:limit]
    failures = []
    for key in targets:
        sector, bos, ferm = key
        g_state = hs.unit(zero)
        f_state = V.vacuum()
        cur = zero
        steps = []
        for k in range(B.ngens):
            c = sector[k]
            s = 1 if c >= 0 else -1
            if k >= B.free_rank:
                s = 1
            steps += [(k, s)] * abs(c)
        for k, s in steps:
            g = unit_steps[(k, s)]
            (step_sector,) = {a for a, _ in g.terms}
            n = -1 - hs.chi_sectors(step_sector, cur)
            g_state = hs.joyce_mode(g, n, g_state)
            f_state = va.y_mode(mp.to_fock(g), n, f_state)
            cur = B.add(cur, step_sector)
        creators = []
        for v, i, n in bos:
            creators += [(mp.ev_inv[v], i)] * n
        creators += [(mp.od_inv[w], j) for w, j in ferm]
        for q, i in reversed(creators):
            g_state = hs.joyce_mode(gen[q], -i, g_state)
            f_state = va.y_mode(mp.to_fock(gen[q]), -i, f_state)
        ok = len(f_state) == 1 and key in f_state.terms and mp.to_hclass(f_state) == g_state
        if not ok:
            failures.append({"target": repr(key), "fock": repr(f_state), "geometric": _show(g_state)})
    return {"ok": not failures, "checked": len(targets), "failures": failures[:5]}


def compare_fields(
    M: VarietyModel,
    variant: str = "cy",
    eps=None,
    max_mode: int = 5,
    depth: int = 3,
    sector_window: int = 1,
    seed: int = 0,
    per_sector: int = 6,
    random_pairs: int = 20,
    pair_depth: int = 2,
    spanning: bool = True,
) -> dict:
    """Generator-level comparison of the two algebras on a finite window.

    Sampled ``w``: every monomial of creation depth <= 1 in the sector box,
    plus ``per_sector`` seeded monomials of depth <= ``depth`` per sector.
    """
    t0 = time.time()
    sides = Sides(M, variant, eps)
    rng = random.Random(seed)
    modes = list(range(-max_mode, max_mode + 1))
    ws = []
    for sec in sides.box(sector_window):
        low = sides.V.basis_upto(sec, min(depth, 1))
        seen = set(low)
        high = [k for k in sides.V.basis_upto(sec, depth) if k not in seen]
        pick = rng.sample(high, min(per_sector, len(high)))
        ws += low + pick
    ws = [sides.map.to_hclass(FockState({k: 1})) for k in ws]
    gens = sides.generators()
    first = None
    cases = 0
    for label, g in gens:
        for w in ws:
            bad = sides.compare_pair(g, w, modes)
            cases += len(modes)
            if bad and first is None:
                n, fk, geo = bad[0]
                first = {"u": label, "w": _show(w), "n": n, "fock": _show(fk), "geometric": _show(geo)}
    # end-to-end spot checks on non-generator pairs
    pool = sides.basis(sector_window, pair_depth)
    pool = [k for k in pool if sum(n for _, _, n in k[1]) + len(k[2]) >= 1]
    rp_bad = None
    rp_cases = 0
    for _ in range(random_pairs):
        u = sides.map.to_hclass(FockState({rng.choice(pool): 1}))
        w = sides.map.to_hclass(FockState({rng.choice(pool): 1}))
        bad = sides.compare_pair(u, w, modes)
        rp_cases += len(modes)
        if bad and rp_bad is None:
            n, fk, geo = bad[0]
            rp_bad = {"u": _show(u), "w": _show(w), "n": n, "fock": _show(fk), "geometric": _show(geo)}
    span = spanning_check(sides, sector_window, depth) if spanning else {"ok": True, "checked": 0, "skipped": True}
    odd = [c.name for c in M.kbasis if c.parity]
    ok = first is None and rp_bad is None and span["ok"]
    return {
        "ok": ok,
        "model": M.name,
        "variant": variant,
        "epsilon": sides.eps.to_json() if hasattr(sides.eps, "to_json") else None,
        "forms": {
            "even": [list(r) for r in sides.L.even.matrix],
            "odd": [list(r) for r in sides.L.odd.matrix],
        },
        "generators": [label for label, _ in gens],
        "odd_generators": len(odd),
        "window": {"max_mode": max_mode, "depth": depth, "sector_window": sector_window, "seed": seed},
        "generator_cases": cases,
        "sampled_states": len(ws),
        "first_mismatch": first,
        "random_pairs": {"ok": rp_bad is None, "pairs": random_pairs, "cases": rp_cases, "first_mismatch": rp_bad},
        "spanning": span,
        "seconds": round(time.time() - t0, 3),
    }


def random_coboundary(group, radius: int, rng: random.Random) -> dict:
    eta = {}
    for e in window_elements(group, radius):
        eta[e] = 1 if e == group.zero() else rng.choice((1, -1))
    return eta


def _rescale_fock(s: FockState, eta: dict) -> FockState:
    return FockState({k: c * eta[k[0]] for k, c in s.items()})


def _rescale_h(e: HClass, eta: dict) -> HClass:
    return HClass({k: c * eta[k[0]] for k, c in e.items()})


def epsilon_independence(
    M: VarietyModel,
    eps=None,
    eta: dict | None = None,
    target=None,
    variant: str = "cy",
    radius: int = 2,
    max_mode: int = 4,
    depth: int = 2,
    samples: int = 30,
    seed: int = 0,
) -> dict:
    """Check that ``e^a x -> eta(a) e^a x`` intertwines the algebras of ``eps`` and ``twist(eps, eta)``.

    Either ``eta`` or a second cocycle ``target`` is given; for a target the
    witness ``eta`` is solved for, and the check is refused when none exists.
    """
    base = Sides(M, variant, eps)
    B = base.hs.B
    if eta is None:
        if target is None:
            raise ValueError("give eta or a target cocycle")
        eta = cohomologous(base.eps, target, base.L, radius)
        if eta is None:
            return {"ok": False, "refused": True, "reason": "cocycles are not cohomologous on the window"}
    eta = {B.canon(k): int(v) for k, v in eta.items()}
    eps2 = twist(base.eps, eta, B)
    other = Sides(M, variant, eps2)
    rng = random.Random(seed)
    half = max(radius // 2, 0)
    pool = base.basis(half, depth)
    gens = [g for _, g in base.generators()]
    modes = list(range(-max_mode, max_mode + 1))
    checked = 0
    failures = []
    us = gens + [base.map.to_hclass(FockState({rng.choice(pool): 1})) for _ in range(samples)]
    ws = [base.map.to_hclass(FockState({rng.choice(pool): 1})) for _ in range(samples)]
    for u in us:
        for w in ws:
            try:
                f1 = base.va.y_modes(base.map.to_fock(u), base.map.to_fock(w), modes)
                f2 = other.va.y_modes(
                    _rescale_fock(base.map.to_fock(u), eta), _rescale_fock(base.map.to_fock(w), eta), modes
                )
                g1 = base.hs.joyce_modes(u, w, modes)
                g2 = other.hs.joyce_modes(_rescale_h(u, eta), _rescale_h(w, eta), modes)
            except (WindowError, KeyError) as exc:
                failures.append({"error": f"outside twist window: {exc}"})
                continue
            for n in modes:
                checked += 1
                if _rescale_fock(f1[n], eta) != f2[n] or _rescale_h(g1[n], eta) != g2[n]:
                    if len(failures) < 5:
                        failures.append({"u": _show(u), "w": _show(w), "n": n})
    return {
        "ok": not failures,
        "refused": False,
        "cases": checked,
        "eta_nontrivial": sum(1 for v in eta.values() if v == -1),
        "failures": failures,
        "twisted_table": isinstance(eps2, RawCocycle),
    }
