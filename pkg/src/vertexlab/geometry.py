"""Finite models of rational cohomology, Chern characters and Euler forms.

A :class:`VarietyModel` is pure input data: a graded ring with an
integration functional, a Todd class and a basis of topological K-theory
given by Chern-character vectors. Euler forms are computed by
Hirzebruch-Riemann-Roch, ``chi(v, w) = int ch(v)^dual ch(w) Td``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .abelian import FGAbelianGroup, IntBilinearForm, SuperLattice

__all__ = [
    "CohomologyRing",
    "KClass",
    "VarietyModel",
    "ModelError",
    "dual_inv",
    "euler",
    "euler_sym",
    "euler_matrix",
    "superlattice_of",
    "effective_forms",
    "builtin",
    "builtin_names",
    "load_variety",
    "variety_from_dict",
]


class ModelError(ValueError):
    pass


def _q(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


@dataclass(frozen=True)
class CohomologyRing:
    names: tuple
    degrees: tuple
    table: tuple  # table[i][j] = coefficient vector of g_i * g_j
    integral: tuple
    dim: int

    @property
    def size(self) -> int:
        return len(self.names)

    def mul(self, x, y) -> tuple:
        n = self.size
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def integrate(self, x) -> Fraction:
        return sum((a * b for a, b in zip(x, self.integral) if a and b), Fraction(0))

    def unit(self) -> tuple:
        return tuple(Fraction(int(k == 0)) for k in range(self.size))

    def basis_vec(self, k) -> tuple:
        return tuple(Fraction(int(j == k)) for j in range(self.size))

    def violations(self) -> list:
        out = []
        n = self.size
        if self.degrees[0] != 0:
            out.append({"kind": "unit", "detail": "basis element 0 must have degree 0"})
        e = [self.basis_vec(k) for k in range(n)]
        for i in range(n):
            if self.mul(e[0], e[i]) != e[i] or self.mul(e[i], e[0]) != e[i]:
                out.append({"kind": "unit", "at": i})
        for i in range(n):
            for j in range(n):
                prod = self.table[i][j]
                for k, c in enumerate(prod):
                    if c and self.degrees[k] != self.degrees[i] + self.degrees[j]:
                        out.append({"kind": "grading", "at": [i, j]})
                sign = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                if tuple(sign * c for c in self.table[j][i]) != prod:
                    out.append({"kind": "graded-commutativity", "at": [i, j]})
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    a = self.mul(self.mul(e[i], e[j]), e[k])
                    b = self.mul(e[i], self.mul(e[j], e[k]))
                    if a != b:
                        out.append({"kind": "associativity", "at": [i, j, k]})
        for k in range(n):
            if self.integral[k] and self.degrees[k] != 2 * self.dim:
                out.append({"kind": "integration", "at": k})
        return out


@dataclass(frozen=True)
class KClass:
    name: str
    parity: int  # 0 for K^0, 1 for K^1
    ch: tuple


@dataclass(frozen=True)
class VarietyModel:
    name: str
    ring: CohomologyRing
    todd: tuple
    kbasis: tuple
    bplus_gens: tuple  # coordinates in the even part of kbasis
    bplus_torsion: tuple = ()
    cy2n: int | None = None
    source: dict = field(default=None, compare=False, hash=False)

    @property
    def even(self) -> list:
        return [k for k, c in enumerate(self.kbasis) if c.parity == 0]

    @property
    def odd(self) -> list:
        return [k for k, c in enumerate(self.kbasis) if c.parity == 1]

    def violations(self) -> list:
        out = list(self.ring.violations())
        if self.todd[0] != 1:
            out.append({"kind": "todd", "detail": "Td_0 must be 1"})
        for k, d in enumerate(self.ring.degrees):
            if self.todd[k] and d % 2:
                out.append({"kind": "todd", "detail": "Todd class must be even"})
        for c in self.kbasis:
            for k, a in enumerate(c.ch):
                if a and self.ring.degrees[k] % 2 != c.parity:
                    out.append({"kind": "parity", "at": c.name})
                    break
        ne = len(self.even)
        for g in self.bplus_gens:
            if len(g) != ne:
                out.append({"kind": "bplus", "detail": "generator length mismatch"})
        mat = euler_matrix(self)
        for i in range(len(self.kbasis)):
            for j in range(len(self.kbasis)):
                if mat[i][j].denominator != 1:
                    out.append({"kind": "integrality", "at": [i, j]})
        if self.cy2n is not None:
            if self.ring.dim % 2:
                out.append({"kind": "cy", "detail": "2n-Calabi-Yau needs even dimension"})
            for i in self.even:
                for j in self.even:
                    if mat[i][j] != mat[j][i]:
                        out.append({"kind": "cy", "at": [i, j]})
        return out


def _sign(deg: int) -> int:
    return -1 if (deg // 2) % 2 else 1


def dual_inv(ring: CohomologyRing, c) -> tuple:
    """The involution: degree 2k and 2k+1 components are multiplied by (-1)^k."""
    return tuple(a * _sign(d) if a else a for a, d in zip(c, ring.degrees))


def _ch(M: VarietyModel, v) -> tuple:
    if isinstance(v, int):
        return M.kbasis[v].ch
    v = tuple(_q(a) for a in v)
    if len(v) == len(M.kbasis):
        out = [Fraction(0)] * M.ring.size
        for a, c in zip(v, M.kbasis):
            if a:
                for k, x in enumerate(c.ch):
                    out[k] += a * x
        return tuple(out)
    raise ValueError("class must be a K-basis index or a coordinate vector")


def euler(M: VarietyModel, v, w) -> Fraction:
    R = M.ring
    return R.integrate(R.mul(R.mul(dual_inv(R, _ch(M, v)), _ch(M, w)), M.todd))


def euler_sym(M: VarietyModel, v, w) -> Fraction:
    return euler(M, v, w) + euler(M, w, v)


def euler_matrix(M: VarietyModel, sym: bool = False) -> list:
    f = euler_sym if sym else euler
    n = len(M.kbasis)
    return [[f(M, i, j) for j in range(n)] for i in range(n)]


def effective_forms(M: VarietyModel, variant: str):
    """The (even, odd) Gram matrices carried by the super-lattice of ``M``.

    Odd block: chi in both variants. Even block: chi for a 2n-Calabi-Yau
    model in the ``cy`` variant, otherwise chi_sym (the only symmetric
    choice when chi is not symmetric on K^0).
    """
    if variant not in ("cy", "general"):
        raise ValueError("variant must be 'cy' or 'general'")
    chi = euler_matrix(M)
    ev, od = M.even, M.odd
    use_chi = variant == "cy" and M.cy2n is not None
    if use_chi:
        even = [[chi[i][j] for j in ev] for i in ev]
    else:
        even = [[chi[i][j] + chi[j][i] for j in ev] for i in ev]
    odd = [[chi[i][j] for j in od] for i in od]
    return even, odd


def superlattice_of(M: VarietyModel, variant: str = "cy") -> SuperLattice:
    even, odd = effective_forms(M, variant)
    for row in even + odd:
        for c in row:
            if c.denominator != 1:
                raise ModelError("Euler form is not integral on the K-basis")
    ne, no = len(M.even), len(M.odd)
    A = FGAbelianGroup(ne)
    Am = FGAbelianGroup(no)
    B = FGAbelianGroup(len(M.bplus_gens) - len(M.bplus_torsion), tuple(M.bplus_torsion))
    iota = [[int(g[r]) for g in M.bplus_gens] for r in range(ne)]
    return SuperLattice(
        even=IntBilinearForm(A, [[int(c) for c in row] for row in even], "symmetric"),
        odd=IntBilinearForm(Am, [[int(c) for c in row] for row in odd], "antisymmetric"),
        bplus=B,
        iota=iota,
        even_names=tuple(M.kbasis[k].name for k in M.even),
        odd_names=tuple(M.kbasis[k].name for k in M.odd),
        meta={"variety": M.name, "variant": variant},
    )


# ---------------------------------------------------------------------
# loading


def variety_from_dict(data: dict) -> VarietyModel:
    try:
        coh = data["cohomology"]
        basis = coh["basis"]
        names = tuple(b["name"] for b in basis)
        degs = tuple(int(b["deg"]) for b in basis)
        n = len(names)
        table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k in range(n):
            table[0][k][k] = Fraction(1)
            table[k][0][k] = Fraction(1)
        for i, j, coeffs in coh.get("mul", []):
            if len(coeffs) != n:
                raise ModelError(f"product ({i},{j}) has {len(coeffs)} coefficients, expected {n}")
            table[i][j] = [_q(c) for c in coeffs]
        integral = tuple(_q(c) for c in coh["integrate"])
        ring = CohomologyRing(
            names, degs, tuple(tuple(tuple(v) for v in row) for row in table), integral, int(data["dim"])
        )
        todd = tuple(_q(c) for c in data["todd"])
        kb = tuple(
            KClass(k["name"], 1 if k["parity"] in (1, "odd", "1") else 0, tuple(_q(c) for c in k["ch"]))
            for k in data["kbasis"]
        )
        if any(len(k.ch) != n for k in kb) or len(todd) != n or len(integral) != n:
            raise ModelError("vector length does not match the cohomology basis")
        ne = sum(1 for k in kb if k.parity == 0)
        bp = data.get("bplus") or {"gens": [[int(i == j) for j in range(ne)] for i in range(ne)]}
        M = VarietyModel(
            name=data.get("name", "unnamed"),
            ring=ring,
            todd=todd,
            kbasis=kb,
            bplus_gens=tuple(tuple(int(c) for c in g) for g in bp["gens"]),
            bplus_torsion=tuple(bp.get("torsion", ())),
            cy2n=data.get("cy2n"),
            source=data,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ModelError(f"schema violation: {exc!r}") from exc
    bad = M.violations()
    if bad:
        raise ModelError(f"invalid model {M.name}: {bad[:5]}")
    return M


def load_variety(path) -> VarietyModel:
    p = str(path)
    if not Path(p).exists():
        try:
            return builtin(p)
        except KeyError:
            pass
    return variety_from_dict(json.loads(Path(p).read_text()))


def _mul_entries(pairs, n):
    out = []
    for i, j, k, c in pairs:
        v = [0] * n
        v[k] = c
        out.append([i, j, v])
    return out


def _curve(name: str, g: int) -> dict:
    basis = [{"name": "1", "deg": 0}]
    basis += [{"name": f"a{k + 1}", "deg": 1} for k in range(g)]
    basis += [{"name": f"b{k + 1}", "deg": 1} for k in range(g)]
    basis += [{"name": "pt", "deg": 2}]
    n = len(basis)
    top = n - 1
    pairs = []
    for k in range(g):
        a, b = 1 + k, 1 + g + k
        pairs.append((a, b, top, 1))
        pairs.append((b, a, top, -1))
    todd = [1] + [0] * (n - 2) + [1 - g]
    kb = [
        {"name": "O", "parity": 0, "ch": [1] + [0] * (n - 1)},
        {"name": "Opt", "parity": 0, "ch": [0] * (n - 1) + [1]},
    ]
    for k in range(g):
        kb.append({"name": f"A{k + 1}", "parity": 1, "ch": [int(j == 1 + k) for j in range(n)]})
        kb.append({"name": f"B{k + 1}", "parity": 1, "ch": [int(j == 1 + g + k) for j in range(n)]})
    return {
        "name": name,
        "dim": 1,
        "cohomology": {"basis": basis, "mul": _mul_entries(pairs, n), "integrate": [0] * (n - 1) + [1]},
        "todd": todd,
        "kbasis": kb,
        "bplus": {"gens": [[1, 0], [0, 1]], "torsion": []},
        "cy2n": None,
    }


def _builtin_dict(name: str) -> dict:
    if name == "p1":
        return {
            "name": "p1",
            "dim": 1,
            "cohomology": {
                "basis": [{"name": "1", "deg": 0}, {"name": "h", "deg": 2}],
                "mul": [],
                "integrate": [0, 1],
            },
            "todd": [1, 1],
            "kbasis": [
                {"name": "O", "parity": 0, "ch": [1, 0]},
                {"name": "O1", "parity": 0, "ch": [1, 1]},
            ],
            "bplus": {"gens": [[1, 0], [0, 1]], "torsion": []},
            "cy2n": None,
        }
    if name == "p2":
        return {
            "name": "p2",
            "dim": 2,
            "cohomology": {
                "basis": [{"name": "1", "deg": 0}, {"name": "H", "deg": 2}, {"name": "H2", "deg": 4}],
                "mul": [[1, 1, [0, 0, 1]]],
                "integrate": [0, 0, 1],
            },
            "todd": [1, "3/2", 1],
            "kbasis": [
                {"name": "O", "parity": 0, "ch": [1, 0, 0]},
                {"name": "OL", "parity": 0, "ch": [0, 1, "-1/2"]},
                {"name": "Opt", "parity": 0, "ch": [0, 0, 1]},
            ],
            "bplus": {"gens": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "torsion": []},
            "cy2n": None,
        }
    if name == "elliptic":
        d = _curve("elliptic", 1)
        d["kbasis"] = [d["kbasis"][0], d["kbasis"][1], dict(d["kbasis"][2], name="A"), dict(d["kbasis"][3], name="B")]
        return d
    if name.startswith("genus_g"):
        g = int(name[name.index("(") + 1: name.index(")")]) if "(" in name else 2
        return _curve(f"genus_g({g})", g)
    if name == "k3_reduced":
        # rank-4 piece of the Mukai lattice: O, two classes with ch = e, f
        # spanning a hyperbolic plane in H^2, and the point
        return {
            "name": "k3_reduced",
            "dim": 2,
            "cohomology": {
                "basis": [
                    {"name": "1", "deg": 0},
                    {"name": "e", "deg": 2},
                    {"name": "f", "deg": 2},
                    {"name": "pt", "deg": 4},
                ],
                "mul": [[1, 2, [0, 0, 0, 1]], [2, 1, [0, 0, 0, 1]]],
                "integrate": [0, 0, 0, 1],
            },
            "todd": [1, 0, 0, 2],
            "kbasis": [
                {"name": "O", "parity": 0, "ch": [1, 0, 0, 0]},
                {"name": "E", "parity": 0, "ch": [0, 1, 0, 0]},
                {"name": "F", "parity": 0, "ch": [0, 0, 1, 0]},
                {"name": "P", "parity": 0, "ch": [0, 0, 0, 1]},
            ],
            "bplus": {"gens": [[int(i == j) for j in range(4)] for i in range(4)], "torsion": []},
            "cy2n": 1,
        }
    raise KeyError(name)


def builtin_names() -> list:
    return ["p1", "p2", "elliptic", "genus_g(g)", "k3_reduced"]


def builtin(name: str) -> VarietyModel:
    return variety_from_dict(_builtin_dict(name))


def builtin_dict(name: str) -> dict:
    return _builtin_dict(name)
