"""Finitely generated abelian groups, integer bilinear forms and super-lattices.

Elements are plain tuples of ints: free coordinates first, then one
coordinate per torsion generator, reduced into ``[0, d)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "FGAbelianGroup",
    "IntBilinearForm",
    "SuperLattice",
    "pair",
    "apply_iota",
    "validate_superlattice",
    "lattice_from_dict",
    "load_lattice",
]


@dataclass(frozen=True)
class FGAbelianGroup:
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion orders must be >= 2")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def canon(self, x) -> tuple:
        x = tuple(int(c) for c in x)
        if len(x) != self.ngens:
            raise ValueError(f"element {x} has length {len(x)}, expected {self.ngens}")
        r = self.free_rank
        return x[:r] + tuple(c % d for c, d in zip(x[r:], self.torsion))

    def zero(self) -> tuple:
        return (0,) * self.ngens

    def add(self, x, y) -> tuple:
        return self.canon(a + b for a, b in zip(x, y))

    def neg(self, x) -> tuple:
        return self.canon(-a for a in x)

    def scale(self, k: int, x) -> tuple:
        return self.canon(k * a for a in x)

    def gen(self, k: int) -> tuple:
        e = [0] * self.ngens
        e[k] = 1
        return tuple(e)


@dataclass(frozen=True)
class IntBilinearForm:
    group: FGAbelianGroup
    matrix: tuple
    kind: str = "symmetric"

    def __post_init__(self):
        m = tuple(tuple(int(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if self.kind not in ("symmetric", "antisymmetric"):
            raise ValueError(f"unknown symmetry tag {self.kind!r}")
        n = self.group.ngens
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError(f"form must be a {n}x{n} matrix")

    def free_block(self) -> tuple:
        r = self.group.free_rank
        return tuple(row[:r] for row in self.matrix[:r])

    def violations(self) -> list:
        out = []
        m, n, r = self.matrix, self.group.ngens, self.group.free_rank
        sgn = 1 if self.kind == "symmetric" else -1
        for i in range(n):
            for j in range(n):
                if m[i][j] != sgn * m[j][i]:
                    out.append({"kind": "symmetry", "at": [i, j]})
                    break
            else:
                continue
            break
        if self.kind == "antisymmetric" and any(m[i][i] for i in range(n)):
            out.append({"kind": "symmetry", "at": "diagonal"})
        for k in range(r, n):
            if any(m[k]) or any(row[k] for row in m):
                out.append({"kind": "torsion-kill", "at": k})
        return out


def pair(form: IntBilinearForm, x, y) -> int:
    """Evaluate ``x^T M y`` on free coordinates."""
    n = form.group.ngens
    if len(x) != n or len(y) != n:
        raise ValueError("dimension mismatch")
    r = form.group.free_rank
    m = form.matrix
    return sum(x[i] * m[i][j] * y[j] for i in range(r) if x[i] for j in range(r) if y[j])


@dataclass(frozen=True)
class SuperLattice:
    even: IntBilinearForm
    odd: IntBilinearForm
    bplus: FGAbelianGroup
    iota: tuple  # rows indexed by generators of A+, columns by generators of B+
    even_names: tuple = ()
    odd_names: tuple = ()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "iota", tuple(tuple(int(c) for c in row) for row in self.iota))
        if not self.even_names:
            names = tuple(f"v{k + 1}" for k in range(self.even.group.free_rank))
            object.__setattr__(self, "even_names", names)
        if not self.odd_names:
            names = tuple(f"w{k + 1}" for k in range(self.odd.group.free_rank))
            object.__setattr__(self, "odd_names", names)
        if len(self.iota) != self.even.group.ngens or any(
            len(row) != self.bplus.ngens for row in self.iota
        ):
            raise ValueError("iota must be an (ngens A+) x (ngens B+) matrix")

    @property
    def rank_even(self) -> int:
        return self.even.group.free_rank

    @property
    def rank_odd(self) -> int:
        return self.odd.group.free_rank

    def gram(self) -> tuple:
        """The integer matrix of chi+(iota e_i, iota e_j) on generators of B+."""
        nb = self.bplus.ngens
        cols = [apply_iota(self, self.bplus.gen(k)) for k in range(nb)]
        return tuple(tuple(pair(self.even, cols[i], cols[j]) for j in range(nb)) for i in range(nb))


def apply_iota(L: SuperLattice, beta) -> tuple:
    if len(beta) != L.bplus.ngens:
        raise ValueError("dimension mismatch")
    image = (sum(row[j] * beta[j] for j in range(len(beta))) for row in L.iota)
    return L.even.group.canon(image)


def validate_superlattice(L: SuperLattice) -> list:
    out = []
    if L.even.kind != "symmetric":
        out.append({"kind": "symmetry", "part": "even", "detail": "even form must be symmetric"})
    if L.odd.kind != "antisymmetric":
        out.append({"kind": "symmetry", "part": "odd", "detail": "odd form must be antisymmetric"})
    for part, form in (("even", L.even), ("odd", L.odd)):
        for v in form.violations():
            out.append(dict(v, part=part))
    A = L.even.group
    for k, d in enumerate(L.bplus.torsion):
        col = L.bplus.free_rank + k
        img = [row[col] * d for row in L.iota]
        if A.canon(img) != A.zero():
            out.append({"kind": "iota-hom", "at": col, "detail": f"order {d} not respected"})
    if len(L.even_names) != A.free_rank or len(L.odd_names) != L.odd.group.free_rank:
        out.append({"kind": "names", "detail": "name list length mismatch"})
    return out


def _group(spec: dict) -> FGAbelianGroup:
    return FGAbelianGroup(int(spec.get("free_rank", 0)), tuple(spec.get("torsion", ())))


def _form(group: FGAbelianGroup, spec: dict, kind: str) -> IntBilinearForm:
    n = group.ngens
    m = spec.get("form") or [[0] * n for _ in range(n)]
    return IntBilinearForm(group, m, spec.get("kind", kind))


def lattice_from_dict(data: dict) -> SuperLattice:
    """Build a super-lattice from the JSON description.

    Missing parts default to the zero group; a missing ``bplus`` means
    ``B+ = A+`` with ``iota`` the identity.
    """
    even_spec = data.get("even", {"free_rank": 0})
    odd_spec = data.get("odd", {"free_rank": 0})
    A = _group(even_spec)
    Am = _group(odd_spec)
    if "bplus" in data:
        B = _group(data["bplus"])
        iota = data.get("iota")
        if iota is None:
            raise ValueError("iota is required when bplus is given")
    else:
        B = A
        iota = [[int(i == j) for j in range(A.ngens)] for i in range(A.ngens)]
    return SuperLattice(
        even=_form(A, even_spec, "symmetric"),
        odd=_form(Am, odd_spec, "antisymmetric"),
        bplus=B,
        iota=iota,
        even_names=tuple(even_spec.get("names", ())),
        odd_names=tuple(odd_spec.get("names", ())),
    )


def load_lattice(path) -> SuperLattice:
    return lattice_from_dict(json.loads(Path(path).read_text()))
