"""Exact lattice vertex algebras and Joyce's vertex algebra on Chern-character models."""

from .abelian import FGAbelianGroup, IntBilinearForm, SuperLattice, lattice_from_dict, load_lattice
from .cocycle import RawCocycle, SignCocycle, build_epsilon, cohomologous, twist, verify_cocycle
from .fock import FockSpace, FockState
from .geometry import VarietyModel, builtin, euler, euler_sym, load_variety, superlattice_of
from .homology import HClass, HomologySpace
from .vertex import VertexAlgebra

__version__ = "0.1.0"

__all__ = [
    "FGAbelianGroup",
    "IntBilinearForm",
    "SuperLattice",
    "lattice_from_dict",
    "load_lattice",
    "SignCocycle",
    "RawCocycle",
    "build_epsilon",
    "verify_cocycle",
    "twist",
    "cohomologous",
    "FockSpace",
    "FockState",
    "VertexAlgebra",
    "VarietyModel",
    "builtin",
    "load_variety",
    "euler",
    "euler_sym",
    "superlattice_of",
    "HClass",
    "HomologySpace",
]
