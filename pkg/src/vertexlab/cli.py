"""Command-line front end.

Every command prints a JSON report on stdout and a one-line summary on
stderr. Exit codes: 0 success, 1 a check found violations, 2 usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .abelian import lattice_from_dict, validate_superlattice
from .cocycle import SignCocycle, build_epsilon, form_cocycle, verify_cocycle
from .compare import compare_fields, epsilon_independence, random_coboundary
from .fock import FockSpace
from .geometry import ModelError, euler_matrix, load_variety, superlattice_of
from .homology import HomologySpace, default_epsilon
from .parse import ParseError, format_fock, format_hclass, parse_state, to_fock, to_hclass
from .vertex import VertexAlgebra, axiom_suite

CONVENTIONS = {
    "bracket": "[b_m(v), b_n(w)] = m delta_{m+n,0} chi+(v,w); {f_m(v), f_n(w)} = m delta_{m+n,0} chi-(v,w)",
    "koszul": "x(x)y acting on x'(x)y' carries (-1)^((p(x)+p(y)) p(x')) unless --koszul standard",
    "grading": (
        "deg e^a x = deg x + 2 - chi+(a,a) with b_{-i} -> 2i, f_{-j} -> 2j - 1 (vacuum in degree 2); "
        "field-compatible grading deg x + chi+(a,a) with f_{-j} -> 2j"
    ),
    "cocycle": "eps(a,0) = eps(0,a) = 1; eps(a,b) eps(b,a) = (-1)^(chi+(a,b) + chi+(a,a) chi+(b,b)); "
    "eps(a,b) eps(a+b,c) = eps(a,b+c) eps(b,c)",
    "forms": "cy variant on a 2n-CY model: chi+ = chi; otherwise chi+ = chi_sym; chi- = chi on K^1",
    "mu0": "mu_{a,v,0} = a_v(a), the K-basis coordinate of the sector",
}


class UsageError(Exception):
    pass


def threads() -> int:
    """Worker cap from ``VERTEXLAB_THREADS`` (default 1)."""
    raw = os.environ.get("VERTEXLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items() if k != "seconds"}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _lattice(path):
    try:
        return lattice_from_dict(_read_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"bad lattice file {path}: {exc}") from exc


def _variety(spec):
    try:
        return load_variety(spec)
    except ModelError as exc:
        raise UsageError(str(exc)) from exc
    except OSError as exc:
        raise UsageError(f"cannot read variety {spec}: {exc}") from exc


def _epsilon(path, L):
    if path is None:
        return build_epsilon(L)
    data = _read_json(path)
    try:
        if "signs" in data:
            return SignCocycle(L.bplus, data["signs"])
        if "form" in data:
            return form_cocycle(L.bplus, data["form"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError("epsilon file needs 'signs' or 'form'")


def _parse(text):
    try:
        return parse_state(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc.msg if hasattr(exc, 'msg') else exc}") from exc


# ---------------------------------------------------------------------
# commands


def cmd_validate(a):
    if a.variety:
        M = _variety(a.variety)
        bad = M.violations()
        return {"kind": "variety", "name": M.name, "violations": bad, "ok": not bad}
    if not a.lattice:
        raise UsageError("validate needs --lattice or --variety")
    L = _lattice(a.lattice)
    bad = validate_superlattice(L)
    return {"kind": "lattice", "violations": bad, "ok": not bad}


def cmd_cocycle(a):
    if a.variety:
        M = _variety(a.variety)
        L = superlattice_of(M, a.variant)
        eps = default_epsilon(M, a.variant) if a.epsilon is None else _epsilon(a.epsilon, L)
    elif a.lattice:
        L = _lattice(a.lattice)
        eps = _epsilon(a.epsilon, L)
    else:
        raise UsageError("cocycle needs --lattice or --variety")
    r = verify_cocycle(eps, L, a.window)
    r["epsilon"] = eps.to_json()
    return r


def cmd_euler(a):
    M = _variety(a.variety)
    chi = euler_matrix(M)
    sym = euler_matrix(M, sym=True)
    integral = all(c.denominator == 1 for row in chi for c in row)
    odd = M.odd
    anti = all(chi[i][j] == -chi[j][i] for i in odd for j in odd)
    out = {
        "name": M.name,
        "basis": [c.name for c in M.kbasis],
        "chi": chi,
        "chi_sym": sym,
        "integral": integral,
        "odd_antisymmetric": anti,
        "ok": integral and anti,
    }
    if M.cy2n is not None:
        ev = M.even
        out["even_symmetric"] = all(chi[i][j] == chi[j][i] for i in ev for j in ev)
        out["ok"] = out["ok"] and out["even_symmetric"]
    return out


def cmd_mode(a):
    L = _lattice(a.lattice)
    V = FockSpace(L)
    va = VertexAlgebra(V, _epsilon(a.epsilon, L), a.koszul)
    try:
        u = to_fock(_parse(a.u), V)
        w = to_fock(_parse(a.w), V)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    r = va.y_mode(u, a.n, w)
    return {
        "u": format_fock(u, L),
        "w": format_fock(w, L),
        "n": a.n,
        "result": format_fock(r, L),
        "terms": len(r),
        "degree": V.degree(r) if r else None,
        "ok": True,
    }


def cmd_geomode(a):
    M = _variety(a.variety)
    hs = HomologySpace(M, a.variant)
    try:
        u = to_hclass(_parse(a.u), hs)
        w = to_hclass(_parse(a.w), hs)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    r = hs.joyce_mode(u, a.n, w)
    return {
        "u": format_hclass(u, hs),
        "w": format_hclass(w, hs),
        "n": a.n,
        "result": format_hclass(r, hs),
        "terms": len(r),
        "hat_degree": hs.hat_degree(r) if r else None,
        "ok": True,
    }


def cmd_axioms(a):
    if a.variety:
        M = _variety(a.variety)
        L = superlattice_of(M, a.variant)
        eps = default_epsilon(M, a.variant)
    elif a.lattice:
        L = _lattice(a.lattice)
        eps = _epsilon(a.epsilon, L)
    else:
        raise UsageError("axioms needs --lattice or --variety")
    bad = validate_superlattice(L)
    if bad:
        return {"ok": False, "violations": bad}
    va = VertexAlgebra(FockSpace(L), eps, a.koszul)
    r = axiom_suite(va, seed=a.seed, pairs=a.pairs, z_window=a.window, triples=a.triples)
    r["koszul"] = a.koszul
    return r


def cmd_compare(a):
    M = _variety(a.variety)
    kw = dict(max_mode=a.max_mode, depth=a.depth, sector_window=a.sector_window, seed=a.seed)
    return compare_fields(M, a.variant, **kw)


def cmd_independence(a):
    M = _variety(a.variety)
    hs = HomologySpace(M, a.variant)
    rng = random.Random(a.seed)
    runs = []
    jobs = [random_coboundary(hs.B, a.radius, rng) for _ in range(a.twists)]

    def one(eta):
        return epsilon_independence(M, eta=eta, variant=a.variant, radius=a.radius, max_mode=a.max_mode, seed=a.seed)

    n = threads()
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            args = [(a.variety, a.variant, eta, a.radius, a.max_mode, a.seed) for eta in jobs]
            runs = list(ex.map(_independence_job, args))
    else:
        runs = [one(eta) for eta in jobs]
    return {"ok": all(r["ok"] for r in runs), "twists": len(runs), "runs": runs}


def _independence_job(args):
    spec, variant, eta, radius, max_mode, seed = args
    return epsilon_independence(
        load_variety(spec), eta=eta, variant=variant, radius=radius, max_mode=max_mode, seed=seed
    )


COMMANDS = {
    "validate": cmd_validate,
    "cocycle": cmd_cocycle,
    "euler": cmd_euler,
    "mode": cmd_mode,
    "geomode": cmd_geomode,
    "axioms": cmd_axioms,
    "compare": cmd_compare,
    "independence": cmd_independence,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vertexlab", description="Exact lattice and geometric vertex algebras.")
    p.add_argument("--version", action="version", version=f"vertexlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress the summary line on stderr")
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("validate", help="validate a lattice or variety file")
    s.add_argument("--lattice")
    s.add_argument("--variety")

    s = sub.add_parser("cocycle", help="verify a sign cocycle on a window")
    s.add_argument("--lattice")
    s.add_argument("--variety")
    s.add_argument("--variant", choices=("cy", "general"), default="cy")
    s.add_argument("--epsilon", help="JSON with 'signs' or 'form'; default is the standard solution")
    s.add_argument("--window", type=int, default=2)

    s = sub.add_parser("euler", help="Euler form matrices of a variety")
    s.add_argument("variety", help="variety JSON file or builtin name")

    for name, geo in (("mode", False), ("geomode", True)):
        s = sub.add_parser(name, help=f"one mode of the {'geometric' if geo else 'lattice'} field")
        if geo:
            s.add_argument("--variety", required=True)
            s.add_argument("--variant", choices=("cy", "general"), default="cy")
        else:
            s.add_argument("--lattice", required=True)
            s.add_argument("--epsilon")
            s.add_argument("--koszul", choices=("printed", "standard"), default="printed")
        s.add_argument("--u", required=True)
        s.add_argument("--w", required=True)
        s.add_argument("-n", type=int, required=True)

    s = sub.add_parser("axioms", help="vertex algebra axiom suite")
    s.add_argument("--lattice")
    s.add_argument("--variety")
    s.add_argument("--variant", choices=("cy", "general"), default="cy")
    s.add_argument("--epsilon")
    s.add_argument("--koszul", choices=("printed", "standard"), default="printed")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--pairs", type=int, default=50)
    s.add_argument("--triples", type=int, default=4)
    s.add_argument("--window", type=int, default=6)

    s = sub.add_parser("compare", help="compare the lattice and geometric algebras")
    s.add_argument("--variety", required=True)
    s.add_argument("--variant", choices=("cy", "general"), default="cy")
    s.add_argument("--max-mode", type=int, default=5)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--sector-window", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("independence", help="check independence of the cocycle representative")
    s.add_argument("--variety", required=True)
    s.add_argument("--variant", choices=("cy", "general"), default="cy")
    s.add_argument("--twists", type=int, default=5)
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--max-mode", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    return p


def _summary(cmd, rep) -> str:
    status = "PASS" if rep.get("ok") else "FAIL"
    if cmd == "compare":
        return (
            f"{status} compare {rep['model']} ({rep['variant']}): {rep['generator_cases']} generator cases, "
            f"{rep['random_pairs']['pairs']} random pairs, spanning {rep['spanning']['checked']} states"
        )
    if cmd == "cocycle":
        return f"{status} cocycle: {rep['checked']} checks, {len(rep['violations'])} violations"
    if cmd in ("mode", "geomode"):
        return f"{rep['result']}"
    return f"{status} {cmd}"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        rep = COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"vertexlab: error: {exc}", file=sys.stderr)
        return 2
    rep = dict(rep)
    rep["command"] = a.command
    rep["conventions"] = CONVENTIONS
    print(json.dumps(_jsonable(rep), indent=2, sort_keys=True))
    if not a.quiet:
        print(_summary(a.command, rep), file=sys.stderr)
    return 0 if rep.get("ok") else 1


if __name__ == "__main__":
    sys.exit(main())
