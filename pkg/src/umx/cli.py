"""Command-line front end: ``umx <verb> FILE [options]``.

Exit codes: 0 success, 1 negative verdict (invalid rank function, failed
check), 2 usage or input error, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from itertools import permutations

from . import io
from .arrangements import (
    arrangement_umatroid,
    generic_rank_oracle,
    multisymmetric_lift,
    point_mask,
    polymatroid_rank,
    split_space,
)
from .complexes import check_basis_system, is_shelling_order, lex_order
from .errors import CapExceeded, GenericityError, InvalidRankFunction, LoadError, UmxError
from .extension import (
    generous_atom_extension,
    generous_extension,
    magnanimous_extension,
    restrict,
    zero_one_points,
)
from .lattice import DistLattice, elements_of, format_set, is_linear_extension, linear_extensions
from .umatroid import (
    AXIOMS,
    RankFunction,
    UMatroid,
    bases,
    closure,
    dual,
    flats,
    is_poset_matroid,
    validate,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class Negative(Exception):
    """Carries output for a run whose verdict is negative (exit 1)."""

    def __init__(self, payload):
        super().__init__("negative verdict")
        self.payload = payload


def _ints(text: str) -> list[int]:
    text = text.strip().strip("{}")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(" ", ",").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _sets(masks) -> list[list[int]]:
    return [list(elements_of(m)) for m in io.ordered(masks)]


def _line(masks) -> str:
    return " ".join(format_set(m) for m in io.ordered(masks))


def _load(path: str, kind: str | tuple[str, ...]):
    doc = io.unwrap(io.read_json(path))
    got = io.infer_type(doc)
    kinds = (kind,) if isinstance(kind, str) else kind
    if got not in kinds:
        raise LoadError(f"{path}: expected a {' or '.join(kinds)} document, got {got}")
    return got, doc


def _rank(path: str) -> RankFunction:
    return io.load_rank(_load(path, "rank_function")[1])


def _umatroid(path: str, doc: dict | None = None) -> UMatroid:
    rank = _rank(path) if doc is None else io.load_rank(doc)
    report = validate(rank)
    if not report.ok:
        raise InvalidRankFunction("input is not a U-matroid: " + "; ".join(
            l for l in report.describe() if "FAILED" in l), report)
    return UMatroid(rank, _checked=True)


def _target(spec: str | None, n: int) -> DistLattice | None:
    if spec is None or spec == "boolean":
        return DistLattice.boolean(n) if spec else None
    _, doc = _load(spec, ("lattice", "poset", "rank_function", "basis_system"))
    lat = io.load_lattice_like(doc)
    if lat.n != n:
        raise LoadError(f"target lattice has n={lat.n}, expected {n}")
    return lat


# --- verbs ---------------------------------------------------------------------
# Each returns (json_result, text).  Transform verbs return the produced
# document as both, so their output can be piped into another verb.


def cmd_validate(a):
    rank = _rank(a.file)
    report = validate(rank)
    result = {
        "ok": report.ok,
        "axioms": {ax: report.passed(ax) for ax in AXIOMS},
        "witnesses": {ax: _sets(w) for ax, w in report.violations.items()},
    }
    lines = report.describe()
    if report.ok:
        U = UMatroid(rank, _checked=True)
        flag, w = is_poset_matroid(U, a.method)
        result["poset_matroid"] = flag
        if not flag:
            result["poset_matroid_witness"] = _witness(w)
        lines.append("poset matroid: " + ("yes" if flag else f"no, witness {_fmt_witness(w)}"))
    lines.append("U-matroid: " + ("yes" if report.ok else "no"))
    text = "\n".join(lines)
    if not report.ok:
        raise Negative((result, text))
    return result, text


def _witness(w):
    if isinstance(w, tuple):
        return [list(elements_of(w[0])), w[1], w[2]]
    return list(elements_of(w))


def _fmt_witness(w):
    if isinstance(w, tuple):
        return f"A={format_set(w[0])}, b1={w[1]}, b2={w[2]}"
    return f"basis {format_set(w)} not in the lattice"


def cmd_bases(a):
    B = bases(_umatroid(a.file))
    return {"bases": _sets(B)}, _line(B)


def cmd_vertices(a):
    n = (U := _umatroid(a.file)).n
    V = [tuple(B >> i & 1 for i in range(n)) for B in io.ordered(bases(U))]
    return {"vertices": [list(v) for v in V]}, "\n".join("".join(map(str, v)) for v in V)


def cmd_rank_table(a):
    rank = _rank(a.file)
    rows = sorted(rank.items(), key=lambda kv: io.set_key(kv[0]))
    width = max(len(format_set(m)) for m, _ in rows)
    text = "\n".join(f"{format_set(m):<{width}}  {v}" for m, v in rows)
    return {"values": [{"set": list(elements_of(m)), "rank": v} for m, v in rows]}, text


def cmd_flats(a):
    F = flats(_umatroid(a.file)).flats
    return {"flats": _sets(F)}, _line(F)


def cmd_closure(a):
    if a.set is None:
        raise LoadError("closure needs --set")
    U = _umatroid(a.file)
    A = _mask_arg(a.set, U.n)
    c = closure(U, A)
    return {"set": list(elements_of(A)), "closure": list(elements_of(c))}, format_set(c)


def _mask_arg(elems, n):
    m = 0
    for e in elems:
        if not 1 <= e <= n:
            raise LoadError(f"element {e} outside 1..{n}")
        m |= 1 << (e - 1)
    return m


def _doc(doc):
    return doc, io.dumps(doc).rstrip("\n")


def cmd_dual(a):
    return _doc(io.dump_rank(dual(_umatroid(a.file))))


def cmd_restrict(a):
    U = _umatroid(a.file)
    if a.to is None or a.to == "boolean":
        raise LoadError("restrict needs --to LATTICE_FILE")
    return _doc(io.dump_rank(restrict(U, _target(a.to, U.n))))


def cmd_extend(a):
    if a.magnanimous:
        rank = _rank(a.file)
        report = validate(rank)
        if not report.is_submodular_system:
            raise InvalidRankFunction("input is not a submodular system", report)
        target = _target(a.to or "boolean", rank.n)
        return _doc(io.dump_rank(magnanimous_extension(rank, target)))
    U = _umatroid(a.file)
    if a.atom is not None:
        if a.to is not None:
            raise LoadError("--atom and --to are mutually exclusive")
        return _doc(io.dump_rank(generous_atom_extension(U, a.atom).matroid))
    target = _target(a.to or "boolean", U.n)
    return _doc(io.dump_rank(generous_extension(U, target).matroid))


def cmd_zero_one_points(a):
    pts = zero_one_points(_umatroid(a.file), independent=a.independent)
    return {"points": _sets(pts)}, _line(pts)


def _facets_and_poset(path):
    kind, doc = _load(path, ("rank_function", "basis_system"))
    if kind == "basis_system":
        P, cx = io.load_basis_system(doc)
        return P, list(cx.facets)
    U = _umatroid(path, doc)
    return U.poset, bases(U)


def cmd_shelling_check(a):
    P, B = _facets_and_poset(a.file)
    n = P.n
    if a.perm is not None:
        if sorted(a.perm) != list(range(1, n + 1)):
            raise LoadError(f"--perm must be a permutation of 1..{n}")
        orders = [tuple(a.perm)]
    elif a.all_orders:
        if n > 9:
            raise CapExceeded("--all-orders is limited to n<=9")
        orders = list(permutations(range(1, n + 1)))
    else:
        orders = linear_extensions(P, a.cap_extensions)
    checked, failing = 0, []
    for sigma in orders:
        checked += 1
        if not is_shelling_order(lex_order(B, sigma))[0]:
            failing.append(sigma)
    result = {
        "orders_checked": checked,
        "failing_orders": [list(s) for s in failing],
        "failing_linear_extensions": [list(s) for s in failing if is_linear_extension(P, s)],
    }
    lines = [f"checked {checked} orders, {len(failing)} not shellings"]
    lines += ["  " + "<".join(map(str, s)) for s in failing]
    text = "\n".join(lines)
    if failing:
        raise Negative((result, text))
    return result, text


def cmd_basis_system(a):
    _, doc = _load(a.file, "basis_system")
    P, cx = io.load_basis_system(doc)
    rep = check_basis_system(P, cx.facets, a.cap_extensions)
    result = {
        "is_basis_system": rep.is_basis_system,
        "criteria": rep.criteria,
        "witnesses": {k: (list(v) if isinstance(v, tuple) else list(elements_of(v))) for k, v in rep.witnesses.items()},
    }
    lines = [f"{k}: {'ok' if v else 'fails'}" for k, v in rep.criteria.items()]
    lines.append("basis system: " + ("yes" if rep.is_basis_system else "no"))
    text = "\n".join(lines)
    if not rep.is_basis_system:
        raise Negative((result, text))
    return result, text


def _arrangement(path):
    return io.load_arrangement(_load(path, "arrangement")[1])


def cmd_arrangement_rank(a):
    X = _arrangement(a.file)
    rk = polymatroid_rank(X)
    rows = sorted(rk.items(), key=lambda kv: io.set_key(kv[0]))
    text = "\n".join(f"{format_set(m)}  {v}" for m, v in rows)
    return {"codims": list(X.codims), "values": [{"set": list(elements_of(m)), "rank": v} for m, v in rows]}, text


def cmd_lift(a):
    X = _arrangement(a.file)
    return _doc(io.dump_rank(multisymmetric_lift(polymatroid_rank(X), X.codims)))


def cmd_arrangement_umatroid(a):
    return _doc(io.dump_rank(arrangement_umatroid(_arrangement(a.file))))


def cmd_split(a):
    X = _arrangement(a.file)
    Xs, rep = split_space(X, seed=a.seed)
    doc = io.dump_arrangement(Xs)
    extra = {"attempts": rep.attempts, "codims": list(rep.codims), "agrees_with_generous_extension": rep.agrees}
    return (doc, extra), io.dumps(doc).rstrip("\n")


def cmd_oracle(a):
    X = _arrangement(a.file)
    if a.b is None:
        raise LoadError("oracle needs --b")
    c = X.codims
    try:
        mask = point_mask(a.b, c)
    except ValueError as exc:
        raise LoadError(str(exc)) from exc
    sampled = generic_rank_oracle(X, a.b, trials=a.trials, seed=a.seed)
    exact = arrangement_umatroid(X)(mask)
    result = {"b": list(a.b), "trials": a.trials, "sampled": sampled, "exact": exact, "agrees": sampled == exact}
    text = f"sampled {sampled}  exact {exact}" + ("" if sampled == exact else "  MISMATCH")
    if sampled != exact:
        raise Negative((result, text))
    return result, text


VERBS = {
    "validate": (cmd_validate, "check the U-matroid axioms (and the local chain property)"),
    "bases": (cmd_bases, "list the bases"),
    "vertices": (cmd_vertices, "list the 0/1 vertices of the base polyhedron"),
    "rank-table": (cmd_rank_table, "print the rank function"),
    "flats": (cmd_flats, "list the flats"),
    "closure": (cmd_closure, "closure of --set"),
    "dual": (cmd_dual, "dual U-matroid"),
    "restrict": (cmd_restrict, "restrict to the lattice in --to"),
    "extend": (cmd_extend, "generous (default) or magnanimous extension"),
    "zero-one-points": (cmd_zero_one_points, "0/1 points of the base (or independence) polyhedron"),
    "shelling-check": (cmd_shelling_check, "check lex orders of the bases for shellability"),
    "basis-system": (cmd_basis_system, "decide whether a set family is a U-matroid basis system"),
    "arrangement-rank": (cmd_arrangement_rank, "polymatroid rank of an arrangement"),
    "lift": (cmd_lift, "minimal multisymmetric lift of an arrangement"),
    "arrangement-umatroid": (cmd_arrangement_umatroid, "U-matroid of an arrangement"),
    "split": (cmd_split, "split the last space into a generic pair"),
    "oracle": (cmd_oracle, "sample the generic rank at --b and compare with the exact value"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="umx", description="Unbounded matroid toolkit.")
    sub = p.add_subparsers(dest="verb", metavar="VERB", required=True)
    for name, (_, helptext) in VERBS.items():
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file", help="input JSON document, or - for stdin")
        s.add_argument("--json", action="store_true", help="emit a JSON report")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--cap-extensions", type=int, default=10**7, metavar="N")
        if name == "validate":
            s.add_argument("--method", choices=["local-chain", "bases"], default="local-chain")
        if name in ("restrict", "extend"):
            s.add_argument("--to", metavar="boolean|FILE")
        if name == "extend":
            g = s.add_mutually_exclusive_group()
            g.add_argument("--generous", action="store_true", default=True)
            g.add_argument("--magnanimous", action="store_true")
            s.add_argument("--atom", type=int)
        if name == "closure":
            s.add_argument("--set", type=_ints, metavar="1,2,...")
        if name == "zero-one-points":
            s.add_argument("--independent", action="store_true")
        if name == "shelling-check":
            s.add_argument("--perm", type=_ints, metavar="3,1,2,4")
            s.add_argument("--all-orders", action="store_true", help="every total order, not just Le(P)")
        if name == "oracle":
            s.add_argument("--b", type=_ints, metavar="1,1,0")
            s.add_argument("--trials", type=int, default=20)
    return p


def _emit(a, result, text):
    if a.json:
        extra = {}
        if isinstance(result, tuple):
            result, extra = result
        sys.stdout.write(io.dumps(io.dump_report(a.verb, result, seed=a.seed, **extra)))
    elif text:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    fn = VERBS[a.verb][0]
    try:
        result, text = fn(a)
    except Negative as neg:
        _emit(a, *neg.payload)
        return EXIT_NEGATIVE
    except CapExceeded as exc:
        print(f"umx: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidRankFunction as exc:
        print(f"umx: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except GenericityError as exc:
        print(f"umx: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (LoadError, UmxError, ValueError) as exc:
        print(f"umx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(a, result, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
