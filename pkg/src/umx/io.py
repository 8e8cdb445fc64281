"""JSON documents for every domain type (schema tag ``umx/1``)."""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .arrangements import Arrangement, Subspace
from .complexes import PureComplex
from .errors import LatticeError, LoadError, PosetError
from .lattice import (
    DistLattice,
    Poset,
    elements_of,
    mask_of,
    order_ideals,
)
from .umatroid import RankFunction, UMatroid

SCHEMA = "umx/1"

TYPES = ("poset", "lattice", "total_order", "rank_function", "arrangement", "basis_system", "report")


def _header(kind: str) -> dict:
    return {"schema": SCHEMA, "type": kind}


def _set(mask: int) -> list[int]:
    return list(elements_of(mask))


def set_key(mask: int) -> tuple:
    """Display order for sets: by size, then lexicographically."""
    return (mask.bit_count(), elements_of(mask))


def ordered(masks) -> list[int]:
    return sorted(masks, key=set_key)


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --- dump ---------------------------------------------------------------------


def dump_poset(P: Poset, header: bool = True) -> dict:
    doc = _header("poset") if header else {}
    doc.update({"n": P.n, "relations": [list(r) for r in P.relations()]})
    return doc


def dump_lattice(D: DistLattice, header: bool = True) -> dict:
    doc = _header("lattice") if header else {}
    doc.update({"n": D.n, "sets": [_set(m) for m in ordered(D.sets)]})
    return doc


def dump_total_order(perm) -> dict:
    doc = _header("total_order")
    doc["perm"] = list(perm)
    return doc


def dump_rank(rank: RankFunction | UMatroid) -> dict:
    if isinstance(rank, UMatroid):
        rank = rank.rank
    doc = _header("rank_function")
    doc["poset"] = dump_poset(rank.lattice.poset, header=False)
    doc["values"] = [{"set": _set(m), "rank": int(v)} for m, v in sorted(rank.items(), key=lambda kv: set_key(kv[0]))]
    return doc


def dump_arrangement(X: Arrangement) -> dict:
    doc = _header("arrangement")
    doc["dim"] = X.dim
    doc["spaces"] = [{"normals": [[fraction_str(x) for x in v] for v in s.normals]} for s in X.spaces]
    return doc


def dump_basis_system(P: Poset, bases) -> dict:
    doc = _header("basis_system")
    doc["poset"] = dump_poset(P, header=False)
    doc["bases"] = [_set(b) for b in sorted(bases, key=set_key)]
    return doc


def dump_report(command: str, result: Any, seed: int | None = None, **extra) -> dict:
    doc = _header("report")
    doc["command"] = command
    if seed is not None:
        doc["seed"] = seed
    doc.update(extra)
    doc["result"] = result
    return doc


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return not isinstance(v, dict)


def _render(obj, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(_flat(v) for v in obj.values()):
            return json.dumps(obj)
        items = [f"{pad}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return json.dumps(obj)  # scalar rows stay on one line
        items = [pad + _render(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def dumps(doc: dict) -> str:
    """Deterministic JSON: two-space indent, scalar arrays kept inline."""
    return _render(doc, 0) + "\n"


# --- load ---------------------------------------------------------------------


def _need(doc: dict, key: str):
    if key not in doc:
        raise LoadError(f"missing field '{key}'")
    return doc[key]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise LoadError(f"{what} must be an integer, got {x!r}")
    return x


def _mask(elems, n: int, what: str = "set") -> int:
    if not isinstance(elems, list):
        raise LoadError(f"{what} must be a list of elements")
    for e in elems:
        _int(e, "element")
        if not 1 <= e <= n:
            raise LoadError(f"element {e} outside 1..{n}")
    if len(set(elems)) != len(elems):
        raise LoadError(f"{what} {elems} repeats an element")
    return mask_of(elems)


def _n(doc) -> int:
    n = _int(_need(doc, "n"), "n")
    if n < 0:
        raise LoadError("n must be nonnegative")
    return n


def load_poset(doc: dict) -> Poset:
    n = _n(doc)
    rels = []
    for r in _need(doc, "relations"):
        if not (isinstance(r, list) and len(r) == 2):
            raise LoadError(f"relation must be a pair, got {r!r}")
        a, b = (_int(x, "element") for x in r)
        if not (1 <= a <= n and 1 <= b <= n):
            raise LoadError(f"relation {r} outside 1..{n}")
        rels.append((a, b))
    try:
        return Poset.from_relations(n, rels)
    except PosetError as exc:
        raise LoadError(str(exc)) from exc


def load_lattice(doc: dict) -> DistLattice:
    n = _n(doc)
    sets = [_mask(s, n) for s in _need(doc, "sets")]
    if len(set(sets)) != len(sets):
        raise LoadError("lattice lists a set twice")
    try:
        return DistLattice(n, sets)
    except LatticeError as exc:
        raise LoadError(str(exc)) from exc


def load_lattice_like(doc: dict) -> DistLattice:
    """A lattice document, a poset document (its ideals), or either nested."""
    kind = infer_type(doc)
    if kind == "poset":
        return order_ideals(load_poset(doc))
    if kind == "lattice":
        return load_lattice(doc)
    if "poset" in doc:
        return order_ideals(load_poset(doc["poset"]))
    if "lattice" in doc:
        return load_lattice(doc["lattice"])
    raise LoadError(f"expected a poset or lattice, got a {kind} document")


def load_total_order(doc: dict) -> tuple[int, ...]:
    perm = _need(doc, "perm")
    if not isinstance(perm, list) or sorted(perm) != list(range(1, len(perm) + 1)):
        raise LoadError("perm must be a permutation of 1..n")
    return tuple(perm)


def load_rank(doc: dict) -> RankFunction:
    if "poset" in doc:
        lat = order_ideals(load_poset(doc["poset"]))
    elif "lattice" in doc:
        lat = load_lattice(doc["lattice"])
    else:
        raise LoadError("rank function needs a 'poset' or 'lattice'")
    table: dict[int, int] = {}
    for entry in _need(doc, "values"):
        if not isinstance(entry, dict):
            raise LoadError("each value must be an object with 'set' and 'rank'")
        m = _mask(_need(entry, "set"), lat.n)
        r = _int(_need(entry, "rank"), "rank")
        if m in table:
            raise LoadError(f"duplicate value for {_set(m)}")
        if m not in lat:
            raise LoadError(f"{_set(m)} is not a member of the lattice")
        table[m] = r
    missing = [m for m in lat.sets if m not in table]
    if missing:
        raise LoadError(f"no value for {_set(missing[0])} (and {len(missing) - 1} more)")
    return RankFunction.from_mapping(lat, table)


def _fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise LoadError(f"bad rational {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LoadError(f"bad rational {x!r}") from exc
    raise LoadError(f"rationals are integers or 'p/q' strings, got {x!r}")


def load_arrangement(doc: dict) -> Arrangement:
    if "field" in doc and doc["field"] not in ("Q", "rational", "rationals"):
        raise LoadError("only rational arrangements are supported")
    dim = _int(_need(doc, "dim"), "dim")
    spaces = []
    for s in _need(doc, "spaces"):
        normals = [tuple(_fraction(x) for x in v) for v in _need(s, "normals")]
        for v in normals:
            if len(v) != dim:
                raise LoadError(f"normal vector of length {len(v)} in dimension {dim}")
        sub = Subspace(dim, tuple(normals))
        if "codim" in s and _int(s["codim"], "codim") != sub.codim:
            raise LoadError(f"declared codim {s['codim']} but normals have rank {sub.codim}")
        spaces.append(sub)
    return Arrangement(dim, tuple(spaces))


def load_basis_system(doc: dict) -> tuple[Poset, PureComplex]:
    P = load_poset(_need(doc, "poset"))
    bases = [_mask(b, P.n, "basis") for b in _need(doc, "bases")]
    try:
        return P, PureComplex(P.n, tuple(bases))
    except ValueError as exc:
        raise LoadError(str(exc)) from exc


def infer_type(doc: dict) -> str:
    if not isinstance(doc, dict):
        raise LoadError("document must be a JSON object")
    if "schema" in doc and doc["schema"] != SCHEMA:
        raise LoadError(f"unsupported schema {doc['schema']!r}")
    if "type" in doc:
        if doc["type"] not in TYPES:
            raise LoadError(f"unknown document type {doc['type']!r}")
        return doc["type"]
    if "result" in doc:
        return "report"
    if "values" in doc:
        return "rank_function"
    if "bases" in doc:
        return "basis_system"
    if "spaces" in doc:
        return "arrangement"
    if "perm" in doc:
        return "total_order"
    if "sets" in doc:
        return "lattice"
    if "relations" in doc:
        return "poset"
    raise LoadError("cannot tell what kind of document this is")


def unwrap(doc: dict) -> dict:
    """Strip report envelopes so piped output can be fed back in."""
    while infer_type(doc) == "report":
        doc = doc["result"]
        if not isinstance(doc, dict):
            raise LoadError("report result is not a document")
    return doc


def load(doc: dict):
    doc = unwrap(doc)
    kind = infer_type(doc)
    return {
        "poset": load_poset,
        "lattice": load_lattice,
        "total_order": load_total_order,
        "rank_function": load_rank,
        "arrangement": load_arrangement,
        "basis_system": load_basis_system,
    }[kind](doc)


def read_json(path: str | Path) -> dict:
    try:
        if str(path) == "-":
            text = sys.stdin.read()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON ({exc})") from exc


def fixture_path(name: str) -> Path:
    """Path of a bundled example document (see ``umx/data``)."""
    path = Path(__file__).parent / "data" / f"{name}.json"
    if not path.exists():
        raise LoadError(f"no bundled fixture named {name!r}")
    return path


def load_fixture(name: str):
    return load(read_json(fixture_path(name)))
