"""Strict JSON file formats for algebras, extensions, witness terms,
action data, and morphisms.

All formats reject unknown keys.  Elements are integers everywhere; the
optional ``element_names`` list on algebra files is documentation only.
Nested algebra/action tables are row-major and arity-deep (arity 0 is a
bare value).  Sub-objects may be inlined or given as a path relative to
the referencing file.  Emitted documents use a fixed key order so that a
byte-level comparison of two runs is meaningful.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from .algebra import Equation, FiniteAlgebra, FnTable, Signature, make_algebra
from .canonical import CanonicalExtension
from .errors import FileFormatError
from .extension import ExtensionMorphism, SplitExtension, Witness
from .gammabuild import GammaData
from .report import Report
from .terms import ThetaSpec, format_term, parse_term

Source = Union[str, Path, dict]


def _check_keys(obj: dict, required: Sequence[str], optional: Sequence[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{what}: expected an object, got {type(obj).__name__}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise FileFormatError(f"{what}: missing keys {missing}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise FileFormatError(f"{what}: unknown keys {unknown}")


def _load_json(path: Path) -> Any:
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON: {exc}") from exc


def _resolve(obj: Source, base_dir: Optional[Path]) -> tuple[Any, Optional[Path]]:
    """Inline dicts pass through; strings/paths load JSON relative to base_dir."""
    if isinstance(obj, dict):
        return obj, base_dir
    path = Path(obj)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return _load_json(path), path.parent


def _int(value: Any, what: str) -> int:
    if type(value) is not int:
        raise FileFormatError(f"{what}: expected an integer, got {value!r}")
    return value


def _flatten_table(nested: Any, size: int, arity: int, what: str) -> list:
    """Row-major flatten of an arity-deep nested array over {0..size-1}."""
    if arity == 0:
        return [nested]
    if not isinstance(nested, list) or len(nested) != size:
        raise FileFormatError(f"{what}: expected a list of length {size}")
    out = []
    for row in nested:
        out.extend(_flatten_table(row, size, arity - 1, what))
    return out


def _nest_table(flat: Sequence, size: int, arity: int) -> Any:
    if arity == 0:
        return flat[0]
    step = size ** (arity - 1)
    return [_nest_table(flat[i * step:(i + 1) * step], size, arity - 1)
            for i in range(size)]


# -- algebra files --------------------------------------------------------------

def algebra_from_obj(obj: Source, base_dir: Optional[Path] = None) -> FiniteAlgebra:
    obj, _ = _resolve(obj, base_dir)
    _check_keys(obj, ["signature", "size", "tables"], ["element_names"], "algebra")
    sig_obj = obj["signature"]
    _check_keys(sig_obj, ["ops", "constant"], [], "signature")
    ops = []
    for op in sig_obj["ops"]:
        _check_keys(op, ["name", "arity"], [], "operation")
        ops.append((str(op["name"]), _int(op["arity"], "arity")))
    sig = Signature(tuple(ops), str(sig_obj["constant"]))
    size = _int(obj["size"], "size")
    if not isinstance(obj["tables"], dict):
        raise FileFormatError("tables: expected an object")
    tables = {}
    for name, arity in sig.ops:
        if name not in obj["tables"]:
            raise FileFormatError(f"tables: missing table for {name!r}")
        flat = _flatten_table(obj["tables"][name], size, arity, f"table {name!r}")
        tables[name] = tuple(_int(v, f"table {name!r} entry") for v in flat)
    extra = sorted(set(obj["tables"]) - {n for n, _ in sig.ops})
    if extra:
        raise FileFormatError(f"tables: unknown operations {extra}")
    names = obj.get("element_names")
    if names is not None:
        if (not isinstance(names, list) or len(names) != size
                or not all(isinstance(s, str) for s in names)):
            raise FileFormatError("element_names: expected a list of size strings")
    return make_algebra(sig, size, tables)


def algebra_to_obj(A: FiniteAlgebra, element_names: Optional[Sequence[str]] = None) -> dict:
    obj = {
        "signature": {
            "ops": [{"name": n, "arity": a} for n, a in A.signature.ops],
            "constant": A.signature.constant_name,
        },
        "size": A.size,
        "tables": {n: _nest_table(A.tables[n], A.size, a) for n, a in A.signature.ops},
    }
    if element_names is not None:
        obj["element_names"] = list(element_names)
    return obj


def load_algebra(path: Union[str, Path]) -> FiniteAlgebra:
    path = Path(path)
    return algebra_from_obj(_load_json(path), path.parent)


# -- function arrays -------------------------------------------------------------

def _fn_from_list(values: Any, dom: int, cod: int, what: str) -> FnTable:
    if not isinstance(values, list) or len(values) != dom:
        raise FileFormatError(f"{what}: expected a list of length {dom}")
    return FnTable(dom, cod, tuple(_int(v, what) for v in values))


# -- witness terms ----------------------------------------------------------------

def theta_from_obj(obj: Source, sig: Signature, base_dir: Optional[Path] = None) -> ThetaSpec:
    obj, _ = _resolve(obj, base_dir)
    _check_keys(obj, ["vars", "term"], [], "theta")
    vars_ = obj["vars"]
    if not isinstance(vars_, list) or not all(isinstance(v, str) for v in vars_):
        raise FileFormatError("theta vars: expected a list of strings")
    term = parse_term(str(obj["term"]), sig, vars_)
    return ThetaSpec(tuple(vars_), term)


def theta_to_obj(theta: ThetaSpec) -> dict:
    return {"vars": list(theta.vars), "term": format_term(theta.term)}


# -- equations ---------------------------------------------------------------------

def equations_from_obj(items: Any, sig: Signature) -> tuple[Equation, ...]:
    if not isinstance(items, list):
        raise FileFormatError("axioms: expected a list")
    out = []
    for item in items:
        _check_keys(item, ["vars", "lhs", "rhs"], [], "axiom")
        vars_ = item["vars"]
        if not isinstance(vars_, list) or not all(isinstance(v, str) for v in vars_):
            raise FileFormatError("axiom vars: expected a list of strings")
        lhs = parse_term(str(item["lhs"]), sig, vars_)
        rhs = parse_term(str(item["rhs"]), sig, vars_)
        out.append(Equation(tuple(vars_), lhs, rhs))
    return tuple(out)


def equations_to_obj(axioms: Sequence[Equation]) -> list:
    return [{"vars": list(ax.vars), "lhs": format_term(ax.lhs),
             "rhs": format_term(ax.rhs)} for ax in axioms]


# -- extension files -----------------------------------------------------------------

def extension_from_obj(
    obj: Source, base_dir: Optional[Path] = None
) -> tuple[SplitExtension, Optional[Witness], tuple[Equation, ...]]:
    obj, base_dir = _resolve(obj, base_dir)
    _check_keys(obj, ["X", "A", "B", "k", "p", "s"], ["witness", "axioms"], "extension")
    X = algebra_from_obj(obj["X"], base_dir)
    A = algebra_from_obj(obj["A"], base_dir)
    B = algebra_from_obj(obj["B"], base_dir)
    k = _fn_from_list(obj["k"], X.size, A.size, "k")
    p = _fn_from_list(obj["p"], A.size, B.size, "p")
    s = _fn_from_list(obj["s"], B.size, A.size, "s")
    ext = SplitExtension(X, A, B, k, p, s)
    witness = None
    if "witness" in obj:
        wobj = obj["witness"]
        _check_keys(wobj, ["n", "q"], [], "witness")
        n = _int(wobj["n"], "witness n")
        qs = wobj["q"]
        if not isinstance(qs, list) or len(qs) != n:
            raise FileFormatError(f"witness q: expected {n} arrays")
        witness = Witness(n, tuple(_fn_from_list(q, A.size, X.size, "witness q")
                                   for q in qs))
    axioms = equations_from_obj(obj.get("axioms", []), X.signature)
    return ext, witness, axioms


def load_extension(path: Union[str, Path]):
    path = Path(path)
    return extension_from_obj(_load_json(path), path.parent)


def extension_to_obj(
    e: SplitExtension,
    witness: Optional[Witness] = None,
    axioms: Sequence[Equation] = (),
) -> dict:
    obj = {
        "X": algebra_to_obj(e.X),
        "A": algebra_to_obj(e.A),
        "B": algebra_to_obj(e.B),
        "k": list(e.k.values),
        "p": list(e.p.values),
        "s": list(e.s.values),
    }
    if witness is not None:
        obj["witness"] = {"n": witness.n, "q": [list(q.values) for q in witness.q]}
    if axioms:
        obj["axioms"] = equations_to_obj(axioms)
    return obj


# -- action data files -----------------------------------------------------------------

_GAMMA_EXTRAS = ["schema", "n", "Y", "ops_Y", "k_prime", "pi_B", "iota_B",
                 "gamma_id", "verification"]


def gamma_from_obj(obj: Source, base_dir: Optional[Path] = None) -> GammaData:
    obj, base_dir = _resolve(obj, base_dir)
    _check_keys(obj, ["X", "B", "theta", "gamma"], ["axioms"] + _GAMMA_EXTRAS, "gamma data")
    X = algebra_from_obj(obj["X"], base_dir)
    B = algebra_from_obj(obj["B"], base_dir)
    theta = theta_from_obj(obj["theta"], X.signature, base_dir)
    n = theta.n
    ambient = X.size ** n * B.size
    if not isinstance(obj["gamma"], dict):
        raise FileFormatError("gamma: expected an object")
    gamma = {}
    for name, arity in X.signature.ops:
        if name not in obj["gamma"]:
            raise FileFormatError(f"gamma: missing table for {name!r}")
        flat = _flatten_table(obj["gamma"][name], ambient, arity, f"gamma {name!r}")
        entries = []
        for entry in flat:
            if not isinstance(entry, list) or len(entry) != n:
                raise FileFormatError(
                    f"gamma {name!r}: entries must be lists of {n} integers")
            entries.append(tuple(_int(v, f"gamma {name!r} entry") for v in entry))
        gamma[name] = tuple(entries)
    extra = sorted(set(obj["gamma"]) - {nm for nm, _ in X.signature.ops})
    if extra:
        raise FileFormatError(f"gamma: unknown operations {extra}")
    axioms = equations_from_obj(obj.get("axioms", []), X.signature)
    return GammaData(X, B, theta, gamma, axioms)


def load_gamma(path: Union[str, Path]) -> GammaData:
    path = Path(path)
    return gamma_from_obj(_load_json(path), path.parent)


def gamma_to_obj(g: GammaData) -> dict:
    ambient = g.space.size
    return {
        "X": algebra_to_obj(g.X),
        "B": algebra_to_obj(g.B),
        "theta": theta_to_obj(g.theta),
        "gamma": {
            name: _nest_table([list(t) for t in g.gamma[name]], ambient, arity)
            for name, arity in g.X.signature.ops
        },
        "axioms": equations_to_obj(g.axioms),
    }


def canonical_to_obj(
    c: CanonicalExtension,
    axioms: Sequence[Equation] = (),
    verification: Optional[Report] = None,
) -> dict:
    """Canonical form as a document that gamma_from_obj can read back."""
    ambient = c.space.size
    obj = {
        "schema": "wsext.canonical/1",
        "X": algebra_to_obj(c.X),
        "B": algebra_to_obj(c.B),
        "n": c.n,
        "theta": theta_to_obj(c.theta),
        "Y": [list(t) for t in c.Y],
        "ops_Y": {name: _nest_table(c.ops_Y[name], len(c.Y), arity)
                  for name, arity in c.X.signature.ops},
        "k_prime": list(c.k_prime.values),
        "pi_B": list(c.pi_B.values),
        "iota_B": list(c.iota_B.values),
        "gamma": {
            name: _nest_table([list(t) for t in c.gamma[name]], ambient, arity)
            for name, arity in c.X.signature.ops
        },
        "gamma_id": [list(t) for t in c.gamma_id],
        "axioms": equations_to_obj(axioms),
    }
    if verification is not None:
        obj["verification"] = verification.to_json()
    return obj


# -- morphism files ------------------------------------------------------------------

def morphism_from_obj(obj: Source, base_dir: Optional[Path] = None) -> ExtensionMorphism:
    obj, base_dir = _resolve(obj, base_dir)
    _check_keys(obj, ["source", "target", "f", "g", "h"], [], "morphism")
    source, _, _ = extension_from_obj(obj["source"], base_dir)
    target, _, _ = extension_from_obj(obj["target"], base_dir)
    f = _fn_from_list(obj["f"], source.X.size, target.X.size, "f")
    g = _fn_from_list(obj["g"], source.A.size, target.A.size, "g")
    h = _fn_from_list(obj["h"], source.B.size, target.B.size, "h")
    return ExtensionMorphism(source, target, f, g, h)


def load_morphism(path: Union[str, Path]) -> ExtensionMorphism:
    path = Path(path)
    return morphism_from_obj(_load_json(path), path.parent)


# -- homomorphism files (pullback input) ----------------------------------------------

def hom_from_obj(obj: Source, base_dir: Optional[Path] = None) -> tuple[FiniteAlgebra, list[int]]:
    """A homomorphism file: the domain algebra plus a value array into the
    target (whose size is only known to the caller)."""
    obj, base_dir = _resolve(obj, base_dir)
    _check_keys(obj, ["B_prime", "f"], [], "homomorphism")
    B_prime = algebra_from_obj(obj["B_prime"], base_dir)
    values = obj["f"]
    if not isinstance(values, list) or len(values) != B_prime.size:
        raise FileFormatError(f"f: expected a list of length {B_prime.size}")
    return B_prime, [_int(v, "f") for v in values]


def load_hom(path: Union[str, Path]) -> tuple[FiniteAlgebra, list[int]]:
    path = Path(path)
    return hom_from_obj(_load_json(path), path.parent)


def dump_json(obj: Any, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def to_text(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"
