"""Finite algebras over arbitrary finite signatures, as operation tables.

Carriers are always ``{0, .., size-1}``.  Tables are stored flat in
row-major order: the entry for arguments ``(a_1, .., a_k)`` sits at index
``((a_1*size + a_2)*size + ..)*size + a_k``.  Every algebra carries a
distinguished constant (the "zero" of the pointed variety); its value may
be any carrier index, not necessarily 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Optional, Sequence

from .errors import (
    ArityMismatch,
    EntryOutOfRange,
    MissingTable,
    NotHomomorphism,
    SearchBudgetExceeded,
    SignatureMismatch,
    SizeMismatch,
    UnboundVariable,
    UnknownSymbol,
)
from .report import CheckResult
from .terms import Term, eval_term, term_vars

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Signature:
    """Operation names with arities, plus the distinguished constant.

    ``ops`` preserves declaration order; that order fixes table order in
    serialized files and the iteration order of every exhaustive check.
    """

    ops: tuple[tuple[str, int], ...]
    constant_name: str

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((str(n), int(a)) for n, a in self.ops))
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise SignatureMismatch(f"duplicate operation names in {names}")
        if any(not n for n in names):
            raise SignatureMismatch("empty operation name")
        if any(a < 0 for _, a in self.ops):
            raise ArityMismatch("negative arity")
        arity = dict(self.ops).get(self.constant_name)
        if arity is None:
            raise SignatureMismatch(
                f"constant {self.constant_name!r} is not an operation of the signature")
        if arity != 0:
            raise ArityMismatch(f"constant {self.constant_name!r} has arity {arity}, expected 0")

    def arity(self, name: str) -> int:
        for n, a in self.ops:
            if n == name:
                return a
        raise UnknownSymbol(f"no operation named {name!r} in the signature")

    def op_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.ops)

    def has_op(self, name: str) -> bool:
        return any(n == name for n, _ in self.ops)


def table_index(size: int, args: Sequence[int]) -> int:
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


@dataclass(frozen=True, eq=True)
class FiniteAlgebra:
    """A finite algebra: carrier {0..size-1} and one flat table per op."""

    signature: Signature
    size: int
    tables: Mapping[str, tuple[int, ...]]

    @property
    def zero(self) -> int:
        """The value of the distinguished constant."""
        return self.tables[self.signature.constant_name][0]

    def op(self, name: str, args: Sequence[int]) -> int:
        return self.tables[name][table_index(self.size, args)]

    def elements(self) -> range:
        return range(self.size)

    def arg_tuples(self, arity: int) -> Iterator[tuple[int, ...]]:
        return product(range(self.size), repeat=arity)


def make_algebra(sig: Signature, size: int, tables: Mapping[str, Sequence[int]]) -> FiniteAlgebra:
    """Validate tables against the signature and build the algebra.

    Raises MissingTable, ArityMismatch or EntryOutOfRange on bad input.
    """
    if size < 1:
        raise SizeMismatch(f"carrier size must be positive, got {size}")
    frozen: dict[str, tuple[int, ...]] = {}
    for name, arity in sig.ops:
        if name not in tables:
            raise MissingTable(f"no table for operation {name!r}")
        values = tuple(tables[name])
        if len(values) != size ** arity:
            raise ArityMismatch(
                f"table for {name!r} has {len(values)} entries, expected {size}^{arity}")
        for v in values:
            if not isinstance(v, int) or not (0 <= v < size):
                raise EntryOutOfRange(f"table entry {v!r} for {name!r} outside 0..{size - 1}")
        frozen[name] = values
    extra = set(tables) - {n for n, _ in sig.ops}
    if extra:
        raise SignatureMismatch(f"tables given for unknown operations {sorted(extra)}")
    return FiniteAlgebra(sig, size, frozen)


def trivial_algebra(sig: Signature) -> FiniteAlgebra:
    """The one-element algebra of a signature (terminal object)."""
    return make_algebra(sig, 1, {name: (0,) for name, _ in sig.ops})


# -- function tables ----------------------------------------------------------

@dataclass(frozen=True)
class FnTable:
    """A total function {0..dom_size-1} -> {0..cod_size-1} as a value array."""

    dom_size: int
    cod_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.dom_size:
            raise SizeMismatch(
                f"function table has {len(self.values)} entries, expected {self.dom_size}")
        for v in self.values:
            if not (0 <= v < self.cod_size):
                raise EntryOutOfRange(f"function value {v} outside 0..{self.cod_size - 1}")

    def __call__(self, x: int) -> int:
        return self.values[x]

    @classmethod
    def identity(cls, size: int) -> "FnTable":
        return cls(size, size, tuple(range(size)))

    @classmethod
    def constant(cls, dom_size: int, cod_size: int, value: int) -> "FnTable":
        return cls(dom_size, cod_size, (value,) * dom_size)

    def then(self, g: "FnTable") -> "FnTable":
        """Composition: first self, then g."""
        if self.cod_size != g.dom_size:
            raise SizeMismatch("composition endpoint mismatch")
        return FnTable(self.dom_size, g.cod_size, tuple(g(v) for v in self.values))

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.dom_size

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.cod_size

    def image(self) -> list[int]:
        return sorted(set(self.values))


def _require_same_signature(A: FiniteAlgebra, B: FiniteAlgebra) -> None:
    if A.signature != B.signature:
        raise SignatureMismatch("algebras have different signatures")


def is_homomorphism(f: FnTable, A: FiniteAlgebra, B: FiniteAlgebra) -> CheckResult:
    """Does f commute with every operation table (constants included)?

    The counterexample records the operation and argument tuple where the
    two evaluation orders first disagree.
    """
    _require_same_signature(A, B)
    if f.dom_size != A.size or f.cod_size != B.size:
        raise SizeMismatch(
            f"table is {f.dom_size}->{f.cod_size}, algebras are {A.size}->{B.size}")
    for name, arity in A.signature.ops:
        for args in A.arg_tuples(arity):
            lhs = f(A.op(name, args))
            rhs = B.op(name, tuple(f(a) for a in args))
            if lhs != rhs:
                return CheckResult(False, {
                    "op": name, "args": list(args),
                    "f(op(args))": lhs, "op(f(args))": rhs,
                })
    return CheckResult(True)


def enumerate_homomorphisms(
    A: FiniteAlgebra,
    B: FiniteAlgebra,
    fixed: Optional[Mapping[int, int]] = None,
    budget: int = DEFAULT_BUDGET,
    limit: Optional[int] = None,
) -> list[FnTable]:
    """All homomorphisms A -> B extending ``fixed``, in lexicographic order
    of their value arrays.

    Deterministic backtracking over positions 0..|A|-1.  A constraint
    f(op(args)) = op(f(args)) is checked as soon as its last participating
    element is assigned.  Each attempted assignment costs one node against
    ``budget``.
    """
    _require_same_signature(A, B)
    fixed = dict(fixed or {})
    for pos, val in fixed.items():
        if not (0 <= pos < A.size) or not (0 <= val < B.size):
            raise SizeMismatch(f"fixed assignment {pos}->{val} out of range")

    # constraints grouped by the largest element index they mention
    by_position: list[list[tuple[str, tuple[int, ...], int]]] = [[] for _ in range(A.size)]
    for name, arity in A.signature.ops:
        for args in A.arg_tuples(arity):
            result = A.op(name, args)
            trigger = max(args + (result,)) if args else result
            by_position[trigger].append((name, args, result))

    out: list[FnTable] = []
    assignment = [0] * A.size
    nodes = 0

    def consistent(pos: int) -> bool:
        for name, args, result in by_position[pos]:
            if assignment[result] != B.op(name, tuple(assignment[a] for a in args)):
                return False
        return True

    def extend(pos: int) -> bool:
        nonlocal nodes
        if pos == A.size:
            out.append(FnTable(A.size, B.size, tuple(assignment)))
            return limit is not None and len(out) >= limit
        candidates = (fixed[pos],) if pos in fixed else range(B.size)
        for val in candidates:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(
                    f"homomorphism search exceeded {budget} nodes")
            assignment[pos] = val
            if consistent(pos) and extend(pos + 1):
                return True
        return False

    extend(0)
    return out


def product_algebra(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product on carrier {0..|A|*|B|-1}, pairing (a,b) -> a*|B| + b."""
    _require_same_signature(A, B)
    size = A.size * B.size
    tables: dict[str, tuple[int, ...]] = {}
    for name, arity in A.signature.ops:
        values = []
        for args in product(range(size), repeat=arity):
            a_args = tuple(x // B.size for x in args)
            b_args = tuple(x % B.size for x in args)
            values.append(A.op(name, a_args) * B.size + B.op(name, b_args))
        tables[name] = tuple(values)
    return FiniteAlgebra(A.signature, size, tables)


def pullback_algebra(
    A: FiniteAlgebra,
    p: FnTable,
    B_prime: FiniteAlgebra,
    f: FnTable,
    B: FiniteAlgebra,
) -> tuple[FiniteAlgebra, FnTable, FnTable]:
    """The subalgebra {(a,b') : p(a) = f(b')} of A x B', with projections.

    Elements are ordered lexicographically in (a, b'); the i-th element of
    the result is ``(proj_A(i), proj_B_prime(i))``.  Raises NotHomomorphism
    unless both maps are homomorphisms into B.
    """
    _require_same_signature(A, B)
    _require_same_signature(B_prime, B)
    for name, g, dom, cod in (("p", p, A, B), ("f", f, B_prime, B)):
        res = is_homomorphism(g, dom, cod)
        if not res:
            raise NotHomomorphism(f"{name} is not a homomorphism: {res.counterexample}")

    elements = [(a, bp) for a in range(A.size) for bp in range(B_prime.size)
                if p(a) == f(bp)]
    index = {el: i for i, el in enumerate(elements)}
    tables: dict[str, tuple[int, ...]] = {}
    for name, arity in A.signature.ops:
        values = []
        for args in product(elements, repeat=arity):
            a_val = A.op(name, tuple(a for a, _ in args))
            bp_val = B_prime.op(name, tuple(bp for _, bp in args))
            # closure is automatic since p and f are homomorphisms
            if (a_val, bp_val) not in index:
                raise NotHomomorphism(
                    f"pullback carrier not closed under {name!r} at {args}")
            values.append(index[(a_val, bp_val)])
        tables[name] = tuple(values)
    P = FiniteAlgebra(A.signature, len(elements), tables)
    proj_A = FnTable(len(elements), A.size, tuple(a for a, _ in elements))
    proj_Bp = FnTable(len(elements), B_prime.size, tuple(bp for _, bp in elements))
    return P, proj_A, proj_Bp


def subalgebra_closure(A: FiniteAlgebra, generators: Sequence[int]) -> list[int]:
    """Smallest subset of the carrier containing the generators and closed
    under every operation (constants included), sorted ascending."""
    current = set(generators)
    for name, arity in A.signature.ops:
        if arity == 0:
            current.add(A.op(name, ()))
    changed = True
    while changed:
        changed = False
        members = sorted(current)
        for name, arity in A.signature.ops:
            if arity == 0:
                continue
            for args in product(members, repeat=arity):
                v = A.op(name, args)
                if v not in current:
                    current.add(v)
                    changed = True
    return sorted(current)


# -- equations ----------------------------------------------------------------

@dataclass(frozen=True)
class Equation:
    """An identity lhs = rhs over a shared ordered variable list."""

    vars: tuple[str, ...]
    lhs: Term
    rhs: Term

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        declared = set(self.vars)
        used = term_vars(self.lhs) | term_vars(self.rhs)
        if not used <= declared:
            raise UnboundVariable(
                f"equation uses undeclared variables {sorted(used - declared)}")


def check_equation(A: FiniteAlgebra, eq: Equation) -> CheckResult:
    """Exhaustively check an identity on A; the counterexample is the first
    failing assignment in lexicographic order of the variable list."""
    for values in product(range(A.size), repeat=len(eq.vars)):
        env = dict(zip(eq.vars, values))
        lhs = eval_term(eq.lhs, A, env)
        rhs = eval_term(eq.rhs, A, env)
        if lhs != rhs:
            return CheckResult(False, {"assignment": env, "lhs": lhs, "rhs": rhs})
    return CheckResult(True)
