"""Terms over a signature: s-expression parsing, printing, evaluation.

The term text format is minimal: a term is either a variable name, a
0-ary operation name, or ``(op t1 ... tk)`` with whitespace-separated
subterms.  There is no infix syntax and no escaping; symbols are runs of
non-whitespace, non-parenthesis ASCII characters.

This module intentionally does not import the algebra module; algebras
are consumed duck-typed (``size``, ``op``, ``zero``, ``signature``), which
keeps the dependency graph acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Mapping, Sequence

from .errors import (
    ArityMismatch,
    SearchBudgetExceeded,
    TermSyntaxError,
    ThetaNotAdmissible,
    UnboundVariable,
    UnknownSymbol,
)
from .report import CheckResult

if TYPE_CHECKING:  # pragma: no cover
    from .algebra import FiniteAlgebra, Signature


class Term:
    """Abstract syntax tree node; concrete nodes are Var and App."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    op: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    return set().union(*(term_vars(a) for a in t.args)) if t.args else set()


def format_term(t: Term) -> str:
    """Render a term back to its text form (0-ary ops print bare)."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.op
    return "(" + " ".join([t.op] + [format_term(a) for a in t.args]) + ")"


# -- parsing -------------------------------------------------------------------

_DELIMS = "()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens are ('(' | ')' | 'sym', text, offset)."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _DELIMS:
            tokens.append((c, c, i))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in _DELIMS:
            j += 1
        tokens.append(("sym", text[i:j], i))
        i = j
    return tokens


def parse_term(text: str, sig: "Signature", vars: Sequence[str]) -> Term:
    """Parse s-expression term text against a signature and variable list.

    Variables shadow nothing: a declared variable whose name collides with
    an operation symbol is rejected up front.
    """
    var_list = list(vars)
    if len(set(var_list)) != len(var_list):
        raise TermSyntaxError(f"duplicate variable names in {var_list}", 0)
    for v in var_list:
        if sig.has_op(v):
            raise TermSyntaxError(
                f"variable {v!r} collides with an operation symbol", 0)
    var_set = set(var_list)
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty term", 0)

    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError("unexpected end of input", len(text))
        kind, val, off = tokens[pos]
        pos += 1
        if kind == ")":
            raise TermSyntaxError("unexpected ')'", off)
        if kind == "sym":
            if val in var_set:
                return Var(val)
            if sig.has_op(val):
                if sig.arity(val) != 0:
                    raise ArityMismatch(
                        f"operation {val!r} has arity {sig.arity(val)}; "
                        "apply it with parentheses")
                return App(val, ())
            raise UnknownSymbol(f"symbol {val!r} is neither a variable nor an operation")
        # kind == "(" : an application
        if pos >= len(tokens):
            raise TermSyntaxError("unterminated '('", off)
        hkind, hval, hoff = tokens[pos]
        if hkind != "sym":
            raise TermSyntaxError("expected an operation name after '('", hoff)
        if not sig.has_op(hval):
            raise UnknownSymbol(f"{hval!r} is not an operation of the signature")
        pos += 1
        args = []
        while True:
            if pos >= len(tokens):
                raise TermSyntaxError("unterminated '('", off)
            if tokens[pos][0] == ")":
                pos += 1
                break
            args.append(parse())
        if len(args) != sig.arity(hval):
            raise ArityMismatch(
                f"operation {hval!r} expects {sig.arity(hval)} arguments, got {len(args)}")
        return App(hval, tuple(args))

    result = parse()
    if pos != len(tokens):
        raise TermSyntaxError("trailing input after term", tokens[pos][2])
    return result


# -- evaluation ----------------------------------------------------------------

def eval_term(t: Term, A: "FiniteAlgebra", env: Mapping[str, int]) -> int:
    """Evaluate by structural recursion on the operation tables."""
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(f"variable {t.name!r} not bound")
        return env[t.name]
    return A.op(t.op, tuple(eval_term(a, A, env) for a in t.args))


@dataclass(frozen=True)
class TermSpec:
    """A term together with its ordered argument variables.

    The variable order fixes the argument order of the induced operation,
    which a bare Term cannot express.
    """

    vars: tuple[str, ...]
    term: Term

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        free = term_vars(self.term)
        if not free <= set(self.vars):
            raise UnboundVariable(
                f"term uses undeclared variables {sorted(free - set(self.vars))}")

    @property
    def arity(self) -> int:
        return len(self.vars)

    def eval(self, A: "FiniteAlgebra", args: Sequence[int]) -> int:
        if len(args) != len(self.vars):
            raise ArityMismatch(
                f"term of arity {len(self.vars)} applied to {len(args)} arguments")
        return eval_term(self.term, A, dict(zip(self.vars, args)))


@dataclass(frozen=True)
class ThetaSpec(TermSpec):
    """Witness term: arity n+1 with the last variable distinguished.

    Admissibility (plugging the algebra's zero into the first n variables
    acts as the identity in the last) is a per-algebra property checked by
    check_theta_admissible, not assumed here.
    """

    def __post_init__(self):
        super().__post_init__()
        if len(self.vars) < 2:
            raise ArityMismatch("witness term needs at least 2 variables (n >= 1)")

    @property
    def n(self) -> int:
        return len(self.vars) - 1


def check_theta_admissible(theta: ThetaSpec, A: "FiniteAlgebra") -> CheckResult:
    """Check theta(0,..,0,x) = x for every x in the carrier."""
    zeros = (A.zero,) * theta.n
    for x in range(A.size):
        got = theta.eval(A, zeros + (x,))
        if got != x:
            return CheckResult(False, {"x": x, "value": got})
    return CheckResult(True)


def require_admissible(theta: ThetaSpec, A: "FiniteAlgebra", where: str = "") -> None:
    res = check_theta_admissible(theta, A)
    if not res:
        suffix = f" ({where})" if where else ""
        raise ThetaNotAdmissible(
            f"theta(0,..,0,x) != x at {res.counterexample}{suffix}")


def check_commuting(
    omega: TermSpec,
    theta: ThetaSpec,
    A: "FiniteAlgebra",
    budget: int = 10_000_000,
) -> CheckResult:
    """Interchange law between an m-ary term and the witness term.

    For every m x (n+1) matrix of elements: applying theta to each row and
    then omega to the results must equal applying omega down each column
    and then theta.  The counterexample is the first failing matrix.
    """
    m = omega.arity
    width = theta.arity
    domain = A.size ** (m * width)
    if domain > budget:
        raise SearchBudgetExceeded(
            f"commutation check needs {domain} cases, budget is {budget}")
    for flat in product(range(A.size), repeat=m * width):
        rows = [flat[j * width:(j + 1) * width] for j in range(m)]
        row_then_omega = omega.eval(A, [theta.eval(A, r) for r in rows])
        cols = [tuple(rows[j][i] for j in range(m)) for i in range(width)]
        col_then_theta = theta.eval(A, [omega.eval(A, c) for c in cols])
        if row_then_omega != col_then_theta:
            return CheckResult(False, {
                "matrix": [list(r) for r in rows],
                "rows_first": row_then_omega,
                "columns_first": col_then_theta,
            })
    return CheckResult(True)
