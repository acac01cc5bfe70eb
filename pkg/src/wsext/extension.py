"""Split extensions of finite pointed algebras and their tuple witnesses.

A split extension is a diagram  X --k--> A --p--> B  with a section s of
p, where k is injective with image exactly the preimage of B's zero.  A
witness for the term theta (arity n+1) is an n-tuple of plain functions
q_i : A -> X satisfying  theta(k q_1(a), .., k q_n(a), s p(a)) = a.

Witness search is organized per element: for each a the feasible kernel
tuples T(a) are computed first (the defining condition is pointwise), so
existence costs |A| * |X|^n term evaluations instead of a search over
function space.  Witness enumeration is the lexicographic product of the
T(a) lists, elements of A in increasing index.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice, product
from typing import Optional, Sequence

from ._parallel import ordered_map
from .algebra import (
    DEFAULT_BUDGET,
    FiniteAlgebra,
    FnTable,
    is_homomorphism,
    pullback_algebra,
    subalgebra_closure,
)
from .errors import (
    AlphaAxiomFailed,
    ExtensionInvalid,
    InternalCheckFailed,
    InvalidMorphism,
    KernelPreimageMissing,
    SearchBudgetExceeded,
    SignatureMismatch,
    SizeMismatch,
    WitnessInvalid,
)
from .report import CheckResult, Report
from .terms import TermSpec, ThetaSpec, require_admissible


@dataclass(frozen=True)
class SplitExtension:
    """X --k--> A --p/s-- B over a shared signature.

    Only size and signature coherence is enforced at construction; the
    algebraic laws are checked by validate_split_extension.
    """

    X: FiniteAlgebra
    A: FiniteAlgebra
    B: FiniteAlgebra
    k: FnTable
    p: FnTable
    s: FnTable

    def __post_init__(self):
        if not (self.X.signature == self.A.signature == self.B.signature):
            raise SignatureMismatch("X, A, B must share a signature")
        shapes = (
            ("k", self.k, self.X.size, self.A.size),
            ("p", self.p, self.A.size, self.B.size),
            ("s", self.s, self.B.size, self.A.size),
        )
        for name, f, dom, cod in shapes:
            if f.dom_size != dom or f.cod_size != cod:
                raise SizeMismatch(
                    f"{name} is {f.dom_size}->{f.cod_size}, expected {dom}->{cod}")


def validate_split_extension(e: SplitExtension) -> Report:
    """Check every split-extension law; failures become report entries."""
    rep = Report()
    for name, f, dom, cod in (("k", e.k, e.X, e.A), ("p", e.p, e.A, e.B),
                              ("s", e.s, e.B, e.A)):
        res = is_homomorphism(f, dom, cod)
        rep.add(f"{name}_homomorphism", res.ok,
                "" if res.ok else str(res.counterexample))

    bad_b = next((b for b in range(e.B.size) if e.p(e.s(b)) != b), None)
    rep.add("section_law", bad_b is None,
            "" if bad_b is None else f"p(s({bad_b})) = {e.p(e.s(bad_b))}")

    rep.add("k_injective", e.k.is_injective(),
            "" if e.k.is_injective() else f"k values {list(e.k.values)}")

    kernel = [a for a in range(e.A.size) if e.p(a) == e.B.zero]
    image = e.k.image()
    rep.add("kernel_image", kernel == image,
            "" if kernel == image else f"p^-1(0) = {kernel}, im k = {image}")

    rep.add("zero_preserved", e.k(e.X.zero) == e.A.zero,
            "" if e.k(e.X.zero) == e.A.zero else
            f"k({e.X.zero}) = {e.k(e.X.zero)} != {e.A.zero}")
    return rep


def require_valid(e: SplitExtension) -> None:
    rep = validate_split_extension(e)
    if not rep.ok:
        raise ExtensionInvalid(rep)


@dataclass(frozen=True)
class Witness:
    """An n-tuple of functions q_i : A -> X certifying the decomposition."""

    n: int
    q: tuple[FnTable, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(self.q))
        if len(self.q) != self.n or self.n < 1:
            raise SizeMismatch(f"expected {self.n} component maps, got {len(self.q)}")

    def values_at(self, a: int) -> tuple[int, ...]:
        return tuple(qi(a) for qi in self.q)

    def arrays(self) -> tuple[tuple[int, ...], ...]:
        return tuple(qi.values for qi in self.q)


def theta_at(e: SplitExtension, theta: ThetaSpec, xs: Sequence[int], a: int) -> int:
    """theta evaluated in A at kernel coordinates xs (through k) and s(p(a))."""
    return theta.eval(e.A, tuple(e.k(x) for x in xs) + (e.s(e.p(a)),))


def validate_witness(
    e: SplitExtension,
    theta: ThetaSpec,
    w: Witness,
    normalized: bool = False,
) -> CheckResult:
    """Check the defining equation at every element of A.

    With ``normalized`` also require q_i(0_A) = 0_X for every component.
    """
    if w.n != theta.n:
        return CheckResult(False, {"reason": "arity", "witness_n": w.n, "theta_n": theta.n})
    for qi in w.q:
        if qi.dom_size != e.A.size or qi.cod_size != e.X.size:
            return CheckResult(False, {"reason": "shape"})
    for a in range(e.A.size):
        got = theta_at(e, theta, w.values_at(a), a)
        if got != a:
            return CheckResult(False, {"a": a, "value": got})
    if normalized:
        vals = w.values_at(e.A.zero)
        if vals != (e.X.zero,) * w.n:
            return CheckResult(False, {"a": e.A.zero, "tuple": list(vals),
                                       "reason": "not normalized"})
    return CheckResult(True)


def require_witness(e: SplitExtension, theta: ThetaSpec, w: Witness,
                    normalized: bool = False) -> None:
    res = validate_witness(e, theta, w, normalized=normalized)
    if not res:
        raise WitnessInvalid(f"witness fails at {res.counterexample}")


def feasible_tuples(
    e: SplitExtension,
    theta: ThetaSpec,
    normalize: bool = True,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[list[tuple[int, ...]]]:
    """Per element a, the lexicographic list of kernel tuples xs with
    theta(k xs, s p(a)) = a.  With ``normalize``, the zero element of A
    admits only the all-zero tuple (always feasible when theta is
    admissible on A)."""
    require_admissible(theta, e.A, "middle algebra")
    n = theta.n
    cost = e.A.size * e.X.size ** n
    if cost > budget:
        raise SearchBudgetExceeded(
            f"witness feasibility needs {cost} evaluations, budget is {budget}")

    def tuples_for(a: int) -> list[tuple[int, ...]]:
        return [xs for xs in product(range(e.X.size), repeat=n)
                if theta_at(e, theta, xs, a) == a]

    T = ordered_map(tuples_for, range(e.A.size), workers)
    if normalize:
        zero_tuple = (e.X.zero,) * n
        if zero_tuple not in T[e.A.zero]:
            raise InternalCheckFailed(
                "all-zero tuple infeasible at 0_A despite admissible theta")
        T[e.A.zero] = [zero_tuple]
    return T


def count_witnesses(
    e: SplitExtension,
    theta: ThetaSpec,
    normalize: bool = True,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> int:
    """Number of witnesses = product over a of |T(a)| (0 if any is empty)."""
    total = 1
    for choices in feasible_tuples(e, theta, normalize, budget, workers):
        total *= len(choices)
    return total


def find_witnesses(
    e: SplitExtension,
    theta: ThetaSpec,
    normalize: bool = True,
    limit: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[Witness]:
    """Enumerate witnesses as choice functions through the T(a) lists.

    Order: elements a in increasing index are the significant positions;
    tuples within each T(a) are tried in lexicographic order.  Returns []
    exactly when some T(a) is empty.
    """
    T = feasible_tuples(e, theta, normalize, budget, workers)
    if any(not choices for choices in T):
        return []
    total = 1
    for choices in T:
        total *= len(choices)
    if min(total, total if limit is None else limit) > budget:
        raise SearchBudgetExceeded(
            f"would materialize {total} witnesses, budget is {budget}")
    combos = product(*T)
    if limit is not None:
        combos = islice(combos, limit)
    out = []
    for choice in combos:
        q = tuple(
            FnTable(e.A.size, e.X.size, tuple(choice[a][i] for a in range(e.A.size)))
            for i in range(theta.n)
        )
        out.append(Witness(theta.n, q))
    return out


def semiabelian_witness(
    e: SplitExtension,
    theta: ThetaSpec,
    alphas: Sequence[TermSpec],
) -> Witness:
    """Witness built from binary difference-style terms.

    The terms must satisfy alpha_i(x, x) = 0 and
    theta(alpha_1(x,y), .., alpha_n(x,y), y) = x on A (checked
    exhaustively); then k q_i(a) = alpha_i(a, s p(a)) lands in the kernel
    and the returned q_i are its k-preimages.
    """
    require_valid(e)
    require_admissible(theta, e.A, "middle algebra")
    if len(alphas) != theta.n:
        raise AlphaAxiomFailed(f"expected {theta.n} binary terms, got {len(alphas)}")
    for i, alpha in enumerate(alphas):
        if alpha.arity != 2:
            raise AlphaAxiomFailed(f"term {i + 1} has arity {alpha.arity}, expected 2")
        for x in range(e.A.size):
            if alpha.eval(e.A, (x, x)) != e.A.zero:
                raise AlphaAxiomFailed(
                    f"alpha_{i + 1}({x},{x}) = {alpha.eval(e.A, (x, x))} != {e.A.zero}")
    for x in range(e.A.size):
        for y in range(e.A.size):
            diff = tuple(alpha.eval(e.A, (x, y)) for alpha in alphas)
            if theta.eval(e.A, diff + (y,)) != x:
                raise AlphaAxiomFailed(
                    f"theta(alphas({x},{y}), {y}) != {x}")

    k_preimage = {e.k(x): x for x in range(e.X.size)}
    q = []
    for alpha in alphas:
        values = []
        for a in range(e.A.size):
            v = alpha.eval(e.A, (a, e.s(e.p(a))))
            if v not in k_preimage:
                raise KernelPreimageMissing(
                    f"alpha(a, sp(a)) = {v} at a = {a} is outside the kernel image")
            values.append(k_preimage[v])
        q.append(FnTable(e.A.size, e.X.size, tuple(values)))
    w = Witness(theta.n, tuple(q))
    res = validate_witness(e, theta, w)
    if not res:
        raise InternalCheckFailed(f"derived witness fails at {res.counterexample}")
    return w


def is_schreier(e: SplitExtension, theta: ThetaSpec, workers: int = 1) -> bool:
    """True iff the evaluation map (xs, b) -> theta(k xs, s b) is a
    bijection onto A: every element decomposes, and uniquely.

    Injectivity alone would accept extensions with no witness at all
    (phi injective but not surjective); uniqueness is only meaningful on
    top of existence, so both halves are tested.
    """
    require_admissible(theta, e.A, "middle algebra")

    def phi_val(args: tuple[tuple[int, ...], int]) -> int:
        xs, b = args
        return theta.eval(e.A, tuple(e.k(x) for x in xs) + (e.s(b),))

    domain = [(xs, b) for xs in product(range(e.X.size), repeat=theta.n)
              for b in range(e.B.size)]
    values = ordered_map(phi_val, domain, workers)
    return len(set(values)) == len(values) == e.A.size


def pullback_extension(
    e: SplitExtension,
    theta: ThetaSpec,
    B_prime: FiniteAlgebra,
    f: FnTable,
    w: Witness,
) -> tuple[SplitExtension, Witness]:
    """Pull the extension back along f : B' -> B and transport the witness.

    The middle algebra is the pullback of p and f with elements (a, b') in
    lexicographic order; the transported witness is q'_i(a, b') = q_i(a).
    The result is revalidated (extension laws and witness equation).
    """
    require_valid(e)
    require_witness(e, theta, w)
    P, proj_A, proj_Bp = pullback_algebra(e.A, e.p, B_prime, f, e.B)
    index = {(proj_A(i), proj_Bp(i)): i for i in range(P.size)}

    k2 = FnTable(e.X.size, P.size,
                 tuple(index[(e.k(x), B_prime.zero)] for x in range(e.X.size)))
    p2 = proj_Bp
    s2 = FnTable(B_prime.size, P.size,
                 tuple(index[(e.s(f(b)), b)] for b in range(B_prime.size)))
    ext = SplitExtension(e.X, P, B_prime, k2, p2, s2)

    q2 = tuple(
        FnTable(P.size, e.X.size, tuple(qi(proj_A(j)) for j in range(P.size)))
        for qi in w.q
    )
    w2 = Witness(w.n, q2)

    rep = validate_split_extension(ext)
    if not rep.ok:
        raise InternalCheckFailed("pullback extension failed validation:\n" + rep.render())
    res = validate_witness(ext, theta, w2)
    if not res:
        raise InternalCheckFailed(f"transported witness fails at {res.counterexample}")
    return ext, w2


@dataclass(frozen=True)
class ProductCheck:
    """Outcome of the product-extension condition on a kernel algebra."""

    ok: bool
    q: Optional[tuple[FnTable, ...]]
    obstruction: Optional[int]

    def __bool__(self) -> bool:
        return self.ok


def product_extension_check(X: FiniteAlgebra, theta: ThetaSpec) -> ProductCheck:
    """Can every x be written theta(y_1, .., y_n, 0) within X itself?

    Equivalent at finite scale to X --id--> X --> 1 having a witness, and
    hence (by pullback stability) to every product projection X x B -> B
    having one.  Returns the lexicographically first choice per element,
    or the first unreachable element.
    """
    require_admissible(theta, X, "kernel algebra")
    n = theta.n
    choices = []
    for x in range(X.size):
        found = next((ys for ys in product(range(X.size), repeat=n)
                      if theta.eval(X, ys + (X.zero,)) == x), None)
        if found is None:
            return ProductCheck(False, None, x)
        choices.append(found)
    q = tuple(FnTable(X.size, X.size, tuple(choices[x][i] for x in range(X.size)))
              for i in range(n))
    return ProductCheck(True, q, None)


# -- morphisms of extensions ---------------------------------------------------

@dataclass(frozen=True)
class ExtensionMorphism:
    """Three maps (f on kernels, g on middles, h on bases) between extensions."""

    source: SplitExtension
    target: SplitExtension
    f: FnTable
    g: FnTable
    h: FnTable


def validate_morphism(m: ExtensionMorphism) -> Report:
    """Homomorphism checks plus the three commuting squares."""
    rep = Report()
    for name, fn, dom, cod in (("f", m.f, m.source.X, m.target.X),
                               ("g", m.g, m.source.A, m.target.A),
                               ("h", m.h, m.source.B, m.target.B)):
        if fn.dom_size != dom.size or fn.cod_size != cod.size:
            raise SizeMismatch(f"morphism component {name} has wrong endpoints")
        res = is_homomorphism(fn, dom, cod)
        rep.add(f"{name}_homomorphism", res.ok,
                "" if res.ok else str(res.counterexample))

    squares = (
        ("kernel_square", m.source.k.then(m.g), m.f.then(m.target.k)),
        ("quotient_square", m.g.then(m.target.p), m.source.p.then(m.h)),
        ("section_square", m.source.s.then(m.g), m.h.then(m.target.s)),
    )
    for name, left, right in squares:
        ok = left.values == right.values
        rep.add(name, ok, "" if ok else f"{list(left.values)} != {list(right.values)}")
    return rep


def check_morphism_surjectivity(m: ExtensionMorphism) -> Report:
    """Surjectivity of the three components, joint generation of the target
    middle algebra, and the implication 'f and h surjective => g surjective'
    (extremal epimorphisms of finite algebras are the surjections).
    """
    val = validate_morphism(m)
    if not val.ok:
        raise InvalidMorphism("morphism squares failed:\n" + val.render())

    rep = Report()
    f_surj = m.f.is_surjective()
    h_surj = m.h.is_surjective()
    g_surj = m.g.is_surjective()
    rep.add("f_surjective", f_surj)
    rep.add("h_surjective", h_surj)
    rep.add("g_surjective", g_surj)

    generators = sorted(set(m.source.k.then(m.g).values)
                        | set(m.source.s.then(m.g).values))
    closure = subalgebra_closure(m.target.A, generators)
    jointly_generate = closure == list(range(m.target.A.size))
    if f_surj and h_surj:
        rep.add("joint_generation", jointly_generate,
                "" if jointly_generate else
                f"generated subalgebra {closure} is proper")
        rep.add("surjection_lemma", g_surj,
                "" if g_surj else "f, h surjective but g is not")
    else:
        rep.add("joint_generation", True,
                f"not applicable (f/h not both surjective); closure size {len(closure)}")
        rep.add("surjection_lemma", True, "not applicable (hypothesis unmet)")
    return rep
