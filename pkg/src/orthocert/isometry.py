"""Isometry groups, reflections, and residue-to-global lifting.

For an algebra with involution (A, sigma) the isometries are the u with
sigma(u) u = 1; those of reduced norm exactly 1 form the special orthogonal
subgroup.  A reflection datum is a pair (y, a) with a antisymmetric and
m = (1/2) sigma(y) y + a invertible; it defines the isometry

    s_{y,a} = 1 - y m^(-1) sigma(y).

Over a finite semisimple algebra the group generated by all such
reflections contains the special orthogonal group; this module verifies
that by exhaustive enumeration plus multiplicative closure.  Over a finite
semilocal base, residue isometries lift: reflection data lift directly
(antisymmetrize any preimage), and arbitrary special orthogonal residue
tuples lift by combining them into one approximate matrix and multiplying
by the inverse symmetric square root of sigma(u) u.
"""

from dataclasses import dataclass, field

from .azumaya import QuotientCtx, quotient_ctx, sqrt_one_plus_nilpotent
from .errors import BudgetExceeded, IdentityViolation
from .linalg import Matrix

__all__ = [
    "ReflectionDatum", "ReflectionEnumeration", "ClosureResult",
    "LiftCertificate", "is_isometry", "nrd_sign", "reflection",
    "reflection_enumerate", "reflection_closure", "enumerate_isometries",
    "lift_reflection", "hensel_lift_isometry", "lift_so",
    "random_so", "random_reflection_datum",
]


@dataclass(frozen=True)
class ReflectionDatum:
    y: object
    a: object


@dataclass
class ReflectionEnumeration:
    elements: list            # distinct reflections, in discovery order
    pairs_considered: int
    valid_pairs: int


@dataclass
class ClosureResult:
    closure: list             # the generated subgroup
    reflections: list
    o_elements: list
    so_elements: list
    verdict: bool             # every special orthogonal element is reached
    pairs_considered: int


@dataclass
class LiftCertificate:
    algebra: object
    targets: list
    lifted: object
    method: str
    checks: dict = field(default_factory=dict)


def is_isometry(A, u) -> bool:
    return A.mul(A.invol(u), u) == A.one()


def nrd_sign(A, u):
    """Reduced norm of an isometry and whether it equals 1 exactly."""
    if not is_isometry(A, u):
        raise ValueError("not an isometry")
    v = A.nrd(u)
    return v, v == A.base.one()


# ---------------------------------------------------------------------------
# reflections

def _midpoint(A, datum: ReflectionDatum):
    half_yy = A.smul(A.half, A.mul(A.invol(datum.y), datum.y))
    return A.add(half_yy, datum.a)


def reflection(A, datum: ReflectionDatum):
    """Build s_{y,a}; raises when the datum is invalid."""
    if A.invol(datum.a) != A.neg(datum.a):
        raise ValueError("a must be antisymmetric")
    m = _midpoint(A, datum)
    minv = A.inverse(m)
    if minv is None:
        raise ValueError("(1/2) sigma(y) y + a is not invertible")
    s = A.sub(A.one(), A.mul(A.mul(datum.y, minv), A.invol(datum.y)))
    if not is_isometry(A, s):
        raise IdentityViolation("isometry", "constructed reflection")
    return s


def _element_key(A, x):
    return x.key() if isinstance(x, Matrix) else tuple(x)


def _antisymmetric_elements(A):
    return [a for a in A.elements() if A.invol(a) == A.neg(a)]


def _iter_reflections(A, antisym, counter):
    """Yield (datum, s) over all valid pairs; counter[0] counts pairs."""
    for y in A.elements():
        sy = A.invol(y)
        half_yy = A.smul(A.half, A.mul(sy, y))
        for a in antisym:
            counter[0] += 1
            m = A.add(half_yy, a)
            minv = A.inverse(m)
            if minv is None:
                continue
            counter[1] += 1
            s = A.sub(A.one(), A.mul(A.mul(y, minv), sy))
            yield ReflectionDatum(y, a), s


def reflection_enumerate(A, pair_budget: int = 10_000_000) -> ReflectionEnumeration:
    """All reflections of a finite algebra, deduplicated."""
    if not A.is_finite:
        raise ValueError("enumeration requires a finite algebra")
    antisym = _antisymmetric_elements(A)
    total = A.size * len(antisym)
    if total > pair_budget:
        raise BudgetExceeded(
            f"{total} candidate pairs exceed the budget of {pair_budget}",
            required=total)
    counter = [0, 0]
    seen = {}
    for _datum, s in _iter_reflections(A, antisym, counter):
        seen.setdefault(_element_key(A, s), s)
    return ReflectionEnumeration(list(seen.values()), counter[0], counter[1])


def enumerate_isometries(A, element_budget: int = 10_000_000):
    """(O, SO) of a finite algebra by scanning every element."""
    if not A.is_finite:
        raise ValueError("enumeration requires a finite algebra")
    if A.size > element_budget:
        raise BudgetExceeded(
            f"|A| = {A.size} exceeds the budget of {element_budget}",
            required=A.size)
    one = A.base.one()
    O, SO = [], []
    for u in A.elements():
        if is_isometry(A, u):
            O.append(u)
            if A.nrd(u) == one:
                SO.append(u)
    return O, SO


def _mulclose(A, gens, element_budget):
    """Multiplicative closure of a finite inverse-closed generating set."""
    closure = {}
    frontier = []
    for g in gens:
        k = _element_key(A, g)
        if k not in closure:
            closure[k] = g
            frontier.append(g)
    while frontier:
        x = frontier.pop()
        for g in gens:
            p = A.mul(x, g)
            k = _element_key(A, p)
            if k not in closure:
                if len(closure) >= element_budget:
                    raise BudgetExceeded(
                        f"closure exceeded {element_budget} elements",
                        required=len(closure) + 1)
                closure[k] = p
                frontier.append(p)
    return closure


def reflection_closure(A, element_budget: int = 1_000_000,
                       pair_budget: int = 10_000_000,
                       early_stop: bool = False) -> ClosureResult:
    """Close the reflections under multiplication and compare against SO.

    With `early_stop` the reflection stream is consumed lazily and the scan
    stops as soon as every special orthogonal element has been reached (the
    verdict is then still conclusive: a subgroup generated by a subset of
    the reflections already contains SO).
    """
    O, SO = enumerate_isometries(A, element_budget)
    so_keys = {_element_key(A, u) for u in SO}
    antisym = _antisymmetric_elements(A)
    counter = [0, 0]
    gens = {}
    closure = {}

    def covered():
        return so_keys <= set(closure)

    stream = _iter_reflections(A, antisym, counter)
    done = False
    while not done:
        batch = []
        for _ in range(64):
            try:
                _datum, s = next(stream)
            except StopIteration:
                done = True
                break
            k = _element_key(A, s)
            if k not in gens:
                gens[k] = s
                batch.append(s)
        if counter[0] > pair_budget:
            raise BudgetExceeded(
                f"candidate pairs exceeded the budget of {pair_budget}",
                required=counter[0])
        if batch:
            closure = _mulclose(A, list(gens.values()), element_budget)
        if early_stop and covered():
            break
    return ClosureResult(list(closure.values()), list(gens.values()),
                         O, SO, covered(), counter[0])


# ---------------------------------------------------------------------------
# seeded random elements

def random_so(A, rng, attempts: int = 200):
    """Random special orthogonal element via the Cayley transform.

    For antisymmetric x with 1 + x invertible, (1 - x)(1 + x)^(-1) is an
    isometry of reduced norm 1 (sigma swaps the two factors and preserves
    the reduced norm).
    """
    one = A.one()
    for _ in range(attempts):
        x = A.rand_antisym(rng)
        minv = A.inverse(A.add(one, x))
        if minv is None:
            continue
        u = A.mul(A.sub(one, x), minv)
        if not is_isometry(A, u) or A.nrd(u) != A.base.one():
            raise IdentityViolation("cayley", "transform left the group")
        return u
    raise RuntimeError("no invertible Cayley denominator found")


def random_reflection_datum(A, rng, attempts: int = 200) -> ReflectionDatum:
    for _ in range(attempts):
        y = A.rand(rng)
        a = A.rand_antisym(rng)
        datum = ReflectionDatum(y, a)
        if A.inverse(_midpoint(A, datum)) is not None:
            return datum
    raise RuntimeError("no valid reflection datum found")


# ---------------------------------------------------------------------------
# lifting

def lift_reflection(ctx: QuotientCtx, residue_data) -> ReflectionDatum:
    """Lift per-residue reflection data to one datum over the global algebra.

    Any entrywise preimage works for y; the preimage of a is forced back
    into the antisymmetric part, which does not change its reduction.  The
    midpoint stays invertible because its reduction at every residue is.
    """
    residue_data = list(residue_data)
    if len(residue_data) != len(ctx):
        raise ValueError(f"expected {len(ctx)} residue data")
    for B, datum in zip(ctx.residue_algebras, residue_data):
        if B.invol(datum.a) != B.neg(datum.a):
            raise ValueError("datum invalid over the quotient: a not antisymmetric")
        if B.inverse(_midpoint(B, datum)) is None:
            raise ValueError("datum invalid over the quotient: midpoint not invertible")
    A = ctx.algebra
    z = ctx.lift([d.y for d in residue_data])
    b0 = ctx.lift([d.a for d in residue_data])
    b = A.smul(A.half, A.sub(b0, A.invol(b0)))
    lifted = ReflectionDatum(z, b)
    if A.inverse(_midpoint(A, lifted)) is None:
        raise IdentityViolation("midpoint_invertible",
                                "lifted midpoint must be invertible")
    return lifted


def hensel_lift_isometry(A, u0) -> Matrix:
    """Exactify u0 whose defect sigma(u0) u0 - 1 vanishes at every residue.

    The correction divides by the symmetric square root of sigma(u0) u0;
    the result reduces to u0 everywhere and its reduced norm equals the
    common residue sign exactly (a square root of 1 congruent to 1 at every
    residue is 1, because 1 + alpha is then congruent to 2, a unit).
    """
    ctx = quotient_ctx(A)
    eps = A.sub(A.mul(A.invol(u0), u0), A.one())
    for i, B in enumerate(ctx.residue_algebras):
        if ctx.reduce_at(eps, i) != B.zero():
            raise ValueError("sigma(u0) u0 must reduce to 1 at every residue")
    signs = set()
    for i, B in enumerate(ctx.residue_algebras):
        n = B.nrd(ctx.reduce_at(u0, i))
        if n == B.base.one():
            signs.add(1)
        elif n == B.base.neg(B.base.one()):
            signs.add(-1)
        else:
            raise ValueError("residue reduced norm is not a sign")
    if len(signs) != 1:
        raise ValueError("residue signs disagree")
    sign = signs.pop()
    s = sqrt_one_plus_nilpotent(A, eps)
    sinv = A.inverse(s)
    assert sinv is not None  # s is 1 mod the radical
    u = A.mul(u0, sinv)
    if not is_isometry(A, u):
        raise IdentityViolation("isometry", "after square-root correction")
    if ctx.reduce(u) != ctx.reduce(u0):
        raise IdentityViolation("residue_match", "correction moved a residue")
    expected = A.base.one() if sign == 1 else A.base.neg(A.base.one())
    if A.nrd(u) != expected:
        raise IdentityViolation("nrd_sign", "reduced norm not pinned")
    return u


def lift_so(A, targets) -> LiftCertificate:
    """Lift one special orthogonal element per residue to a global one.

    The targets are combined into a single approximate preimage which is
    then exactified; the certificate records the exact isometry identity,
    reduced norm 1, and the per-residue matches.
    """
    ctx = quotient_ctx(A)
    targets = list(targets)
    if len(targets) != len(ctx):
        raise ValueError(f"expected {len(ctx)} residue targets")
    for i, (B, t) in enumerate(zip(ctx.residue_algebras, targets)):
        if not is_isometry(B, t):
            raise ValueError(f"target {i} is not an isometry")
        if B.nrd(t) != B.base.one():
            raise ValueError(f"target {i} has reduced norm != 1")
    u0 = ctx.lift(targets)
    w = hensel_lift_isometry(A, u0)
    checks = {
        "isometry": is_isometry(A, w),
        "nrd_one": A.nrd(w) == A.base.one(),
        "residues": list(ctx.reduce(w)) == targets,
    }
    for name, ok in checks.items():
        if not ok:
            raise IdentityViolation(name, "lift certificate")
    return LiftCertificate(A, targets, w, "hensel", checks)
