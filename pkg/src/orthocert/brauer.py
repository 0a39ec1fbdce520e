"""Reduced-norm -1 witnesses and idempotent splitting certificates.

Over a finite semilocal base with 2 invertible, a split algebra with an
orthogonal involution always carries an isometry u with reduced
characteristic polynomial (t+1)(t-1)^(d-1): reflect in an anisotropic
vector of the form.  Conversely, any isometry of reduced norm -1 can be
corrected by a special orthogonal lift so that its characteristic
polynomial f has that shape at every residue; then f(-1) = 0 exactly,
f = (t+1) g, alpha = g(-1) is a unit, and e = alpha^(-1) g(v) is an
idempotent of residue rank one.  The right module eA is free of rank d and
right multiplication identifies the algebra with the endomorphisms of eA,
which is the splitting certificate.

The quaternion probe covers the direction that fails without splitness:
for a division quaternion algebra over Q every bounded-height isometry has
reduced norm 1, while the split control finds a -1 witness immediately.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .azumaya import QuaternionAlgebra, SplitAlgebra, quotient_ctx
from .errors import IdentityViolation
from .linalg import (Matrix, Poly, det, mat, mmul, module_basis, msmul, poly,
                     poly_divide_linear, poly_eval, poly_eval_matrix,
                     poly_mul, rank_at_residue, solve_in_span)
from .isometry import is_isometry, lift_so
from .rings import residue_split

__all__ = [
    "NormMinusOneWitness", "SplitCertificate", "ProbeReport",
    "reflection_charpoly", "anisotropic_vector", "norm_minus_one",
    "correct_to_canonical", "functional_equation_check", "split_certificate",
    "right_regular_matrix", "quaternion_probe",
]


@dataclass
class NormMinusOneWitness:
    u: Matrix
    vector: tuple          # the x with g(x, x) a unit
    charpoly: Poly


@dataclass
class SplitCertificate:
    input_u: Matrix
    v: Matrix
    f: Poly
    g: Poly
    r: Poly
    alpha: object
    e: Matrix
    e_perp: Matrix
    basis: list            # free basis of eA, as algebra elements
    checks: dict = field(default_factory=dict)


@dataclass
class ProbeReport:
    height: int
    isometries: list       # (element, reduced norm) pairs, discovery order
    count: int
    all_nrd_one: bool
    minus_one_witness: object


def reflection_charpoly(R, d: int) -> Poly:
    """(t+1)(t-1)^(d-1) over R."""
    one = R.one()
    f = poly(R, [one, one])
    lin = poly(R, [R.neg(one), one])
    for _ in range(d - 1):
        f = poly_mul(R, f, lin)
    return f


# ---------------------------------------------------------------------------
# anisotropic vectors and the canonical witness

def _form_value(A: SplitAlgebra, x, y):
    """g(x, y) for coordinate vectors."""
    R = A.base
    acc = R.zero()
    for i in range(A.d):
        for j in range(A.d):
            acc = R.add(acc, R.mul(x[i], R.mul(A.gram.at(i, j), y[j])))
    return acc


def _residue_vectors(F, d):
    """All vectors over a finite field, first coordinate varying fastest."""
    size = F.size
    pool = list(F.elements())
    for n in range(size ** d):
        coords, k = [], n
        for _ in range(d):
            coords.append(pool[k % size])
            k //= size
        yield tuple(coords)


def anisotropic_vector(A: SplitAlgebra) -> tuple:
    """A coordinate vector x with g(x, x) a unit.

    Found residue by residue (first hit in the fixed enumeration order) and
    combined by lifting; the global value is then automatically a unit.
    """
    ctx = quotient_ctx(A)
    per_residue = []
    for B in ctx.residue_algebras:
        hit = next((x for x in _residue_vectors(B.base, B.d)
                    if B.base.inv(_form_value(B, x, x)) is not None), None)
        if hit is None:
            raise IdentityViolation(
                "anisotropic_vector",
                "no anisotropic vector over a residue field; the form "
                "cannot be unimodular")
        per_residue.append(hit)
    x = tuple(ctx.split.lift([v[i] for v in per_residue])
              for i in range(A.d))
    if A.base.inv(_form_value(A, x, x)) is None:
        raise IdentityViolation("anisotropic_vector", "lift lost unimodularity")
    return x


def norm_minus_one(A: SplitAlgebra) -> NormMinusOneWitness:
    """The reflection u = 1 - 2 x (x^T g) / g(x,x) in an anisotropic x.

    u negates x and fixes its orthogonal complement, so its reduced
    characteristic polynomial is exactly (t+1)(t-1)^(d-1) and its reduced
    norm is -1.
    """
    R = A.base
    x = anisotropic_vector(A)
    alpha = _form_value(A, x, x)
    ainv = R.inv(alpha)
    col = mat(A.d, 1, x)
    row_xtg = mmul(R, mat(1, A.d, x), A.gram)
    u = A.sub(A.one(), msmul(R, R.mul(R.from_int(2), ainv),
                             mmul(R, col, row_xtg)))
    if not is_isometry(A, u):
        raise IdentityViolation("isometry", "anisotropic reflection")
    if A.nrd(u) != R.neg(R.one()):
        raise IdentityViolation("nrd_minus_one", "anisotropic reflection")
    f = A.rcharpoly(u)
    if f != reflection_charpoly(R, A.d):
        raise IdentityViolation("charpoly", "anisotropic reflection")
    return NormMinusOneWitness(u, x, f)


# ---------------------------------------------------------------------------
# canonical correction and the splitting pipeline

def correct_to_canonical(A: SplitAlgebra, u: Matrix) -> Matrix:
    """Multiply u by a special orthogonal element so that every residue of
    the result is the canonical anisotropic reflection of its residue
    algebra (hence has residue characteristic polynomial (t+1)(t-1)^(d-1)).
    """
    if A.d % 2 != 0:
        raise ValueError("canonical correction is defined for even degree")
    R = A.base
    if not is_isometry(A, u):
        raise ValueError("u must be an isometry")
    if A.nrd(u) != R.neg(R.one()):
        raise ValueError("u must have reduced norm -1")
    ctx = quotient_ctx(A)
    targets = []
    residue_refs = []
    for i, B in enumerate(ctx.residue_algebras):
        vi = norm_minus_one(B).u
        residue_refs.append(vi)
        ui = ctx.reduce_at(u, i)
        ti = B.mul(B.invol(ui), vi)   # u_i^(-1) v_i; the inverse of an isometry is its involution
        if B.nrd(ti) != B.base.one():
            raise IdentityViolation("nrd_one", "residue correction target")
        targets.append(ti)
    w = lift_so(A, targets).lifted
    v = A.mul(u, w)
    for i, (B, vi) in enumerate(zip(ctx.residue_algebras, residue_refs)):
        if ctx.reduce_at(v, i) != vi:
            raise IdentityViolation("residue_match", "corrected isometry")
        if B.rcharpoly(vi) != reflection_charpoly(B.base, B.d):
            raise IdentityViolation("charpoly", "residue of corrected isometry")
    return v


def functional_equation_check(A, v) -> bool:
    """Coefficient reversal f(0)^(-1) t^d f(1/t) = f for f = charpoly(v)."""
    if not is_isometry(A, v):
        raise ValueError("v must be an isometry")
    R = A.base
    f = A.rcharpoly(v)
    d = f.degree
    c0inv = R.inv(f.coeffs[0])
    if c0inv is None:
        return False
    return all(R.mul(c0inv, f.coeffs[d - k]) == f.coeffs[k]
               for k in range(d + 1))


def split_certificate(A: SplitAlgebra, u: Matrix) -> SplitCertificate:
    """Machine-checked splitting certificate from a reduced-norm -1 isometry.

    For even degree, u is first corrected to the canonical residue shape.
    For odd degree the canonical anisotropic reflection serves directly as
    v: its characteristic polynomial is (t+1)(t-1)^(d-1) globally, so the
    same factorization and idempotent construction go through and the given
    u is only required to exist.
    """
    R = A.base
    d = A.d
    if not is_isometry(A, u):
        raise ValueError("u must be an isometry")
    if A.nrd(u) != R.neg(R.one()):
        raise ValueError("u must have reduced norm -1")
    checks = {}
    if d % 2 == 0:
        v = correct_to_canonical(A, u)
    else:
        v = norm_minus_one(A).u
    f = A.rcharpoly(v)
    checks["functional_equation"] = functional_equation_check(A, v)
    if not checks["functional_equation"]:
        raise IdentityViolation("functional_equation")
    if poly_eval(R, f, R.neg(R.one())) != R.zero():
        raise IdentityViolation("f_at_minus_one", "f(-1) != 0")
    checks["f_at_minus_one"] = True
    g, rem = poly_divide_linear(R, f, R.neg(R.one()))
    if rem != R.zero():
        raise IdentityViolation("factor_g", "t + 1 does not divide f")
    checks["factor_g"] = True
    alpha = poly_eval(R, g, R.neg(R.one()))
    alpha_inv = R.inv(alpha)
    if alpha_inv is None:
        raise IdentityViolation("alpha_unit", "g(-1) is not a unit")
    checks["alpha_unit"] = True
    split = residue_split(R)
    for i, F in enumerate(split.fields):
        minus2 = F.neg(F.from_int(2))
        expect = F.one()
        for _ in range(d - 1):
            expect = F.mul(expect, minus2)
        if split.project(alpha, i) != expect:
            raise IdentityViolation(
                "alpha_residue_value",
                f"alpha != (-2)^(d-1) at residue {split.labels[i]}")
    checks["alpha_residue_value"] = True
    g_minus_alpha = poly(R, (R.sub(g.coeffs[0], alpha),) + g.coeffs[1:])
    r, rem2 = poly_divide_linear(R, g_minus_alpha, R.neg(R.one()))
    if rem2 != R.zero():
        raise IdentityViolation("factor_r", "t + 1 does not divide g - alpha")
    checks["factor_r"] = True
    e = msmul(R, alpha_inv, poly_eval_matrix(R, g, v))
    e_perp = msmul(R, R.neg(alpha_inv),
                   mmul(R, A.add(v, A.one()), poly_eval_matrix(R, r, v)))
    if A.mul(e, e) != e:
        raise IdentityViolation("e_idempotent", "e^2 != e")
    checks["e_idempotent"] = True
    if A.add(e, e_perp) != A.one():
        raise IdentityViolation("partition_of_unity", "e + e' != 1")
    checks["partition_of_unity"] = True
    if A.mul(e, e_perp) != A.zero() or A.mul(e_perp, e) != A.zero():
        raise IdentityViolation("idempotent_orthogonality", "e e' != 0")
    checks["idempotent_orthogonality"] = True
    for i in range(len(split.fields)):
        if rank_at_residue(R, e, split, i) != 1:
            raise IdentityViolation(
                "residue_rank_one",
                f"rank of e at {split.labels[i]} is not 1")
    checks["residue_rank_one"] = True
    basis, gens = _module_basis_of_eA(A, e)
    checks["basis_free_rank"] = True
    pmat = _right_regular_map_matrix(A, basis)
    if R.inv(det(R, pmat)) is None:
        raise IdentityViolation("right_regular_bijective",
                                "A -> End(eA) is not bijective")
    checks["right_regular_bijective"] = True
    return SplitCertificate(u, v, f, g, r, alpha, e, e_perp, basis, checks)


def _module_basis_of_eA(A: SplitAlgebra, e: Matrix):
    """Free basis of the right module eA inside A, as algebra elements."""
    gens = [A.mul(e, b) for b in A.basis()]
    report = module_basis(A.base, [m.entries for m in gens])
    if not report.free or report.rank != A.d:
        raise IdentityViolation(
            "basis_free_rank",
            f"eA is not free of rank {A.d} (got {report.rank if report.free else 'non-free'})")
    basis = [Matrix(A.d, A.d, tuple(v)) for v in report.basis]
    return basis, gens


def right_regular_matrix(A: SplitAlgebra, basis, x: Matrix) -> Matrix:
    """Matrix of right multiplication by x on eA in the given basis."""
    R = A.base
    rows = []
    bvecs = [b.entries for b in basis]
    for b in basis:
        target = A.mul(b, x).entries
        coords = solve_in_span(R, bvecs, target)
        if coords is None:
            raise IdentityViolation("right_regular_bijective",
                                    "eA is not stable under right multiplication")
        rows.append(coords)
    return mat(len(basis), len(basis), tuple(c for row in rows for c in row))


def _right_regular_map_matrix(A: SplitAlgebra, basis) -> Matrix:
    """The d^2 x d^2 matrix of a |-> (right multiplication by a on eA)."""
    cols = []
    for unit in A.basis():
        cols.append(right_regular_matrix(A, basis, unit).entries)
    n = A.d * A.d
    return mat(n, n, tuple(cols[j][i] for i in range(n) for j in range(n)))


# ---------------------------------------------------------------------------
# quaternion probe over Q

def _bounded_fractions(height: int):
    vals = set()
    for den in range(1, height + 1):
        for num in range(-height, height + 1):
            vals.add(Fraction(num, den))
    return sorted(vals)


def quaternion_probe(A: QuaternionAlgebra, height: int = 3,
                     record_cap: int = 512) -> ProbeReport:
    """Scan all quaternions with coordinate height <= `height` for isometries.

    Records every isometry found with its reduced norm, whether all norms
    were 1, and the first reduced-norm -1 witness if any.  Finding nothing
    is reported, not raised.
    """
    F = A.base
    one, minus_one = F.one(), F.neg(F.one())
    pool = _bounded_fractions(height)
    found = []
    witness = None
    count = 0
    for c in product(pool, repeat=4):
        n = A.nrd(c)
        if n != one and n != minus_one:
            continue
        if not is_isometry(A, c):
            continue
        count += 1
        if len(found) < record_cap:
            found.append((c, n))
        if witness is None and n == minus_one:
            witness = c
    return ProbeReport(height, found, count, witness is None, witness)
