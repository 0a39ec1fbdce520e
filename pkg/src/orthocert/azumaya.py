"""Algebras with involution over the base rings.

Two shapes are supported:

* split: the matrix algebra M_d(R) with the involution adjoint to a
  symmetric bilinear form with unit-determinant Gram matrix g, namely
  sigma(x) = g^(-1) x^T g (2 must be invertible in R);
* quaternion: (a, b / F) over a field F of characteristic != 2, with the
  orthogonal involution Int(u) o bar for a pure quaternion u of unit
  reduced norm.  Multiplication follows i^2 = a, j^2 = b, ij = -ji = k.

Reduced trace / norm / characteristic polynomial are the matrix trace,
determinant and characteristic polynomial in the split case and the usual
degree-2 formulas in the quaternion case.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import IdentityViolation
from .linalg import (Matrix, charpoly, det, identity, madd, mat_inverse,
                     mmul, mneg, msmul, msub, poly, rank_over_field, trace,
                     transpose, zeros, Poly)
from .rings import Ring, ResidueSplit, residue_split

__all__ = [
    "SplitAlgebra", "QuaternionAlgebra", "QuotientCtx",
    "involution", "check_orthogonal", "reduced_norm", "reduced_trace",
    "reduced_charpoly", "quotient_ctx", "sqrt_one_plus_nilpotent",
]


class SplitAlgebra:
    """M_d(R) with the involution adjoint to a symmetric unimodular form."""

    shape = "split"

    def __init__(self, base: Ring, d: int, gram: Matrix):
        if d < 1:
            raise ValueError("degree must be positive")
        if gram.rows != d or gram.cols != d:
            raise ValueError("Gram matrix shape does not match the degree")
        if not base.two_invertible:
            raise ValueError(f"2 must be invertible in {base.spec_str()}")
        if gram != transpose(gram):
            raise ValueError("Gram matrix must be symmetric")
        gram_inv = mat_inverse(base, gram)
        if gram_inv is None:
            raise ValueError("Gram matrix determinant must be a unit")
        self.base = base
        self.d = d
        self.gram = gram
        self.gram_inv = gram_inv
        self.half = base.half()

    degree = property(lambda self: self.d)

    def zero(self): return zeros(self.base, self.d, self.d)
    def one(self): return identity(self.base, self.d)
    def add(self, x, y): return madd(self.base, x, y)
    def sub(self, x, y): return msub(self.base, x, y)
    def neg(self, x): return mneg(self.base, x)
    def mul(self, x, y): return mmul(self.base, x, y)
    def smul(self, c, x): return msmul(self.base, c, x)

    def invol(self, x: Matrix) -> Matrix:
        return mmul(self.base, mmul(self.base, self.gram_inv, transpose(x)),
                    self.gram)

    def trd(self, x): return trace(self.base, x)
    def nrd(self, x): return det(self.base, x)
    def rcharpoly(self, x): return charpoly(self.base, x)

    def inverse(self, x):
        return mat_inverse(self.base, x)

    @property
    def is_finite(self):
        return self.base.is_finite

    @property
    def size(self):
        return self.base.size ** (self.d * self.d)

    def elements(self):
        from itertools import product
        pool = list(self.base.elements())
        for combo in product(pool, repeat=self.d * self.d):
            yield Matrix(self.d, self.d, combo)

    def rand(self, rng):
        return Matrix(self.d, self.d,
                      tuple(self.base.rand(rng)
                            for _ in range(self.d * self.d)))

    def rand_antisym(self, rng):
        """Random antisymmetric element, as half the antisymmetrization."""
        z = self.rand(rng)
        return self.smul(self.half, self.sub(z, self.invol(z)))

    def basis(self):
        """Standard matrix units, row-major."""
        out = []
        z, o = self.base.zero(), self.base.one()
        for t in range(self.d * self.d):
            out.append(Matrix(self.d, self.d,
                              tuple(o if s == t else z
                                    for s in range(self.d * self.d))))
        return out

    def spec(self) -> dict:
        return {
            "base": self.base.spec_str(),
            "shape": "split",
            "d": self.d,
            "gram": [[self.base.to_str(self.gram.at(i, j))
                      for j in range(self.d)] for i in range(self.d)],
        }

    def __repr__(self):
        return f"M_{self.d}({self.base.spec_str()})"


class QuaternionAlgebra:
    """(a, b / F) with the orthogonal involution Int(u) o bar, u a pure unit."""

    shape = "quaternion"

    def __init__(self, base: Ring, a, b, pivot):
        if not base.is_field:
            raise ValueError(f"{base.spec_str()} is not a field")
        if not base.two_invertible:
            raise ValueError("characteristic 2 is unsupported")
        if base.inv(a) is None or base.inv(b) is None:
            raise ValueError("both structure constants must be units")
        self.base = base
        self.a = a
        self.b = b
        pivot = tuple(pivot)
        if pivot[0] != base.zero():
            raise ValueError(
                "pivot must be a pure quaternion; the bare canonical "
                "involution is symplectic, not orthogonal")
        self.pivot = pivot
        n = self.nrd(pivot)
        ninv = base.inv(n)
        if ninv is None:
            raise ValueError("pivot must have unit reduced norm")
        self.pivot_inv = tuple(base.mul(ninv, c) for c in self.conj(pivot))
        self.half = base.half()

    degree = property(lambda self: 2)
    d = property(lambda self: 2)

    def zero(self):
        z = self.base.zero()
        return (z, z, z, z)

    def one(self):
        return (self.base.one(), self.base.zero(), self.base.zero(),
                self.base.zero())

    def add(self, x, y):
        return tuple(self.base.add(p, q) for p, q in zip(x, y))

    def sub(self, x, y):
        return tuple(self.base.sub(p, q) for p, q in zip(x, y))

    def neg(self, x):
        return tuple(self.base.neg(p) for p in x)

    def smul(self, c, x):
        return tuple(self.base.mul(c, p) for p in x)

    def mul(self, x, y):
        F, a, b = self.base, self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y

        def s(*terms):
            acc = F.zero()
            for t in terms:
                acc = F.add(acc, t)
            return acc
        m = F.mul
        ab = m(a, b)
        z0 = s(m(x0, y0), m(a, m(x1, y1)), m(x2, F.mul(b, y2)),
               F.neg(m(ab, m(x3, y3))))
        z1 = s(m(x0, y1), m(x1, y0), F.neg(m(b, m(x2, y3))), m(b, m(x3, y2)))
        z2 = s(m(x0, y2), m(x2, y0), m(a, m(x1, y3)), F.neg(m(a, m(x3, y1))))
        z3 = s(m(x0, y3), m(x3, y0), m(x1, y2), F.neg(m(x2, y1)))
        return (z0, z1, z2, z3)

    def conj(self, x):
        F = self.base
        return (x[0], F.neg(x[1]), F.neg(x[2]), F.neg(x[3]))

    def invol(self, x):
        return self.mul(self.mul(self.pivot, self.conj(x)), self.pivot_inv)

    def trd(self, x):
        return self.base.add(x[0], x[0])

    def nrd(self, x):
        F, a, b = self.base, self.a, self.b
        x0, x1, x2, x3 = x
        n = F.sub(F.mul(x0, x0), F.mul(a, F.mul(x1, x1)))
        n = F.sub(n, F.mul(b, F.mul(x2, x2)))
        return F.add(n, F.mul(F.mul(a, b), F.mul(x3, x3)))

    def rcharpoly(self, x) -> Poly:
        return poly(self.base,
                    [self.nrd(x), self.base.neg(self.trd(x)), self.base.one()])

    def inverse(self, x):
        ninv = self.base.inv(self.nrd(x))
        if ninv is None:
            return None
        return self.smul(ninv, self.conj(x))

    @property
    def is_finite(self):
        return self.base.is_finite

    def rand(self, rng):
        return tuple(self.base.rand(rng) for _ in range(4))

    def rand_antisym(self, rng):
        z = self.rand(rng)
        return self.smul(self.half, self.sub(z, self.invol(z)))

    def basis(self):
        z, o = self.base.zero(), self.base.one()
        return [(o, z, z, z), (z, o, z, z), (z, z, o, z), (z, z, z, o)]

    def spec(self) -> dict:
        return {
            "base": self.base.spec_str(),
            "shape": "quaternion",
            "a": self.base.to_str(self.a),
            "b": self.base.to_str(self.b),
            "pivot": [self.base.to_str(c) for c in self.pivot],
        }

    def __repr__(self):
        return (f"({self.base.to_str(self.a)},{self.base.to_str(self.b)}"
                f"/{self.base.spec_str()})")


# ---------------------------------------------------------------------------
# module-level operation aliases

def involution(A, x):
    return A.invol(x)


def reduced_norm(A, x):
    return A.nrd(x)


def reduced_trace(A, x):
    return A.trd(x)


def reduced_charpoly(A, x):
    return A.rcharpoly(x)


# ---------------------------------------------------------------------------
# residue specializations

class QuotientCtx:
    """A split algebra over a finite ring together with its residue algebras.

    `reduce` maps an element to the tuple of its residue images; `lift`
    picks a common preimage (entrywise, through the residue split of the
    base ring).  Reduction commutes with the involutions.
    """

    def __init__(self, algebra: SplitAlgebra):
        if algebra.shape != "split" or not algebra.base.is_finite:
            raise ValueError("residue context requires a split algebra "
                             "over a finite ring")
        self.algebra = algebra
        self.split: ResidueSplit = residue_split(algebra.base)
        self.residue_algebras = []
        for i, F in enumerate(self.split.fields):
            gram_i = Matrix(algebra.d, algebra.d,
                            tuple(self.split.project(x, i)
                                  for x in algebra.gram.entries))
            Bi = SplitAlgebra(F, algebra.d, gram_i)
            # reduction of the inverse Gram must invert the reduced Gram
            red_inv = Matrix(algebra.d, algebra.d,
                             tuple(self.split.project(x, i)
                                   for x in algebra.gram_inv.entries))
            if mmul(F, gram_i, red_inv) != identity(F, algebra.d):
                raise IdentityViolation("gram_reduction")
            self.residue_algebras.append(Bi)

    @property
    def labels(self):
        return self.split.labels

    def __len__(self):
        return len(self.residue_algebras)

    def reduce_at(self, x: Matrix, i: int) -> Matrix:
        return Matrix(x.rows, x.cols,
                      tuple(self.split.project(e, i) for e in x.entries))

    def reduce(self, x: Matrix) -> tuple:
        return tuple(self.reduce_at(x, i)
                     for i in range(len(self.residue_algebras)))

    def lift(self, mats) -> Matrix:
        mats = list(mats)
        if len(mats) != len(self.residue_algebras):
            raise ValueError(f"expected {len(self.residue_algebras)} residue values")
        d = self.algebra.d
        entries = []
        for t in range(d * d):
            entries.append(self.split.lift([m.entries[t] for m in mats]))
        return Matrix(d, d, tuple(entries))


def quotient_ctx(A: SplitAlgebra) -> QuotientCtx:
    return QuotientCtx(A)


# ---------------------------------------------------------------------------
# orthogonality check

def check_orthogonal(A) -> list[dict]:
    """Dimension of the symmetric elements at every residue.

    An involution of a degree-d algebra is orthogonal when the fixed space
    of every residue specialization has dimension d(d+1)/2.
    """
    if A.shape == "split":
        ctx = quotient_ctx(A)
        expected = A.d * (A.d + 1) // 2
        out = []
        for label, B in zip(ctx.labels, ctx.residue_algebras):
            dim = _fixed_space_dim(B)
            out.append({"ideal": label, "symmetric_dimension": dim,
                        "expected": expected, "orthogonal": dim == expected})
        return out
    if A.shape == "quaternion":
        dim = _fixed_space_dim(A)
        return [{"ideal": "(0)", "symmetric_dimension": dim,
                 "expected": 3, "orthogonal": dim == 3}]
    raise ValueError("unknown algebra shape")


def _fixed_space_dim(B) -> int:
    """dim ker(sigma - id) on the underlying module of B, over a field."""
    F = B.base
    basis = B.basis()
    n = len(basis)
    rows = []
    for e in basis:
        im = B.invol(e)
        if B.shape == "split":
            diff = [F.sub(a, b) for a, b in zip(im.entries, e.entries)]
        else:
            diff = [F.sub(a, b) for a, b in zip(im, e)]
        rows.append(diff)
    M = Matrix(n, n, tuple(x for row in rows for x in row))
    return n - rank_over_field(F, M)


# ---------------------------------------------------------------------------
# symmetric square root of 1 + nilpotent

def sqrt_one_plus_nilpotent(A: SplitAlgebra, eps: Matrix) -> Matrix:
    """The symmetric s with s^2 = 1 + eps, for residually-zero symmetric eps.

    eps has all entries in the Jacobson radical, hence is nilpotent with
    exponent bounded by the radical nilpotency index e; the binomial series
    sum C(1/2, k) eps^k therefore terminates at k < e, and its coefficients
    only have powers of 2 in the denominator.
    """
    if A.invol(eps) != eps:
        raise ValueError("eps must be symmetric")
    split = residue_split(A.base)
    for i, F in enumerate(split.fields):
        if any(split.project(x, i) != F.zero() for x in eps.entries):
            raise ValueError("eps must reduce to zero at every residue")
    R = A.base
    s = A.one()
    power = A.one()
    coeff = Fraction(1)
    for k in range(1, split.nilpotency_index):
        power = A.mul(power, eps)
        if all(x == R.zero() for x in power.entries):
            break
        coeff *= Fraction(3 - 2 * k, 2 * k)  # C(1/2,k) = C(1/2,k-1)*(1/2-k+1)/k
        den = coeff.denominator
        assert den & (den - 1) == 0  # power of two
        c = R.mul(R.from_int(coeff.numerator), R.inv(R.from_int(den)))
        s = A.add(s, A.smul(c, power))
    if A.mul(s, s) != A.add(A.one(), eps):
        raise IdentityViolation("sqrt_square", "s^2 != 1 + eps")
    return s
