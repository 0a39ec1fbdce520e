"""Division-free exact linear algebra over the base rings.

Matrices are immutable row-major entry tuples interpreted against a ring
passed to every operation, mirroring how ring elements work.  The
characteristic polynomial uses the Berkowitz algorithm, so it is valid over
rings with zero divisors; determinants are read off its constant term and
matrix inverses come from the Cayley-Hamilton identity.  Submodules of R^m
over Z/n are handled through an integer Smith normal form (freeness, rank,
bases, coordinates) and a Howell form (canonical spans, membership).
"""

from dataclasses import dataclass
from math import gcd

from .rings import GaloisField, ProductRing, Ring, Zmod

__all__ = [
    "Matrix", "Poly", "ModuleReport",
    "mat", "mat_from_rows", "identity", "zeros", "transpose",
    "madd", "msub", "mneg", "mmul", "msmul", "trace", "entry",
    "charpoly", "det", "mat_inverse", "mat_pow",
    "poly", "poly_add", "poly_sub", "poly_mul", "poly_scale", "poly_eval",
    "poly_eval_matrix", "poly_divide_linear",
    "rank_over_field", "rank_at_residue",
    "module_basis", "solve_in_span", "howell_form", "smith_normal_form",
]


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match the shape")

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def key(self):
        return self.entries


@dataclass(frozen=True)
class Poly:
    """Coefficients low degree first, normalized: no trailing zeros.

    The zero polynomial is the empty tuple.
    """
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


# ---------------------------------------------------------------------------
# construction

def mat(rows: int, cols: int, entries) -> Matrix:
    return Matrix(rows, cols, tuple(entries))


def mat_from_rows(rows) -> Matrix:
    rows = [tuple(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if any(len(r) != m for r in rows):
        raise ValueError("ragged rows")
    return Matrix(n, m, tuple(x for r in rows for x in r))


def identity(R: Ring, n: int) -> Matrix:
    z, o = R.zero(), R.one()
    return Matrix(n, n, tuple(o if i == j else z
                              for i in range(n) for j in range(n)))


def zeros(R: Ring, rows: int, cols: int) -> Matrix:
    z = R.zero()
    return Matrix(rows, cols, (z,) * (rows * cols))


def transpose(M: Matrix) -> Matrix:
    return Matrix(M.cols, M.rows,
                  tuple(M.at(i, j) for j in range(M.cols) for i in range(M.rows)))


# ---------------------------------------------------------------------------
# arithmetic

def madd(R: Ring, A: Matrix, B: Matrix) -> Matrix:
    _same_shape(A, B)
    return Matrix(A.rows, A.cols,
                  tuple(R.add(a, b) for a, b in zip(A.entries, B.entries)))


def msub(R: Ring, A: Matrix, B: Matrix) -> Matrix:
    _same_shape(A, B)
    return Matrix(A.rows, A.cols,
                  tuple(R.sub(a, b) for a, b in zip(A.entries, B.entries)))


def mneg(R: Ring, A: Matrix) -> Matrix:
    return Matrix(A.rows, A.cols, tuple(R.neg(a) for a in A.entries))


def msmul(R: Ring, c, A: Matrix) -> Matrix:
    return Matrix(A.rows, A.cols, tuple(R.mul(c, a) for a in A.entries))


def mmul(R: Ring, A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch: {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    out = []
    for i in range(A.rows):
        arow = A.row(i)
        for j in range(B.cols):
            acc = R.zero()
            for k in range(A.cols):
                acc = R.add(acc, R.mul(arow[k], B.at(k, j)))
            out.append(acc)
    return Matrix(A.rows, B.cols, tuple(out))


def trace(R: Ring, M: Matrix):
    _square(M)
    acc = R.zero()
    for i in range(M.rows):
        acc = R.add(acc, M.at(i, i))
    return acc


def entry(M: Matrix, i: int, j: int):
    return M.at(i, j)


def mat_pow(R: Ring, M: Matrix, e: int) -> Matrix:
    _square(M)
    out = identity(R, M.rows)
    for _ in range(e):
        out = mmul(R, out, M)
    return out


def _same_shape(A, B):
    if (A.rows, A.cols) != (B.rows, B.cols):
        raise ValueError("shape mismatch")


def _square(M):
    if M.rows != M.cols:
        raise ValueError(f"square matrix required, got {M.rows}x{M.cols}")


# ---------------------------------------------------------------------------
# polynomials (dense, low degree first)

def poly(R: Ring, coeffs) -> Poly:
    c = list(coeffs)
    z = R.zero()
    while c and c[-1] == z:
        c.pop()
    return Poly(tuple(c))


def poly_add(R: Ring, f: Poly, g: Poly) -> Poly:
    n = max(len(f.coeffs), len(g.coeffs))
    fc = list(f.coeffs) + [R.zero()] * (n - len(f.coeffs))
    gc = list(g.coeffs) + [R.zero()] * (n - len(g.coeffs))
    return poly(R, [R.add(a, b) for a, b in zip(fc, gc)])


def poly_sub(R: Ring, f: Poly, g: Poly) -> Poly:
    return poly_add(R, f, poly_scale(R, R.neg(R.one()), g))


def poly_scale(R: Ring, c, f: Poly) -> Poly:
    return poly(R, [R.mul(c, a) for a in f.coeffs])


def poly_mul(R: Ring, f: Poly, g: Poly) -> Poly:
    if not f.coeffs or not g.coeffs:
        return Poly(())
    out = [R.zero()] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] = R.add(out[i + j], R.mul(a, b))
    return poly(R, out)


def poly_eval(R: Ring, f: Poly, x):
    acc = R.zero()
    for c in reversed(f.coeffs):
        acc = R.add(R.mul(acc, x), c)
    return acc


def poly_eval_matrix(R: Ring, f: Poly, M: Matrix) -> Matrix:
    _square(M)
    acc = zeros(R, M.rows, M.cols)
    one = identity(R, M.rows)
    for c in reversed(f.coeffs):
        acc = madd(R, mmul(R, acc, M), msmul(R, c, one))
    return acc


def poly_divide_linear(R: Ring, f: Poly, c) -> tuple[Poly, object]:
    """Exact division with remainder by (t - c): f = (t - c) q + r, r = f(c)."""
    if not f.coeffs:
        return Poly(()), R.zero()
    # synthetic division, high degree first
    q = []
    b = None
    for a in reversed(f.coeffs):
        b = a if b is None else R.add(a, R.mul(c, b))
        q.append(b)
    r = q.pop()  # the final value is f(c)
    q.reverse()
    return poly(R, q), r


# ---------------------------------------------------------------------------
# characteristic polynomial (Berkowitz), determinant, inverse

def charpoly(R: Ring, M: Matrix) -> Poly:
    """Monic characteristic polynomial det(t*I - M), computed division-free."""
    _square(M)
    n = M.rows
    if n == 0:
        return poly(R, [R.one()])
    # p holds coefficients high degree first
    p = [R.one(), R.neg(M.at(0, 0))]
    for k in range(2, n + 1):
        a = M.at(k - 1, k - 1)
        row = [M.at(k - 1, j) for j in range(k - 1)]
        col = [M.at(i, k - 1) for i in range(k - 1)]
        sub = [[M.at(i, j) for j in range(k - 1)] for i in range(k - 1)]
        v = [R.one(), R.neg(a)]
        w = col
        for j in range(2, k + 1):
            if j > 2:
                w = [_dot(R, srow, w) for srow in sub]
            v.append(R.neg(_dot(R, row, w)))
        newp = []
        for i in range(k + 1):
            acc = R.zero()
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                acc = R.add(acc, R.mul(v[i - j], p[j]))
            newp.append(acc)
        p = newp
    return Poly(tuple(reversed(p)))


def _dot(R, xs, ys):
    acc = R.zero()
    for x, y in zip(xs, ys):
        acc = R.add(acc, R.mul(x, y))
    return acc


def det(R: Ring, M: Matrix):
    """det M = (-1)^n * f(0) where f is the characteristic polynomial."""
    _square(M)
    if M.rows == 0:
        return R.one()
    c0 = charpoly(R, M).coeffs[0]
    return c0 if M.rows % 2 == 0 else R.neg(c0)


def mat_inverse(R: Ring, M: Matrix) -> Matrix | None:
    """Inverse via Cayley-Hamilton; None when det is not a unit."""
    _square(M)
    f = charpoly(R, M)
    c0 = f.coeffs[0]
    c0inv = R.inv(c0)
    if c0inv is None:
        return None
    n = M.rows
    one = identity(R, n)
    B = one  # coefficient of M^(n-1) is 1
    for k in range(n - 1, 0, -1):
        B = madd(R, mmul(R, B, M), msmul(R, f.coeffs[k], one))
    return msmul(R, R.neg(c0inv), B)


# ---------------------------------------------------------------------------
# residue ranks (Gaussian elimination over a field)

def rank_over_field(F: Ring, M: Matrix) -> int:
    work = [list(M.row(i)) for i in range(M.rows)]
    zero = F.zero()
    r = 0
    for c in range(M.cols):
        piv = next((i for i in range(r, len(work)) if work[i][c] != zero), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = F.inv(work[r][c])
        work[r] = [F.mul(inv, v) for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != zero:
                fct = work[i][c]
                work[i] = [F.sub(a, F.mul(fct, b))
                           for a, b in zip(work[i], work[r])]
        r += 1
    return r


def rank_at_residue(R: Ring, M: Matrix, split, idx: int) -> int:
    """Rank of M reduced at the idx-th maximal ideal of R."""
    if not (0 <= idx < len(split.fields)):
        raise ValueError(f"unknown residue index {idx}")
    F = split.fields[idx]
    red = Matrix(M.rows, M.cols,
                 tuple(split.project(x, idx) for x in M.entries))
    return rank_over_field(F, red)


# ---------------------------------------------------------------------------
# integer Smith normal form with transforms

def smith_normal_form(rows: list[list[int]]):
    """Return (diag, U, V, Vinv) with U*A*V diagonal, U and V unimodular.

    diag is the list of diagonal entries (nonnegative, each dividing the
    next while both are nonzero).
    """
    A = [list(r) for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]
    Vinv = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(j, k, q):  # col_j -= q * col_k
        for r in range(n):
            A[r][j] -= q * A[r][k]
        for r in range(m):
            V[r][j] -= q * V[r][k]
        # inverse transform acts on rows of Vinv: row_k += q * row_j
        Vinv[k] = [a + q * b for a, b in zip(Vinv[k], Vinv[j])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(len(A)):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_negate(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(n, m):
        # locate smallest nonzero entry in the trailing block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        if A[t][t] < 0:
            row_negate(t)
        # clear the pivot row and column
        dirty = False
        for i in range(t + 1, n):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                row_op(i, t, q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, m):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                col_op(j, t, q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the trailing block by the pivot
        bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                    if A[i][j] % A[t][t] != 0), None)
        if bad is not None:
            row_op(t, bad[0], -1)  # pulls the offending row into the pivot row
            continue
        t += 1
    diag = [A[i][i] for i in range(min(n, m))]
    return diag, U, V, Vinv


# ---------------------------------------------------------------------------
# Howell form over Z/n (canonical generators of a row span)

def _unit_scaling(N: int, a: int) -> int:
    """A unit u mod N with u*a = gcd(a, N) mod N."""
    g = gcd(a, N)
    a1, N1 = a // g, N // g
    u = pow(a1, -1, N1) if N1 > 1 else 1
    while gcd(u, N) != 1:
        u += N1
    return u % N


def howell_form(N: int, rows, ncols: int) -> tuple:
    """Canonical Howell form of the span of `rows` in (Z/N)^ncols.

    Rows are int sequences.  The result is a tuple of pivot rows sorted by
    pivot column; membership in the span can be decided by reduction
    against it.
    """
    H: dict[int, list[int]] = {}

    def insert(row):
        row = [x % N for x in row]
        for c in range(ncols):
            if row[c] == 0:
                continue
            if c not in H:
                H[c] = row
                return
            a, b = H[c][c], row[c]
            g = gcd(a, b)
            # u*a + v*b = g
            u, v = _xgcd(a, b)
            piv = [(u * x + v * y) % N for x, y in zip(H[c], row)]
            row = [((a // g) * y - (b // g) * x) % N
                   for x, y in zip(H[c], row)]
            H[c] = piv
        return

    for r in rows:
        insert(list(r))
    # Howell property: annihilator multiples of every pivot row must lie in
    # the span of the later rows; iterate until stable.
    while True:
        before = {c: tuple(r) for c, r in H.items()}
        for c in sorted(before):
            if c not in H:
                continue
            ann = N // gcd(H[c][c], N)
            extra = [(ann * x) % N for x in H[c]]
            if any(extra):
                insert(extra)
        if {c: tuple(r) for c, r in H.items()} == before:
            break
    # normalize: pivot = gcd(pivot, N), entries above pivots reduced
    out = []
    for c in sorted(H):
        row = H[c]
        u = _unit_scaling(N, row[c])
        out.append([(u * x) % N for x in row])
    for i in range(len(out)):
        pc = next(j for j in range(ncols) if out[i][j] != 0)
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [(a - q * b) % N for a, b in zip(out[k], out[i])]
    return tuple(tuple(r) for r in out)


def _xgcd(a: int, b: int) -> tuple[int, int]:
    """(u, v) with u*a + v*b = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0


# ---------------------------------------------------------------------------
# module structure over Z/n and finite products

@dataclass
class ModuleReport:
    free: bool
    rank: int | None
    basis: list | None          # list of ring-element vectors when free
    cyclic_orders: list         # orders of the cyclic invariant summands
    howell: tuple               # canonical generators (Z/n case)


def module_basis(R: Ring, generators) -> ModuleReport:
    """Structure of the submodule of R^m spanned by `generators`.

    Over Z/n the invariant factors come from an integer Smith normal form of
    the generators stacked with n*I; the module is free exactly when every
    cyclic summand is trivial or has full order n.  Over a product ring the
    computation runs componentwise (free iff every component is free of the
    same rank).
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator required")
    m = len(gens[0])
    if isinstance(R, Zmod):
        N = R.n
        stacked = [list(g) for g in gens]
        stacked += [[N if i == j else 0 for j in range(m)] for i in range(m)]
        diag, _U, _V, Vinv = smith_normal_form(stacked)
        orders = []
        free_rows = []
        for i in range(m):
            d = diag[i]
            assert d > 0 and N % d == 0
            orders.append(N // d)
            if d == 1:
                free_rows.append(tuple(x % N for x in Vinv[i]))
        nontrivial = [o for o in orders if o > 1]
        free = all(o == N for o in nontrivial)
        rank = len(free_rows)
        hf = howell_form(N, gens, m)
        if free:
            # sanity: the extracted basis must span exactly the input module
            assert howell_form(N, free_rows, m) == hf
            return ModuleReport(True, rank, [tuple(v) for v in free_rows],
                                nontrivial, hf)
        return ModuleReport(False, None, None, nontrivial, hf)
    if isinstance(R, GaloisField):
        basis = _field_row_basis(R, gens, m)
        return ModuleReport(True, len(basis), basis, [], tuple(basis))
    if isinstance(R, ProductRing):
        reports = []
        for fi, F in enumerate(R.factors):
            comp = [[g[j][fi] for j in range(m)] for g in [list(g) for g in gens]]
            comp = [tuple(row) for row in comp]
            reports.append(module_basis(F, comp))
        if not all(r.free for r in reports):
            return ModuleReport(False, None, None,
                                [r.cyclic_orders for r in reports], ())
        ranks = {r.rank for r in reports}
        if len(ranks) != 1:
            return ModuleReport(False, None, None,
                                [r.cyclic_orders for r in reports], ())
        rank = ranks.pop()
        basis = []
        for i in range(rank):
            basis.append(tuple(
                tuple(reports[fi].basis[i][j] for fi in range(len(R.factors)))
                for j in range(m)))
        return ModuleReport(True, rank, basis,
                            [r.cyclic_orders for r in reports], ())
    raise ValueError(f"module structure unsupported over {R.spec_str()}")


def _field_row_basis(F: Ring, gens, m):
    """Reduced row basis of a span over a field."""
    work = [list(g) for g in gens]
    zero = F.zero()
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(work)) if work[i][c] != zero), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = F.inv(work[r][c])
        work[r] = [F.mul(inv, v) for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != zero:
                fct = work[i][c]
                work[i] = [F.sub(a, F.mul(fct, b))
                           for a, b in zip(work[i], work[r])]
        r += 1
    return [tuple(row) for row in work[:r]]


def solve_in_span(R: Ring, basis, target):
    """Coefficients c with sum(c_i * basis_i) = target, or None.

    Over Z/n this solves the lifted integer system through the Smith normal
    form of the basis stacked with n*I; components of product rings are
    solved independently.
    """
    basis = [tuple(b) for b in basis]
    target = tuple(target)
    m = len(target)
    if isinstance(R, Zmod):
        N = R.n
        r = len(basis)
        stacked = [list(b) for b in basis]
        stacked += [[N if i == j else 0 for j in range(m)] for i in range(m)]
        diag, U, V, _Vinv = smith_normal_form(stacked)
        # y * D = target * V, then x = y * U; first r coords are the answer
        tv = [sum(target[i] * V[i][j] for i in range(m)) for j in range(m)]
        y = [0] * (r + m)
        for j in range(m):
            d = diag[j]
            if d == 0:
                if tv[j] != 0:
                    return None
                continue
            if tv[j] % d != 0:
                return None
            y[j] = tv[j] // d
        x = [sum(y[i] * U[i][j] for i in range(r + m)) for j in range(r + m)]
        coords = tuple(x[i] % N for i in range(r))
        # exactness check
        for j in range(m):
            acc = 0
            for i in range(r):
                acc += coords[i] * basis[i][j]
            if acc % N != target[j] % N:
                return None
        return coords
    if isinstance(R, GaloisField):
        return _field_solve(R, basis, target)
    if isinstance(R, ProductRing):
        per = []
        for fi, F in enumerate(R.factors):
            cb = [tuple(v[fi] for v in b) for b in basis]
            ct = tuple(v[fi] for v in target)
            sol = solve_in_span(F, cb, ct)
            if sol is None:
                return None
            per.append(sol)
        return tuple(tuple(per[fi][i] for fi in range(len(R.factors)))
                     for i in range(len(basis)))
    raise ValueError(f"solve unsupported over {R.spec_str()}")


def _field_solve(F: Ring, basis, target):
    """Solve sum c_i b_i = t over a field by Gaussian elimination."""
    r = len(basis)
    m = len(target)
    # columns are the basis vectors, augmented with the target
    rows = [[basis[i][j] for i in range(r)] + [target[j]] for j in range(m)]
    zero = F.zero()
    pivots = []
    rr = 0
    for c in range(r):
        piv = next((i for i in range(rr, m) if rows[i][c] != zero), None)
        if piv is None:
            continue
        rows[rr], rows[piv] = rows[piv], rows[rr]
        inv = F.inv(rows[rr][c])
        rows[rr] = [F.mul(inv, v) for v in rows[rr]]
        for i in range(m):
            if i != rr and rows[i][c] != zero:
                fct = rows[i][c]
                rows[i] = [F.sub(a, F.mul(fct, b))
                           for a, b in zip(rows[i], rows[rr])]
        pivots.append(c)
        rr += 1
    for i in range(rr, m):
        if rows[i][r] != zero:
            return None
    sol = [zero] * r
    for i, c in enumerate(pivots):
        sol[c] = rows[i][r]
    for j in range(m):
        acc = zero
        for i in range(r):
            acc = F.add(acc, F.mul(sol[i], basis[i][j]))
        if acc != target[j]:
            return None
    return tuple(sol)
