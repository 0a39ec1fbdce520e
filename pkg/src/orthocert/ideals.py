"""Fractional ideals of imaginary quadratic orders and the swap-involution audit.

Only maximal orders Z[w], w = sqrt(d), with d squarefree, d < 0 and
d = 2 or 3 mod 4 are supported: there ideal inversion is conjugation over
the norm and the positive-definite norm form makes principality decidable
by a finite lattice search.

A fractional ideal is stored as (1/den) * (a Z + (b + c w) Z) with the
integer basis in Hermite normal form, which makes equality and membership
exact lattice checks.

The audit concerns the algebra of 2x2 matrices with diagonal entries in R,
upper right entry in L^(-1), lower left in L, under the involution that
swaps the diagonal.  Symbolic expansion of sigma(u) u = 1 and det(u) = -1
forces u to be an antidiagonal pair (x^(-1), x) with x in L, so a
determinant -1 isometry exists exactly when L is principal.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import IdentityViolation
from .rings import QuadOrder

__all__ = [
    "QuadIdeal", "IdealAlgebra", "AuditReport",
    "quad_from_str", "quad_to_str",
    "ideal_from_gens", "whole_ring_ideal", "ideal_mul", "ideal_inv",
    "ideal_norm", "ideal_member", "ideal_conj", "is_principal",
    "build_ideal_algebra", "audit_no_norm_minus_one",
]

# quadratic numbers x + y*sqrt(d) are (Fraction, Fraction) pairs
QuadNum = tuple


def qnum(x, y=0) -> QuadNum:
    return (Fraction(x), Fraction(y))


def q_add(u, v): return (u[0] + v[0], u[1] + v[1])
def q_sub(u, v): return (u[0] - v[0], u[1] - v[1])
def q_neg(u): return (-u[0], -u[1])


def q_mul(d, u, v):
    return (u[0] * v[0] + d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def q_conj(u): return (u[0], -u[1])


def q_norm(d, u) -> Fraction:
    return u[0] * u[0] - d * u[1] * u[1]


def q_inv(d, u):
    n = q_norm(d, u)
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return (u[0] / n, -u[1] / n)


def quad_to_str(u: QuadNum) -> str:
    x, y = Fraction(u[0]), Fraction(u[1])
    if y == 0:
        return str(x)
    if y == 1:
        w = "w"
    elif y == -1:
        w = "-w"
    else:
        w = f"{y}w"
    if x == 0:
        return w
    return f"{x}+{w}" if not w.startswith("-") else f"{x}{w}"


def quad_from_str(s: str) -> QuadNum:
    """Parse 'x', 'yw', 'x+yw', 'x-yw' with rational x, y ('w' = sqrt(d))."""
    s = str(s).replace(" ", "")
    if not s:
        raise ValueError("empty quadratic number")
    # split into the part before the w-term and the w-term
    if "w" not in s:
        return qnum(Fraction(s))
    head, _, _ = s.partition("w")
    # find where the w-coefficient starts: the last +/- not at position 0
    # and not inside the x part's fraction
    cut = None
    for i in range(len(head) - 1, 0, -1):
        if head[i] in "+-":
            cut = i
            break
    if cut is None:
        xpart, ypart = "0", head
    else:
        xpart, ypart = head[:cut], head[cut:]
    if ypart in ("", "+"):
        y = Fraction(1)
    elif ypart == "-":
        y = Fraction(-1)
    else:
        y = Fraction(ypart)
    return qnum(Fraction(xpart) if xpart else Fraction(0), y)


# ---------------------------------------------------------------------------
# fractional ideals

@dataclass(frozen=True)
class QuadIdeal:
    """(1/den) * (a Z + (b + c w) Z), HNF-normalized: a, c > 0, 0 <= b < a."""
    order: QuadOrder
    den: int
    a: int
    b: int
    c: int

    def gens(self) -> list:
        return [qnum(Fraction(self.a, self.den)),
                (Fraction(self.b, self.den), Fraction(self.c, self.den))]

    def __repr__(self):
        g = ", ".join(quad_to_str(x) for x in self.gens())
        return f"({g}) in {self.order.spec_str()}"


def _check_order(order: QuadOrder):
    if order.d % 4 not in (2, 3):
        raise ValueError(
            f"{order.spec_str()}: only maximal orders with d = 2, 3 mod 4 are supported")


def _hnf2(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF basis (a, 0), (b, c) of the lattice spanned by integer rows."""
    bx, by = 0, 0
    xs = []
    for x, y in rows:
        if y == 0:
            xs.append(x)
            continue
        if by == 0:
            bx, by = x, y
            continue
        g, s, t = _xgcd(by, y)
        nbx = s * bx + t * x
        xs.append((y // g) * bx - (by // g) * x)
        bx, by = nbx, g
    a = 0
    for x in xs:
        a = gcd(a, abs(x))
    if by < 0:
        bx, by = -bx, -by
    if a == 0 or by == 0:
        raise ValueError("generators do not span a full lattice")
    b = bx % a
    return a, b, by


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def ideal_from_gens(order: QuadOrder, gens) -> QuadIdeal:
    """The fractional R-ideal generated by quadratic numbers."""
    _check_order(order)
    gens = [(Fraction(g[0]), Fraction(g[1])) for g in gens]
    if all(g == (0, 0) for g in gens):
        raise ValueError("the zero ideal is not supported")
    den = 1
    for g in gens:
        den = den * g[0].denominator // gcd(den, g[0].denominator)
        den = den * g[1].denominator // gcd(den, g[1].denominator)
    rows = []
    for g in gens:
        x, y = int(g[0] * den), int(g[1] * den)
        rows.append((x, y))
        rows.append((order.d * y, x))  # the generator times w
    a, b, c = _hnf2(rows)
    return _normalize(order, den, a, b, c)


def _normalize(order, den, a, b, c) -> QuadIdeal:
    # the lattice must be an R-module: closed under multiplication by w
    if a % c != 0 or b % c != 0:
        raise ValueError("lattice is not an ideal")
    g = gcd(gcd(a, gcd(b, c)), den)
    return QuadIdeal(order, den // g, a // g, (b // g) % (a // g), c // g)


def whole_ring_ideal(order: QuadOrder) -> QuadIdeal:
    _check_order(order)
    return QuadIdeal(order, 1, 1, 0, 1)


def ideal_norm(I: QuadIdeal) -> Fraction:
    return Fraction(I.a * I.c, I.den * I.den)


def ideal_member(I: QuadIdeal, x: QuadNum) -> bool:
    vx, vy = Fraction(x[0]) * I.den, Fraction(x[1]) * I.den
    if vx.denominator != 1 or vy.denominator != 1:
        return False
    vx, vy = int(vx), int(vy)
    if vy % I.c != 0:
        return False
    t = vy // I.c
    return (vx - t * I.b) % I.a == 0


def ideal_mul(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    if I.order != J.order:
        raise ValueError("ideals over different orders")
    d = I.order.d
    prods = [q_mul(d, gi, gj) for gi in I.gens() for gj in J.gens()]
    return ideal_from_gens(I.order, prods)


def ideal_conj(I: QuadIdeal) -> QuadIdeal:
    return ideal_from_gens(I.order, [q_conj(g) for g in I.gens()])


def _scale(I: QuadIdeal, q: Fraction) -> QuadIdeal:
    return ideal_from_gens(I.order, [(g[0] * q, g[1] * q) for g in I.gens()])


def ideal_inv(I: QuadIdeal) -> QuadIdeal:
    """conj(I) / N(I); checked to actually invert I."""
    inv = _scale(ideal_conj(I), 1 / ideal_norm(I))
    if ideal_mul(I, inv) != whole_ring_ideal(I.order):
        raise IdentityViolation("ideal_inverse", "I * I^(-1) != R")
    return inv


def is_principal(I: QuadIdeal):
    """(flag, generator).  Exhaustive search of the definite norm form.

    x generates I iff x in I and |N(x)| = N(I); for negative d the form
    x^2 + |d| y^2 is positive definite, so candidates live in the finite box
    (s a + t b)^2 + |d| (t c)^2 = N(I0) with I0 the den-cleared ideal.
    """
    a, b, c = I.a, I.b, I.c
    order = I.order
    absd = -order.d
    n0 = a * c
    tmax = isqrt(n0 // (absd * c * c))
    for t in range(0, tmax + 1):
        rest = n0 - absd * (t * c) ** 2
        if rest < 0:
            continue
        r = isqrt(rest)
        for signed in ({r, -r} if r * r == rest else set()):
            # s a + t b = signed
            if (signed - t * b) % a != 0:
                continue
            x = (Fraction(signed, I.den), Fraction(t * c, I.den))
            if ideal_from_gens(order, [x]) == I:
                return True, x
    return False, None


# ---------------------------------------------------------------------------
# the 2x2 ideal algebra with the diagonal-swap involution

@dataclass(frozen=True)
class IdealAlgebra:
    """Matrices [[a, b], [c, d]] with a, d in R, b in L^(-1), c in L."""
    order: QuadOrder
    L: QuadIdeal
    Linv: QuadIdeal

    @property
    def d_param(self):
        return self.order.d

    def one(self):
        o, z = qnum(1), qnum(0)
        return ((o, z), (z, o))

    def member(self, m) -> bool:
        (a, b), (c, dd) = m
        R = whole_ring_ideal(self.order)
        return (ideal_member(R, a) and ideal_member(R, dd)
                and ideal_member(self.Linv, b) and ideal_member(self.L, c))

    def invol(self, m):
        (a, b), (c, dd) = m
        return ((dd, b), (c, a))

    def mul(self, m1, m2):
        d = self.order.d
        (a1, b1), (c1, d1) = m1
        (a2, b2), (c2, d2) = m2
        return (
            (q_add(q_mul(d, a1, a2), q_mul(d, b1, c2)),
             q_add(q_mul(d, a1, b2), q_mul(d, b1, d2))),
            (q_add(q_mul(d, c1, a2), q_mul(d, d1, c2)),
             q_add(q_mul(d, c1, b2), q_mul(d, d1, d2))),
        )

    def det(self, m):
        d = self.order.d
        (a, b), (c, dd) = m
        return q_sub(q_mul(d, a, dd), q_mul(d, b, c))

    def form_value(self, v1, v2):
        """f((r1, l1), (r2, l2)) = r1 l2 + r2 l1 on R + L."""
        d = self.order.d
        return q_add(q_mul(d, v1[0], v2[1]), q_mul(d, v2[0], v1[1]))

    def apply(self, m, v):
        """Matrix action on a column (r, l) of R + L."""
        d = self.order.d
        (a, b), (c, dd) = m
        return (q_add(q_mul(d, a, v[0]), q_mul(d, b, v[1])),
                q_add(q_mul(d, c, v[0]), q_mul(d, dd, v[1])))


def build_ideal_algebra(order: QuadOrder, L: QuadIdeal) -> IdealAlgebra:
    """The ideal algebra of L, with its inverse computed and verified."""
    _check_order(order)
    return IdealAlgebra(order, L, ideal_inv(L))


# ---------------------------------------------------------------------------
# symbolic expansion in four commuting variables

def _sym_var(i):
    e = [0, 0, 0, 0]
    e[i] = 1
    return {tuple(e): 1}


def _sym_const(c):
    return {(0, 0, 0, 0): c} if c else {}


def _sym_add(f, g):
    out = dict(f)
    for m, c in g.items():
        out[m] = out.get(m, 0) + c
        if out[m] == 0:
            del out[m]
    return out


def _sym_sub(f, g):
    return _sym_add(f, {m: -c for m, c in g.items()})


def _sym_mul(f, g):
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
            if out[m] == 0:
                del out[m]
    return out


def structural_identities() -> list[tuple[str, bool]]:
    """The forced equations behind the determinant -1 shape, as polynomial
    identities in commuting entries a, b, c, d over Z:

    with E = sigma(u) u - 1 and D = det(u) + 1,
        2 a d       = E[0][0] + D
        2 (b c - 1) = E[0][0] - D
        2 a c       = E[1][0]
        2 b d       = E[0][1]

    In an integral domain with 2 != 0 they force a = d = 0 and b c = 1.
    """
    A, B, C, D = (_sym_var(i) for i in range(4))
    two = _sym_const(2)
    one = _sym_const(1)
    # sigma(u) u with u = [[a, b], [c, d]], sigma(u) = [[d, b], [c, a]]
    e00 = _sym_sub(_sym_add(_sym_mul(D, A), _sym_mul(B, C)), one)
    e01 = _sym_add(_sym_mul(D, B), _sym_mul(B, D))
    e10 = _sym_add(_sym_mul(C, A), _sym_mul(A, C))
    e11 = _sym_sub(_sym_add(_sym_mul(C, B), _sym_mul(A, D)), one)
    detp1 = _sym_add(_sym_sub(_sym_mul(A, D), _sym_mul(B, C)), one)
    ids = [
        ("2*a*d == (invol(u)*u - 1)[0][0] + (det(u) + 1)",
         _sym_mul(two, _sym_mul(A, D)) == _sym_add(e00, detp1)),
        ("2*(b*c - 1) == (invol(u)*u - 1)[0][0] - (det(u) + 1)",
         _sym_mul(two, _sym_sub(_sym_mul(B, C), one)) == _sym_sub(e00, detp1)),
        ("2*a*c == (invol(u)*u - 1)[1][0]",
         _sym_mul(two, _sym_mul(A, C)) == e10),
        ("2*b*d == (invol(u)*u - 1)[0][1]",
         _sym_mul(two, _sym_mul(B, D)) == e01),
        ("(invol(u)*u - 1)[1][1] == (invol(u)*u - 1)[0][0]",
         e11 == e00),
    ]
    return ids


# ---------------------------------------------------------------------------
# the audit

@dataclass
class AuditReport:
    order_spec: str
    L_gens: list
    structural: list          # (identity string, holds) pairs
    principal: bool
    generator: object         # QuadNum or None
    witness: object           # 2x2 matrix or None
    verdict: str              # "O_equals_SO" or "norm_minus_one_witness"


def audit_no_norm_minus_one(ctx: IdealAlgebra) -> AuditReport:
    """Decide whether the ideal algebra has a determinant -1 isometry.

    Part one re-derives, as checked symbolic identities, that such an
    isometry must be antidiagonal (x^(-1), x) with x in L; part two settles
    existence by the exhaustive principality search.  When L is principal
    the witness is built and verified exactly.
    """
    ids = structural_identities()
    for name, holds in ids:
        if not holds:
            raise IdentityViolation("structural_identity", name)
    principal, gen = is_principal(ctx.L)
    witness = None
    if principal:
        x = gen
        xinv = q_inv(ctx.order.d, x)
        z = qnum(0)
        witness = ((z, xinv), (x, z))
        if not ctx.member(witness):
            raise IdentityViolation("witness_membership")
        if ctx.mul(ctx.invol(witness), witness) != ctx.one():
            raise IdentityViolation("witness_isometry")
        if ctx.det(witness) != qnum(-1):
            raise IdentityViolation("witness_determinant")
        verdict = "norm_minus_one_witness"
    else:
        verdict = "O_equals_SO"
    return AuditReport(ctx.order.spec_str(),
                       [quad_to_str(g) for g in ctx.L.gens()],
                       [(n, h) for n, h in ids],
                       principal, gen, witness, verdict)
