"""Exact arithmetic for the supported base rings.

A ring is a descriptor object; elements are plain Python values interpreted
against it and kept in canonical form at all times, so ``==`` is semantic
equality:

* ``Z/n``       ints in ``[0, n)``
* ``GF(p^k)``   length-``k`` tuples of ints in ``[0, p)``, the coefficients
                (low degree first) of the residue polynomial
* products      tuples of factor elements
* ``Q``         ``fractions.Fraction``
* ``Zsqrt[d]``  pairs ``(x, y)`` of ints meaning ``x + y*sqrt(d)``

No element stores its ring; every operation takes the ring first.  All
descriptors are immutable after construction and safe to share.

Ring spec grammar: ``Z/<n>``, ``GF(<p>^<k>)[;<modulus coeffs low-to-high>]``,
``Q``, ``Zsqrt[<d>]``, ``prod(<spec>,<spec>,...)``.
"""

from fractions import Fraction
from math import gcd, isqrt

from .errors import RingSpecError

__all__ = [
    "Ring", "Zmod", "GaloisField", "ProductRing", "RationalField", "QuadOrder",
    "ResidueSplit", "make_ring", "residue_split", "is_unit", "mu2",
]


# ---------------------------------------------------------------------------
# integer helpers

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _factor(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization, smallest prime first."""
    out = []
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return out


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in _factor(abs(n)))


def _crt(residues: list[int], moduli: list[int]) -> int:
    """Combine residues over pairwise coprime moduli."""
    x, m = 0, 1
    for r, mod in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mod)) % mod
        x += m * t
        m *= mod
    return x % m


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (dense lists, low degree first)

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(p, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _psub(p, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _ptrim([(a - b) % p for a, b in zip(f, g)])


def _pmod(p, f, m):
    """Remainder of f modulo a monic polynomial m."""
    f = list(f)
    dm = len(m) - 1
    while len(f) - 1 >= dm and f:
        lead = f[-1]
        shift = len(f) - 1 - dm
        if lead:
            for i, c in enumerate(m):
                f[shift + i] = (f[shift + i] - lead * c) % p
        f.pop()
    return _ptrim(f)


def _pdivmod(p, f, g):
    """Quotient and remainder in F_p[t]; g need not be monic."""
    inv = pow(g[-1], -1, p)
    q, r = [], list(f)
    while len(r) >= len(g) and r:
        c = r[-1] * inv % p
        deg = len(r) - len(g)
        q = _ptrim(list(q) + [0] * max(0, deg + 1 - len(q)))
        q += [0] * (deg + 1 - len(q))
        q[deg] = (q[deg] + c) % p
        for i, m in enumerate(g):
            r[deg + i] = (r[deg + i] - c * m) % p
        r = _ptrim(r)
    return _ptrim(q), r


def _ppowmod(p, f, e, m):
    r = [1]
    f = _pmod(p, f, m)
    while e:
        if e & 1:
            r = _pmod(p, _pmul(p, r, f), m)
        f = _pmod(p, _pmul(p, f, f), m)
        e >>= 1
    return r


def _pgcd(p, f, g):
    f, g = list(f), list(g)
    while g:
        inv = pow(g[-1], -1, p)
        g = [c * inv % p for c in g]
        f, g = g, _pmod(p, f, g)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _is_irreducible(p: int, f: list[int]) -> bool:
    """Rabin test for a monic polynomial over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    x = [0, 1]
    if _psub(p, _ppowmod(p, x, p ** k, f), _pmod(p, x, f)):
        return False  # x^(p^k) != x mod f
    for q, _ in _factor(k):
        g = _pgcd(p, f, _psub(p, _ppowmod(p, x, p ** (k // q), f), _pmod(p, x, f)))
        if len(g) != 1:
            return False
    return True


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Deterministic canonical modulus: first irreducible monic polynomial of
    degree k when the lower coefficients are counted little-endian."""
    if k == 1:
        return (0, 1)
    for i in range(p ** k):
        coeffs, n = [], i
        for _ in range(k):
            coeffs.append(n % p)
            n //= p
        f = coeffs + [1]
        if _is_irreducible(p, f):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# ring descriptors

class Ring:
    """Common interface; concrete rings override everything relevant."""

    is_finite = False
    is_field = False
    two_invertible = False

    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def add(self, x, y): raise NotImplementedError
    def neg(self, x): raise NotImplementedError
    def mul(self, x, y): raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def inv(self, x):
        """Multiplicative inverse, or None when x is not a unit."""
        raise NotImplementedError

    def half(self):
        h = self.inv(self.from_int(2))
        if h is None:
            raise ValueError(f"2 is not invertible in {self.spec_str()}")
        return h

    @property
    def size(self) -> int:
        raise ValueError(f"{self.spec_str()} is not finite")

    def elements(self):
        raise ValueError(f"{self.spec_str()} is not finite")

    def rand(self, rng): raise NotImplementedError
    def to_str(self, x) -> str: raise NotImplementedError
    def from_str(self, s: str): raise NotImplementedError
    def spec_str(self) -> str: raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.spec_str() == other.spec_str()

    def __hash__(self):
        return hash(self.spec_str())

    def __repr__(self):
        return self.spec_str()


class Zmod(Ring):
    """The ring Z/n, elements are ints in [0, n)."""

    is_finite = True

    def __init__(self, n: int):
        if n < 2:
            raise RingSpecError(f"Z/{n}: modulus must be at least 2")
        self.n = n
        self.two_invertible = n % 2 == 1
        self.is_field = _is_prime(n)

    def zero(self): return 0
    def one(self): return 1 % self.n
    def from_int(self, k): return k % self.n
    def add(self, x, y): return (x + y) % self.n
    def neg(self, x): return (-x) % self.n
    def mul(self, x, y): return (x * y) % self.n

    def inv(self, x):
        if gcd(x, self.n) != 1:
            return None
        return pow(x, -1, self.n)

    @property
    def size(self): return self.n

    def elements(self): return iter(range(self.n))
    def rand(self, rng): return rng.randrange(self.n)
    def to_str(self, x): return str(x)

    def from_str(self, s):
        return int(s) % self.n

    def spec_str(self): return f"Z/{self.n}"


class GaloisField(Ring):
    """GF(p^k) presented as F_p[t] modulo a monic irreducible polynomial.

    Elements are length-k coefficient tuples, low degree first.  When no
    modulus is supplied the canonical one is generated deterministically.
    """

    is_finite = True
    is_field = True

    def __init__(self, p: int, k: int, modulus=None):
        if not _is_prime(p):
            raise RingSpecError(f"GF({p}^{k}): {p} is not prime")
        if k < 1:
            raise RingSpecError(f"GF({p}^{k}): degree must be positive")
        self.p, self.k = p, k
        if modulus is None:
            modulus = _first_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise RingSpecError(
                f"GF({p}^{k}): modulus {list(modulus)} is not monic of degree {k}")
        if not _is_irreducible(p, list(modulus)):
            raise RingSpecError(
                f"GF({p}^{k}): modulus {list(modulus)} is reducible over F_{p}")
        self.modulus = modulus
        self.two_invertible = p != 2

    def _canon(self, coeffs):
        c = [x % self.p for x in coeffs]
        c = _pmod(self.p, c, list(self.modulus))
        return tuple(c + [0] * (self.k - len(c)))

    def zero(self): return (0,) * self.k
    def one(self): return self._canon([1])
    def from_int(self, n): return self._canon([n])
    def add(self, x, y): return tuple((a + b) % self.p for a, b in zip(x, y))
    def neg(self, x): return tuple((-a) % self.p for a in x)

    def mul(self, x, y):
        return self._canon(_pmul(self.p, list(x), list(y)))

    def inv(self, x):
        if all(c == 0 for c in x):
            return None
        # extended euclid in F_p[t]; gcd with the irreducible modulus is a constant
        p = self.p
        r0, r1 = list(self.modulus), _ptrim(list(x))
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(p, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(p, s0, _pmul(p, q, s1))
        c = pow(r0[0], -1, p)
        return self._canon(_pmul(p, s0, [c]))

    @property
    def size(self): return self.p ** self.k

    def elements(self):
        for i in range(self.size):
            coeffs, n = [], i
            for _ in range(self.k):
                coeffs.append(n % self.p)
                n //= self.p
            yield tuple(coeffs)

    def rand(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def to_str(self, x): return ",".join(str(c) for c in x)

    def from_str(self, s):
        parts = [int(c) for c in str(s).split(",")]
        if len(parts) > self.k:
            raise ValueError(f"too many coefficients for {self.spec_str()}: {s!r}")
        return self._canon(parts)

    def spec_str(self):
        mod = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.k});{mod}"


class ProductRing(Ring):
    """A finite product of finite rings; elements are tuples."""

    is_finite = True

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise RingSpecError("prod(): at least one factor required")
        for f in factors:
            if not f.is_finite:
                raise RingSpecError(
                    f"prod(...): factor {f.spec_str()} is not finite")
        self.factors = factors
        self.two_invertible = all(f.two_invertible for f in factors)

    def zero(self): return tuple(f.zero() for f in self.factors)
    def one(self): return tuple(f.one() for f in self.factors)
    def from_int(self, n): return tuple(f.from_int(n) for f in self.factors)

    def add(self, x, y):
        return tuple(f.add(a, b) for f, a, b in zip(self.factors, x, y))

    def neg(self, x):
        return tuple(f.neg(a) for f, a in zip(self.factors, x))

    def mul(self, x, y):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x):
        out = []
        for f, a in zip(self.factors, x):
            i = f.inv(a)
            if i is None:
                return None
            out.append(i)
        return tuple(out)

    @property
    def size(self):
        n = 1
        for f in self.factors:
            n *= f.size
        return n

    def elements(self):
        # first factor varies fastest
        tables = [list(f.elements()) for f in self.factors]
        for i in range(self.size):
            coords, n = [], i
            for f in self.factors:
                coords.append(n % f.size)
                n //= f.size
            yield tuple(t[c] for t, c in zip(tables, coords))

    def rand(self, rng):
        return tuple(f.rand(rng) for f in self.factors)

    def _leaves(self):
        out = []
        for f in self.factors:
            if isinstance(f, ProductRing):
                out.extend(f._leaves())
            else:
                out.append(f)
        return out

    def to_str(self, x):
        parts = []
        for f, a in zip(self.factors, x):
            parts.append(f.to_str(a))
        return "|".join(parts)

    def from_str(self, s):
        chunks = str(s).split("|")
        leaves = self._leaves()
        if len(chunks) != len(leaves):
            raise ValueError(f"expected {len(leaves)} components in {s!r}")
        # reassemble along the factor tree
        it = iter(chunks)

        def build(ring):
            if isinstance(ring, ProductRing):
                return tuple(build(f) for f in ring.factors)
            return ring.from_str(next(it))
        return build(self)

    def spec_str(self):
        return "prod(" + ",".join(f.spec_str() for f in self.factors) + ")"


class RationalField(Ring):
    """Q with exact Fraction elements."""

    is_field = True
    two_invertible = True

    def zero(self): return Fraction(0)
    def one(self): return Fraction(1)
    def from_int(self, n): return Fraction(n)
    def add(self, x, y): return x + y
    def neg(self, x): return -x
    def mul(self, x, y): return x * y

    def inv(self, x):
        return None if x == 0 else 1 / Fraction(x)

    def rand(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def to_str(self, x): return str(Fraction(x))
    def from_str(self, s): return Fraction(str(s))
    def spec_str(self): return "Q"


class QuadOrder(Ring):
    """Z[sqrt(d)] for squarefree d < 0; elements are integer pairs (x, y)."""

    def __init__(self, d: int):
        if d >= 0:
            raise RingSpecError(f"Zsqrt[{d}]: d must be negative")
        if not _is_squarefree(d):
            raise RingSpecError(f"Zsqrt[{d}]: d must be squarefree")
        self.d = d
        # units of an imaginary quadratic order all have norm 1; 2 never divides 1
        self.two_invertible = False

    def zero(self): return (0, 0)
    def one(self): return (1, 0)
    def from_int(self, n): return (n, 0)
    def add(self, x, y): return (x[0] + y[0], x[1] + y[1])
    def neg(self, x): return (-x[0], -x[1])

    def mul(self, x, y):
        return (x[0] * y[0] + self.d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def norm(self, x) -> int:
        return x[0] * x[0] - self.d * x[1] * x[1]

    def inv(self, x):
        if self.norm(x) == 1:
            return (x[0], -x[1])
        return None

    def rand(self, rng):
        return (rng.randint(-5, 5), rng.randint(-5, 5))

    def to_str(self, x):
        a, b = x
        if b == 0:
            return str(a)
        w = "w" if b == 1 else ("-w" if b == -1 else f"{b}w")
        if a == 0:
            return w
        return f"{a}+{w}" if not w.startswith("-") else f"{a}{w}"

    def from_str(self, s):
        from .ideals import quad_from_str  # shared parser, fractions allowed
        x, y = quad_from_str(str(s))
        if x.denominator != 1 or y.denominator != 1:
            raise ValueError(f"{s!r} is not integral in {self.spec_str()}")
        return (int(x), int(y))

    def spec_str(self): return f"Zsqrt[{self.d}]"


# ---------------------------------------------------------------------------
# residue decomposition

class ResidueSplit:
    """Maximal ideals, residue fields and radical data of a finite ring.

    `project(x, i)` reduces an element at the i-th maximal ideal; `lift`
    takes one value per residue field to a common preimage.  The product of
    all projections has kernel exactly the Jacobson radical, and the radical
    raised to `nilpotency_index` vanishes.
    """

    def __init__(self, ring, labels, fields, projectors, lifter, nilpotency_index):
        self.ring = ring
        self.labels = tuple(labels)
        self.fields = tuple(fields)
        self._projectors = tuple(projectors)
        self._lifter = lifter
        self.nilpotency_index = nilpotency_index

    def __len__(self):
        return len(self.fields)

    def project(self, x, i):
        return self._projectors[i](x)

    def project_all(self, x):
        return tuple(p(x) for p in self._projectors)

    def lift(self, values):
        if len(values) != len(self.fields):
            raise ValueError(f"expected {len(self.fields)} residue values")
        x = self._lifter(values)
        assert self.project_all(x) == tuple(values)
        return x

    def in_radical(self, x) -> bool:
        return all(self.project(x, i) == f.zero()
                   for i, f in enumerate(self.fields))


def residue_split(R: Ring) -> ResidueSplit:
    """Decompose a finite ring along its maximal ideals."""
    if isinstance(R, Zmod):
        fac = _factor(R.n)
        primes = [p for p, _ in fac]
        fields = [Zmod(p) for p in primes]
        labels = [f"({p})" for p in primes]
        projectors = [(lambda x, p=p: x % p) for p in primes]

        def lifter(values):
            return _crt(list(values), primes) % R.n
        return ResidueSplit(R, labels, fields, projectors, lifter,
                            max(e for _, e in fac))
    if isinstance(R, GaloisField):
        return ResidueSplit(R, ["(0)"], [R], [lambda x: x],
                            lambda values: values[0], 1)
    if isinstance(R, ProductRing):
        subs = [residue_split(f) for f in R.factors]
        labels, fields, projectors, spans = [], [], [], []
        for fi, sub in enumerate(subs):
            spans.append((len(fields), len(sub)))
            for j in range(len(sub)):
                labels.append(f"{fi}:{sub.labels[j]}")
                fields.append(sub.fields[j])
                projectors.append(lambda x, fi=fi, j=j, sub=sub:
                                  sub.project(x[fi], j))

        def lifter(values):
            out = []
            for (start, count), sub in zip(spans, subs):
                out.append(sub.lift(list(values[start:start + count])))
            return tuple(out)
        return ResidueSplit(R, labels, fields, projectors, lifter,
                            max(s.nilpotency_index for s in subs))
    raise ValueError(
        f"residue decomposition is only supported for finite rings, not {R.spec_str()}")


# ---------------------------------------------------------------------------
# spec-level operations

def is_unit(R: Ring, x) -> tuple[bool, object]:
    """Total unit test; returns (flag, inverse-or-None)."""
    i = R.inv(x)
    return (i is not None), i


def mu2(R: Ring) -> list:
    """All square roots of 1 in R.

    Finite rings are enumerated.  Q is a field, so only +-1.  For an
    imaginary quadratic order the same holds because it is a domain:
    e^2 = 1 factors as (e-1)(e+1) = 0.
    """
    if R.is_finite:
        one = R.one()
        return [x for x in R.elements() if R.mul(x, x) == one]
    if isinstance(R, RationalField):
        return [Fraction(1), Fraction(-1)]
    if isinstance(R, QuadOrder):
        return [(1, 0), (-1, 0)]
    raise ValueError(f"mu2 unsupported for {R.spec_str()}")


# ---------------------------------------------------------------------------
# ring spec parser

def make_ring(spec: str) -> Ring:
    """Parse a ring specification string into a descriptor."""
    s = str(spec).replace(" ", "")
    if not s:
        raise RingSpecError("empty ring spec")
    ring, pos = _parse_spec(s, 0)
    if pos != len(s):
        raise RingSpecError(f"trailing input {s[pos:]!r} in ring spec {spec!r}")
    return ring


def _parse_int(s: str, i: int) -> tuple[int, int]:
    j = i
    if j < len(s) and s[j] == "-":
        j += 1
    while j < len(s) and s[j].isdigit():
        j += 1
    if j == i or (s[i] == "-" and j == i + 1):
        raise RingSpecError(f"expected integer at {s[i:i + 8]!r}")
    return int(s[i:j]), j


def _expect(s: str, i: int, tok: str) -> int:
    if not s.startswith(tok, i):
        raise RingSpecError(f"expected {tok!r} at {s[i:i + 8]!r}")
    return i + len(tok)


def _parse_spec(s: str, i: int) -> tuple[Ring, int]:
    if s.startswith("Zsqrt[", i):
        d, j = _parse_int(s, i + len("Zsqrt["))
        j = _expect(s, j, "]")
        return QuadOrder(d), j
    if s.startswith("Z/", i):
        n, j = _parse_int(s, i + 2)
        return Zmod(n), j
    if s.startswith("GF(", i):
        p, j = _parse_int(s, i + 3)
        j = _expect(s, j, "^")
        k, j = _parse_int(s, j)
        j = _expect(s, j, ")")
        modulus = None
        if s.startswith(";", j):
            j += 1
            coeffs = []
            for t in range(k + 1):
                c, j = _parse_int(s, j)
                coeffs.append(c)
                if t < k:
                    j = _expect(s, j, ",")
            modulus = coeffs
        return GaloisField(p, k, modulus), j
    if s.startswith("prod(", i):
        j = i + len("prod(")
        factors = []
        while True:
            f, j = _parse_spec(s, j)
            factors.append(f)
            if s.startswith(",", j):
                j += 1
                continue
            j = _expect(s, j, ")")
            return ProductRing(factors), j
    if s.startswith("Q", i):
        return RationalField(), i + 1
    raise RingSpecError(f"unrecognized ring spec at {s[i:i + 12]!r}")
