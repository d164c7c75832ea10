"""Exact arithmetic: rationals, Z[t] polynomials, the field Q(t), dense matrices.

Rationals are plain ``fractions.Fraction``.  Elements of Q(t) are
``RationalFunction`` values kept in a structural normal form, so ``==`` and
``hash`` are exact.  Linear algebra over either field goes through a
fraction-free (Bareiss) elimination on an integer or integer-polynomial lift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels
from .errors import PoleAtZero, SingularSystem


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__


INFINITE = _Infinite()


# ---------------------------------------------------------------------------
# integer polynomials as coefficient tuples, lowest degree first

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def _psub(a, b):
    out = list(a) + [0] * (len(b) - len(a))
    for i, v in enumerate(b):
        out[i] -= v
    return _trim(out)


def _pneg(a):
    return tuple(-v for v in a)


def _pscale(a, k):
    if k == 0:
        return ()
    return tuple(v * k for v in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return _pscale(b, a[0])
    if len(b) == 1:
        return _pscale(a, b[0])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _content(a):
    return math.gcd(*a) if a else 0


def _primitive(a):
    c = _content(a)
    if c == 0:
        return ()
    if a[-1] < 0:
        c = -c
    return tuple(v // c for v in a)


def _prem(a, b):
    # pseudo-remainder of a by b (lc(b)^(deg a - deg b + 1) * a mod b)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [v * lb for v in r]
        for i, v in enumerate(b):
            r[i + shift] -= lr * v
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _pgcd(a, b):
    """gcd in Z[t], normalized to positive leading coefficient."""
    if not a:
        return _primitive(b) if not b else _pscale(_primitive(b), _content(b))
    if not b:
        return _pscale(_primitive(a), _content(a))
    c = math.gcd(_content(a), _content(b))
    if len(a) == 1 or len(b) == 1:
        return (c,)
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else ())
    return _pscale(_primitive(a), c)


def _pdivexact(a, b):
    if len(b) == 1:
        d = b[0]
        out = []
        for v in a:
            q, r = divmod(v, d)
            if r:
                raise ArithmeticError("inexact polynomial division")
            out.append(q)
        return tuple(out)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        c, rem = divmod(r[-1], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[shift] = c
        for i, v in enumerate(b):
            r[i + shift] -= c * v
        while r and r[-1] == 0:
            r.pop()
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _plcm(a, b):
    return _pdivexact(_pmul(a, b), _pgcd(a, b))


class Polynomial:
    """Integer polynomial in t, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(int(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("poly", self.coeffs))

    def __add__(self, other):
        return Polynomial(_padd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return Polynomial(_psub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        return Polynomial(_pmul(self.coeffs, other.coeffs))

    def __neg__(self):
        return Polynomial(_pneg(self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


def gcd_poly(a: Polynomial, b: Polynomial) -> Polynomial:
    return Polynomial(_pgcd(a.coeffs, b.coeffs))


# ---------------------------------------------------------------------------
# the field Q(t)

def _normal(n, d):
    if not d:
        raise ZeroDivisionError("rational function with zero denominator")
    if not n:
        return (), (1,)
    if len(n) == 1 and len(d) == 1:
        g = math.gcd(n[0], d[0])
        if d[0] < 0:
            g = -g
        return (n[0] // g,), (d[0] // g,)
    g = _pgcd(n, d)
    if g != (1,):
        n = _pdivexact(n, g)
        d = _pdivexact(d, g)
    if d[-1] < 0:
        n, d = _pneg(n), _pneg(d)
    return n, d


class RationalFunction:
    """Element of Q(t) as num/den in Z[t], coprime, den with positive lead."""

    __slots__ = ("_n", "_d")

    def __init__(self, num=(), den=(1,), _normalized=False):
        if isinstance(num, Polynomial):
            num = num.coeffs
        if isinstance(den, Polynomial):
            den = den.coeffs
        n, d = _trim(num), _trim(den)
        if not _normalized:
            n, d = _normal(n, d)
        self._n = n
        self._d = d

    @classmethod
    def variable(cls) -> RationalFunction:
        return cls((0, 1), (1,), _normalized=True)

    @classmethod
    def const(cls, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        q = Fraction(value)
        if q == 0:
            return cls((), (1,), _normalized=True)
        return cls((q.numerator,), (q.denominator,), _normalized=True)

    @property
    def num(self) -> Polynomial:
        return Polynomial(self._n)

    @property
    def den(self) -> Polynomial:
        return Polynomial(self._d)

    @property
    def degree(self) -> int:
        """max(deg num, deg den); a size measure for elimination growth."""
        return max(len(self._n), len(self._d)) - 1

    def is_constant(self) -> bool:
        return len(self._n) <= 1 and len(self._d) == 1

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(self._n[0] if self._n else 0, self._d[0])

    def __bool__(self):
        return bool(self._n)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.const(other)
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.to_fraction())
        return hash((self._n, self._d))

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return RationalFunction(_padd(self._n, o._n), self._d)
        return RationalFunction(
            _padd(_pmul(self._n, o._d), _pmul(o._n, self._d)), _pmul(self._d, o._d)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(_pneg(self._n), self._d, _normalized=True)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not self._n or not o._n:
            return RationalFunction((), (1,), _normalized=True)
        return RationalFunction(_pmul(self._n, o._n), _pmul(self._d, o._d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o._n:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RationalFunction(_pmul(self._n, o._d), _pmul(self._d, o._n))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __call__(self, x):
        x = Fraction(x)
        den = Polynomial(self._d)(x)
        if den == 0:
            raise PoleAtZero(f"denominator vanishes at {x}")
        return Fraction(Polynomial(self._n)(x)) / den

    def __repr__(self):
        return f"RationalFunction({list(self._n)}, {list(self._d)})"


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(x)
    return None


T = RationalFunction.variable()


def eval_at_zero(f):
    """Value at t=0; raises PoleAtZero when the denominator vanishes there."""
    if not isinstance(f, RationalFunction):
        return Fraction(f)
    if f._d[0] == 0:
        raise PoleAtZero(f"pole at t=0: {f!r}")
    return Fraction(f._n[0] if f._n else 0, f._d[0])


def is_function_field(entries) -> bool:
    return any(isinstance(v, RationalFunction) for row in entries for v in row)


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix over Q or Q(t); ``entries`` is a tuple of row tuples."""

    entries: tuple

    def __init__(self, entries):
        object.__setattr__(self, "entries", tuple(tuple(r) for r in entries))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def field(self) -> str:
        return "Q(t)" if is_function_field(self.entries) else "Q"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def columns(self, idx: Sequence[int]) -> ExactMatrix:
        return ExactMatrix([[r[j] for j in idx] for r in self.entries])

    def map(self, f) -> ExactMatrix:
        return ExactMatrix([[f(v) for v in r] for r in self.entries])


def _entries(M):
    return M.entries if isinstance(M, ExactMatrix) else M


def _lift_row_int(row):
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in row]


def _lift_row_poly(row):
    rs = [_coerce(v) for v in row]
    den = (1,)
    for v in rs:
        if v._d != (1,) and v._d != den:
            den = _plcm(den, v._d)
    return [_pmul(v._n, _pdivexact(den, v._d)) for v in rs]


def _bareiss_poly(rows, ncols):
    """Fraction-free echelon over Z[t]. Returns (rows, rank, pivot columns)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    prev = (1,)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        width = len(rows[r])
        for i in range(r + 1, m):
            a = rows[i][c]
            ri = rows[i]
            for jj in range(c + 1, width):
                x = _pmul(piv, ri[jj])
                if a:
                    x = _psub(x, _pmul(a, rows[r][jj]))
                ri[jj] = _pdivexact(x, prev) if prev != (1,) else x
            ri[c] = ()
        prev = piv
        pivots.append(c)
        r += 1
    return rows, r, pivots


def _bareiss_int(rows, ncols):
    rows = [list(r) for r in rows]
    m = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        width = len(rows[r])
        for i in range(r + 1, m):
            a = rows[i][c]
            ri = rows[i]
            for jj in range(c + 1, width):
                ri[jj] = (piv * ri[jj] - a * rows[r][jj]) // prev
            ri[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return rows, r, pivots


def mat_rank(M) -> int:
    """Exact rank over Q or Q(t) (decided by the entry types)."""
    ent = _entries(M)
    if not ent or not ent[0]:
        return 0
    if is_function_field(ent):
        return _bareiss_poly([_lift_row_poly(r) for r in ent], len(ent[0]))[1]
    return kernels.int_rank([_lift_row_int(r) for r in ent])


def naive_rank(M) -> int:
    """Rank by plain Gaussian elimination in the field; an oracle for mat_rank."""
    rows = [list(r) for r in _entries(M)]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / Fraction(rows[r][c]) if not isinstance(rows[r][c], RationalFunction) else 1 / rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] * inv
            if f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_unique(M, b):
    """Unique solution of a possibly overdetermined system M x = b.

    Raises SingularSystem if the solution is not unique or the system is
    inconsistent.  Works over Q and over Q(t).
    """
    ent = _entries(M)
    m = len(ent)
    ncols = len(ent[0]) if m else 0
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [bv] for r, bv in zip(ent, b)]
    poly = is_function_field(aug)
    if poly:
        rows, r, piv = _bareiss_poly([_lift_row_poly(x) for x in aug], ncols)
    else:
        rows, r, piv = _bareiss_int([_lift_row_int(x) for x in aug], ncols)
    if r < ncols:
        raise SingularSystem(f"rank {r} < {ncols} unknowns")
    for i in range(r, m):
        if rows[i][ncols]:
            raise SingularSystem("inconsistent system")
    conv = (lambda p: RationalFunction(p, (1,))) if poly else Fraction
    x = [None] * ncols
    for i in range(ncols - 1, -1, -1):
        acc = conv(rows[i][ncols])
        for j in range(i + 1, ncols):
            if rows[i][j]:
                acc = acc - conv(rows[i][j]) * x[j]
        x[i] = acc / conv(rows[i][i])
    return x


def solve_square(M, b):
    ent = _entries(M)
    if any(len(r) != len(ent) for r in ent):
        raise ValueError("matrix is not square")
    return solve_unique(ent, b)


def mat_vec(M, x):
    return [sum((a * v for a, v in zip(r, x)), 0) for r in _entries(M)]


# ---------------------------------------------------------------------------
# Smith normal form and lattice index

@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple
    rank: int


def smith_normal_form(M) -> SmithForm:
    A = [[int(v) for v in r] for r in _entries(M)]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[t]
                if A[t][j]:
                    done = False
            if done:
                # divisibility: pivot must divide the whole remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest nonzero of row/column t into the pivot slot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for r in A:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(A[t][t]))
        t += 1
    return SmithForm(tuple(diag), len(diag))


def lattice_index(generators, ambient_dim: int):
    """Index in Z^ambient_dim of the lattice spanned by the rows, or INFINITE."""
    rows = [list(r) for r in _entries(generators)]
    if any(len(r) != ambient_dim for r in rows):
        raise ValueError("generator length does not match ambient dimension")
    if not rows:
        return INFINITE if ambient_dim else 1
    sf = smith_normal_form(rows)
    if sf.rank < ambient_dim:
        return INFINITE
    return math.prod(sf.diagonal)


# ---------------------------------------------------------------------------
# JSON encodings

def fraction_to_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_json_value(v):
    if isinstance(v, RationalFunction):
        return {"num": list(v._n), "den": list(v._d)}
    if isinstance(v, (int, Fraction)):
        return fraction_to_str(v)
    raise TypeError(f"not a field element: {v!r}")


def from_json_value(v):
    if isinstance(v, dict):
        return RationalFunction(v["num"], v["den"])
    return Fraction(v)


def matrix_to_json(M):
    return [[to_json_value(v) for v in r] for r in _entries(M)]


def matrix_from_json(rows) -> ExactMatrix:
    return ExactMatrix([[from_json_value(v) for v in r] for r in rows])
