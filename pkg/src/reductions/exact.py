"""Exact scalars, polynomials, truncated Laurent series and linear algebra.

Rationals are ``fractions.Fraction`` throughout: arbitrary precision, always
in lowest terms, positive denominator.  Everything downstream is built on the
four value types in this module:

* ``Polynomial``        dense univariate polynomials over Q
* ``LaurentSeries``     Laurent series in one parameter t, either exact
                        (finite support, no unknown tail) or truncated with a
                        recorded precision bound
* ``RationalMatrix``    immutable matrices over Q
* ``SeriesMatrix``      immutable matrices over LaurentSeries

A truncated series knows the exponent below which its coefficients are
reliable (``prec``); arithmetic propagates that bound instead of silently
pretending full accuracy.  Reading past the bound raises ``PrecisionError``
and callers retry with a doubled budget (see ``degeneration``).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, PrecisionError, RankDeficiencyError

DEFAULT_BUDGET = 16
MAX_BUDGET = 256

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(p, q=1) -> Fraction:
    """Rational constructor shorthand."""
    return Fraction(p, q)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def x_power(k, coeff=1):
        return Polynomial([0] * k + [coeff])

    @property
    def degree(self):
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "Polynomial":
        lead = self.leading()
        return Polynomial([c / lead for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quot = [_ZERO] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        dlead = other.leading()
        dd = other.degree
        while len(rem) - 1 >= dd and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            k = len(rem) - 1 - dd
            f = rem[-1] / dlead
            quot[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
        return Polynomial(quot), Polynomial(rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other) -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Polynomial":
        g = self.gcd(self.derivative())
        if g.is_constant():
            return self.monic()
        return (self // g).monic()

    def __call__(self, x):
        """Evaluate at a Fraction or a RationalMatrix (Horner)."""
        if isinstance(x, RationalMatrix):
            acc = RationalMatrix.zero(x.rows, x.cols)
            eye = RationalMatrix.identity(x.rows)
            for c in reversed(self.coeffs):
                acc = acc * x + eye * c
            return acc
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        if self.is_zero():
            return "Polynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return "Polynomial(" + " + ".join(terms) + ")"


def is_squarefree(p: Polynomial) -> bool:
    """True iff gcd(p, p') is constant.  Rejects the zero polynomial."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    return p.gcd(p.derivative()).is_constant()


def integer_roots(p: Polynomial, bound=None) -> dict[Fraction, int]:
    """All rational roots of p, with multiplicities, found by exact scan.

    Candidates are rationals whose denominator divides the leading
    coefficient of the primitive integer form of p, with numerator inside
    ``bound`` (default: the Cauchy root bound).  Roots are verified by exact
    evaluation and deflation.
    """
    if p.is_zero():
        raise DomainError("zero polynomial has every root")
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ics = [int(c * den) for c in p.coeffs]
    while ics and ics[-1] == 0:
        ics.pop()
    lead = abs(ics[-1])
    if bound is None:
        bound = 1 + max(abs(c) for c in ics) // lead + 1
    roots: dict[Fraction, int] = {}
    candidates = set()
    for q in _divisors(lead):
        for num in range(-int(bound) * q, int(bound) * q + 1):
            candidates.add(Fraction(num, q))
    work = p
    for cand in sorted(candidates):
        if work.is_constant():
            break
        mult = 0
        while not work.is_constant() and work(cand) == 0:
            work = work // Polynomial([-cand, 1])
            mult += 1
        if mult:
            roots[cand] = mult
    return roots


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# rational matrices


class RationalMatrix:
    """Immutable rectangular matrix over Q."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, entries):
        self.entries = tuple(tuple(Fraction(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise DomainError("ragged matrix")

    @staticmethod
    def identity(n):
        return RationalMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r, c):
        return RationalMatrix([[0] * c for _ in range(r)])

    @staticmethod
    def from_rows(rows):
        return RationalMatrix(rows)

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("shape mismatch")
        return RationalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RationalMatrix([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalMatrix([[a * other for a in row] for row in self.entries])
        if self.cols != other.rows:
            raise DomainError("shape mismatch")
        bt = other.transpose().entries
        return RationalMatrix(
            [[_dot(row, col) for col in bt] for row in self.entries]
        )

    __rmul__ = __mul__

    def transpose(self):
        return RationalMatrix(list(zip(*self.entries))) if self.entries else self

    def trace(self):
        return sum(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def is_zero(self):
        return all(a == 0 for row in self.entries for a in row)

    def apply(self, vector):
        """Matrix times coordinate vector (tuple of Fractions)."""
        return tuple(_dot(row, vector) for row in self.entries)

    def vec(self):
        return tuple(a for row in self.entries for a in row)

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DomainError("determinant of non-square matrix")
        m = [list(row) for row in self.entries]
        n = self.rows
        det = _ONE
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return _ZERO
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    f = m[r][c] * inv
                    for k in range(c, n):
                        m[r][k] -= f * m[c][k]
        return det

    def __repr__(self):
        return f"RationalMatrix({[list(map(str, r)) for r in self.entries]})"


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v) if a != 0)


def rref(matrix: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot column indices."""
    m = [list(row) for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return RationalMatrix(m[:r] + [[_ZERO] * cols for _ in range(rows - r)]), tuple(pivots)


def row_space(matrix: RationalMatrix) -> RationalMatrix:
    """Canonical basis (RREF, zero rows dropped) of the row space."""
    red, piv = rref(matrix)
    return RationalMatrix(red.entries[: len(piv)]) if piv else RationalMatrix.zero(0, matrix.cols)


def rank(matrix: RationalMatrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: RationalMatrix) -> RationalMatrix:
    """Rows form the canonical kernel basis of matrix · x = 0."""
    red, pivots = rref(matrix)
    cols = matrix.cols
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * cols
        v[f] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -red.entries[r][f]
        basis.append(v)
    if not basis:
        return RationalMatrix.zero(0, cols)
    return row_space(RationalMatrix(basis))


def solve(matrix: RationalMatrix, rhs) -> tuple[Fraction, ...] | None:
    """One solution of matrix · x = rhs, or None."""
    aug = RationalMatrix([list(row) + [b] for row, b in zip(matrix.entries, rhs)])
    red, pivots = rref(aug)
    if matrix.cols in pivots:
        return None
    x = [_ZERO] * matrix.cols
    for r, p in enumerate(pivots):
        x[p] = red.entries[r][matrix.cols]
    return tuple(x)


class LinearSolver:
    """Solves A·x = b repeatedly for a fixed A, via one recorded elimination."""

    def __init__(self, matrix: RationalMatrix):
        self.matrix = matrix
        aug = RationalMatrix(
            [
                list(row) + [1 if i == j else 0 for j in range(matrix.rows)]
                for i, row in enumerate(matrix.entries)
            ]
        )
        red, pivots = rref(aug)
        self.reduced = RationalMatrix([row[: matrix.cols] for row in red.entries])
        self.transform = RationalMatrix([row[matrix.cols :] for row in red.entries])
        self.pivots = [p for p in pivots if p < matrix.cols]
        self.rank = len(self.pivots)

    def solve(self, rhs):
        """One solution of A·x = rhs, or None when inconsistent."""
        y = self.transform.apply(rhs)
        for r in range(self.rank, self.matrix.rows):
            if y[r] != 0:
                return None
        x = [_ZERO] * self.matrix.cols
        for r, p in enumerate(self.pivots):
            x[p] = y[r]
        # validity needs the non-pivot coordinates of the reduced rows to
        # vanish against x, which holds since free variables are set to zero
        return tuple(x)


def in_row_space(matrix: RationalMatrix, vector) -> bool:
    return coordinates_in_row_space(matrix, vector) is not None


def coordinates_in_row_space(matrix, vector):
    """Coefficients expressing vector over the rows of matrix, or None."""
    sol = solve(matrix.transpose(), vector)
    return sol


def intersect_row_spaces(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Canonical basis of (row space of a) ∩ (row space of b)."""
    if a.rows == 0 or b.rows == 0:
        return RationalMatrix.zero(0, a.cols)
    stacked = RationalMatrix(
        [list(ra) for ra in a.entries] + [list(rb) for rb in b.entries]
    ).transpose()
    # kernel vectors (x, y) with x·a + y·b = 0  =>  x·a = -y·b lies in both
    ker = nullspace(stacked)
    vecs = []
    for krow in ker.entries:
        x = krow[: a.rows]
        v = [_ZERO] * a.cols
        for coef, row in zip(x, a.entries):
            if coef != 0:
                for j, e in enumerate(row):
                    v[j] += coef * e
        vecs.append(v)
    if not vecs:
        return RationalMatrix.zero(0, a.cols)
    return row_space(RationalMatrix(vecs))


def sum_row_spaces(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return row_space(RationalMatrix(list(a.entries) + list(b.entries)))


def min_poly(m: RationalMatrix) -> Polynomial:
    """Monic annihilating polynomial of least degree, by Krylov iteration."""
    if m.rows != m.cols:
        raise DomainError("minimal polynomial needs a square matrix")
    n = m.rows
    width = n * n
    power = RationalMatrix.identity(n)
    reduced = []  # (pivot column, row); rows carry a trailing combination part
    for k in range(n + 1):
        row = list(power.vec()) + [_ZERO] * (n + 1)
        row[width + k] = _ONE
        for pc, r in reduced:
            if row[pc] != 0:
                f = row[pc] / r[pc]
                row = [a - f * b for a, b in zip(row, r)]
        pivot = next((c for c in range(width) if row[c] != 0), None)
        if pivot is None:
            return Polynomial(row[width : width + k + 1]).monic()
        reduced.append((pivot, row))
        power = power * m
    raise RankDeficiencyError("no dependence found; impossible for square matrix")


# ---------------------------------------------------------------------------
# Laurent series


class LaurentSeries:
    """Laurent series over Q in a parameter t.

    ``val`` is the valuation, ``coeffs`` the known coefficients starting at
    t^val with coeffs[0] != 0, and ``prec`` the absolute exponent below which
    coefficients are reliable (None means the series is exactly the stored
    Laurent polynomial).  The zero series stores empty coeffs; with finite
    prec it is a "tracked zero": zero as far as is known, with no certified
    valuation.
    """

    __slots__ = ("val", "coeffs", "prec", "budget")

    def __init__(self, val, coeffs, prec=None, budget=DEFAULT_BUDGET):
        cs = [Fraction(c) for c in coeffs]
        if prec is not None:
            cs = cs[: max(0, prec - val)]
        while cs and cs[0] == 0:
            cs = cs[1:]
            val += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            self.val = 0
            self.coeffs = ()
        else:
            self.val = val
            self.coeffs = tuple(cs)
        self.prec = prec
        self.budget = budget

    # -- constructors

    @staticmethod
    def constant(c, budget=DEFAULT_BUDGET):
        return LaurentSeries(0, [c], None, budget)

    @staticmethod
    def t_power(k, coeff=1, budget=DEFAULT_BUDGET):
        return LaurentSeries(k, [coeff], None, budget)

    @staticmethod
    def zero(budget=DEFAULT_BUDGET):
        return LaurentSeries(0, [], None, budget)

    # -- predicates and accessors

    def is_zero(self):
        """True when no nonzero coefficient is known (exact or tracked)."""
        return not self.coeffs

    def is_exact(self):
        return self.prec is None

    def valuation(self) -> int:
        if self.is_zero():
            raise PrecisionError(
                "zero-so-far series has no valuation"
                + ("" if self.is_exact() else f" (known zero below t^{self.prec})"),
                needed=self.prec,
            )
        return self.val

    def leading(self) -> Fraction:
        self.valuation()
        return self.coeffs[0]

    def coeff_at(self, k) -> Fraction:
        """Coefficient of t^k; PrecisionError when k is past the known range."""
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of t^{k} unknown (prec {self.prec})", needed=k)
        if self.is_zero() or k < self.val or k >= self.val + len(self.coeffs):
            return _ZERO
        return self.coeffs[k - self.val]

    def at_zero(self) -> Fraction:
        """Value at t = 0; requires nonnegative valuation."""
        if not self.is_zero() and self.val < 0:
            raise DomainError("series has a pole at t = 0")
        return self.coeff_at(0)

    # -- arithmetic

    def _meet_prec(self, other):
        ps = [p for p in (self.prec, other.prec) if p is not None]
        return min(ps) if ps else None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other, self.budget)
        budget = min(self.budget, other.budget)
        prec = self._meet_prec(other)
        if self.is_zero() and other.is_zero():
            return LaurentSeries(0, [], prec, budget)
        lo = min([s.val for s in (self, other) if not s.is_zero()])
        hi = max(
            [s.val + len(s.coeffs) for s in (self, other) if not s.is_zero()]
        )
        if prec is not None:
            hi = min(hi, prec)
        out = []
        for k in range(lo, hi):
            c = _ZERO
            for s in (self, other):
                if not s.is_zero() and s.val <= k < s.val + len(s.coeffs):
                    c += s.coeffs[k - s.val]
            out.append(c)
        return LaurentSeries(lo, out, prec, budget)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.prec, self.budget)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other, self.budget)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentSeries(
                self.val, [c * other for c in self.coeffs], self.prec, self.budget
            )
        budget = min(self.budget, other.budget)
        # precision of a product: each factor's unknown tail is shifted by the
        # other factor's valuation
        precs = []
        if self.prec is not None:
            precs.append(self.prec + (other.val if not other.is_zero() else 0))
        if other.prec is not None:
            precs.append(other.prec + (self.val if not self.is_zero() else 0))
        prec = min(precs) if precs else None
        if self.is_zero() or other.is_zero():
            return LaurentSeries(0, [], prec, budget)
        val = self.val + other.val
        width = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not None:
            width = min(width, prec - val)
        out = [_ZERO] * max(width, 0)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            jmax = min(len(other.coeffs), width - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return LaurentSeries(val, out, prec, budget)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentSeries(
            self.val + k,
            self.coeffs,
            None if self.prec is None else self.prec + k,
            self.budget,
        )

    def inverse(self):
        """Multiplicative inverse, computed to the truncation budget."""
        if self.is_zero():
            if self.is_exact():
                raise ZeroDivisionError("inverse of the zero series")
            raise PrecisionError("inverse of a zero-so-far series", needed=self.prec)
        n = self.budget
        if self.prec is not None:
            n = min(n, self.prec - self.val)
        c0 = self.coeffs[0]
        inv0 = 1 / c0
        out = [inv0] + [_ZERO] * (n - 1)
        for k in range(1, n):
            acc = _ZERO
            for j in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc += self.coeffs[j] * out[k - j]
            out[k] = -acc * inv0
        exact_and_short = self.is_exact() and len(self.coeffs) == 1
        prec = None if exact_and_short else -self.val + n
        return LaurentSeries(-self.val, out, prec, self.budget)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * Fraction(1, 1) / LaurentSeries.constant(other, self.budget)
        return self * other.inverse()

    def truncate(self, prec):
        """Forget coefficients at exponents >= prec."""
        newp = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.val, self.coeffs, newp, self.budget)

    def substitute_scaled(self, unit: "LaurentSeries"):
        """Substitute t -> t * unit(t) for a unit series (val 0, nonzero c0)."""
        if unit.is_zero() or unit.valuation() != 0:
            raise DomainError("reparametrization must be by a unit series")
        if self.is_zero():
            return self
        result = LaurentSeries.zero(self.budget)
        pow_cache = {0: LaurentSeries.constant(1, self.budget)}

        def upower(k):
            if k not in pow_cache:
                if k > 0:
                    pow_cache[k] = upower(k - 1) * unit
                else:
                    pow_cache[k] = upower(k + 1) * unit.inverse()
            return pow_cache[k]

        for i, c in enumerate(self.coeffs):
            if c != 0:
                k = self.val + i
                result = result + upower(k).shift(k) * c
        if self.prec is not None:
            result = result.truncate(self.prec)
        return result

    # -- comparison

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and (self.val == other.val or not self.coeffs)
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.val if self.coeffs else 0, self.coeffs, self.prec))

    def agrees(self, other, floor=1) -> bool:
        """Equality of the two series on their common known range.

        The common range must extend at least to exponent ``floor`` or the
        comparison is meaningless and raises PrecisionError.
        """
        precs = [p for p in (self.prec, other.prec) if p is not None]
        if not precs:
            return self.val == other.val and self.coeffs == other.coeffs \
                if self.coeffs and other.coeffs else self.coeffs == other.coeffs
        bound = min(precs)
        vals = [s.val for s in (self, other) if not s.is_zero()]
        if vals and bound <= max(v + 1 for v in vals) and bound < floor:
            raise PrecisionError("known ranges too short to compare", needed=bound)
        lo = min(vals) if vals else 0
        return all(self.coeff_at(k) == other.coeff_at(k) for k in range(lo, bound))

    def __repr__(self):
        if self.is_zero():
            body = "0"
        else:
            parts = []
            for i, c in enumerate(self.coeffs):
                if c:
                    k = self.val + i
                    parts.append(f"{c}" if k == 0 else f"{c}*t^{k}")
            body = " + ".join(parts)
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return f"LaurentSeries({body}{tail})"


def series_valuation(s: LaurentSeries) -> int:
    """Least exponent with nonzero coefficient; errors on a zero-so-far series."""
    return s.valuation()


def min_valuation(series_list) -> int:
    """min of valuations over a family, with sound handling of tracked zeros.

    An inexact zero whose known-zero range does not already exceed the
    candidate minimum could hide a smaller valuation: that is a precision
    failure, not a value.
    """
    best = None
    for s in series_list:
        if not s.is_zero():
            v = s.valuation()
            best = v if best is None or v < best else best
    if best is None:
        inexact = [s for s in series_list if not s.is_exact()]
        if inexact:
            raise PrecisionError("all entries are zero so far; valuation unknown")
        raise DomainError("zero vector has no valuation")
    for s in series_list:
        if s.is_zero() and not s.is_exact() and s.prec <= best:
            raise PrecisionError(
                f"tracked zero known only below t^{s.prec} cannot be ruled out "
                f"as smaller than t^{best}",
                needed=s.prec,
            )
    return best


# ---------------------------------------------------------------------------
# series matrices


class SeriesMatrix:
    """Immutable rectangular matrix over LaurentSeries."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, entries):
        self.entries = tuple(tuple(e for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise DomainError("ragged matrix")

    @staticmethod
    def identity(n, budget=DEFAULT_BUDGET):
        one = LaurentSeries.constant(1, budget)
        zero = LaurentSeries.zero(budget)
        return SeriesMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def from_rational(m: RationalMatrix, budget=DEFAULT_BUDGET):
        return SeriesMatrix(
            [[LaurentSeries.constant(c, budget) for c in row] for row in m.entries]
        )

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            if self.cols != other.rows:
                raise DomainError("shape mismatch")
            cols = list(zip(*other.entries))
            out = []
            for row in self.entries:
                out.append([_sdot(row, col) for col in cols])
            return SeriesMatrix(out)
        return SeriesMatrix([[e * other for e in row] for row in self.entries])

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("shape mismatch")
        return SeriesMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def apply(self, vector):
        """Matrix times vector; vector entries Fractions or LaurentSeries."""
        out = []
        for row in self.entries:
            acc = LaurentSeries.zero()
            for a, b in zip(row, vector):
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def transpose(self):
        return SeriesMatrix(list(zip(*self.entries)))

    def minor(self, row_idx, col_idx) -> LaurentSeries:
        """Determinant of the square submatrix on the given indices."""
        k = len(row_idx)
        if k == 0:
            return LaurentSeries.constant(1)
        if k == 1:
            return self.entries[row_idx[0]][col_idx[0]]
        acc = LaurentSeries.zero()
        top = row_idx[0]
        rest = row_idx[1:]
        for pos, c in enumerate(col_idx):
            e = self.entries[top][c]
            if e.is_zero() and e.is_exact():
                continue
            sub = self.minor(rest, col_idx[:pos] + col_idx[pos + 1 :])
            term = e * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    def det(self) -> LaurentSeries:
        if self.rows != self.cols:
            raise DomainError("determinant of non-square matrix")
        return self.minor(tuple(range(self.rows)), tuple(range(self.cols)))

    def inverse(self) -> "SeriesMatrix":
        """Inverse by Gauss elimination with minimal-valuation pivoting."""
        if self.rows != self.cols:
            raise DomainError("inverse of non-square matrix")
        n = self.rows
        m = [list(row) + list(SeriesMatrix.identity(n).entries[i]) for i, row in enumerate(self.entries)]
        for c in range(n):
            piv, pv = None, None
            for r in range(c, n):
                e = m[r][c]
                if e.is_zero():
                    if not e.is_exact():
                        raise PrecisionError("pivot entry is zero so far")
                    continue
                if pv is None or e.valuation() < pv:
                    piv, pv = r, e.valuation()
            if piv is None:
                raise RankDeficiencyError("matrix is singular over the series field")
            m[c], m[piv] = m[piv], m[c]
            inv = m[c][c].inverse()
            m[c] = [e * inv for e in m[c]]
            for r in range(n):
                if r != c and not (m[r][c].is_zero() and m[r][c].is_exact()):
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return SeriesMatrix([row[n:] for row in m])

    def __repr__(self):
        return f"SeriesMatrix({self.rows}x{self.cols})"


def _sdot(u, v):
    acc = LaurentSeries.zero()
    for a, b in zip(u, v):
        if not (a.is_zero() and a.is_exact()) and not (b.is_zero() and b.is_exact()):
            acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# valuation-adapted column reduction


class ColumnReduction:
    """Result of valuation_adapted_reduce.

    ``transform`` is invertible over the local ring (valuation-0 determinant)
    and ``reduced = matrix · transform`` has one pivot row per column whose
    other entries vanish; ``pivot_valuations`` ascend.
    """

    __slots__ = ("transform", "reduced", "pivot_rows", "pivot_valuations")

    def __init__(self, transform, reduced, pivot_rows, pivot_valuations):
        self.transform = transform
        self.reduced = reduced
        self.pivot_rows = pivot_rows
        self.pivot_valuations = pivot_valuations


def valuation_adapted_reduce(matrix: SeriesMatrix) -> tuple[ColumnReduction, list[int]]:
    """Column-reduce over the local ring, exposing the invariant-factor
    valuations of the column module inside the ambient free module.

    Pivots are chosen by lowest valuation, ties broken by lowest row index
    (then lowest column index).  Requires full column rank over the series
    field; rank deficiency and undecidable (tracked-zero) pivots are errors.
    """
    work = [list(col) for col in zip(*matrix.entries)]  # list of columns
    ncols = len(work)
    nrows = matrix.rows
    if ncols == 0:
        empty = SeriesMatrix.identity(0)
        return ColumnReduction(empty, matrix, [], []), []
    transform = [list(col) for col in zip(*SeriesMatrix.identity(ncols).entries)]
    used_rows: set[int] = set()
    pivot_rows = []
    pivot_vals = []
    for k in range(ncols):
        best = None  # (val, row, col)
        blocked = None
        for j in range(k, ncols):
            for r in range(nrows):
                if r in used_rows:
                    continue
                e = work[j][r]
                if e.is_zero():
                    if not e.is_exact():
                        blocked = max(blocked or e.prec, e.prec) if blocked else e.prec
                    continue
                key = (e.valuation(), r, j)
                if best is None or key < best:
                    best = key
        if best is None:
            if blocked is not None:
                raise PrecisionError(
                    "cannot locate a pivot: remaining entries are zero so far",
                    needed=blocked,
                )
            raise RankDeficiencyError("matrix does not have full column rank")
        v, prow, pcol = best
        if blocked is not None and blocked <= v:
            raise PrecisionError(
                f"tracked zero below t^{blocked} could precede pivot t^{v}",
                needed=blocked,
            )
        if pcol != k:
            work[k], work[pcol] = work[pcol], work[k]
            transform[k], transform[pcol] = transform[pcol], transform[k]
        pivot = work[k][prow]
        pinv = pivot.inverse()
        for j in range(ncols):
            if j == k:
                continue
            e = work[j][prow]
            if e.is_zero() and e.is_exact():
                continue
            q = e * pinv
            work[j] = [a - q * b for a, b in zip(work[j], work[k])]
            transform[j] = [a - q * b for a, b in zip(transform[j], transform[k])]
        used_rows.add(prow)
        pivot_rows.append(prow)
        pivot_vals.append(v)
    if pivot_vals != sorted(pivot_vals):
        raise RankDeficiencyError("pivot valuations are not ascending; internal error")
    reduced = SeriesMatrix(list(zip(*work)))
    tmat = SeriesMatrix(list(zip(*transform)))
    return ColumnReduction(tmat, reduced, pivot_rows, pivot_vals), list(pivot_vals)
