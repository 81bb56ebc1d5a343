"""Dense exact linear algebra over the rationals.

Everything here is plumbing for the transform modules: determinants and
inverses by Gaussian elimination on Fractions, characteristic polynomials by
Faddeev-LeVerrier, eigenvalues by rational root extraction (denominators
divide the cleared leading coefficient, numerators the constant term), exact
Jordan forms via kernel chains, and joint generalized eigensectors for
commuting tuples.  Matrices whose eigenvalues are not all rational are
reported as errors, never approximated.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .core import as_rational


class Matrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(as_rational(e) for e in row) for row in rows
        )
        self.nrows = len(self.rows)
        if self.nrows == 0:
            raise ValueError("matrix needs at least one row")
        self.ncols = len(self.rows[0])
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(
            [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(
            [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]
        )

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __bool__(self) -> bool:
        return any(any(e for e in row) for row in self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in row) for row in self.rows)
        return f"Matrix[{body}]"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        )

    def __neg__(self) -> "Matrix":
        return Matrix([-e for e in row] for row in self.rows)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch in matrix product")
            bt = list(zip(*other.rows))
            return Matrix(
                [sum(a * b for a, b in zip(row, col)) for col in bt]
                for row in self.rows
            )
        c = as_rational(other)
        return Matrix([e * c for e in row] for row in self.rows)

    def __rmul__(self, other) -> "Matrix":
        c = as_rational(other)
        return Matrix([c * e for e in row] for row in self.rows)

    def _same_shape(self, other: "Matrix") -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def _square(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("square matrix required")
        return self.nrows

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def matvec(self, v: Sequence) -> Tuple[Fraction, ...]:
        v = [as_rational(x) for x in v]
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def power(self, e: int) -> "Matrix":
        n = self._square()
        if e < 0:
            return self.inverse().power(-e)
        out = Matrix.identity(n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def trace(self) -> Fraction:
        self._square()
        return sum(self.rows[i][i] for i in range(self.nrows))

    def det(self) -> Fraction:
        n = self._square()
        a = [list(row) for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                f = a[r][col] * inv
                if f:
                    for c in range(col, n):
                        a[r][c] -= f * a[col][c]
        return det

    def inverse(self) -> "Matrix":
        n = self._square()
        a = [list(row) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [e * inv for e in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [e - f * p for e, p in zip(a[r], a[col])]
        return Matrix(row[n:] for row in a)

    def charpoly(self) -> List[Fraction]:
        """Coefficients [c_0, ..., c_{n-1}, 1] of det(xI - A), ascending."""
        n = self._square()
        # Faddeev-LeVerrier: M_1 = A, c_k = -tr(A M_{k-1} + c adj chain)/k
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        m = self
        c = -m.trace()
        coeffs[n - 1] = c
        for k in range(2, n + 1):
            m = self * (m + c * Matrix.identity(n))
            c = -m.trace() / k
            coeffs[n - k] = c
        return coeffs

    def rational_eigenvalues(self) -> List[Tuple[Fraction, int]]:
        """(eigenvalue, algebraic multiplicity) pairs; errors if any root of
        the characteristic polynomial is irrational."""
        roots = rational_roots(self.charpoly())
        if sum(m for _, m in roots) != self._square():
            raise ValueError(
                "matrix has non-rational eigenvalues; exact decomposition "
                "is not available"
            )
        return roots

    def is_nilpotent(self) -> bool:
        n = self._square()
        return not self.power(n)


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _deflate(coeffs: List[Fraction], root: Fraction) -> List[Fraction]:
    # synthetic division by (x - root); assumes root is exact
    out: List[Fraction] = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[i] + acc * root
        out[i - 1] = acc
    assert coeffs[0] + acc * root == 0
    return out


def _divisors(n: int) -> List[int]:
    n = abs(n)
    out = set()
    f = 1
    while f * f <= n:
        if n % f == 0:
            out.add(f)
            out.add(n // f)
        f += 1
    return sorted(out)


def rational_roots(coeffs: Sequence[Fraction]) -> List[Tuple[Fraction, int]]:
    """All rational roots (with multiplicity) of a polynomial given by
    ascending Fraction coefficients."""
    work = [as_rational(c) for c in coeffs]
    while work and work[-1] == 0:
        work.pop()
    if len(work) <= 1:
        return []
    found: dict = {}
    zero_mult = 0
    while len(work) > 1 and work[0] == 0:
        zero_mult += 1
        work = work[1:]
    if zero_mult:
        found[Fraction(0)] = zero_mult
    while len(work) > 1:
        den = math.lcm(*(c.denominator for c in work))
        ints = [int(c * den) for c in work]
        lead, const = ints[-1], ints[0]
        root = None
        for q in _divisors(lead):
            for p in _divisors(const):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if poly_eval(work, cand) == 0:
                        root = cand
                        break
                if root is not None:
                    break
            if root is not None:
                break
        if root is None:
            break
        found[root] = found.get(root, 0) + 1
        work = _deflate(work, root)
    return sorted(found.items())


class SpanTracker:
    """Incremental row-reduced span of vectors; membership tests in O(n^2)."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots: dict = {}  # pivot index -> reduced vector

    def _reduce(self, v: Sequence[Fraction]) -> List[Fraction]:
        v = list(v)
        for piv, row in self.pivots.items():
            if v[piv]:
                f = v[piv]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self._reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        """Add v to the span; returns False if it was already in it."""
        r = self._reduce(v)
        piv = next((i for i, e in enumerate(r) if e), None)
        if piv is None:
            return False
        inv = 1 / r[piv]
        self.pivots[piv] = [e * inv for e in r]
        return True


def nullspace(m: Matrix) -> List[Tuple[Fraction, ...]]:
    """Exact basis of the right kernel."""
    a = [list(row) for row in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots: List[int] = []
    row = 0
    for col in range(nc):
        piv = next((r for r in range(row, nr) if a[r][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [e * inv for e in a[row]]
        for r in range(nr):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [e - f * p for e, p in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(tuple(v))
    return basis


def solve_columns(v: Matrix, b: Matrix) -> Matrix:
    """Solve V X = B exactly; V must have full column rank and the system
    must be consistent (used to restrict operators to invariant subspaces)."""
    nr, nc = v.nrows, v.ncols
    a = [list(v.rows[i]) + list(b.rows[i]) for i in range(nr)]
    row = 0
    pivots = []
    for col in range(nc):
        piv = next((r for r in range(row, nr) if a[r][col]), None)
        if piv is None:
            raise ValueError("matrix does not have full column rank")
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [e * inv for e in a[row]]
        for r in range(nr):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [e - f * p for e, p in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
    for r in range(row, nr):
        if any(a[r][nc:]):
            raise ValueError("inconsistent system")
    return Matrix(a[r][nc:] for r in range(nc))


def jordan_form(m: Matrix) -> Tuple[Matrix, Matrix]:
    """Exact Jordan decomposition (U, J) with U^{-1} m U = J.

    Requires all eigenvalues rational.  Blocks are grouped by eigenvalue in
    the sorted order of :meth:`Matrix.rational_eigenvalues`, tallest chains
    first; within a chain the eigenvector comes first, so J carries ones on
    the superdiagonal.
    """
    n = m._square()
    columns: List[Tuple[Fraction, ...]] = []
    block_data: List[Tuple[Fraction, int]] = []
    for gamma, mult in m.rational_eigenvalues():
        nmat = m - gamma * Matrix.identity(n)
        powers = [Matrix.identity(n)]
        kers: List[List[Tuple[Fraction, ...]]] = [[]]
        t = 1
        while True:
            powers.append(powers[-1] * nmat)
            kb = nullspace(powers[-1])
            kers.append(kb)
            if len(kb) == mult:
                break
            if t > n:
                raise RuntimeError("kernel chain failed to stabilize")
            t += 1
        height = len(kers) - 1
        tops: List[Tuple[Tuple[Fraction, ...], int]] = []
        for t in range(height, 0, -1):
            # avoid space at level t: ker(N^(t-1)) plus the level-t images
            # of the taller chains; rebuilt per level
            span = SpanTracker(n)
            for w in kers[t - 1]:
                span.add(w)
            for v, h in tops:
                if h > t:
                    span.add(powers[h - t].matvec(v))
            for cand in kers[t]:
                if span.add(cand):
                    tops.append((cand, t))
        tops_here = [(v, h) for v, h in tops]
        tops_here.sort(key=lambda vh: -vh[1])
        for v, h in tops_here:
            chain = [powers[k].matvec(v) for k in range(h - 1, -1, -1)]
            columns.extend(chain)
            block_data.append((gamma, h))
    if len(columns) != n:
        raise RuntimeError("jordan basis has wrong size")
    u = Matrix.from_columns(columns)
    jrows = [[Fraction(0)] * n for _ in range(n)]
    pos = 0
    for gamma, h in block_data:
        for k in range(h):
            jrows[pos + k][pos + k] = gamma
            if k + 1 < h:
                jrows[pos + k][pos + k + 1] = Fraction(1)
        pos += h
    return u, Matrix(jrows)


def commute(a: Matrix, b: Matrix) -> bool:
    return a * b == b * a


def joint_eigensectors(
    mats: Sequence[Matrix],
) -> List[Tuple[Tuple[Fraction, ...], Matrix]]:
    """Joint generalized eigensectors of a commuting tuple.

    Returns (eigenvalue vector, basis matrix V) pairs; each span(V) is
    invariant under every matrix of the tuple and each restriction has the
    single stated eigenvalue.  Commuting matrices preserve one another's
    generalized eigenspaces, so iterated refinement is exact.
    """
    if not mats:
        raise ValueError("empty tuple")
    n = mats[0]._square()
    sectors: List[Tuple[Tuple[Fraction, ...], Matrix]] = [
        (tuple(), Matrix.identity(n))
    ]
    for m in mats:
        refined = []
        for tag, v in sectors:
            rest = solve_columns(v, m * v)
            for gamma, mult in rest.rational_eigenvalues():
                nm = rest - gamma * Matrix.identity(rest.nrows)
                sub = nullspace(nm.power(rest.nrows))
                if len(sub) != mult:
                    raise RuntimeError("generalized eigenspace dimension mismatch")
                basis = Matrix.from_columns(sub)
                refined.append((tag + (gamma,), v * basis))
        sectors = refined
    return sectors
