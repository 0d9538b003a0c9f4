"""Exact integer and rational linear algebra on lattices.

Everything here is pure and exact: matrices are immutable, entries are
arbitrary-precision Python ints (or Fractions for the rational helpers),
and no floating point appears anywhere.  Sublattices are kept in row
Hermite normal form so that equality of sublattices is equality of data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("data", "rows", "cols")

    def __init__(self, data, cols=None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows in matrix")
            if cols is not None and cols != width:
                raise ValueError("explicit column count disagrees with data")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            width = cols
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def transpose(self):
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        return IntMatrix(
            [
                [
                    sum(self.data[i][k] * other.data[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ],
            cols=other.cols,
        )

    def mul_vec(self, v):
        """Matrix times column vector, returned as a tuple."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(row[k] * v[k] for k in range(self.cols)) for row in self.data)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        mat = [[Fraction(x) for x in row] for row in self.data]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if mat[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                det = -det
            det *= mat[c][c]
            inv = 1 / mat[c][c]
            for i in range(c + 1, n):
                f = mat[i][c] * inv
                if f:
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
        assert det.denominator == 1
        return int(det)

    def is_unimodular(self):
        return self.rows == self.cols and abs(self.det()) == 1

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]!r})"


def _identity_list(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(m: IntMatrix):
    """Return (U, D, V) with U m V = D, U and V unimodular, D diagonal
    with a divisibility chain d1 | d2 | ... on the diagonal."""
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.data]
    u = _identity_list(nr)
    v = _identity_list(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (
                    best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])
                ):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, nr):
            if a[i][t]:
                add_row(i, t, a[i][t] // a[t][t])
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, nc):
            if a[t][j]:
                add_col(j, t, a[t][j] // a[t][t])
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry; fold a violator into row t
        viol = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    viol = i
                    break
            if viol is not None:
                break
        if viol is not None:
            add_row(t, viol, -1)
            continue
        t += 1

    for i in range(min(nr, nc)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]

    return (
        IntMatrix(u, cols=nr),
        IntMatrix(a, cols=nc),
        IntMatrix(v, cols=nc),
    )


def invariant_factor_list(m: IntMatrix):
    """Diagonal of the Smith form, without the unit transforms."""
    _, d, _ = smith_normal_form(m)
    return [d.data[i][i] for i in range(min(m.rows, m.cols))]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    inv = invert_rational([[Fraction(x) for x in row] for row in m.data])
    out = []
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return IntMatrix(out, cols=m.cols)


def _hermite_rows(rows, ncols):
    """Canonical row Hermite normal form; zero rows are dropped."""
    mat = [list(r) for r in rows]
    pr = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(pr, len(mat)) if mat[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: (abs(mat[i][col]), i))
            i0 = nz[0]
            for i in nz[1:]:
                q = mat[i][col] // mat[i0][col]
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[i0])]
        nz = [i for i in range(pr, len(mat)) if mat[i][col] != 0]
        if not nz:
            continue
        mat[pr], mat[nz[0]] = mat[nz[0]], mat[pr]
        if mat[pr][col] < 0:
            mat[pr] = [-x for x in mat[pr]]
        p = mat[pr][col]
        for i in range(pr):
            q = mat[i][col] // p
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[pr])]
        pr += 1
    return [tuple(r) for r in mat[:pr]]


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank, stored by its Hermite-form basis."""

    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def from_rows(cls, ambient_rank, rows):
        reduced = _hermite_rows(rows, ambient_rank)
        return cls(ambient_rank, IntMatrix(reduced, cols=ambient_rank))

    @classmethod
    def full(cls, ambient_rank):
        return cls(ambient_rank, IntMatrix.identity(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank):
        return cls(ambient_rank, IntMatrix([], cols=ambient_rank))

    @property
    def rank(self):
        return self.basis.rows

    def _pivots(self):
        cols = []
        for row in self.basis.data:
            c = next(j for j, x in enumerate(row) if x != 0)
            cols.append(c)
        return cols

    def coefficients(self, v):
        """Integer coordinates of v in the basis, or None if v is outside."""
        if len(v) != self.ambient_rank:
            raise ValueError("vector length mismatch")
        v = list(v)
        coeffs = []
        for row, c in zip(self.basis.data, self._pivots()):
            q, r = divmod(v[c], row[c])
            if r:
                return None
            coeffs.append(q)
            v = [x - q * y for x, y in zip(v, row)]
        return tuple(coeffs) if not any(v) else None

    def rational_coefficients(self, v):
        """Rational coordinates of v in the basis, or None if outside the span."""
        v = [Fraction(x) for x in v]
        coeffs = []
        for row, c in zip(self.basis.data, self._pivots()):
            q = v[c] / row[c]
            coeffs.append(q)
            v = [x - q * y for x, y in zip(v, row)]
        return tuple(coeffs) if not any(v) else None

    def contains(self, v):
        return self.coefficients(v) is not None

    def member_from_coefficients(self, coeffs):
        return tuple(
            sum(c * row[j] for c, row in zip(coeffs, self.basis.data))
            for j in range(self.ambient_rank)
        )


def kernel_mod(m: IntMatrix, modulus=None) -> Sublattice:
    """All x with m x == 0 modulo `modulus` (exact kernel for modulus None).

    The exact kernel is saturated; the modular kernel has full rank.
    """
    if modulus is not None and modulus <= 0:
        raise ValueError("modulus must be positive")
    u, d, v = smith_normal_form(m)
    gens = []
    for j in range(m.cols):
        dj = d.data[j][j] if j < min(m.rows, m.cols) else 0
        col = v.column(j)
        if modulus is None:
            if dj == 0:
                gens.append(col)
        else:
            step = modulus // math.gcd(dj, modulus)
            gens.append(tuple(step * x for x in col))
    return Sublattice.from_rows(m.cols, gens)


def saturation(s: Sublattice) -> Sublattice:
    """The smallest saturated sublattice containing s (ambient meet Q.s)."""
    if s.rank == 0:
        return s
    _, _, v = smith_normal_form(s.basis)
    vinv = inverse_unimodular(v)
    return Sublattice.from_rows(s.ambient_rank, vinv.data[: s.rank])


def quotient_group(s: Sublattice) -> "FGAbelianGroup":
    """Invariant factors of Z^ambient / s."""
    factors = invariant_factor_list(s.basis) if s.rank else []
    free = s.ambient_rank - s.rank
    return FGAbelianGroup.from_factors(list(factors) + [0] * free)


def intersect(s1: Sublattice, s2: Sublattice) -> Sublattice:
    """Intersection of two sublattices of the same ambient lattice."""
    if s1.ambient_rank != s2.ambient_rank:
        raise ValueError("ambient rank mismatch")
    if s1.rank == 0 or s2.rank == 0:
        return Sublattice.zero(s1.ambient_rank)
    n = s1.ambient_rank
    cols = []
    for j in range(s1.rank):
        cols.append([s1.basis.data[j][i] for i in range(n)])
    for j in range(s2.rank):
        cols.append([-s2.basis.data[j][i] for i in range(n)])
    stacked = IntMatrix(
        [[cols[j][i] for j in range(len(cols))] for i in range(n)],
        cols=len(cols),
    )
    ker = kernel_mod(stacked, None)
    gens = []
    for w in ker.basis.data:
        coeffs = w[: s1.rank]
        gens.append(
            tuple(
                sum(c * s1.basis.data[k][i] for k, c in enumerate(coeffs))
                for i in range(n)
            )
        )
    return Sublattice.from_rows(n, gens)


def lattice_index(outer: Sublattice, inner: Sublattice):
    """Index [outer : inner] for inner contained in outer; None if infinite."""
    coeff_rows = []
    for row in inner.basis.data:
        c = outer.coefficients(row)
        if c is None:
            raise ValueError("inner lattice is not contained in outer")
        coeff_rows.append(c)
    if inner.rank < outer.rank:
        return None
    mat = IntMatrix(coeff_rows, cols=outer.rank)
    return abs(mat.det())


@dataclass(frozen=True)
class FGAbelianGroup:
    """Finitely generated abelian group by invariant factors.

    Nonzero factors are >= 2 and each divides the next; trailing zeros
    encode free factors.
    """

    invariant_factors: tuple

    @classmethod
    def from_factors(cls, factors):
        torsion = sorted(abs(f) for f in factors if f != 0 and abs(f) != 1)
        free = sum(1 for f in factors if f == 0)
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise ValueError(f"factors {torsion} do not form a divisibility chain")
        return cls(tuple(torsion) + (0,) * free)

    @classmethod
    def trivial(cls):
        return cls(())

    @classmethod
    def free(cls, rank):
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, n):
        return cls.from_factors([n])

    @property
    def free_rank(self):
        return sum(1 for f in self.invariant_factors if f == 0)

    @property
    def num_generators(self):
        return len(self.invariant_factors)

    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def is_trivial(self):
        return not self.invariant_factors

    def reduce_element(self, v):
        if len(v) != self.num_generators:
            raise ValueError("element length mismatch")
        return tuple(x % f if f else x for x, f in zip(v, self.invariant_factors))

    def add(self, v, w):
        return self.reduce_element([a + b for a, b in zip(v, w)])

    def scale(self, k, v):
        return self.reduce_element([k * a for a in v])

    def zero_element(self):
        return (0,) * self.num_generators

    def elements(self):
        """All elements; only valid for finite groups."""
        if self.free_rank:
            raise ValueError("infinite group")
        out = [()]
        for f in self.invariant_factors:
            out = [e + (x,) for e in out for x in range(f)]
        return out

    def describe(self):
        if not self.invariant_factors:
            return "1"
        parts = [f"Z/{f}" if f else "Z" for f in self.invariant_factors]
        return " x ".join(parts)


@dataclass(frozen=True)
class LatticeHom:
    """Homomorphism Z^domain_rank -> target, by images of the unit vectors."""

    domain_rank: int
    target: FGAbelianGroup
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.domain_rank:
            raise ValueError("need one image per basis vector")
        for im in self.images:
            if len(im) != self.target.num_generators:
                raise ValueError("image has wrong length for target group")

    def __call__(self, v):
        if len(v) != self.domain_rank:
            raise ValueError("vector length mismatch")
        acc = [0] * self.target.num_generators
        for x, im in zip(v, self.images):
            for k in range(len(acc)):
                acc[k] += x * im[k]
        return self.target.reduce_element(acc)


def solve_integer(a: IntMatrix, b):
    """All integer solutions of a x = b.

    Returns (particular, homogeneous_basis) or None when unsolvable;
    homogeneous_basis is a list of integer vectors spanning the solution
    lattice of a x = 0.
    """
    if len(b) != a.rows:
        raise ValueError("rhs length mismatch")
    u, d, v = smith_normal_form(a)
    ub = u.mul_vec(b)
    y = [0] * a.cols
    for i in range(a.rows):
        di = d.data[i][i] if i < min(a.rows, a.cols) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], di)
            if r:
                return None
            y[i] = q
    particular = v.mul_vec(y)
    basis = []
    for j in range(a.cols):
        dj = d.data[j][j] if j < min(a.rows, a.cols) else 0
        if dj == 0:
            basis.append(v.column(j))
    return particular, basis


# -- rational helpers ------------------------------------------------------


def invert_rational(mat):
    """Inverse of a square matrix of Fractions (lists of lists)."""
    n = len(mat)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if work[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[c], work[piv] = work[piv], work[c]
        inv = 1 / work[c][c]
        work[c] = [x * inv for x in work[c]]
        for i in range(n):
            if i != c and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return [row[n:] for row in work]


def solve_left_rational(rows, target):
    """Fractions x with sum_i x_i * rows[i] = target, or None if inconsistent.

    When the rows are linearly independent the solution is unique.
    """
    if not rows:
        return () if not any(target) else None
    ncols = len(rows[0])
    # eliminate on the transposed system
    aug = [[Fraction(rows[i][j]) for i in range(len(rows))] + [Fraction(target[j])]
           for j in range(ncols)]
    nvars = len(rows)
    pivots = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    sol = [Fraction(0)] * nvars
    for row_idx, c in enumerate(pivots):
        sol[c] = aug[row_idx][nvars]
    for i in range(r, len(aug)):
        if aug[i][nvars] != 0:
            return None
    return tuple(sol)


def common_denominator(fractions):
    d = 1
    for f in fractions:
        d = d * f.denominator // math.gcd(d, f.denominator)
    return d
