"""Invariant quadratic forms on coweight lattices with root-of-unity values.

Values live in the group Q/Z + Q*tau for a fixed formal irrational tau,
written additively as exponents: the element (a, b) denotes the number
e^{2 pi i (a + b tau)}.  A form is represented by a pair of symmetric
rational Gram matrices (G0, G1) with the convention

    Q(lam)       = (1/2) lam^T (G0 + tau G1) lam
    kappa(lam,mu) =       lam^T (G0 + tau G1) mu

so kappa is automatically the bilinear form defined by Q.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    FGAbelianGroup,
    IntMatrix,
    Sublattice,
    common_denominator,
    intersect,
    invert_rational,
    kernel_mod,
    saturation,
)
from .rootdata import RootDatum, dot


class ShapeError(ValueError):
    """Gram data has the wrong shape or fails symmetry."""


class InvarianceError(ValueError):
    """A form is not invariant under some simple reflection."""


@dataclass(frozen=True)
class Exponent:
    """Element of Q/Z + Q*tau, the exponent of e^{2 pi i (a + b tau)}."""

    rational: Fraction = Fraction(0)
    tau: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational) % 1)
        object.__setattr__(self, "tau", Fraction(self.tau))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def of(cls, rational, tau=0):
        return cls(Fraction(rational), Fraction(tau))

    def __add__(self, other):
        return Exponent(self.rational + other.rational, self.tau + other.tau)

    def __sub__(self, other):
        return Exponent(self.rational - other.rational, self.tau - other.tau)

    def __neg__(self):
        return Exponent(-self.rational, -self.tau)

    def scaled(self, k):
        k = Fraction(k)
        return Exponent(self.rational * k, self.tau * k)

    def is_zero(self):
        return self.rational == 0 and self.tau == 0

    def order(self):
        """Multiplicative order of the value; None when infinite."""
        if self.tau != 0:
            return None
        return self.rational.denominator

    def __str__(self):
        if self.tau == 0:
            return str(self.rational)
        if self.rational == 0:
            return f"{self.tau}*t"
        return f"{self.rational}+{self.tau}*t"


def _as_gram(rows, rank, what):
    if rows is None:
        return tuple(tuple(Fraction(0) for _ in range(rank)) for _ in range(rank))
    mat = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if len(mat) != rank or any(len(r) != rank for r in mat):
        raise ShapeError(f"{what} must be {rank}x{rank}")
    for i in range(rank):
        for j in range(rank):
            if mat[i][j] != mat[j][i]:
                raise ShapeError(f"{what} is not symmetric at ({i},{j})")
    return mat


def _gram_vec(g, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in g)


def _gram_pair(g, v, w):
    return sum(v[a] * g[a][b] * w[b] for a in range(len(v)) for b in range(len(w)))


class QForm:
    """A W-invariant quadratic form given by rational Gram matrices."""

    def __init__(self, rd: RootDatum, gram_rational=None, gram_transcendental=None):
        self.rd = rd
        self.g0 = _as_gram(gram_rational, rd.rank, "gram_rational")
        self.g1 = _as_gram(gram_transcendental, rd.rank, "gram_transcendental")
        for i in range(rd.num_simple):
            w = rd.reflection_coweight(i)
            for g, label in ((self.g0, "rational"), (self.g1, "transcendental")):
                if _conjugate(g, w) != g:
                    raise InvarianceError(
                        f"{label} Gram is not invariant under simple reflection {i}")

    def q(self, lam):
        """Q(lam) as an Exponent."""
        return Exponent(_gram_pair(self.g0, lam, lam) / 2,
                        _gram_pair(self.g1, lam, lam) / 2)

    def kappa(self, lam, mu):
        """kappa(lam, mu) as an Exponent."""
        return Exponent(_gram_pair(self.g0, lam, mu),
                        _gram_pair(self.g1, lam, mu))

    def is_value_trivial_on(self, vectors):
        """Whether Q and kappa vanish identically on the span of `vectors`."""
        vectors = list(vectors)
        return all(self.q(v).is_zero() for v in vectors) and all(
            self.kappa(v, w).is_zero() for v in vectors for w in vectors)

    def tensor(self, other: "QForm") -> "QForm":
        if other.rd is not self.rd and other.rd != self.rd:
            raise ValueError("forms live on different root data")
        g0 = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.g0, other.g0)]
        g1 = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.g1, other.g1)]
        return QForm(self.rd, g0, g1)

    def inverse(self) -> "QForm":
        return QForm(self.rd,
                     [[-x for x in row] for row in self.g0],
                     [[-x for x in row] for row in self.g1])

    def is_gram_zero(self):
        zero = Fraction(0)
        return all(x == zero for row in self.g0 for x in row) and \
            all(x == zero for row in self.g1 for x in row)

    def to_dict(self):
        enc = lambda g: [[[x.numerator, x.denominator] for x in row] for row in g]
        return {"gram_rational": enc(self.g0), "gram_transcendental": enc(self.g1)}

    @classmethod
    def from_dict(cls, rd, d):
        dec = lambda g: [[Fraction(n, den) for n, den in row] for row in g]
        return cls(rd, dec(d["gram_rational"]), dec(d["gram_transcendental"]))

    def __eq__(self, other):
        return (isinstance(other, QForm) and self.rd == other.rd
                and self.g0 == other.g0 and self.g1 == other.g1)

    def __repr__(self):
        return f"QForm({self.rd!r}, g0={self.g0}, g1={self.g1})"


def _conjugate(g, w: IntMatrix):
    n = w.rows
    wd = w.data
    return tuple(
        tuple(
            sum(wd[a][i] * g[a][b] * wd[b][j] for a in range(n) for b in range(n))
            for j in range(n))
        for i in range(n))


def qform_from_gram(rd, gram_rational=None, gram_transcendental=None) -> QForm:
    return QForm(rd, gram_rational, gram_transcendental)


def trivial_qform(rd) -> QForm:
    return QForm(rd)


def kernel(q: QForm, mode="full") -> Sublattice:
    """Kernel of kappa: coweights pairing trivially with the whole lattice
    ("full") or with every coroot ("coroot")."""
    rd = q.rd
    if mode == "full":
        rows0 = q.g0
        rows1 = q.g1
    elif mode == "coroot":
        cors = [rd.simple_coroots.row(i) for i in range(rd.num_simple)]
        rows0 = [_gram_vec(q.g0, c) for c in cors]
        rows1 = [_gram_vec(q.g1, c) for c in cors]
    else:
        raise ValueError(f"unknown kernel mode {mode!r}")
    out = Sublattice.full(rd.rank)
    if rows0:
        den = common_denominator([x for row in rows0 for x in row])
        m0 = IntMatrix([[int(x * den) for x in row] for row in rows0], cols=rd.rank)
        out = intersect(out, kernel_mod(m0, den) if den > 1 else Sublattice.full(rd.rank))
    if rows1:
        m1_rows = []
        for row in rows1:
            den = common_denominator(list(row))
            m1_rows.append([int(x * den) for x in row])
        m1 = IntMatrix(m1_rows, cols=rd.rank)
        out = intersect(out, kernel_mod(m1, None))
    return out


# -- determinant forms --------------------------------------------------------


@dataclass(frozen=True)
class DetForm:
    """Pairing data of the determinant bundle of a weight multiset."""

    k_matrix: IntMatrix
    is_sf: bool
    zeta: tuple  # half of the weight sum, as Fractions

    def k(self, mu, nu):
        return dot(self.k_matrix.mul_vec(mu), nu)

    def r(self, mu):
        """R(mu) = (1/2) sum <lam, mu>^2; a half-integer in general."""
        return Fraction(self.k(mu, mu), 2)

    def zeta_is_integral(self):
        return all(z.denominator == 1 for z in self.zeta)


def det_form(rd: RootDatum, weights) -> DetForm:
    """The pairing K, evaluator R, parity criterion, and half-weight zeta
    attached to a multiset of weight vectors."""
    weights = [tuple(int(x) for x in w) for w in weights]
    for i in range(rd.num_simple):
        reflected = sorted(rd.reflect_weight(i, w) for w in weights)
        if reflected != sorted(weights):
            warnings.warn(
                f"weight multiset is not closed under simple reflection {i}",
                stacklevel=2)
            break
    n = rd.rank
    k = [[0] * n for _ in range(n)]
    for lam in weights:
        for a in range(n):
            for b in range(n):
                k[a][b] += lam[a] * lam[b]
    is_sf = all(x % 2 == 0 for row in k for x in row)
    zeta = tuple(Fraction(sum(w[j] for w in weights), 2) for j in range(n))
    return DetForm(IntMatrix(k, cols=n), is_sf, zeta)


def killing_matrix(rd: RootDatum, component_index) -> IntMatrix:
    """Gram of the component's Killing-type form: sum of beta beta^T over
    the roots beta of one irreducible component."""
    n = rd.rank
    k = [[0] * n for _ in range(n)]
    for beta, _ in rd.component_root_pairs(component_index):
        for a in range(n):
            for b in range(n):
                k[a][b] += beta[a] * beta[b]
    return IntMatrix(k, cols=n)


def killing_qform(rd: RootDatum, component_index, a: Exponent) -> QForm:
    """The form Q(lam) = a^{Q_i(lam)} with Q_i(lam) = (1/2) sum <beta,lam>^2
    over one irreducible component's roots."""
    k = killing_matrix(rd, component_index)
    g0 = [[a.rational * x for x in row] for row in k.data]
    g1 = [[a.tau * x for x in row] for row in k.data]
    return QForm(rd, g0, g1)


def component_killing_value(rd: RootDatum, component_index, lam):
    """Q_i(lam) = (1/2) sum over component roots of <beta, lam>^2."""
    k = killing_matrix(rd, component_index)
    val = Fraction(dot(k.mul_vec(lam), lam), 2)
    assert val.denominator == 1
    return int(val)


def _short_simple_coroot(rd, component_index):
    """Index of a simple coroot of minimal Killing length in the component."""
    k = killing_matrix(rd, component_index)
    comp = rd.components[component_index]
    return min(comp, key=lambda i: (dot(k.mul_vec(rd.simple_coroots.row(i)),
                                        rd.simple_coroots.row(i)), i))


@dataclass(frozen=True)
class Decomposition:
    """Result of factoring a form into Killing parts and a residual that
    vanishes on the saturated coroot lattice."""

    success: bool
    coefficients: tuple  # one Exponent per irreducible component (when found)
    residual: QForm | None
    detail: str = ""


def decompose_integer_form(q: QForm) -> Decomposition:
    """Write q as a product of component Killing forms and a residual form
    whose Q and kappa vanish on the saturated coroot lattice.

    Per component the Killing coefficient is an m-th root of Q on a short
    simple coroot (m = Q_i of that coroot); all m candidate roots are
    tried and the one with the smallest nonnegative rational part that
    makes the residual conditions hold is kept.  Failure is reported, not
    raised: forms that are not liftable to integer-valued forms have none.
    """
    rd = q.rd
    sat = saturation(rd.coroot_lattice())
    coeffs = []
    g0 = [list(row) for row in q.g0]
    g1 = [list(row) for row in q.g1]
    for ci in range(len(rd.components)):
        idx = _short_simple_coroot(rd, ci)
        cor = rd.simple_coroots.row(idx)
        m = component_killing_value(rd, ci, cor)
        if m == 0:
            coeffs.append(Exponent.zero())
            continue
        target = q.q(cor)
        kmat = killing_matrix(rd, ci)
        # saturated basis vectors meeting this component
        comp_vectors = [v for v in sat.basis.data
                        if kmat.mul_vec(v) != (0,) * rd.rank]
        choice = None
        for kk in range(m):
            a = Exponent((target.rational + kk) / m, target.tau / m)
            if _killing_residual_ok(q, kmat, a, comp_vectors):
                choice = a
                break
        if choice is None:
            return Decomposition(
                False, (), None,
                f"no Killing coefficient fits component {ci} "
                f"(short coroot {cor}, Q value {target})")
        coeffs.append(choice)
        for r in range(rd.rank):
            for c in range(rd.rank):
                g0[r][c] -= choice.rational * kmat.data[r][c]
                g1[r][c] -= choice.tau * kmat.data[r][c]
    residual = QForm(rd, g0, g1)
    # residual must be trivial on the saturated coroot lattice, against
    # everything for kappa and on itself for Q
    for v in sat.basis.data:
        if not residual.q(v).is_zero():
            return Decomposition(False, tuple(coeffs), residual,
                                 f"residual Q is nonzero on {v}")
        for j in range(rd.rank):
            e = (0,) * j + (1,) + (0,) * (rd.rank - j - 1)
            if not residual.kappa(v, e).is_zero():
                return Decomposition(False, tuple(coeffs), residual,
                                     f"residual kappa is nonzero on ({v}, e_{j})")
    return Decomposition(True, tuple(coeffs), residual)


def _killing_residual_ok(q, kmat, a, comp_vectors):
    rank = q.rd.rank
    for v in comp_vectors:
        kv = kmat.mul_vec(v)
        # kappa_res(v, e_j) = (G0 - a K)v etc. must vanish in the exponent group
        for j in range(rank):
            rat = sum(q.g0[j][b] * v[b] for b in range(rank)) - a.rational * kv[j]
            if rat.denominator != 1:
                return False
            tau = sum(q.g1[j][b] * v[b] for b in range(rank)) - a.tau * kv[j]
            if tau != 0:
                return False
        qrat = _gram_pair(q.g0, v, v) / 2 - a.rational * Fraction(dot(kv, v), 2)
        if qrat.denominator != 1:
            return False
        qtau = _gram_pair(q.g1, v, v) / 2 - a.tau * Fraction(dot(kv, v), 2)
        if qtau != 0:
            return False
    return True


# -- defect, half-forms, braiding ---------------------------------------------


def epsilon_defect(q: QForm, coroot, lam) -> Exponent:
    """kappa(coroot, lam) - <alpha, lam> Q(coroot), the reflection defect.

    Always 2-torsion for a W-invariant form; identically zero for forms
    represented by Gram matrices.
    """
    coroot = tuple(int(x) for x in coroot)
    pairs = dict((cb, b) for b, cb in q.rd.root_pairs)
    if coroot not in pairs:
        raise ValueError(f"{coroot} is not a coroot of this datum")
    alpha = pairs[coroot]
    return q.kappa(coroot, lam) - q.q(coroot).scaled(dot(alpha, lam))


def half_forms_qform(rd: RootDatum) -> QForm:
    """The parity form Q(lam) = (-1)^{<2 rho, lam>}, realized by half the
    adjoint Killing Gram; its bilinear form is trivial."""
    n = rd.rank
    k = [[0] * n for _ in range(n)]
    for beta, _ in rd.root_pairs:
        for a in range(n):
            for b in range(n):
                k[a][b] += beta[a] * beta[b]
    g0 = [[Fraction(x, 2) for x in row] for row in k]
    form = QForm(rd, g0)
    # adjoint K is even, so kappa is integral: assert on the unit vectors
    for i in range(n):
        e_i = (0,) * i + (1,) + (0,) * (n - i - 1)
        for j in range(n):
            e_j = (0,) * j + (1,) + (0,) * (n - j - 1)
            assert form.kappa(e_i, e_j).is_zero()
    return form


def braiding_signs(q: QForm, lam, mu):
    """Geometric commutativity sign and the twisted correction factor."""
    rd = q.rd
    sign = -1 if (dot(rd.two_rho, lam) * dot(rd.two_rho, mu)) % 2 else 1
    return sign, q.q(lam) + q.q(mu)


# -- classifying data for factorizable gerbes ---------------------------------


@dataclass(frozen=True)
class GerbeClass:
    """Classifying pair of a symmetric factorizable gerbe: a liftable
    invariant form plus a homomorphism from pi1 into an abstract group of
    curve classes."""

    form: QForm
    target: FGAbelianGroup
    mult_part: tuple  # image of each pi1 generator, as elements of target

    def __post_init__(self):
        pi1 = self.form.rd.pi1()
        if len(self.mult_part) != pi1.num_generators:
            raise ValueError("need one image per pi1 generator")
        for im in self.mult_part:
            if len(im) != self.target.num_generators:
                raise ValueError("mult_part image has wrong length")

    def tensor(self, other: "GerbeClass") -> "GerbeClass":
        if self.form.rd != other.form.rd:
            raise ValueError("gerbe classes live on different root data")
        if self.target != other.target:
            raise ValueError("gerbe classes have different coefficient groups")
        images = tuple(self.target.add(a, b)
                       for a, b in zip(self.mult_part, other.mult_part))
        return GerbeClass(self.form.tensor(other.form), self.target, images)

    def validate(self):
        """Liftability of the form and well-definedness of mult_part."""
        dec = decompose_integer_form(self.form)
        if not dec.success:
            raise ValueError(f"form is not liftable: {dec.detail}")
        pi1 = self.form.rd.pi1()
        for factor, image in zip(pi1.invariant_factors, self.mult_part):
            if factor and any(x != 0 for x in self.target.scale(factor, image)):
                raise ValueError(
                    f"mult_part image {image} is not killed by factor {factor}")
        return True


# -- Cartan data ----------------------------------------------------------------


@dataclass(frozen=True)
class CartanDatum:
    """A base together with a positive integer symmetrizer f on the simple
    coroots (the lattice the attached form Q = q^f lives on); the symmetric
    pairing is i.j = f(i) <alpha_i, coroot_j>, so 2(i.j)/(j.j) is the
    Cartan integer <alpha_j, coroot_i>."""

    rd: RootDatum
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))
        if len(self.f) != self.rd.num_simple:
            raise ValueError("need one f value per simple root")
        if any(x <= 0 for x in self.f):
            raise ValueError("f must be positive")
        s = self.rd.num_simple
        for i in range(s):
            for j in range(s):
                if self.pairing(i, j) != self.pairing(j, i):
                    raise ValueError(
                        f"f does not symmetrize the Cartan matrix at ({i},{j})")

    def pairing(self, i, j):
        """i.j = f(i) <alpha_i, coroot_j>; diagonal is 2 f(i)."""
        return self.f[i] * self.rd.cartan_matrix[i][j]

    @classmethod
    def standard(cls, rd: RootDatum, scale=1):
        """Minimal positive symmetrizers, times an overall integer scale."""
        s = rd.num_simple
        ratios = [Fraction(0)] * s
        for comp in rd.components:
            ratios[comp[0]] = Fraction(1)
            queue = [comp[0]]
            while queue:
                i = queue.pop()
                for j in comp:
                    if ratios[j] == 0 and rd.cartan_matrix[i][j] != 0:
                        # symmetry f_i c_ij = f_j c_ji
                        ratios[j] = ratios[i] * Fraction(rd.cartan_matrix[i][j],
                                                         rd.cartan_matrix[j][i])
                        queue.append(j)
        den = common_denominator([r for r in ratios if r]) if s else 1
        f = [int(r * den) * scale for r in ratios]
        return cls(rd, tuple(f))

    def bilinear_gram(self):
        """Rational Gram B on coweights with coroot_i^T B coroot_j = i.j;
        needs the coroots to span, i.e. a semisimple datum."""
        rd = self.rd
        if rd.num_simple != rd.rank:
            raise ValueError("Cartan-datum Gram needs a semisimple root datum")
        target = [[Fraction(self.pairing(i, j)) for j in range(rd.rank)]
                  for i in range(rd.rank)]
        cor = [[Fraction(x) for x in row] for row in rd.simple_coroots.data]
        corinv = invert_rational(cor)
        # want C B C^T = target for C the matrix of coroot rows
        n = rd.rank
        return tuple(
            tuple(sum(corinv[i][k] * target[k][l] * corinv[j][l]
                      for k in range(n) for l in range(n))
                  for j in range(n))
            for i in range(n))


def cartan_qform(cd: CartanDatum, order, numerator=1) -> QForm:
    """The form q^f for q a primitive `order`-th root of unity: the Gram of
    f divided by the order."""
    b = cd.bilinear_gram()
    g0 = [[x * Fraction(numerator, order) for x in row] for row in b]
    return QForm(cd.rd, g0)


# -- standard Gram helpers -----------------------------------------------------


def normalized_killing_gram(rd: RootDatum):
    """W-invariant rational Gram, the per-component Killing form scaled so
    the shortest simple coroot has squared length 2."""
    n = rd.rank
    total = [[Fraction(0)] * n for _ in range(n)]
    for ci, comp in enumerate(rd.components):
        k = killing_matrix(rd, ci)
        shortest = min(dot(k.mul_vec(rd.simple_coroots.row(i)),
                           rd.simple_coroots.row(i)) for i in comp)
        scale = Fraction(2, shortest)
        for a in range(n):
            for b in range(n):
                total[a][b] += scale * k.data[a][b]
    return tuple(tuple(row) for row in total)


def invariant_gram_basis(rd: RootDatum):
    """Basis of the space of W-invariant symmetric rational Grams on the
    coweight lattice, as integer symmetric matrices."""
    n = rd.rank
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    var_index = {p: k for k, p in enumerate(pairs)}
    rows = []
    for gi in range(rd.num_simple):
        w = rd.reflection_coweight(gi).data
        for a in range(n):
            for b in range(a, n):
                row = [0] * len(pairs)
                for i in range(n):
                    for j in range(n):
                        coeff = w[i][a] * w[j][b]
                        key = (i, j) if i <= j else (j, i)
                        row[var_index[key]] += coeff
                row[var_index[(a, b)]] -= 1
                rows.append(row)
    if not rows:
        rows = [[0] * len(pairs)]
    basis = kernel_mod(IntMatrix(rows, cols=len(pairs)), None)
    out = []
    for vec in basis.basis.data:
        g = [[0] * n for _ in range(n)]
        for (i, j), k in var_index.items():
            g[i][j] = vec[k]
            g[j][i] = vec[k]
        out.append(tuple(tuple(Fraction(x) for x in row) for row in g))
    return out


def minimal_even_gram(rd: RootDatum):
    """Smallest positive integer multiple of the normalized Killing Gram
    that is integral with even diagonal (so (1/2) lam^T G lam is an
    integer-valued form)."""
    g = normalized_killing_gram(rd)
    n = rd.rank
    dens = [g[a][b].denominator for a in range(n) for b in range(n)]
    dens += [(g[a][a] / 2).denominator for a in range(n)]
    m = 1
    for d in dens:
        m = m * d // math.gcd(m, d)
    return tuple(tuple(x * m for x in row) for row in g), m
