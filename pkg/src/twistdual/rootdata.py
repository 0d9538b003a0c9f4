"""Root data of complex reductive groups.

A root datum is realized concretely: weights and coweights both live in
Z^rank with the standard dot pairing, and the datum is the pair of simple
root / simple coroot matrices.  Construction validates the axioms, which
includes enumerating the Weyl group, so invalid data fail early.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lattice import (
    FGAbelianGroup,
    IntMatrix,
    Sublattice,
    quotient_group,
    solve_left_rational,
)


class RootDatumError(ValueError):
    """A root datum axiom failed."""


class Dominance(enum.Enum):
    LESS_EQUAL = "less-equal"
    GREATER_EQUAL = "greater-equal"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def dot(x, y):
    if len(x) != len(y):
        raise ValueError("length mismatch in pairing")
    return sum(a * b for a, b in zip(x, y))


def vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x):
    return tuple(c * a for a in x)


@dataclass(frozen=True)
class WeylGroup:
    """Finite Weyl group as matrices acting on the coweight lattice."""

    elements: tuple
    generators: tuple  # indices into `elements` of the simple reflections

    @property
    def order(self):
        return len(self.elements)

    def signs(self):
        return tuple(m.det() for m in self.elements)


class RootDatum:
    def __init__(self, simple_roots, simple_coroots, rank=None, name=None,
                 weyl_bound=1_000_000):
        if not isinstance(simple_roots, IntMatrix):
            simple_roots = IntMatrix(simple_roots, cols=rank)
        if not isinstance(simple_coroots, IntMatrix):
            simple_coroots = IntMatrix(simple_coroots, cols=rank)
        if simple_roots.rows != simple_coroots.rows:
            raise RootDatumError("simple roots and coroots must come in pairs")
        if simple_roots.cols != simple_coroots.cols:
            raise RootDatumError("simple roots and coroots live in dual lattices of equal rank")
        self.simple_roots = simple_roots
        self.simple_coroots = simple_coroots
        self.rank = simple_roots.cols
        self.name = name
        self.weyl_bound = weyl_bound
        self._validate_cartan()
        self._validate_system()

    # -- construction-time validation ------------------------------------

    def _validate_cartan(self):
        s = self.num_simple
        cartan = self.cartan_matrix
        for i in range(s):
            if cartan[i][i] != 2:
                raise RootDatumError(
                    f"<alpha_{i}, coroot_{i}> = {cartan[i][i]}, expected 2")
        for i in range(s):
            for j in range(s):
                if i == j:
                    continue
                if cartan[i][j] > 0:
                    raise RootDatumError(
                        f"<alpha_{i}, coroot_{j}> = {cartan[i][j]} > 0")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise RootDatumError(
                        f"asymmetric orthogonality between simples {i} and {j}")
        if s:
            if _rational_rank(self.simple_roots.data) != s:
                raise RootDatumError("simple roots are linearly dependent")
            if _rational_rank(self.simple_coroots.data) != s:
                raise RootDatumError("simple coroots are linearly dependent")

    def _validate_system(self):
        # Forces enumeration of the Weyl group and the root system; both
        # raise if closure exceeds the configured bound.
        self.weyl_group()
        pairs = self.root_pairs
        roots = [p[0] for p in pairs]
        root_set = set(roots)
        if len(root_set) != len(roots):
            raise RootDatumError("root/coroot correspondence is inconsistent")
        for beta in roots:
            for c in (2, 3):
                if vec_scale(c, beta) in root_set:
                    raise RootDatumError(f"non-reduced system: {beta} and {c}*{beta}")

    # -- basic structure ---------------------------------------------------

    @property
    def num_simple(self):
        return self.simple_roots.rows

    @cached_property
    def cartan_matrix(self):
        """Entry [i][j] = <alpha_i, coroot_j>."""
        return tuple(
            tuple(dot(self.simple_roots.row(i), self.simple_coroots.row(j))
                  for j in range(self.num_simple))
            for i in range(self.num_simple)
        )

    def reflection_coweight(self, i):
        """Matrix of s_i on the coweight lattice: x -> x - <alpha_i, x> coroot_i."""
        alpha = self.simple_roots.row(i)
        cov = self.simple_coroots.row(i)
        n = self.rank
        return IntMatrix(
            [[(1 if a == b else 0) - cov[a] * alpha[b] for b in range(n)]
             for a in range(n)],
            cols=n,
        )

    def reflection_weight(self, i):
        """Matrix of s_i on the weight lattice: x -> x - <x, coroot_i> alpha_i."""
        return self.reflection_coweight(i).transpose()

    def reflect_coweight(self, i, v):
        return vec_sub(v, vec_scale(dot(self.simple_roots.row(i), v),
                                    self.simple_coroots.row(i)))

    def reflect_weight(self, i, v):
        return vec_sub(v, vec_scale(dot(v, self.simple_coroots.row(i)),
                                    self.simple_roots.row(i)))

    @cached_property
    def _weyl(self):
        gens = [self.reflection_coweight(i) for i in range(self.num_simple)]
        ident = IntMatrix.identity(self.rank)
        seen = {ident.data: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    prod = g @ m
                    if prod.data not in seen:
                        seen[prod.data] = prod
                        nxt.append(prod)
            if len(seen) > self.weyl_bound:
                raise RootDatumError(
                    f"Weyl closure exceeded {self.weyl_bound} elements; "
                    "datum is not of finite type")
            frontier = nxt
        elements = tuple(sorted(seen.values(), key=lambda m: m.data))
        gen_idx = tuple(elements.index(g) for g in gens)
        return WeylGroup(elements, gen_idx)

    def weyl_group(self) -> WeylGroup:
        return self._weyl

    def weyl_weight_matrices(self):
        """The same group acting on the weight lattice (transposed elements)."""
        return tuple(m.transpose() for m in self._weyl.elements)

    @cached_property
    def root_pairs(self):
        """All (root, coroot) pairs, as the Weyl orbit of the simple pairs."""
        seen = {}
        frontier = []
        for i in range(self.num_simple):
            pair = (self.simple_roots.row(i), self.simple_coroots.row(i))
            seen[pair[0]] = pair[1]
            frontier.append(pair)
        while frontier:
            nxt = []
            for beta, cobeta in frontier:
                for j in range(self.num_simple):
                    b2 = self.reflect_weight(j, beta)
                    cb2 = self.reflect_coweight(j, cobeta)
                    if b2 in seen:
                        if seen[b2] != cb2:
                            raise RootDatumError(
                                "root/coroot correspondence is inconsistent")
                    else:
                        seen[b2] = cb2
                        nxt.append((b2, cb2))
            frontier = nxt
        return tuple(sorted(seen.items()))

    @cached_property
    def positive_root_pairs(self):
        out = []
        for beta, cobeta in self.root_pairs:
            coeffs = solve_left_rational(self.simple_roots.data, beta)
            if coeffs is None:
                raise RootDatumError(f"root {beta} outside the simple-root span")
            if all(c >= 0 for c in coeffs):
                out.append((beta, cobeta))
        if 2 * len(out) != len(self.root_pairs):
            raise RootDatumError("root system is not symmetric")
        return tuple(out)

    @cached_property
    def two_rho(self):
        """Sum of the positive roots."""
        acc = (0,) * self.rank
        for beta, _ in self.positive_root_pairs:
            acc = vec_add(acc, beta)
        return acc

    @cached_property
    def rho(self):
        return tuple(Fraction(x, 2) for x in self.two_rho)

    def coroot_lattice(self) -> Sublattice:
        return Sublattice.from_rows(self.rank, self.simple_coroots.data)

    def root_lattice(self) -> Sublattice:
        return Sublattice.from_rows(self.rank, self.simple_roots.data)

    def pi1(self) -> FGAbelianGroup:
        """Component group of the grassmannian: coweights modulo coroots."""
        return quotient_group(self.coroot_lattice())

    # -- dominance ---------------------------------------------------------

    def is_dominant_coweight(self, v):
        return all(dot(self.simple_roots.row(i), v) >= 0
                   for i in range(self.num_simple))

    def is_dominant_weight(self, v):
        return all(dot(v, self.simple_coroots.row(i)) >= 0
                   for i in range(self.num_simple))

    def _cone_leq(self, diff, generators):
        coeffs = solve_left_rational(generators, diff)
        if coeffs is None:
            return False
        return all(c.denominator == 1 and c >= 0 for c in coeffs)

    def coweight_leq(self, lam, mu):
        """lam <= mu iff mu - lam is a nonnegative integer sum of simple coroots."""
        if self.num_simple == 0:
            return tuple(lam) == tuple(mu)
        return self._cone_leq(vec_sub(mu, lam), self.simple_coroots.data)

    def weight_leq(self, lam, mu):
        """Dominance on the weight side, against the simple roots."""
        if self.num_simple == 0:
            return tuple(lam) == tuple(mu)
        return self._cone_leq(vec_sub(mu, lam), self.simple_roots.data)

    def dominance(self, lam, mu) -> Dominance:
        lam, mu = tuple(lam), tuple(mu)
        if lam == mu:
            return Dominance.EQUAL
        if self.coweight_leq(lam, mu):
            return Dominance.LESS_EQUAL
        if self.coweight_leq(mu, lam):
            return Dominance.GREATER_EQUAL
        return Dominance.INCOMPARABLE

    def dominant_representative(self, v):
        """The dominant element of the Weyl orbit of the coweight v."""
        v = tuple(v)
        while True:
            i = next((i for i in range(self.num_simple)
                      if dot(self.simple_roots.row(i), v) < 0), None)
            if i is None:
                return v
            v = self.reflect_coweight(i, v)

    def antidominant_representative(self, v):
        """w_0 applied to the dominant representative: the antidominant element."""
        v = tuple(v)
        while True:
            i = next((i for i in range(self.num_simple)
                      if dot(self.simple_roots.row(i), v) > 0), None)
            if i is None:
                return v
            v = self.reflect_coweight(i, v)

    # -- orbit dimensions ----------------------------------------------------

    def orbit_dim(self, lam):
        """Dimension <2 rho, lam> of the orbit of a dominant coweight."""
        if not self.is_dominant_coweight(lam):
            raise ValueError(f"coweight {tuple(lam)} is not dominant")
        return dot(self.two_rho, lam)

    def sib_dim(self, lam, mu):
        """Semi-infinite intersection dimension <rho, lam + mu>."""
        if not self.is_dominant_coweight(lam):
            raise ValueError(f"coweight {tuple(lam)} is not dominant")
        w0lam = self.antidominant_representative(lam)
        if not (self.coweight_leq(w0lam, mu) and self.coweight_leq(mu, lam)):
            raise ValueError(
                f"coweight {tuple(mu)} is outside [w0(lam), lam] for lam={tuple(lam)}")
        doubled = dot(self.two_rho, vec_add(lam, mu))
        if doubled % 2:
            raise ValueError("<2 rho, lam + mu> is odd")
        return doubled // 2

    # -- components and Coxeter data ----------------------------------------

    @cached_property
    def components(self):
        """Connected components of the Cartan graph, as index tuples."""
        s = self.num_simple
        seen = [False] * s
        comps = []
        for start in range(s):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(s):
                    if not seen[j] and self.cartan_matrix[i][j] != 0:
                        seen[j] = True
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def is_irreducible(self):
        return len(self.components) == 1

    def component_root_pairs(self, component_index):
        comp = self.components[component_index]
        gens = [self.simple_roots.row(i) for i in comp]
        out = []
        for beta, cobeta in self.root_pairs:
            coeffs = solve_left_rational(gens, beta)
            if coeffs is not None:
                out.append((beta, cobeta))
        return tuple(out)

    def highest_root(self):
        """The dominant root that dominates every other root."""
        if not self.is_irreducible():
            raise ValueError("highest root requires an irreducible system")
        dominant = [(b, cb) for b, cb in self.root_pairs
                    if self.is_dominant_weight(b)]
        for beta, cobeta in dominant:
            if all(self._cone_leq_rational(vec_sub(beta, other), self.simple_roots.data)
                   for other, _ in self.root_pairs):
                return beta, cobeta
        raise RootDatumError("no highest root found")

    def _cone_leq_rational(self, diff, generators):
        coeffs = solve_left_rational(generators, diff)
        return coeffs is not None and all(c >= 0 for c in coeffs)

    def dual_coxeter_and_iota(self):
        """Dual Coxeter number and the normalized sum-over-roots map.

        Returns (h, J) where h = 1 + <rho, theta_coroot> for the highest
        root theta, and J is the rational matrix of
        lam -> (1/2h) sum_beta <beta, lam> beta from coweights to weights.
        """
        theta, theta_cov = self.highest_root()
        pairing = dot(self.rho, theta_cov)
        if pairing.denominator != 1:
            raise RootDatumError("<rho, theta_coroot> is not an integer")
        h = 1 + int(pairing)
        n = self.rank
        k = [[0] * n for _ in range(n)]
        for beta, _ in self.root_pairs:
            for a in range(n):
                for b in range(n):
                    k[a][b] += beta[a] * beta[b]
        j = [[Fraction(k[a][b], 2 * h) for b in range(n)] for a in range(n)]
        # sanity: (1/2) sum <beta, lam>^2 = h <iota(lam), lam> as quadratic forms
        for a in range(n):
            for b in range(n):
                assert Fraction(k[a][b], 2) == h * j[a][b]
        return h, tuple(tuple(row) for row in j)

    def iota_pairing(self, lam, mu):
        """The normalized pairing (lam, mu) = <iota(lam), mu> on coweights."""
        _, j = self.dual_coxeter_and_iota()
        return sum(j[a][b] * lam[b] * mu[a] for a in range(self.rank)
                   for b in range(self.rank))

    # -- plumbing -------------------------------------------------------------

    def flip(self):
        """Exchange the weight and coweight sides (roots <-> coroots)."""
        return RootDatum(self.simple_coroots, self.simple_roots, rank=self.rank,
                         name=f"flip({self.name})" if self.name else None)

    def to_dict(self):
        return {
            "rank": self.rank,
            "simple_roots": [list(r) for r in self.simple_roots.data],
            "simple_coroots": [list(r) for r in self.simple_coroots.data],
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            IntMatrix(d["simple_roots"], cols=d["rank"]),
            IntMatrix(d["simple_coroots"], cols=d["rank"]),
            rank=d["rank"],
            name=d.get("name"),
        )

    def __eq__(self, other):
        return (
            isinstance(other, RootDatum)
            and self.rank == other.rank
            and self.simple_roots == other.simple_roots
            and self.simple_coroots == other.simple_coroots
        )

    def __hash__(self):
        return hash((self.rank, self.simple_roots, self.simple_coroots))

    def __repr__(self):
        label = self.name or f"rank-{self.rank} datum"
        return f"RootDatum({label})"


def _rational_rank(rows):
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        rank += 1
    return rank


# -- standard groups ----------------------------------------------------------


def _sl_data(n):
    """SL(n): coweight lattice = coroot lattice, coroots are unit vectors."""
    r = n - 1
    coroots = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    roots = []
    for i in range(r):
        row = [0] * r
        row[i] = 2
        if i > 0:
            row[i - 1] = -1
        if i + 1 < r:
            row[i + 1] = -1
        roots.append(row)
    return roots, coroots


def _standard_single(token):
    token = token.strip()
    m = re.fullmatch(r"SL(\d+)", token)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise ValueError("SL(n) needs n >= 2")
        roots, coroots = _sl_data(n)
        return roots, coroots, n - 1
    m = re.fullmatch(r"PGL(\d+)", token)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise ValueError("PGL(n) needs n >= 2")
        coroots, roots = _sl_data(n)  # adjoint: roots are unit vectors
        return roots, coroots, n - 1
    m = re.fullmatch(r"GL(\d+)", token)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("GL(n) needs n >= 1")
        roots = []
        for i in range(n - 1):
            row = [0] * n
            row[i], row[i + 1] = 1, -1
            roots.append(row)
        return roots, [list(r) for r in roots], n
    if token == "Sp4":
        roots = [[1, -1], [0, 2]]
        coroots = [[1, -1], [0, 1]]
        return roots, coroots, 2
    if token == "G2":
        # short root first: Cartan matrix [[2, -3], [-1, 2]] in this basis
        roots = [[2, -1], [-3, 2]]
        coroots = [[1, 0], [0, 1]]
        return roots, coroots, 2
    m = re.fullmatch(r"(?:torus|T)(\d+)", token)
    if m:
        r = int(m.group(1))
        return [], [], r
    raise ValueError(f"unknown group label {token!r}")


def standard(name) -> RootDatum:
    """Standard root data: SL(n), PGL(n), GL(n), Sp4, G2, torus(r), and
    products of these joined by 'x' or '*'."""
    tokens = [t for t in re.split(r"[x*]", name) if t.strip()]
    if not tokens:
        raise ValueError("empty group label")
    blocks = [_standard_single(t) for t in tokens]
    total = sum(b[2] for b in blocks)
    roots, coroots = [], []
    offset = 0
    for broots, bcoroots, brank in blocks:
        for row in broots:
            roots.append([0] * offset + list(row) + [0] * (total - offset - brank))
        for row in bcoroots:
            coroots.append([0] * offset + list(row) + [0] * (total - offset - brank))
        offset += brank
    return RootDatum(
        IntMatrix(roots, cols=total),
        IntMatrix(coroots, cols=total),
        rank=total,
        name=name,
    )
