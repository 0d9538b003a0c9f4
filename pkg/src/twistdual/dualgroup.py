"""Dual root-datum constructions and the isomorphism checker.

Four ways to build a dual: the twisted dual of an invariant form (weight
lattice = kernel of the bilinear form, roots = order-scaled coroots), the
Finkelberg-Lysenko normalization, Lusztig's quantum-group datum, and the
quantum-Langlands pairing of a nondegenerate form with its inverse on the
Langlands dual side.  `isomorphic` certifies agreement between any two
root data by exhaustive base matching plus a bounded lattice search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    IntMatrix,
    Sublattice,
    common_denominator,
    invert_rational,
    kernel_mod,
    solve_integer,
)
from .qform import CartanDatum, QForm, kernel, trivial_qform
from .rootdata import RootDatum, dot, vec_scale


class PaperContractViolation(RuntimeError):
    """An integrality guarantee of the dual construction failed; this must
    not happen for valid invariant forms."""


@dataclass(frozen=True)
class TwistedDual:
    """A dual root datum with its embedding data into the source lattice."""

    source: RootDatum
    weight_sublattice: Sublattice
    basis: IntMatrix                # rows: chosen basis of the weight sublattice
    multipliers: tuple              # per source simple coroot; None encodes infinity
    dropped: tuple                  # indices with infinite multiplier
    new_simple_roots: IntMatrix     # rows, in basis coordinates
    new_simple_coroots: IntMatrix   # rows, in dual basis coordinates
    datum: RootDatum                # the induced (validated) root datum

    def to_dict(self):
        d = self.datum.to_dict()
        d["weight_sublattice"] = [list(r) for r in self.basis.data]
        d["multipliers"] = [m if m is not None else None for m in self.multipliers]
        d["dropped"] = list(self.dropped)
        return d

    def root_in_source(self, i):
        """The i-th dual simple root as a vector in the source coweights."""
        coeffs = self.new_simple_roots.row(i)
        return tuple(
            sum(c * self.basis.data[k][j] for k, c in enumerate(coeffs))
            for j in range(self.source.rank))


def _assemble_dual(rd: RootDatum, weight_lattice: Sublattice, multipliers,
                   name=None) -> TwistedDual:
    """Common assembly: scale the surviving coroots into the weight lattice
    and the corresponding roots into its dual, then validate."""
    basis = weight_lattice.basis
    k = weight_lattice.rank
    new_roots = []
    new_coroots = []
    dropped = []
    for i in range(rd.num_simple):
        r = multipliers[i]
        if r is None:
            dropped.append(i)
            continue
        scaled = vec_scale(r, rd.simple_coroots.row(i))
        coords = weight_lattice.coefficients(scaled)
        if coords is None:
            raise PaperContractViolation(
                f"{r} * coroot_{i} = {scaled} does not lie in the dual weight lattice")
        new_roots.append(coords)
        alpha = rd.simple_roots.row(i)
        func = []
        for b in basis.data:
            val = Fraction(dot(alpha, b), r)
            if val.denominator != 1:
                raise PaperContractViolation(
                    f"alpha_{i}/{r} is not integral on the dual weight lattice")
            func.append(int(val))
        new_coroots.append(func)
    datum = RootDatum(
        IntMatrix(new_roots, cols=k),
        IntMatrix(new_coroots, cols=k),
        rank=k,
        name=name,
    )
    return TwistedDual(
        source=rd,
        weight_sublattice=weight_lattice,
        basis=basis,
        multipliers=tuple(multipliers),
        dropped=tuple(dropped),
        new_simple_roots=IntMatrix(new_roots, cols=k),
        new_simple_coroots=IntMatrix(new_coroots, cols=k),
        datum=datum,
    )


def twisted_dual(rd: RootDatum, q: QForm, mode="full") -> TwistedDual:
    """The twisted dual of an invariant form: weights are the kernel of
    kappa, the root for a coroot is (order of Q on it) times the coroot,
    coroots with a value of infinite order are dropped."""
    lattice = kernel(q, mode)
    multipliers = [q.q(rd.simple_coroots.row(i)).order()
                   for i in range(rd.num_simple)]
    label = f"dual({rd.name})" if rd.name else None
    return _assemble_dual(rd, lattice, multipliers, name=label)


def langlands_dual(rd: RootDatum) -> TwistedDual:
    """The twisted dual of the trivial form: weights and coweights swap."""
    return twisted_dual(rd, trivial_qform(rd), "full")


@dataclass(frozen=True)
class Rank1Table:
    """Kernels of the rank-1 form q0^(2mn) over the adjoint lattice Z and
    over the simply connected lattice 2Z, both in adjoint coordinates."""

    r0: int
    p: int
    adjoint_kernel: Sublattice         # inside Z
    simply_connected_kernel: Sublattice  # inside 2Z, adjoint coordinates
    case: str


def rank1_table(r0: int, p: int = 1) -> Rank1Table:
    if r0 < 1:
        raise ValueError("the order must be a positive integer")
    if math.gcd(p, r0) != 1:
        raise ValueError(f"p = {p} is not a unit modulo {r0}")
    adjoint = kernel_mod(IntMatrix([[2 * p]]), r0)
    # on the index-two lattice the form becomes q0^(8 m n) in its own units
    sc_units = kernel_mod(IntMatrix([[8 * p]]), r0)
    sc = Sublattice.from_rows(1, [(2 * x[0],) for x in sc_units.basis.data])
    if r0 % 2:
        case = "odd"
    elif r0 % 4:
        case = "ord2=1"
    elif r0 % 8:
        case = "ord2=2"
    else:
        case = "ord2>=3"
    return Rank1Table(r0, p, adjoint, sc, case)


def fl_dual(rd: RootDatum, d: int, big_n: int) -> TwistedDual:
    """The Finkelberg-Lysenko dual: weights are the coweights lam with
    d * iota(lam) divisible by N in the weight lattice; the multiplier of a
    coroot is the denominator of d (coroot, coroot) / 2N."""
    if not rd.is_irreducible():
        raise ValueError("this comparison is defined for irreducible root systems")
    if d < 1 or big_n < 1:
        raise ValueError("d and N must be positive")
    _, j = rd.dual_coxeter_and_iota()
    den = common_denominator([x for row in j for x in row])
    j_int = IntMatrix([[int(x * den) for x in row] for row in j], cols=rd.rank)
    scaled = IntMatrix([[d * x for x in row] for row in j_int.data], cols=rd.rank)
    lattice = kernel_mod(scaled, den * big_n)
    multipliers = []
    for i in range(rd.num_simple):
        cor = rd.simple_coroots.row(i)
        pairing = rd.iota_pairing(cor, cor)
        frac = Fraction(d) * pairing / (2 * big_n)
        multipliers.append(frac.denominator)
    label = f"fl({rd.name},{d},{big_n})" if rd.name else None
    return _assemble_dual(rd, lattice, multipliers, name=label)


def lusztig_dual(cd: CartanDatum, order: int) -> TwistedDual:
    """Lusztig's dual datum at a root of unity of the given order: weights
    pair with each simple root in l_i Z where l_i = l / gcd(l, f(i))."""
    if order < 1:
        raise ValueError("the order must be a positive integer")
    rd = cd.rd
    l_i = [order // math.gcd(order, fi) for fi in cd.f]
    if rd.num_simple:
        big_l = 1
        for li in l_i:
            big_l = big_l * li // math.gcd(big_l, li)
        rows = [vec_scale(big_l // l_i[i], rd.simple_roots.row(i))
                for i in range(rd.num_simple)]
        lattice = kernel_mod(IntMatrix(rows, cols=rd.rank), big_l)
    else:
        lattice = Sublattice.full(rd.rank)
    label = f"lusztig({rd.name},{order})" if rd.name else None
    return _assemble_dual(rd, lattice, l_i, name=label)


@dataclass(frozen=True)
class QuantumPair:
    """Twisted duals of a nondegenerate form and of its inverse form on the
    Langlands dual, with the connecting lattice map."""

    left: TwistedDual
    right: TwistedDual
    iso: IntMatrix | None   # basis coordinates, left weights -> right weights
    ok: bool


def quantum_dual_pair(rd: RootDatum, b) -> QuantumPair:
    """Build both sides of the quantum-Langlands comparison for a
    nondegenerate W-invariant rational Gram b and verify the isomorphism
    lam -> b(lam, .) between their root data."""
    b = tuple(tuple(Fraction(x) for x in row) for row in b)
    n = rd.rank
    if len(b) != n or any(len(r) != n for r in b):
        raise ValueError("Gram has the wrong shape")
    try:
        b_inv = invert_rational([list(r) for r in b])
    except ValueError:
        raise ValueError("the Gram form is degenerate") from None
    left_form = QForm(rd, b)                      # validates W-invariance
    l_rd = rd.flip()
    right_form = QForm(l_rd, b_inv)
    left = twisted_dual(rd, left_form, "full")
    right = twisted_dual(l_rd, right_form, "full")

    # the map f(lam) = b lam carries the left weight lattice to the right one
    rows = []
    for u in left.basis.data:
        img = [sum(b[a][c] * u[c] for c in range(n)) for a in range(n)]
        if any(x.denominator != 1 for x in img):
            return QuantumPair(left, right, None, False)
        coords = right.weight_sublattice.coefficients([int(x) for x in img])
        if coords is None:
            return QuantumPair(left, right, None, False)
        rows.append(coords)
    iso = IntMatrix(rows, cols=right.basis.rows) if rows else IntMatrix([], cols=0)
    if iso.rows != iso.cols or not iso.is_unimodular():
        return QuantumPair(left, right, None, False)

    # roots must match up to sign, index by index, and dually the coroots
    live = [i for i in range(rd.num_simple) if i not in left.dropped]
    if left.dropped != right.dropped:
        return QuantumPair(left, right, None, False)
    for pos, i in enumerate(live):
        src_root = left.root_in_source(pos)           # r_i * coroot_i
        img = [sum(b[a][c] * src_root[c] for c in range(n)) for a in range(n)]
        tgt_root = right.root_in_source(pos)
        plus = tuple(Fraction(x) for x in tgt_root)
        if tuple(img) != plus and tuple(-x for x in img) != plus:
            return QuantumPair(left, right, None, False)
        # dual check: the pullback of the right coroot functional matches
        sign = 1 if tuple(img) == plus else -1
        r_left = left.multipliers[i]
        r_right = right.multipliers[i]
        alpha = rd.simple_roots.row(i)
        coroot = rd.simple_coroots.row(i)
        for u in left.basis.data:
            lhs = Fraction(dot(alpha, u), r_left)
            bu = [sum(b[a][c] * u[c] for c in range(n)) for a in range(n)]
            rhs = sign * Fraction(sum(coroot[a] * bu[a] for a in range(n)), r_right)
            if lhs != rhs:
                return QuantumPair(left, right, None, False)
    return QuantumPair(left, right, iso, True)


# -- isomorphism search ---------------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    status: str                    # "iso" | "none" | "undecided"
    weight_map: IntMatrix | None   # columns act on weight vectors of d1
    permutation: tuple | None      # simple index i of d1 -> permutation[i] of d2

    def agrees(self):
        return self.status == "iso"


def _matches_full_root_data(p: IntMatrix, d1: RootDatum, d2: RootDatum):
    """p maps d1 weights to d2 weights; check it carries the set of
    (root, coroot) pairs of d1 bijectively onto that of d2."""
    try:
        p_inv_t = invert_rational([[Fraction(x) for x in row] for row in p.data])
    except ValueError:
        return False
    pairs2 = set(d2.root_pairs)
    images = set()
    for beta, cobeta in d1.root_pairs:
        img_root = p.mul_vec(beta)
        img_cor = tuple(sum(p_inv_t[a][c] * cobeta[a] for a in range(p.rows))
                        for c in range(p.rows))
        if any(x.denominator != 1 for x in img_cor):
            return False
        img_cor = tuple(int(x) for x in img_cor)
        if (img_root, img_cor) not in pairs2:
            return False
        images.add((img_root, img_cor))
    return len(images) == len(pairs2)


def isomorphic(d1: RootDatum, d2: RootDatum, search_budget=20000) -> IsoResult:
    """Search for an isomorphism of root data.

    Tries every simple-root matching with equal Cartan matrices; each gives
    a linear system over Z for the weight map, solved exactly.  When the
    solution space has free directions (central directions of the data),
    unimodularity is sought by a bounded coefficient search; exceeding the
    budget yields "undecided" rather than a wrong "none".
    """
    if d1.rank != d2.rank or d1.num_simple != d2.num_simple:
        return IsoResult("none", None, None)
    n, s = d1.rank, d1.num_simple
    if d1.pi1() != d2.pi1():
        return IsoResult("none", None, None)
    if s == 0:
        return IsoResult("iso", IntMatrix.identity(n), ())
    undecided = False
    for perm in itertools.permutations(range(s)):
        ok = all(d1.cartan_matrix[i][j] == d2.cartan_matrix[perm[i]][perm[j]]
                 for i in range(s) for j in range(s))
        if not ok:
            continue
        # linear constraints on P (n x n, row-major unknowns):
        #   P alpha1_i = alpha2_perm(i)  and  coroot2_perm(i)^T P = coroot1_i^T
        rows = []
        rhs = []
        for i in range(s):
            a1 = d1.simple_roots.row(i)
            a2 = d2.simple_roots.row(perm[i])
            for r in range(n):
                row = [0] * (n * n)
                for c in range(n):
                    row[r * n + c] = a1[c]
                rows.append(row)
                rhs.append(a2[r])
            c1 = d1.simple_coroots.row(i)
            c2 = d2.simple_coroots.row(perm[i])
            for c in range(n):
                row = [0] * (n * n)
                for r in range(n):
                    row[r * n + c] = c2[r]
                rows.append(row)
                rhs.append(c1[c])
        system = IntMatrix(rows, cols=n * n)
        solved = solve_integer(system, rhs)
        if solved is None:
            continue
        particular, homogeneous = solved

        def as_matrix(vec):
            return IntMatrix([vec[r * n:(r + 1) * n] for r in range(n)], cols=n)

        if not homogeneous:
            p = as_matrix(list(particular))
            if p.is_unimodular() and _matches_full_root_data(p, d1, d2):
                return IsoResult("iso", p, perm)
            continue
        found = None
        tried = 0
        radius = 0
        while tried <= search_budget and found is None:
            coeff_box = [t for t in itertools.product(
                range(-radius, radius + 1), repeat=len(homogeneous))
                if max((abs(x) for x in t), default=0) == radius]
            for t in coeff_box:
                tried += 1
                if tried > search_budget:
                    break
                vec = list(particular)
                for coeff, h in zip(t, homogeneous):
                    if coeff:
                        vec = [x + coeff * y for x, y in zip(vec, h)]
                p = as_matrix(vec)
                if p.is_unimodular() and _matches_full_root_data(p, d1, d2):
                    found = p
                    break
            radius += 1
        if found is not None:
            return IsoResult("iso", found, perm)
        undecided = True
    return IsoResult("undecided" if undecided else "none", None, None)
