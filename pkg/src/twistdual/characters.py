"""Character-level oracle for dual groups.

Weight multiplicities by Freudenthal's recursion (cross-checked against a
Weyl alternating-sum brute force in small rank), tensor decomposition by
highest-weight extraction, and the numeric predictions for convolution:
highest-weight multiplicity one, the dominance bound, and fiber-dimension
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .dualgroup import TwistedDual, twisted_dual
from .qform import QForm, braiding_signs, kernel
from .rootdata import RootDatum, dot, vec_add, vec_sub


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Finite W-invariant weight multiplicity mapping with a highest weight."""

    rd: RootDatum
    multiplicities: tuple  # sorted ((weight, mult), ...)
    highest: tuple | None

    @classmethod
    def build(cls, rd, mults, highest=None, check=True):
        items = tuple(sorted((tuple(w), int(m)) for w, m in mults.items() if m))
        char = cls(rd, items, tuple(highest) if highest is not None else None)
        if check:
            char._check_invariants()
        return char

    def _check_invariants(self):
        mults = dict(self.multiplicities)
        for i in range(self.rd.num_simple):
            for w, m in self.multiplicities:
                if mults.get(self.rd.reflect_weight(i, w), 0) != m:
                    raise CharacterError(
                        f"support is not Weyl-invariant at {w} (reflection {i})")
        if self.highest is not None:
            for w, _ in self.multiplicities:
                if not self.rd.weight_leq(w, self.highest):
                    raise CharacterError(
                        f"weight {w} is not below the highest weight {self.highest}")

    def as_dict(self):
        return dict(self.multiplicities)

    def dim(self):
        return sum(m for _, m in self.multiplicities)

    def table(self):
        """Sorted 'weight: multiplicity' lines for golden-file output."""
        return "\n".join(f"{','.join(str(x) for x in w)}: {m}"
                         for w, m in self.multiplicities)


def _positive_roots_weight_side(rd: RootDatum):
    """Positive (root, coroot) pairs; roots live on the weight side."""
    return rd.positive_root_pairs


def _weight_form(rd: RootDatum):
    """W-invariant inner product on the weight side: sum over coroots of
    the squared pairing.  Positive definite on the root span, which is all
    Freudenthal needs; the normalization drops out of the recursion."""
    n = rd.rank
    g = [[0] * n for _ in range(n)]
    for _, cobeta in rd.root_pairs:
        for a in range(n):
            for b in range(n):
                g[a][b] += cobeta[a] * cobeta[b]
    return tuple(tuple(row) for row in g)


def _form_pair(g, x, y):
    return sum(g[a][b] * x[a] * y[b] for a in range(len(x)) for b in range(len(x)))


def irreducible_character(rd: RootDatum, highest, crosscheck=None) -> Character:
    """Weight multiplicities of the irreducible with the given highest
    weight, by Freudenthal's recursion.

    For data with at most two simple roots the result is checked against
    the Weyl alternating-sum brute force (pass crosscheck=False to skip).
    """
    highest = tuple(int(x) for x in highest)
    if not rd.is_dominant_weight(highest):
        raise CharacterError(f"{highest} is not dominant")
    pos = _positive_roots_weight_side(rd)
    g = _weight_form(rd)
    rho = rd.rho
    lam_rho = tuple(Fraction(x) + r for x, r in zip(highest, rho))
    norm_top = _form_pair(g, lam_rho, lam_rho)

    mults = {highest: 1}
    layer = [highest]
    while layer:
        candidates = set()
        for mu in layer:
            for i in range(rd.num_simple):
                candidates.add(vec_sub(mu, rd.simple_roots.row(i)))
        next_layer = []
        for mu in sorted(candidates):
            if mu in mults:
                continue
            rhs = Fraction(0)
            for beta, _ in pos:
                k = 1
                while True:
                    up = tuple(m + k * b for m, b in zip(mu, beta))
                    m_up = mults.get(up, 0)
                    if m_up:
                        rhs += 2 * m_up * _form_pair(g, up, beta)
                    if not rd.weight_leq(up, highest):
                        break
                    k += 1
            if rhs == 0:
                continue
            mu_rho = tuple(Fraction(x) + r for x, r in zip(mu, rho))
            denom = norm_top - _form_pair(g, mu_rho, mu_rho)
            if denom == 0:
                raise CharacterError(f"vanishing Freudenthal denominator at {mu}")
            m = rhs / denom
            if m.denominator != 1 or m < 0:
                raise CharacterError(f"non-integral multiplicity {m} at {mu}")
            if m:
                mults[mu] = int(m)
                next_layer.append(mu)
        layer = next_layer

    char = Character.build(rd, mults, highest=highest)
    if crosscheck is None:
        crosscheck = rd.num_simple <= 2
    if crosscheck:
        for w, m in char.multiplicities:
            bm = weyl_multiplicity(rd, highest, w)
            if bm != m:
                raise CharacterError(
                    f"Freudenthal ({m}) and Weyl sum ({bm}) disagree at {w}")
    return char


def _root_coeffs(rd: RootDatum, v):
    """Coordinates of v in the simple-root basis, or None outside the span."""
    from .lattice import solve_left_rational
    return solve_left_rational(rd.simple_roots.data, v)


def kostant_partition(rd: RootDatum, v) -> int:
    """Number of ways to write v as a nonnegative integer sum of positive
    roots (the independent counting oracle behind the Weyl sum)."""
    coeffs = _root_coeffs(rd, v)
    if coeffs is None or any(c.denominator != 1 or c < 0 for c in coeffs):
        return 0
    target = tuple(int(c) for c in coeffs)
    pos = []
    for beta, _ in rd.positive_root_pairs:
        c = tuple(int(x) for x in _root_coeffs(rd, beta))
        pos.append(c)
    pos.sort(reverse=True)

    @lru_cache(maxsize=None)
    def count(remaining, idx):
        if not any(remaining):
            return 1
        if idx == len(pos):
            return 0
        total = 0
        step = pos[idx]
        k = 0
        cur = remaining
        while all(x >= 0 for x in cur):
            total += count(cur, idx + 1)
            cur = tuple(x - s for x, s in zip(cur, step))
            k += 1
        return total

    out = count(target, 0)
    count.cache_clear()
    return out


def weyl_multiplicity(rd: RootDatum, highest, weight) -> int:
    """Multiplicity by the Weyl character formula's alternating sum over
    the Weyl group of Kostant partition counts."""
    highest = tuple(int(x) for x in highest)
    weight = tuple(int(x) for x in weight)
    rho = rd.rho
    lam_rho = tuple(Fraction(x) + r for x, r in zip(highest, rho))
    total = 0
    for w in rd.weyl_group().elements:
        sign = w.det()
        wt = w.transpose()  # action on the weight side
        moved = tuple(sum(wt.data[a][b] * lam_rho[b] for b in range(rd.rank))
                      for a in range(rd.rank))
        arg = tuple(moved[a] - rho[a] - weight[a] for a in range(rd.rank))
        if any(x.denominator != 1 for x in arg):
            continue
        total += sign * kostant_partition(rd, tuple(int(x) for x in arg))
    return total


def weyl_dim(rd: RootDatum, highest) -> int:
    """Weyl dimension formula, exact."""
    highest = tuple(int(x) for x in highest)
    if not rd.is_dominant_weight(highest):
        raise CharacterError(f"{highest} is not dominant")
    rho = rd.rho
    num = Fraction(1)
    den = Fraction(1)
    for _, cobeta in rd.positive_root_pairs:
        num *= sum((Fraction(h) + r) * c for h, r, c in zip(highest, rho, cobeta))
        den *= sum(r * c for r, c in zip(rho, cobeta))
    out = num / den
    assert out.denominator == 1
    return int(out)


def tensor_decompose(c1: Character, c2: Character):
    """Constituents of the product character, as a dict highest weight ->
    multiplicity, by repeated extraction of a maximal weight."""
    if c1.rd != c2.rd:
        raise CharacterError("characters live on different root data")
    rd = c1.rd
    product = {}
    for w1, m1 in c1.multiplicities:
        for w2, m2 in c2.multiplicities:
            w = vec_add(w1, w2)
            product[w] = product.get(w, 0) + m1 * m2
    remaining = dict(product)
    # strictly positive height functional on the positive cone
    rho_check = [0] * rd.rank
    for _, cobeta in rd.positive_root_pairs:
        rho_check = [a + b for a, b in zip(rho_check, cobeta)]
    out = {}
    while remaining:
        top = max(remaining, key=lambda w: (dot(w, rho_check), w))
        if not rd.is_dominant_weight(top):
            raise CharacterError(f"maximal weight {top} is not dominant")
        mult = remaining[top]
        if mult < 0:
            raise CharacterError(f"negative multiplicity at {top}")
        piece = irreducible_character(rd, top, crosscheck=False)
        for w, m in piece.multiplicities:
            left = remaining.get(w, 0) - mult * m
            if left < 0:
                raise CharacterError(f"inconsistent product at {w}")
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
        out[top] = out.get(top, 0) + mult
    # the constituents must reassemble the product exactly
    rebuilt = {}
    for top, mult in out.items():
        for w, m in irreducible_character(rd, top, crosscheck=False).multiplicities:
            rebuilt[w] = rebuilt.get(w, 0) + mult * m
    assert rebuilt == product
    return out


def fiber_dim(rd: RootDatum, lam, mu, nu) -> Fraction:
    """Half of <2 rho, lam> + <2 rho, mu> - <2 rho, nu>: the dimension
    bound for convolution fibers over the nu-orbit."""
    return Fraction(dot(rd.two_rho, lam) + dot(rd.two_rho, mu)
                    - dot(rd.two_rho, nu), 2)


@dataclass(frozen=True)
class SatakeReport:
    """Numeric predictions for one convolution of twisted-dual simples."""

    dual: TwistedDual
    lam: tuple
    mu: tuple
    decomposition: tuple     # ((source coweight, multiplicity), ...) sorted
    highest_multiplicity: int
    all_below_highest: bool
    fiber_dims: tuple        # ((source coweight, Fraction), ...) aligned
    geometric_sign: int
    twisted_factor: object   # Exponent
    ok: bool = field(default=False)


def satake_prediction(q: QForm, lam, mu) -> SatakeReport:
    """Decompose the product of the twisted-dual simples indexed by two
    dominant coweights in the dual weight lattice and check the
    convolution predictions."""
    rd = q.rd
    lam = tuple(int(x) for x in lam)
    mu = tuple(int(x) for x in mu)
    lattice = kernel(q, "full")
    for v in (lam, mu):
        if not lattice.contains(v):
            raise CharacterError(
                f"{v} is outside the dual weight lattice")
        if not rd.is_dominant_coweight(v):
            raise CharacterError(f"{v} is not dominant")
    dual = twisted_dual(rd, q, "full")
    lam_c = dual.weight_sublattice.coefficients(lam)
    mu_c = dual.weight_sublattice.coefficients(mu)
    c1 = irreducible_character(dual.datum, lam_c, crosscheck=False)
    c2 = irreducible_character(dual.datum, mu_c, crosscheck=False)
    pieces = tensor_decompose(c1, c2)
    top_c = vec_add(lam_c, mu_c)
    top_mult = pieces.get(tuple(top_c), 0)
    all_below = all(dual.datum.weight_leq(nu_c, top_c) for nu_c in pieces)
    decomposition = []
    fibers = []
    for nu_c, m in sorted(pieces.items()):
        nu = dual.weight_sublattice.member_from_coefficients(nu_c)
        decomposition.append((nu, m))
        fibers.append((nu, fiber_dim(rd, lam, mu, nu)))
    sign, factor = braiding_signs(q, lam, mu)
    ok = top_mult == 1 and all_below and all(
        f.denominator == 1 and f >= 0 for _, f in fibers)
    return SatakeReport(
        dual=dual,
        lam=lam,
        mu=mu,
        decomposition=tuple(decomposition),
        highest_multiplicity=top_mult,
        all_below_highest=all_below,
        fiber_dims=tuple(fibers),
        geometric_sign=sign,
        twisted_factor=factor,
        ok=ok,
    )
