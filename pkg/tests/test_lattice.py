import random
from fractions import Fraction

import pytest

from twistdual.lattice import (
    FGAbelianGroup,
    IntMatrix,
    LatticeHom,
    Sublattice,
    intersect,
    inverse_unimodular,
    invert_rational,
    kernel_mod,
    lattice_index,
    quotient_group,
    saturation,
    smith_normal_form,
    solve_integer,
    solve_left_rational,
)


def snf_diag(m):
    _, d, _ = smith_normal_form(m)
    return [d.data[i][i] for i in range(min(m.rows, m.cols))]


def assert_snf_contract(m):
    u, d, v = smith_normal_form(m)
    assert (u @ m @ v) == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [d.data[i][i] for i in range(min(m.rows, m.cols))]
    for i in range(m.rows):
        for j in range(m.cols):
            if i != j:
                assert d.data[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert all(x >= 0 for x in diag)


class TestSmithNormalForm:
    def test_diag_2_3(self):
        m = IntMatrix([[2, 0], [0, 3]])
        assert snf_diag(m) == [1, 6]
        assert_snf_contract(m)

    def test_identity(self):
        m = IntMatrix.identity(2)
        assert snf_diag(m) == [1, 1]

    def test_single_entry(self):
        assert snf_diag(IntMatrix([[2]])) == [2]

    def test_random_matrices(self):
        rng = random.Random(7)
        for _ in range(300):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = IntMatrix([[rng.randint(-12, 12) for _ in range(cols)]
                           for _ in range(rows)])
            assert_snf_contract(m)

    def test_zero_matrix(self):
        assert snf_diag(IntMatrix.zero(3, 2)) == [0, 0]


class TestKernelMod:
    def test_two_mod_six(self):
        # brute force over residues mod 6: {x : 2x = 0 mod 6} = {0, 3}
        expected = sorted(x for x in range(6) if (2 * x) % 6 == 0)
        assert expected == [0, 3]
        k = kernel_mod(IntMatrix([[2]]), 6)
        assert k.basis.data == ((3,),)

    def test_zero_map(self):
        k = kernel_mod(IntMatrix.zero(2, 3), 5)
        assert k.basis == IntMatrix.identity(3)

    def test_identity_mod_one(self):
        k = kernel_mod(IntMatrix.identity(2), 1)
        assert k.basis == IntMatrix.identity(2)

    def test_exact_kernel_saturated(self):
        m = IntMatrix([[1, 1, 0], [0, 2, 2]])
        k = kernel_mod(m, None)
        assert k.rank == 1
        for row in k.basis.data:
            assert m.mul_vec(row) == (0, 0)
        assert saturation(k) == k

    def test_against_brute_force(self):
        rng = random.Random(11)
        for _ in range(60):
            rows, cols = rng.randint(1, 2), rng.randint(1, 3)
            n = rng.randint(2, 8)
            m = IntMatrix([[rng.randint(-5, 5) for _ in range(cols)]
                           for _ in range(rows)])
            k = kernel_mod(m, n)
            for row in k.basis.data:
                assert all(x % n == 0 for x in m.mul_vec(row))
            # membership of every residue-class solution
            import itertools
            for x in itertools.product(range(n), repeat=cols):
                sol = all(v % n == 0 for v in m.mul_vec(x))
                assert k.contains(x) == sol or not sol
                if sol:
                    assert k.contains(x)

    def test_nonmembers_fail(self):
        rng = random.Random(3)
        m = IntMatrix([[2]])
        k = kernel_mod(m, 6)
        for _ in range(20):
            x = rng.randint(-20, 20)
            if not k.contains((x,)):
                assert (2 * x) % 6 != 0


class TestSaturation:
    def test_double_vector(self):
        s = Sublattice.from_rows(2, [(2, 0)])
        assert saturation(s).basis.data == ((1, 0),)

    def test_full_lattice(self):
        s = Sublattice.full(3)
        assert saturation(s) == s

    def test_primitive_diagonal(self):
        s = Sublattice.from_rows(2, [(2, 2)])
        assert saturation(s).basis.data == ((1, 1),)

    def test_idempotent_and_contains(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 3)
            k = rng.randint(0, n)
            s = Sublattice.from_rows(
                n, [[rng.randint(-6, 6) for _ in range(n)] for _ in range(k)])
            sat = saturation(s)
            assert saturation(sat) == sat
            for row in s.basis.data:
                assert sat.contains(row)
            if s.rank:
                assert sat.rank == s.rank  # finite index


def _quotient_order_by_counting(s: Sublattice):
    # rank <= 2 oracle: count canonical residues in a box
    assert s.ambient_rank <= 2 and s.rank == s.ambient_rank
    d = abs(s.basis.det())
    import itertools
    residues = set()
    for x in itertools.product(range(2 * d), repeat=s.ambient_rank):
        v = list(x)
        for row, c in zip(s.basis.data, s._pivots()):
            q = v[c] // row[c]
            v = [a - q * b for a, b in zip(v, row)]
        residues.add(tuple(v))
    return len(residues)


class TestQuotientGroup:
    def test_z6(self):
        s = Sublattice.from_rows(2, [(2, 0), (0, 3)])
        assert quotient_group(s).invariant_factors == (6,)

    def test_trivial(self):
        s = Sublattice.full(1)
        assert quotient_group(s).invariant_factors == ()

    def test_free_factor(self):
        s = Sublattice.from_rows(2, [(1, 0)])
        assert quotient_group(s).invariant_factors == (0,)

    def test_order_equals_point_count(self):
        rng = random.Random(9)
        for _ in range(25):
            n = rng.randint(1, 2)
            while True:
                s = Sublattice.from_rows(
                    n, [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
                if s.rank == n:
                    break
            g = quotient_group(s)
            assert g.order() == _quotient_order_by_counting(s)
            assert g.order() == abs(s.basis.det())


class TestIntersect:
    def test_basic(self):
        a = Sublattice.from_rows(2, [(2, 0), (0, 1)])
        b = Sublattice.from_rows(2, [(1, 0), (0, 3)])
        c = intersect(a, b)
        assert c.contains((2, 0)) and c.contains((0, 3))
        assert not c.contains((1, 0))
        assert c.basis.data == ((2, 0), (0, 3))

    def test_random_containment(self):
        rng = random.Random(13)
        for _ in range(40):
            n = rng.randint(1, 3)
            a = Sublattice.from_rows(
                n, [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
            b = Sublattice.from_rows(
                n, [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
            c = intersect(a, b)
            for row in c.basis.data:
                assert a.contains(row) and b.contains(row)


class TestHelpers:
    def test_lattice_index(self):
        outer = Sublattice.full(2)
        inner = Sublattice.from_rows(2, [(2, 0), (0, 3)])
        assert lattice_index(outer, inner) == 6
        assert lattice_index(outer, Sublattice.from_rows(2, [(1, 0)])) is None

    def test_inverse_unimodular(self):
        m = IntMatrix([[2, 1], [1, 1]])
        inv = inverse_unimodular(m)
        assert (m @ inv) == IntMatrix.identity(2)
        with pytest.raises(ValueError):
            inverse_unimodular(IntMatrix([[2, 0], [0, 1]]))

    def test_solve_integer(self):
        rng = random.Random(17)
        for _ in range(50):
            rows, cols = rng.randint(1, 3), rng.randint(1, 3)
            a = IntMatrix([[rng.randint(-4, 4) for _ in range(cols)]
                           for _ in range(rows)])
            x0 = [rng.randint(-3, 3) for _ in range(cols)]
            b = a.mul_vec(x0)
            sol = solve_integer(a, b)
            assert sol is not None
            particular, basis = sol
            assert a.mul_vec(particular) == tuple(b)
            for h in basis:
                assert a.mul_vec(h) == (0,) * rows

    def test_solve_integer_unsolvable(self):
        a = IntMatrix([[2]])
        assert solve_integer(a, (1,)) is None

    def test_solve_left_rational(self):
        rows = [(1, 2), (0, 3)]
        sol = solve_left_rational(rows, (2, 7))
        assert sol == (Fraction(2), Fraction(1))
        assert solve_left_rational([(1, 0)], (0, 1)) is None

    def test_invert_rational_singular(self):
        with pytest.raises(ValueError):
            invert_rational([[Fraction(1), Fraction(1)],
                             [Fraction(1), Fraction(1)]])


class TestFGAbelianGroup:
    def test_normalization(self):
        g = FGAbelianGroup.from_factors([1, 2, 6, 0])
        assert g.invariant_factors == (2, 6, 0)
        assert g.free_rank == 1
        assert g.order() is None

    def test_chain_violation(self):
        with pytest.raises(ValueError):
            FGAbelianGroup.from_factors([2, 3])

    def test_elements_and_arithmetic(self):
        g = FGAbelianGroup.from_factors([2, 4])
        assert len(g.elements()) == 8
        assert g.add((1, 3), (1, 2)) == (0, 1)
        assert g.scale(2, (1, 3)) == (0, 2)

    def test_describe(self):
        assert FGAbelianGroup.from_factors([2, 0]).describe() == "Z/2 x Z"
        assert FGAbelianGroup.trivial().describe() == "1"


class TestLatticeHom:
    def test_call(self):
        target = FGAbelianGroup.from_factors([5])
        h = LatticeHom(2, target, ((2,), (3,)))
        assert h((1, 1)) == (0,)
        assert h((2, 0)) == (4,)

    def test_shape_errors(self):
        target = FGAbelianGroup.from_factors([5])
        with pytest.raises(ValueError):
            LatticeHom(2, target, ((2,),))
        with pytest.raises(ValueError):
            LatticeHom(1, target, ((2, 1),))
