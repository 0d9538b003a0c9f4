import random
from fractions import Fraction

import pytest

from twistdual.lattice import FGAbelianGroup
from twistdual.qform import (
    CartanDatum,
    Exponent,
    GerbeClass,
    InvarianceError,
    QForm,
    ShapeError,
    braiding_signs,
    cartan_qform,
    component_killing_value,
    decompose_integer_form,
    det_form,
    epsilon_defect,
    half_forms_qform,
    invariant_gram_basis,
    kernel,
    killing_qform,
    minimal_even_gram,
    normalized_killing_gram,
    qform_from_gram,
    trivial_qform,
)
from twistdual.rootdata import dot, standard, vec_add

SL2 = standard("SL2")
PGL2 = standard("PGL2")
GL2 = standard("GL2")
SL3 = standard("SL3")
SP4 = standard("Sp4")
G2 = standard("G2")


def random_invariant_form(rd, rng, with_tau=False, denom=6):
    basis = invariant_gram_basis(rd)

    def gram():
        coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, denom))
                  for _ in basis]
        return [[sum(c * b[i][j] for c, b in zip(coeffs, basis))
                 for j in range(rd.rank)] for i in range(rd.rank)]

    return QForm(rd, gram(), gram() if with_tau else None)


class TestExponent:
    def test_normalization(self):
        e = Exponent.of(Fraction(7, 3))
        assert e.rational == Fraction(1, 3)

    def test_order(self):
        assert Exponent.of(Fraction(2, 3)).order() == 3
        assert Exponent.of(0).order() == 1
        assert Exponent.of(0, Fraction(1, 2)).order() is None

    def test_arithmetic(self):
        a = Exponent.of(Fraction(1, 2), Fraction(1, 3))
        b = Exponent.of(Fraction(3, 4))
        assert (a + b).rational == Fraction(1, 4)
        assert (a - a).is_zero()
        assert a.scaled(3) == Exponent.of(Fraction(1, 2), 1)

    def test_str(self):
        assert str(Exponent.of(Fraction(1, 3))) == "1/3"
        assert str(Exponent.of(Fraction(1, 2), Fraction(2, 5))) == "1/2+2/5*t"


class TestQFormConstruction:
    def test_pgl2_order3(self):
        q = qform_from_gram(PGL2, [[Fraction(2, 3)]])
        assert q.q((1,)) == Exponent.of(Fraction(1, 3))
        assert q.q((1,)).order() == 3

    def test_trivial(self):
        q = trivial_qform(G2)
        assert q.q((1, 1)).is_zero()

    def test_tau_part_infinite_order(self):
        q = qform_from_gram(SL2, None, [[1]])
        assert q.q((1,)).order() is None

    def test_symmetry_required(self):
        with pytest.raises(ShapeError):
            QForm(GL2, [[0, 1], [0, 0]])

    def test_invariance_error_names_generator(self):
        with pytest.raises(InvarianceError) as err:
            QForm(GL2, [[1, 0], [0, 0]])
        assert "reflection 0" in str(err.value)

    def test_quadratic_law_random(self):
        rng = random.Random(31)
        for rd in (SL2, PGL2, GL2, SL3, SP4):
            for _ in range(25):
                q = random_invariant_form(rd, rng, with_tau=True)
                lam = tuple(rng.randint(-5, 5) for _ in range(rd.rank))
                mu = tuple(rng.randint(-5, 5) for _ in range(rd.rank))
                assert q.q(vec_add(lam, mu)) == q.q(lam) + q.q(mu) + q.kappa(lam, mu)
                assert q.kappa(lam, mu) == q.kappa(mu, lam)

    def test_kappa_weyl_invariant(self):
        rng = random.Random(37)
        for rd in (SL3, SP4, G2):
            q = random_invariant_form(rd, rng)
            for _ in range(20):
                lam = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                mu = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                for i in range(rd.num_simple):
                    wl = rd.reflect_coweight(i, lam)
                    wm = rd.reflect_coweight(i, mu)
                    assert q.kappa(wl, wm) == q.kappa(lam, mu)


class TestKernel:
    def test_pgl2_order3(self):
        q = qform_from_gram(PGL2, [[Fraction(2, 3)]])
        assert kernel(q, "full").basis.data == ((3,),)

    def test_trivial_full_lattice(self):
        assert kernel(trivial_qform(SP4)).basis.data == ((1, 0), (0, 1))

    def test_pgl2_order8(self):
        q = qform_from_gram(PGL2, [[Fraction(2, 8)]])
        assert kernel(q, "full").basis.data == ((4,),)

    def test_full_contained_in_coroot(self):
        # equality needs the coroot lattice to be the whole coweight lattice;
        # finite index is not enough (PGL2 with Gram [1/2] separates the two)
        rng = random.Random(41)
        for rd in (SL2, PGL2, GL2, SL3, SP4):
            for _ in range(10):
                q = random_invariant_form(rd, rng, with_tau=True)
                full = kernel(q, "full")
                cor = kernel(q, "coroot")
                for row in full.basis.data:
                    assert cor.contains(row)
                if rd.pi1().is_trivial():
                    assert full == cor

    def test_modes_differ_on_pgl2(self):
        q = qform_from_gram(PGL2, [[Fraction(1, 2)]])
        assert kernel(q, "full").basis.data == ((2,),)
        assert kernel(q, "coroot").basis.data == ((1,),)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            kernel(trivial_qform(SL2), "sideways")


class TestDetForm:
    def test_sl2_adjoint(self):
        df = det_form(SL2, [(2,), (0,), (-2,)])
        assert df.k((1,), (1,)) == 8
        assert df.r((1,)) == 4
        assert df.is_sf
        assert df.zeta == (Fraction(0),)

    def test_gl2_standard_parity_obstruction(self):
        df = det_form(GL2, [(1, 0), (0, 1)])
        assert df.k((1, 0), (1, 0)) == 1
        assert not df.is_sf

    def test_empty_multiset(self):
        df = det_form(SL3, [])
        assert df.is_sf
        assert df.k((1, 0), (0, 1)) == 0

    def test_warns_on_open_multiset(self):
        with pytest.warns(UserWarning):
            det_form(SL2, [(2,)])

    def test_adjoint_integrality(self):
        for rd in (SL2, SL3, SP4, G2):
            weights = [b for b, _ in rd.root_pairs] + [(0,) * rd.rank] * rd.rank
            df = det_form(rd, weights)
            assert df.is_sf
            assert df.zeta_is_integral()
            for i in range(rd.rank):
                e = tuple(1 if j == i else 0 for j in range(rd.rank))
                assert df.r(e).denominator == 1


class TestKilling:
    def test_sl2_order4_value(self):
        q = killing_qform(SL2, 0, Exponent.of(Fraction(1, 4)))
        assert component_killing_value(SL2, 0, (1,)) == 4
        assert q.q((1,)).is_zero()

    def test_trivial_coefficient(self):
        q = killing_qform(SL3, 0, Exponent.zero())
        assert q.is_gram_zero()

    def test_sl3_short_coroot_value(self):
        # (1/2) sum over all six roots of <beta, coroot_1>^2 = 6
        assert component_killing_value(SL3, 0, (1, 0)) == 6
        q = killing_qform(SL3, 0, Exponent.of(Fraction(1, 3)))
        assert q.q((1, 0)).is_zero()


class TestDecompose:
    def test_sl2_integral_gram(self):
        dec = decompose_integer_form(qform_from_gram(SL2, [[2]]))
        assert dec.success
        # the product of the Killing parts and the residual rebuilds q
        assert dec.residual.q((1,)).is_zero()

    def test_trivial_form(self):
        dec = decompose_integer_form(trivial_qform(SP4))
        assert dec.success
        assert all(c.is_zero() for c in dec.coefficients)
        assert dec.residual.is_gram_zero()

    def test_gl2_center_supported(self):
        g0 = [[Fraction(1, 5), Fraction(1, 5)], [Fraction(1, 5), Fraction(1, 5)]]
        q = qform_from_gram(GL2, g0)
        dec = decompose_integer_form(q)
        assert dec.success
        assert dec.coefficients[0].is_zero()
        assert dec.residual.g0 == q.g0

    def test_pgl2_fractional(self):
        dec = decompose_integer_form(qform_from_gram(PGL2, [[Fraction(2, 3)]]))
        assert dec.success
        assert dec.coefficients[0] == Exponent.of(Fraction(1, 3))
        assert dec.residual.is_gram_zero()

    def test_reconstruction_random(self):
        rng = random.Random(43)
        for rd in (SL2, PGL2, GL2, SL3, SP4):
            for _ in range(10):
                q = random_invariant_form(rd, rng, with_tau=True)
                dec = decompose_integer_form(q)
                assert dec.success, dec.detail
                rebuilt = dec.residual
                for ci, a in enumerate(dec.coefficients):
                    rebuilt = rebuilt.tensor(killing_qform(rd, ci, a))
                for _ in range(8):
                    lam = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                    mu = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                    assert rebuilt.q(lam) == q.q(lam)
                    assert rebuilt.kappa(lam, mu) == q.kappa(lam, mu)

    def test_synthetic_failure(self):
        # a fake form whose claimed values cannot come from any integral
        # decomposition: Gram reads as zero but Q on the coroot is -1
        class NotLiftable(QForm):
            def q(self, lam):
                if lam == (1,):
                    return Exponent.of(Fraction(1, 2))
                return super().q(lam)

        q = NotLiftable(SL2, None, None)
        dec = decompose_integer_form(q)
        assert not dec.success
        assert "no Killing coefficient" in dec.detail


class TestEpsilonDefect:
    def test_gram_forms_have_zero_defect(self):
        rng = random.Random(47)
        for rd in (SL2, PGL2, GL2, SL3, SP4, G2):
            for _ in range(10):
                q = random_invariant_form(rd, rng, with_tau=True)
                lam = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                for _, cobeta in rd.root_pairs:
                    assert epsilon_defect(q, cobeta, lam).is_zero()

    def test_trivial_form(self):
        assert epsilon_defect(trivial_qform(SL2), (1,), (3,)).is_zero()

    def test_pgl2_worked_example(self):
        q = qform_from_gram(PGL2, [[Fraction(2, 5)]])
        assert q.kappa((2,), (1,)) == Exponent.of(Fraction(4, 5))
        assert q.q((2,)) == Exponent.of(Fraction(4, 5))
        assert epsilon_defect(q, (2,), (1,)).is_zero()

    def test_non_coroot_rejected(self):
        with pytest.raises(ValueError):
            epsilon_defect(trivial_qform(SL2), (3,), (1,))


class TestHalfForms:
    def test_sl2_even(self):
        q = half_forms_qform(SL2)
        assert q.q((1,)).is_zero()  # <2 rho, coroot> = 2

    def test_pgl2_odd(self):
        q = half_forms_qform(PGL2)
        assert q.q((1,)) == Exponent.of(Fraction(1, 2))

    def test_parity_formula_random(self):
        rng = random.Random(53)
        for rd in (SL3, SP4, G2, GL2):
            q = half_forms_qform(rd)
            for _ in range(30):
                lam = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
                expected = Fraction(dot(rd.two_rho, lam), 2)
                assert q.q(lam) == Exponent(expected)

    def test_bilinear_form_trivial(self):
        rng = random.Random(59)
        for rd in (SL2, PGL2, SL3, SP4, G2, GL2):
            q = half_forms_qform(rd)
            for _ in range(20):
                lam = tuple(rng.randint(-5, 5) for _ in range(rd.rank))
                mu = tuple(rng.randint(-5, 5) for _ in range(rd.rank))
                assert q.kappa(lam, mu).is_zero()


class TestBraiding:
    def test_pgl2_sign(self):
        q = trivial_qform(PGL2)
        sign, _ = braiding_signs(q, (1,), (1,))
        assert sign == -1

    def test_zero_coweight(self):
        q = qform_from_gram(PGL2, [[Fraction(2, 3)]])
        sign, factor = braiding_signs(q, (0,), (5,))
        assert sign == 1
        assert factor == q.q((5,))

    def test_sl2_coroot(self):
        sign, _ = braiding_signs(trivial_qform(SL2), (1,), (1,))
        assert sign == 1


class TestGerbeClass:
    def _class(self, form, images, target=None):
        target = target or FGAbelianGroup.from_factors([4])
        return GerbeClass(form, target, images)

    def test_tensor_unit(self):
        target = FGAbelianGroup.from_factors([4])
        q = qform_from_gram(PGL2, [[Fraction(2, 3)]])
        c = GerbeClass(q, target, ((2,),))
        unit = GerbeClass(trivial_qform(PGL2), target, ((0,),))
        out = unit.tensor(c)
        assert out.form.g0 == q.g0
        assert out.mult_part == ((2,),)

    def test_tensor_inverse_gram(self):
        target = FGAbelianGroup.from_factors([4])
        q = qform_from_gram(PGL2, [[Fraction(2, 3)]])
        c = GerbeClass(q, target, ((1,),))
        inv = GerbeClass(q.inverse(), target, ((3,),))
        out = c.tensor(inv)
        assert out.form.is_gram_zero()
        assert out.mult_part == ((0,),)

    def test_validate_half_forms(self):
        target = FGAbelianGroup.from_factors([4])
        c = GerbeClass(half_forms_qform(PGL2), target, ((0,),))
        assert c.validate()

    def test_mismatched_composition(self):
        target = FGAbelianGroup.from_factors([4])
        c1 = GerbeClass(trivial_qform(PGL2), target, ((0,),))
        c2 = GerbeClass(trivial_qform(SL2), FGAbelianGroup.from_factors([4]), ())
        with pytest.raises(ValueError):
            c1.tensor(c2)

    def test_ill_defined_mult_part(self):
        target = FGAbelianGroup.from_factors([4])
        c = GerbeClass(trivial_qform(PGL2), target, ((1,),))
        # pi1(PGL2) = Z/2 but 2 * 1 != 0 in Z/4
        with pytest.raises(ValueError):
            c.validate()


class TestCartanDatum:
    def test_standard_values(self):
        assert CartanDatum.standard(SL2).f == (1,)
        assert CartanDatum.standard(SL3).f == (1, 1)
        assert CartanDatum.standard(SP4).f == (2, 1)
        assert CartanDatum.standard(SP4, scale=2).f == (4, 2)

    def test_diagonal_even_positive(self):
        for rd in (SL3, SP4, G2):
            cd = CartanDatum.standard(rd)
            for i in range(rd.num_simple):
                assert cd.pairing(i, i) == 2 * cd.f[i]
                assert cd.pairing(i, i) > 0

    def test_cartan_integer_recovered(self):
        for rd in (SL3, SP4, G2):
            cd = CartanDatum.standard(rd)
            for i in range(rd.num_simple):
                for j in range(rd.num_simple):
                    lhs = Fraction(2 * cd.pairing(i, j), cd.pairing(j, j))
                    assert lhs == rd.cartan_matrix[j][i]
                    if i != j:
                        assert lhs <= 0

    def test_bad_symmetrizer(self):
        with pytest.raises(ValueError):
            CartanDatum(SP4, (1, 1))

    def test_cartan_qform_orders(self):
        import math
        cd = CartanDatum.standard(SP4)
        for order in (2, 3, 12):
            q = cartan_qform(cd, order)
            for i in range(2):
                cor = SP4.simple_coroots.row(i)
                assert q.q(cor) == Exponent.of(Fraction(cd.f[i], order))
                assert q.q(cor).order() == order // math.gcd(order, cd.f[i])


class TestGramHelpers:
    def test_normalized_killing_short_coroots(self):
        for rd in (SL2, PGL2, SL3, SP4, G2):
            g = normalized_killing_gram(rd)
            lengths = []
            for i in range(rd.num_simple):
                cor = rd.simple_coroots.row(i)
                lengths.append(sum(g[a][b] * cor[a] * cor[b]
                                   for a in range(rd.rank) for b in range(rd.rank)))
            assert min(lengths) == 2

    def test_minimal_even_gram_pgl2(self):
        g, m = minimal_even_gram(PGL2)
        assert g == ((Fraction(2),),)
        assert m == 4

    def test_invariant_basis_dimensions(self):
        assert len(invariant_gram_basis(SL2)) == 1
        assert len(invariant_gram_basis(GL2)) == 2
        assert len(invariant_gram_basis(SL3)) == 1
        assert len(invariant_gram_basis(standard("torus2"))) == 3
