import random
from fractions import Fraction

import pytest

from quadricbundles.brauer import (
    REAL,
    DescentReport,
    Place,
    QuaternionClass,
    RationalQuadraticForm,
    albert_form,
    corestriction_projection,
    form_invariants,
    forms_equivalent,
    forms_similar,
    hasse_invariant,
    hilbert_symbol,
    hilbert_symbol_search,
    is_isotropic,
    is_isotropic_over_quadratic,
    is_local_square,
    quaternion_is_split,
    relevant_places,
    res_cor_doubling_check,
    splits_over_quadratic,
    squarefree_part,
    verify_quaternion_descent_instance,
)

ORACLE_PRIMES = (2, 3, 5, 7, 11, 13)


def random_rational(rng, bound=40, max_den=8):
    num = rng.randint(-bound, bound)
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, max_den))


class TestSquareClasses:
    def test_squarefree_part(self):
        assert squarefree_part(12) == 3
        assert squarefree_part(-18) == -2
        assert squarefree_part(Fraction(4, 9)) == 1
        assert squarefree_part(Fraction(2, 3)) == 6

    def test_local_squares(self):
        assert is_local_square(17, Place.prime(2))       # 17 = 1 mod 8
        assert not is_local_square(-1, Place.prime(2))   # -1 = 7 mod 8
        assert not is_local_square(-1, REAL)
        assert is_local_square(2, Place.prime(7))        # 2 = 3^2 mod 7
        assert not is_local_square(3, Place.prime(3))


class TestHilbertSymbol:
    def test_pinned_values(self):
        assert hilbert_symbol(-1, -1, Place.prime(2)) == -1
        assert hilbert_symbol(-1, -1, REAL) == -1
        assert hilbert_symbol(2, 3, Place.prime(3)) == -1
        assert hilbert_symbol(1, 5, Place.prime(5)) == 1

    def test_oracle_agrees_on_pinned_values(self):
        assert hilbert_symbol_search(-1, -1, Place.prime(2)) == -1
        assert hilbert_symbol_search(-1, -1, REAL) == -1
        assert hilbert_symbol_search(2, 3, Place.prime(3)) == -1
        assert hilbert_symbol_search(2, -1, Place.prime(2)) == 1

    def test_formula_matches_search_oracle(self):
        rng = random.Random(41)
        for _ in range(150):
            a = random_rational(rng)
            b = random_rational(rng)
            place = rng.choice((REAL,) + tuple(Place.prime(p) for p in ORACLE_PRIMES))
            assert hilbert_symbol(a, b, place) == hilbert_symbol_search(a, b, place), (
                a,
                b,
                str(place),
            )

    def test_symmetry_and_square_class_invariance(self):
        rng = random.Random(42)
        for _ in range(100):
            a = random_rational(rng)
            b = random_rational(rng)
            place = rng.choice([REAL] + [Place.prime(p) for p in (2, 3, 5, 7)])
            assert hilbert_symbol(a, b, place) == hilbert_symbol(b, a, place)
            assert hilbert_symbol(a * 4, b * Fraction(1, 9), place) == hilbert_symbol(
                a, b, place
            )

    def test_bimultiplicativity(self):
        rng = random.Random(43)
        for _ in range(100):
            a1 = random_rational(rng)
            a2 = random_rational(rng)
            b = random_rational(rng)
            place = rng.choice([REAL] + [Place.prime(p) for p in (2, 3, 5, 7, 11)])
            assert hilbert_symbol(a1 * a2, b, place) == hilbert_symbol(
                a1, b, place
            ) * hilbert_symbol(a2, b, place)

    def test_global_product_formula(self):
        rng = random.Random(44)
        for _ in range(100):
            a = random_rational(rng)
            b = random_rational(rng)
            product = 1
            for place in relevant_places([a, b]):
                product *= hilbert_symbol(a, b, place)
            assert product == 1

    def test_trivial_outside_relevant_places(self):
        assert hilbert_symbol(3, 5, Place.prime(7)) == 1
        assert hilbert_symbol(-7, 11, Place.prime(13)) == 1

    def test_zero_arguments_rejected(self):
        with pytest.raises(ValueError):
            hilbert_symbol(0, 3, REAL)


class TestQuaternions:
    def test_split_when_first_slot_square(self):
        split, ramified = quaternion_is_split(QuaternionClass(1, 7))
        assert split and ramified == []

    def test_hamilton_quaternions(self):
        split, ramified = quaternion_is_split(QuaternionClass(-1, -1))
        assert not split
        assert ramified == [REAL, Place.prime(2)]

    def test_ramification_has_even_size(self):
        rng = random.Random(45)
        for _ in range(60):
            q = QuaternionClass(random_rational(rng), random_rational(rng))
            _, ramified = quaternion_is_split(q)
            assert len(ramified) % 2 == 0

    def test_split_iff_norm_form_isotropic(self):
        rng = random.Random(46)
        for _ in range(60):
            a = random_rational(rng)
            b = random_rational(rng)
            split, _ = quaternion_is_split(QuaternionClass(a, b))
            form = RationalQuadraticForm((a, b, Fraction(-1)))
            assert split == is_isotropic(form)

    def test_splits_over_quadratic(self):
        assert splits_over_quadratic(QuaternionClass(1, 5), 2)
        assert splits_over_quadratic(QuaternionClass(-1, -1), -1)
        assert not splits_over_quadratic(QuaternionClass(-1, -1), 17)

    def test_restriction_criterion_matches_direct_symbols(self):
        # restriction keeps the local invariant exactly where the local degree
        # is 1, i.e. where sqrt(d) already lives in the completion
        rng = random.Random(47)
        ds = [-1, 2, 3, 5, -2, -5, 17, 6]
        for _ in range(40):
            q = QuaternionClass(random_rational(rng), random_rational(rng))
            d = rng.choice(ds)
            expected = all(
                hilbert_symbol(q.a, q.b, v) == 1
                for v in relevant_places([q.a, q.b, d])
                if is_local_square(d, v)
            )
            assert splits_over_quadratic(q, d) == expected

    def test_corestriction_examples(self):
        assert corestriction_projection(-1, (0, 1), 2) == QuaternionClass(-1, -2)
        assert corestriction_projection(3, (1, 1), 2) == QuaternionClass(3, -1)
        split, _ = quaternion_is_split(corestriction_projection(5, (1, 0), 3))
        assert split

    def test_corestriction_rejects_zero(self):
        with pytest.raises(ValueError):
            corestriction_projection(3, (0, 0), 2)

    def test_res_cor_doubling(self):
        assert res_cor_doubling_check(QuaternionClass(-1, -1), 5)
        assert res_cor_doubling_check(QuaternionClass(2, 3), -1)
        assert res_cor_doubling_check(QuaternionClass(1, 7), 2)
        rng = random.Random(48)
        for _ in range(50):
            beta = QuaternionClass(random_rational(rng), random_rational(rng))
            d = squarefree_part(random_rational(rng))
            if d == 1:
                continue
            assert res_cor_doubling_check(beta, d)


class TestForms:
    def test_invariants_of_descent_form(self):
        p, q, r, d = 3, 5, 7, 2
        form = RationalQuadraticForm(
            (1, -d, -p, q, r, squarefree_part(-d * p * q * r))
        )
        inv = form_invariants(form)
        assert inv.dim == 6
        assert inv.disc == -1

    def test_trivial_invariants(self):
        inv = form_invariants(RationalQuadraticForm((1, 1)))
        assert inv.disc == 1
        assert inv.signature == (2, 0)
        assert all(h == 1 for _, h in inv.hasse)

    def test_hyperbolic_plane(self):
        form = RationalQuadraticForm((1, -1))
        assert form_invariants(form).disc == -1
        assert is_isotropic(form)

    def test_isotropy_examples(self):
        assert is_isotropic(RationalQuadraticForm((1, 1, -2)))       # (1,1,1)
        assert not is_isotropic(RationalQuadraticForm((1, 1, 1)))
        assert is_isotropic(RationalQuadraticForm((1, 1, 1, 1, -7)))
        assert not is_isotropic(RationalQuadraticForm((1,)))
        assert not is_isotropic(RationalQuadraticForm((2, 3)))
        assert is_isotropic(RationalQuadraticForm((2, -8)))

    def test_isotropy_against_small_witness_search(self):
        rng = random.Random(49)
        box = range(-6, 7)
        for _ in range(60):
            dim = rng.choice((2, 3))
            form = RationalQuadraticForm(
                tuple(rng.choice([x for x in range(-9, 10) if x]) for _ in range(dim))
            )
            witness = None
            if dim == 2:
                candidates = ((x, y) for x in box for y in box)
            else:
                candidates = ((x, y, z) for x in box for y in box for z in box)
            for vec in candidates:
                if any(vec) and sum(c * v * v for c, v in zip(form.diag, vec)) == 0:
                    witness = vec
                    break
            if witness is not None:
                assert is_isotropic(form), (form, witness)

    def test_anisotropic_four_dimensional(self):
        # the norm form of the Hamilton quaternions
        assert not is_isotropic(RationalQuadraticForm((1, 1, 1, 1)))
        assert is_isotropic(RationalQuadraticForm((1, 1, 1, -1)))

    def test_similarity_reflexive(self):
        form = RationalQuadraticForm((1, -2, 3))
        similar, c = forms_similar(form, form)
        assert similar and c == 1

    def test_scaled_hyperbolic(self):
        similar, c = forms_similar(
            RationalQuadraticForm((1, -1)), RationalQuadraticForm((2, -2))
        )
        assert similar and c in (1, 2, -1, -2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            forms_similar(RationalQuadraticForm((1,)), RationalQuadraticForm((1, 2)))

    def test_similarity_is_equivalence_relation(self):
        rng = random.Random(50)
        pool = [1, -1, 2, -2, 3, -3, 5, 6, -6]
        forms = [
            RationalQuadraticForm(tuple(rng.choice(pool) for _ in range(3)))
            for _ in range(8)
        ]
        for f in forms:
            assert forms_similar(f, f)[0]
        for f in forms:
            for g in forms:
                fg = forms_similar(f, g)[0]
                assert fg == forms_similar(g, f)[0]
                if fg:
                    for h in forms:
                        if forms_similar(g, h)[0]:
                            assert forms_similar(f, h)[0]

    def test_similar_forms_share_even_dim_discriminant(self):
        rng = random.Random(51)
        pool = [1, -1, 2, -2, 3, 5]
        for _ in range(25):
            f = RationalQuadraticForm(tuple(rng.choice(pool) for _ in range(4)))
            g = RationalQuadraticForm(tuple(rng.choice(pool) for _ in range(4)))
            if forms_similar(f, g)[0]:
                assert form_invariants(f).disc == form_invariants(g).disc


class TestAlbertForms:
    def test_descent_pair_example(self):
        form = albert_form(QuaternionClass(3, 2), QuaternionClass(30, 42))
        assert form.diag == tuple(
            Fraction(x) for x in (3, 2, -6, -30, -42, 35)
        )

    def test_split_pair(self):
        form = albert_form(QuaternionClass(1, 1), QuaternionClass(1, 1))
        assert form.diag == tuple(Fraction(x) for x in (1, 1, -1, -1, -1, 1))
        assert is_isotropic(form)

    def test_equal_classes_give_isotropic_form(self):
        rng = random.Random(52)
        for _ in range(40):
            q = QuaternionClass(random_rational(rng), random_rational(rng))
            assert is_isotropic(albert_form(q, q))

    def test_clifford_consistency(self):
        # the Albert form is isotropic iff the two classes agree locally
        # everywhere except possibly on an even set where both ramify jointly;
        # cheap sanity: split pair of distinct split classes stays isotropic
        form = albert_form(QuaternionClass(1, 3), QuaternionClass(4, 5))
        assert is_isotropic(form)


class TestDescentInstances:
    def test_worked_example(self):
        report = verify_quaternion_descent_instance(3, 5, 7, 2)
        assert isinstance(report, DescentReport)
        assert report.splits_over_extension
        assert report.residual_class == QuaternionClass(30, 42)
        assert report.isotropy_form.diag == tuple(
            Fraction(x) for x in (1, -2, -3, 5, 7, -210)
        )
        # over Q no biquaternion class is division (its Albert form is never
        # definite), so the division-split hypothesis cannot hold
        assert not report.hypothesis_division_split
        assert report.consistent

    def test_degenerate_split_case(self):
        report = verify_quaternion_descent_instance(1, 1, 1, 2)
        assert report.similar
        assert report.scale == 1
        assert report.consistent

    def test_negative_discriminant_instance(self):
        report = verify_quaternion_descent_instance(2, 3, 5, -1)
        assert report.splits_over_extension
        assert report.consistent

    def test_random_instances_consistent(self):
        rng = random.Random(53)
        count = 0
        while count < 12:
            p, q, r = (rng.choice([1, -1, 2, 3, -3, 5, 7, -7, 10]) for _ in range(3))
            d = rng.choice([-1, 2, 3, 5, -2, 6, -5, 17])
            report = verify_quaternion_descent_instance(p, q, r, d)
            assert report.splits_over_extension
            assert report.consistent
            count += 1

    def test_d_must_be_squarefree_nonsquare(self):
        with pytest.raises(ValueError):
            verify_quaternion_descent_instance(3, 5, 7, 4)
        with pytest.raises(ValueError):
            verify_quaternion_descent_instance(3, 5, 7, 1)
