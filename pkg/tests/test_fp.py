"""Core algebra: arithmetic, normal forms, bases, Hilbert series, morphisms."""

import pytest

from coniveau.fp import (
    AlgebraMorphism,
    DegreeCapError,
    Element,
    Generator,
    GradedPresentation,
    MorphismError,
    NonHomogeneousError,
    PresentationMismatchError,
    check_prime,
    in_ideal,
    regular_sequence_check,
    tensor,
)

from helpers import element_vector, oracle_ideal_dimension, oracle_in_span


def exterior(p, n, cap=10):
    return GradedPresentation(p, [Generator(f"x{i}", 1) for i in range(1, n + 1)], cap)


def lambda_mod_f(p=3):
    P = exterior(p, 4)
    x1, x2, x3, x4 = P.gens()
    return P.quotient([x1 * x2 + x3 * x4])


def test_check_prime():
    for p in (2, 3, 5, 7, 11):
        assert check_prime(p) == p
    for bad in (1, 4, 9, -3, 0):
        with pytest.raises(ValueError):
            check_prime(bad)


def test_parity_rules():
    with pytest.raises(ValueError):
        GradedPresentation(3, [Generator("x", 2, "odd")], 8)
    with pytest.raises(ValueError):
        GradedPresentation(2, [Generator("x", 1, "odd")], 8)
    # p = 2: odd-degree generators are polynomial
    P = GradedPresentation(2, [Generator("x", 1)], 8)
    assert not (P.gen("x") ** 5).is_zero()


# -- addition ---------------------------------------------------------------


def test_add_characteristic_two():
    P = exterior(2, 2)
    x1 = P.gen("x1")
    assert (x1 + x1).is_zero()


def test_add_distinct_terms():
    P = GradedPresentation(3, [Generator("y1", 2), Generator("y2", 2)], 8)
    y1, y2 = P.gens()
    assert str(y1 + y2) == "y1 + y2"


def test_add_mod_three():
    P = GradedPresentation(3, [Generator("y1", 2), Generator("y2", 2)], 8)
    y1, y2 = P.gens()
    assert (y1 + 2 * y2) + y2 == y1


def test_presentation_mismatch():
    P, Q = exterior(3, 2), exterior(3, 2)
    with pytest.raises(PresentationMismatchError):
        P.gen("x1") + Q.gen("x1")


# -- multiplication -----------------------------------------------------------


def test_exterior_square_vanishes():
    P = exterior(3, 2)
    assert (P.gen("x1") * P.gen("x1")).is_zero()


def test_koszul_sign():
    P = exterior(3, 2)
    x1, x2 = P.gens()
    assert x2 * x1 == -(x1 * x2)
    assert str(x2 * x1) == "2*x1*x2"


def test_frobenius_characteristic_two():
    P = GradedPresentation(2, [Generator("y1", 2), Generator("y2", 2)], 8)
    y1, y2 = P.gens()
    assert (y1 + y2) ** 2 == y1**2 + y2**2


def test_graded_commutativity_signs():
    P = GradedPresentation(3, [Generator("y", 2), Generator("x", 1), Generator("z", 1)], 12)
    y, x, z = P.gens()
    assert x * y == y * x          # even * odd commutes
    assert z * x == -(x * z)       # odd * odd anticommutes


def test_degree_cap_overflow():
    P = exterior(2, 2, cap=3)
    x1 = P.gen("x1")
    with pytest.raises(DegreeCapError):
        (x1**2) * (x1**2)


# -- normal forms ----------------------------------------------------------------


def test_relation_reduces_to_zero():
    Q = lambda_mod_f()
    x1, x2, x3, x4 = Q.gens()
    assert (x1 * x2 + x3 * x4).is_zero()


def test_normal_form_example():
    # x1*x2 = -x3*x4 modulo the symplectic form, checked against a brute
    # span oracle independent of the reduction engine
    Q = lambda_mod_f()
    x1, x2, x3, x4 = Q.gens()
    value = x1 * x2
    assert value == -(x3 * x4)
    free = exterior(3, 4)
    f = free.gen("x1") * free.gen("x2") + free.gen("x3") * free.gen("x4")
    diff = free.gen("x1") * free.gen("x2") - free.element(value.terms)
    assert oracle_in_span(element_vector(diff, 2), [element_vector(f, 2)], 3)


def test_normal_form_untouched_degree():
    P = GradedPresentation(3, [Generator("y1", 2), Generator("x1", 1)], 8)
    Q = P.quotient([P.gen("x1") * P.gen("y1")])
    assert Q.gen("y1") == Q.element({(1, 0): 1})


def test_normal_form_idempotent_linear():
    Q = lambda_mod_f()
    x1, x2, x3, x4 = Q.gens()
    e = x1 * x2 + 2 * x1 * x3
    assert e.normal_form() == e
    assert (x1 * x2 + x1 * x3).normal_form() == (x1 * x2).normal_form() + (x1 * x3).normal_form()


def test_is_zero():
    Q = lambda_mod_f()
    assert Q.zero().is_zero()
    assert not Q.gen("x1").is_zero()


# -- graded bases and Hilbert series ------------------------------------------------


def test_graded_basis_exterior_degree_one():
    P = exterior(3, 2)
    assert [str(b) for b in P.graded_basis(1)] == ["x1", "x2"]


def test_graded_basis_monomial_count():
    P = GradedPresentation(2, [Generator("w2", 2), Generator("w3", 3)], 12)
    assert {str(b) for b in P.graded_basis(6)} == {"w2^3", "w3^2"}


def test_graded_basis_quotient_size():
    Q = lambda_mod_f()
    assert len(Q.graded_basis(2)) == 5
    free = exterior(3, 4)
    f = free.gen("x1") * free.gen("x2") + free.gen("x3") * free.gen("x4")
    assert oracle_ideal_dimension(free, [f], 2) == 1  # 6 - 1 = 5


def test_graded_basis_deterministic():
    a = [str(b) for b in lambda_mod_f().graded_basis(2)]
    b = [str(b) for b in lambda_mod_f().graded_basis(2)]
    assert a == b


def test_hilbert_exterior():
    assert exterior(3, 2).hilbert_series(2) == [1, 2, 1]


def test_hilbert_polynomial_count():
    P = GradedPresentation(3, [Generator("y1", 2), Generator("y2", 2)], 10)
    assert P.hilbert_series(6)[6] == 4


def test_hilbert_quotient_series():
    # frozen from the brute-force oracle (and the rank-2 symplectic
    # reduction: 6-1, 4-4, 1-1 in degrees 2..4)
    assert lambda_mod_f().hilbert_series(5) == [1, 4, 5, 0, 0, 0]
    free = exterior(3, 4)
    f = free.gen("x1") * free.gen("x2") + free.gen("x3") * free.gen("x4")
    for d in range(5):
        full = len(free.monomials(d))
        assert lambda_mod_f().dimension(d) == full - oracle_ideal_dimension(free, [f], d)


def test_hilbert_free_matches_closed_form():
    from math import comb

    P = GradedPresentation(5, [Generator(f"y{i}", 2) for i in range(1, 4)], 20)
    for d in range(0, 21):
        expected = comb(d // 2 + 2, 2) if d % 2 == 0 else 0
        assert P.dimension(d) == expected


def test_hilbert_tensor_convolution():
    A = exterior(3, 2, cap=8)
    B = GradedPresentation(3, [Generator("u1", 2), Generator("u2", 2)], 8)
    T = tensor(A, B)
    sa, sb, st = A.hilbert_series(8), B.hilbert_series(8), T.hilbert_series(8)
    for d in range(9):
        assert st[d] == sum(sa[i] * sb[d - i] for i in range(d + 1))


def test_hilbert_cap_guard():
    with pytest.raises(DegreeCapError):
        exterior(2, 2, cap=4).hilbert_series(9)


# -- morphisms -------------------------------------------------------------------------


def test_identity_morphism():
    P = exterior(3, 2)
    ident = AlgebraMorphism(P, P, {"x1": P.gen("x1"), "x2": P.gen("x2")})
    e = P.gen("x1") * P.gen("x2") + P.gen("x1")
    assert ident(e) == e


def test_diagonal_restriction():
    src = exterior(3, 2)
    tgt = exterior(3, 1)
    x = tgt.gen("x1")
    diag = AlgebraMorphism(src, tgt, {"x1": x, "x2": x})
    assert diag(src.gen("x1") + src.gen("x2")) == 2 * x


def test_morphism_relation_check():
    Q = lambda_mod_f()
    free = exterior(3, 4)
    images = {f"x{i}": Q.gen(f"x{i}") for i in range(1, 5)}
    # free -> quotient is fine; quotient -> free must fail (relation not killed)
    AlgebraMorphism(free, Q, images)
    back = {f"x{i}": free.gen(f"x{i}") for i in range(1, 5)}
    with pytest.raises(MorphismError):
        AlgebraMorphism(Q, free, back)


def test_morphism_degree_check():
    P = exterior(3, 1)
    R = GradedPresentation(3, [Generator("y", 2)], 8)
    with pytest.raises(MorphismError):
        AlgebraMorphism(P, R, {"x1": R.gen("y")})


def test_simply_connected_style_image():
    from coniveau.certificates import elementary_abelian

    target = elementary_abelian(3, 3)
    src = GradedPresentation(3, [Generator("w", 4)], 16)
    image = target.resolve("alpha")
    j = AlgebraMorphism(src, target.detect_pres, {"w": image})
    assert j(src.gen("w")) == image
    assert j(src.gen("w") ** 2) == image * image


# -- ideals and regular sequences ----------------------------------------------------


def test_in_ideal():
    P = GradedPresentation(3, [Generator("y1", 2), Generator("y2", 2), Generator("x1", 1), Generator("x2", 1)], 10)
    y1, y2, x1, x2 = P.gens()
    assert in_ideal(y1 * x2, [y1, y2])
    assert not in_ideal(x1 * x2, [y1, y2])


def test_regular_sequence_repeated_element():
    P = GradedPresentation(3, [Generator("y", 2)], 12)
    y = P.gen("y")
    report = regular_sequence_check(P, [y, y], 12)
    assert not report.regular
    assert report.first_failure is not None


def test_regular_sequence_full_quotient():
    P = GradedPresentation(5, [Generator("y1", 2), Generator("y2", 2)], 12)
    report = regular_sequence_check(P, [P.gen("y1"), P.gen("y2")], 12)
    assert report.regular
    assert report.quotient_series == (1,) + (0,) * 12


def test_regular_sequence_rejects_nonfree():
    Q = lambda_mod_f()
    with pytest.raises(ValueError):
        regular_sequence_check(Q, [Q.gen("x1")], 4)


def test_regular_sequence_rejects_inhomogeneous():
    P = GradedPresentation(3, [Generator("y", 2)], 12)
    y = P.gen("y")
    with pytest.raises(NonHomogeneousError):
        regular_sequence_check(P, [y + y * y], 8)


# -- element bookkeeping -----------------------------------------------------------


def test_homogeneous_degree_accessor():
    P = exterior(3, 3)
    e = P.gen("x1") * P.gen("x2")
    assert e.degree() == 2
    with pytest.raises(NonHomogeneousError):
        (e + P.gen("x1")).degree()
    assert P.zero().degree() is None


def test_leading_monomial_and_coefficient():
    P = exterior(3, 3)
    x1, x2, x3 = P.gens()
    e = x2 * x3 + 2 * x1 * x2
    assert e.leading_monomial() == (1, 1, 0)
    assert e.coefficient((0, 1, 1)) == 1
    assert e.coefficient((1, 0, 1)) == 0


def test_str_canonical():
    P = exterior(3, 2)
    assert str(P.zero()) == "0"
    assert str(P.one() * 2) == "2"
    assert str(2 * P.gen("x1") * P.gen("x2")) == "2*x1*x2"
