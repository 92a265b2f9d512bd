"""Laurent calculus, motive membership, integral rings, obstruction tests."""

import random

import pytest

from coniveau.motivic import (
    MotivicElementaryAbelian,
    MotivicError,
    RankMismatchError,
    RostBasis,
    RostMotiveBigraded,
    decomposition_ranks,
    dh_quadric_check,
    laurent,
    laurent_mul,
    laurent_q0,
    n1_membership,
    quadric_etale_ring,
    rost_etale_ring,
    rost_membership,
    tau_quotient_kernel,
    unramified_quotient_quadric,
)


def random_laurent(rng, n, nterms=3):
    bound = 2 ** (n + 1) - 1
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        terms[(rng.randrange(0, bound), rng.randint(-6, 6))] = 1
    return _from_terms(n, terms)


def _from_terms(n, terms):
    from coniveau.motivic import LaurentElement

    return LaurentElement(n, terms)


# -- the Laurent ring -----------------------------------------------------------


def test_tau_times_inverse():
    assert laurent_mul(laurent(3, 0, 1), laurent(3, 0, -1)) == laurent(3, 0, 0)


def test_rho_truncation():
    n = 3
    top = 2 ** (n + 1) - 2
    assert laurent_mul(laurent(n, top, 0), laurent(n, 1, 0)).is_zero()


def test_a_prime_is_a_times_tau_inverse():
    n = 3
    basis = RostBasis(n)
    a = basis.element("a")
    assert laurent_mul(a, laurent(n, 0, -1)) == basis.element("a'")


def test_bidegrees():
    e = laurent(2, 3, -1)  # rho^3 tau^-1
    assert e.bidegree() == (3, 2)
    with pytest.raises(MotivicError):
        (laurent(2, 1, 0) + laurent(2, 2, 0)).bidegree()


# -- the degree-raising differential ------------------------------------------------


def test_q0_tau_inverse():
    assert laurent_q0(laurent(3, 0, -1)) == laurent(3, 1, -2)


def test_q0_kills_a():
    basis = RostBasis(3)
    assert laurent_q0(basis.element("a")).is_zero()


def test_q0_a_prime():
    for n in (2, 3):
        basis = RostBasis(n)
        assert laurent_q0(basis.element("a'")) == laurent(n, n + 2, -2)


def test_q0_square_zero_randomized():
    rng = random.Random(20260811)
    for _ in range(300):
        n = rng.choice((2, 3, 4))
        e = random_laurent(rng, n)
        assert laurent_q0(laurent_q0(e)).is_zero()


def test_q0_derivation_identity_randomized():
    # Q_0(tau * e) = rho * e + tau * Q_0(e)
    rng = random.Random(99)
    for _ in range(300):
        n = rng.choice((2, 3))
        e = random_laurent(rng, n)
        tau, rho = laurent(n, 0, 1), laurent(n, 1, 0)
        assert laurent_q0(tau * e) == rho * e + tau * laurent_q0(e)


def test_q0_leibniz_randomized():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.choice((2, 3))
        a, b = random_laurent(rng, n), random_laurent(rng, n)
        assert laurent_q0(a * b) == laurent_q0(a) * b + a * laurent_q0(b)


# -- motive membership ----------------------------------------------------------------


def brute_reachable(n):
    """Oracle: all subalgebra monomials by bounded product enumeration."""
    basis = RostBasis(n)
    gens = list(basis.generators.values())
    bound = 2 ** (n + 1) - 2
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        s, t = frontier.pop()
        for (ds, dt) in gens:
            nxt = (s + ds, t + dt)
            if nxt[0] <= bound and nxt[1] <= bound and nxt[1] >= -bound and nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


@pytest.mark.parametrize("n", [1, 2, 3])
def test_membership_against_brute_oracle(n):
    basis = RostBasis(n)
    reachable = brute_reachable(n)
    bound = 2 ** (n + 1) - 2
    for s in range(bound + 1):
        for t in range(-bound, bound + 1):
            assert basis.contains_monomial(s, t) == ((s, t) in reachable), (s, t)


def test_membership_examples():
    basis = RostBasis(3)
    assert rost_membership(basis.element("a'"), basis)
    assert rost_membership(laurent(3, 0, 5), basis)          # tau^5
    for n in (2, 3):
        b = RostBasis(n)
        assert not rost_membership(laurent(n, 1, -1), b)     # rho tau^-1


def test_generator_list_matches_bidegree_formula():
    basis = RostBasis(3)
    assert basis.generators["Q0(a')"] == (5, -2)
    assert basis.generators["Q0Q1(a')"] == (8, -4)
    # the full-length product overflows the truncation and is dropped
    assert "Q0Q1Q2(a')" not in basis.generators
    # Q_0 of a' computed by the derivation agrees with the listed generator
    assert laurent_q0(basis.element("a'")) == basis.element("Q0(a')")


# -- obstruction verdicts ---------------------------------------------------------------


def test_n1_low_degrees_no_preimage():
    for n in (2, 3):
        basis = RostBasis(n)
        for s in range(1, n + 1):
            v = n1_membership(s, basis)
            assert v.in_n1 is False and v.candidate is None
            assert "no tau-preimage" in v.reason


def test_n1_first_obstruction():
    for n in (2, 3):
        v = n1_membership(n + 1, RostBasis(n))
        assert v.in_n1 is False
        assert v.candidate == str(laurent(n, n + 1, -1))
        assert v.obstruction == str(laurent(n, n + 2, -2))


def test_n1_second_obstruction_is_rho_times_prior():
    for n in (2, 3):
        basis = RostBasis(n)
        v = n1_membership(n + 2, basis)
        assert v.in_n1 is False
        b_prime = laurent_q0(basis.element("a'"))
        assert v.obstruction == str(laurent(n, 1, 0) * b_prime)


def test_n1_top_class_is_member():
    n = 3
    v = n1_membership(2 ** (n + 1) - 2, RostBasis(n))
    assert v.in_n1 is True


def test_n1_range_check():
    with pytest.raises(ValueError):
        n1_membership(0, RostBasis(2))
    with pytest.raises(ValueError):
        n1_membership(7, RostBasis(2))


# -- integral rings ------------------------------------------------------------------


def test_rost_ring_n2():
    r = rost_etale_ring(2)
    assert r.torsion_basis == (("rho4", 4),)
    assert r.algebraic == frozenset({"1", "pi", "rho4"})
    assert r.free_basis == (("1", 0), ("pi", 6))


def test_rost_ring_n3():
    r = rost_etale_ring(3)
    assert r.torsion_basis == (("rho4", 4), ("rho4^2", 8), ("rho4^3", 12))
    assert r.algebraic == frozenset({"1", "pi", "rho4^2", "rho4^3"})
    assert r.ranks(0) == (1, 0)


def test_quadric_ring_n3_additive_structure():
    ring = quadric_etale_ring(3)
    expected_torsion = {4: 1, 6: 1, 8: 2, 10: 1, 12: 1}
    for d in range(0, 15, 2):
        free, tor = ring.ranks(d)
        assert free == 1, d
        assert tor == expected_torsion.get(d, 0), d
    assert "pi = h^7" in ring.notes


def test_quadric_ring_n3_cycle_image_quotient():
    ring = quadric_etale_ring(3)
    not_algebraic = [name for name, _ in ring.torsion_basis if name not in ring.algebraic]
    assert not_algebraic == ["rho4"]


def test_quadric_ring_n2():
    ring = quadric_etale_ring(2)
    assert ring.torsion_basis == (("rho4", 4),)
    assert [d for _, d in ring.free_basis] == [0, 2, 4, 6]
    # the redundant relation is dropped from the reduced list
    assert "h^2*rho4" not in ring.minimal_relations
    assert set(ring.minimal_relations) == {"2*rho4", "h^4", "h*rho4", "rho4^2"}


def test_quadric_ranks_match_decomposition():
    for n in (2, 3, 4):
        ring = quadric_etale_ring(n)
        for d in range(0, ring.max_degree() + 1, 2):
            assert ring.ranks(d) == decomposition_ranks(n, d), (n, d)


def test_decomposition_examples():
    assert decomposition_ranks(3, 0) == (1, 0)
    assert decomposition_ranks(3, 8) == (1, 2)
    assert decomposition_ranks(3, 14) == (1, 0)
    with pytest.raises(ValueError):
        decomposition_ranks(3, 5)


def test_unramified_quotient():
    u3 = unramified_quotient_quadric(3)
    assert [name for name, _ in u3.torsion_basis] == ["rho4", "rho4^2", "rho4^3"]
    assert u3.free_basis == (("1", 0),)
    assert unramified_quotient_quadric(2).torsion_basis == (("rho4", 4),)
    assert unramified_quotient_quadric(1).torsion_basis == ()


def test_dh_quadric_check():
    for n in (2, 3):
        cert = dh_quadric_check(n)
        assert cert.verdict == "DH=0"
        assert all(v.rejected() for v in cert.torsion_checks)
        assert any("reciprocity" in line for line in cert.detail)


def test_dh_quadric_negative_control():
    cert = dh_quadric_check(2, force_n1=(4,))
    assert cert.verdict == "cannot conclude"


def test_torsion_generators_all_rejected():
    for n in (2, 3):
        basis = RostBasis(n)
        ring = rost_etale_ring(n)
        for _, degree in ring.torsion_basis:
            assert n1_membership(degree, basis).rejected()


# -- tau quotient / kernel ----------------------------------------------------------


def test_tau_quotient_elementary_total():
    for p, n in ((3, 2), (2, 3)):
        model = MotivicElementaryAbelian(p, n)
        total = []
        for m in range(0, n + 3):
            quotient, kernel = tau_quotient_kernel(model, m)
            assert kernel == []
            total.extend(quotient)
        assert len(total) == 2**n
        squarefree = [t for t in total if "y" not in t and "tau" not in t]
        assert len(squarefree) == 2**n


def test_tau_quotient_point():
    model = MotivicElementaryAbelian(3, 0)
    assert tau_quotient_kernel(model, 0) == (["1"], [])
    assert tau_quotient_kernel(model, 1) == ([], [])


def test_tau_quotient_rost_motive():
    n = 3
    model = RostMotiveBigraded(n)
    # in the degree of a = rho^(n+1) the quotient dies (a = tau * a')
    q, k = tau_quotient_kernel(model, n + 1)
    assert q == [] and k == []
    # in low degrees rho^m generates the quotient
    q, _ = tau_quotient_kernel(model, 1)
    assert q == ["rho"]


def quadric_monomial_product(n, a, b):
    """(j,i) pairs multiply by exponent addition; the four monomial
    relations of the quadric ring decide vanishing."""
    j, i = a[0] + b[0], a[1] + b[1]
    if j >= 2**n or i >= 2 ** (n - 1):
        return None
    if j >= 1 and i >= 2 ** (n - 2):
        return None
    if j >= 2 ** (n - 1) and i >= 1:
        return None
    return (j, i)


def _quadric_monomials(n):
    monos = [(j, 0) for j in range(2**n)]
    for j in range(2**n):
        for i in range(1, 2 ** (n - 1)):
            if quadric_monomial_product(n, (j, i), (0, 0)):
                monos.append((j, i))
    return monos


def _name_of(j, i):
    from coniveau.motivic import _quadric_name

    if i == 0:
        return "1" if j == 0 else ("h" if j == 1 else f"h^{j}")
    return _quadric_name(j, i)


@pytest.mark.parametrize("n", [2, 3])
def test_flag_closure_under_multiplication(n):
    # positive-degree cycle-map-image classes times any class stay flagged
    # (or die); the unit is excluded: only positive-codimension classes are
    # transfer classes
    ring = quadric_etale_ring(n)
    monos = _quadric_monomials(n)
    flagged = [m for m in monos if m != (0, 0) and _name_of(*m) in ring.algebraic]
    for a in flagged:
        for b in monos:
            prod = quadric_monomial_product(n, a, b)
            if prod is not None:
                assert _name_of(*prod) in ring.algebraic, (a, b, prod)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hyperplane_ideal_closure(n):
    # the reciprocity flag proper: hyperplane multiples form an ideal
    monos = _quadric_monomials(n)
    for a in monos:
        if a[0] < 1:
            continue
        for b in monos:
            prod = quadric_monomial_product(n, a, b)
            if prod is not None:
                assert prod[0] >= 1
