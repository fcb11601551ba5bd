import pytest

import oracles
from arboreal import eisenstein as eis
from arboreal.cyclotomic import context


def poly(p, coeffs):
    return eis.CycPolynomial.from_list(p, coeffs)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_translation_family(p):
    rows = eis.translation_family_check(p)
    assert [r["i"] for r in rows] == list(range(2, p + 1))
    assert all(r["strong"] and r["translate"] and r["matches_target"] for r in rows)


@pytest.mark.parametrize("p,i", [(p, i) for p in (3, 5, 7) for i in range(2, p + 1)])
def test_twisted_family(p, i):
    rep = eis.corollary_family_check(p, i, 2)
    assert rep["orbit_identity"] and rep["unit_twist_identity"]
    assert rep["constant_term_valuations"] == [1, 1]
    assert rep["verdict"]


def test_orbit_identity_direct():
    for p in (3, 5, 7):
        ctx = context(p)
        for i in range(2, p + 1):
            c0 = eis.twisted_polynomial(p, i)(ctx.scalar(0))
            assert c0 == ctx.zeta_power(i) - ctx.zeta


def test_indirect_coverage_beyond_cap():
    rep = eis.corollary_family_check(7, 7, 4)
    methods = [c["method"] for c in rep["coverage"]]
    assert methods == ["expanded", "expanded", "indirect", "indirect"]
    assert rep["verdict"]


def test_associates_of_ramified_prime():
    for p in (3, 5, 7):
        assert set(eis.associate_valuations(p).values()) == {1}


def test_valuations_match_division_oracle():
    p = 5
    f = eis.twisted_polynomial(p, 3)
    assert f.valuations()[:-1] == [oracles.ramified_valuation_by_division(list(c.coeffs), p)
                                   for c in f.coeffs[:-1]]


def test_modes():
    p = 3
    z = context(p).zeta
    f = poly(p, [1 - z, 3, 1])  # middle valuation 2
    assert eis.eisenstein_check(f, "standard") and eis.eisenstein_check(f, "strong")
    g = poly(p, [1 - z, 1 - z, 1])
    assert eis.eisenstein_check(g, "standard") and not eis.eisenstein_check(g, "strong")
    with pytest.raises(ValueError):
        eis.eisenstein_check(f, "weak")
    with pytest.raises(ValueError):
        eis.translate_check(g, z)


def test_composition_matches_evaluation():
    p = 5
    ctx = context(p)
    f = eis.twisted_polynomial(p, 2)
    ff = f.compose(f)
    for x in (ctx.scalar(0), ctx.zeta, ctx.element([1, 2, 0, -1])):
        assert ff(x) == f(f(x))


def test_expanded_iterate_cap():
    with pytest.raises(ValueError):
        eis.expanded_iterate(7, 7, 3)


def test_bad_twist_index():
    with pytest.raises(ValueError):
        eis.corollary_family_check(5, 1, 2)


def test_phi_is_eisenstein_and_x2_plus_1_is_not():
    for p in (3, 5, 7):
        assert eis.eisenstein_check(eis.twisted_polynomial(p, p), "standard")
        f = poly(p, [1 - context(p).zeta] + [0] * (p - 1) + [1])
        assert eis.eisenstein_check(f, "strong")
    assert not eis.eisenstein_check(poly(3, [1, 0, 1]))


def test_translate_by_zero_is_identity():
    p = 5
    f = poly(p, [1 - context(p).zeta] + [0] * (p - 1) + [1])
    ok, g = eis.translate_check(f, context(p).scalar(0))
    assert g == f and ok


def test_degree_27_iterate():
    g = eis.expanded_iterate(3, 2, 3)
    assert g.degree == 27 and eis.eisenstein_check(g)
    ctx = context(3)
    assert g.coeffs[0] == ctx.zeta_power(2) - ctx.zeta


def test_phi_is_the_i_equals_p_member():
    from arboreal.dynamics import unicritical_phi
    ctx = context(5)
    f = eis.twisted_polynomial(5, 5)
    for x in (ctx.scalar(2), ctx.element([1, 0, -3, 2])):
        assert f(x) == unicritical_phi(5)(x)
