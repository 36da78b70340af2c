import math

import pytest

import puccilab as pl


def test_modulus_and_dini():
    w = pl.Modulus.power(0.5, 1.0)
    assert w.eval(0.25) == pytest.approx(0.5)
    v = pl.dini_integral(w, 1.0)
    assert v.is_dini
    assert v.integral_value == pytest.approx(2.0)
    assert not pl.dini_integral(pl.Modulus.log_inverse(1.0, 1.0), 1.0).is_dini


def test_rescale():
    r1, scaled = pl.rescale_to_small(pl.Modulus.power(1.0, 1.0), 0.25)
    assert r1 == pytest.approx(0.25)
    assert scaled.eval(1.0) <= 0.25


def test_pucci():
    ell = pl.EllipticityPair(1.0, 2.0)
    assert pl.pucci_plus(2.0, 0.0, -2.0, ell) == pytest.approx(2.0)
    assert pl.pucci_minus(2.0, 0.0, -2.0, ell) == pytest.approx(-2.0)


def test_ak_sequence():
    rep = pl.ak_sequence(pl.Modulus.zero(), c0=0.25, eta=0.25, alpha0=0.5, K=40)
    assert rep.partial_sum == pytest.approx(0.5)
    assert rep.bound_3c0_ok


def test_growth_product_fixture():
    a = pl.growth_product(pl.Modulus.log_inverse(1.0, 1.0), 0.125, 0.5, 60, +1)
    assert a[60] == pytest.approx(1.8491749574488616, rel=1e-14)


def test_solve_and_scenario():
    dom = pl.DomainSpec.half_ball(1.0)
    assert dom.inside(0.0, 0.5)
    rows, residual, iterations = pl.solve_dirichlet(
        dom, "pucci_plus", h=1 / 16, f=lambda x1, x2: 2.0,
        g_wall=lambda x1, x2: x1 * x1 - x2 * x2,
        g_sphere=lambda x1, x2: x1 * x1 - x2 * x2,
    )
    assert residual <= 1e-8
    err = max(abs(u - (x1 * x1 - x2 * x2)) for x1, x2, u in rows)
    assert err <= 1e-6

    rep = pl.run_scenario(
        "hopf", pl.DomainSpec.graph_interior_plus(pl.Modulus.power(0.5, 1.0)), h=1 / 32
    )
    assert rep.all_pass()
    assert all(q > 0 for q in rep.q)
