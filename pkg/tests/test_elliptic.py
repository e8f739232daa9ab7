import pytest

from ellcmm.elliptic import (
    ell_hamiltonian_apply,
    ell_hamiltonian_ratio_form,
    elliptic_vandermonde,
    lemma7_coefficient,
    ratio_to_xy,
    s_to_one_limit_check,
    stationary_candidate,
    stationary_eigencheck,
    theta_series,
    trig_vandermonde,
    vandermonde_ratio_check,
)
from ellcmm.errors import TowerMismatch
from ellcmm.exactfield import PSeries, Tower
from ellcmm.laurent import Laurent
from ellcmm.macdonald import divide_by_x2_minus_x1, macdonald_A1, trig_hamiltonian_apply

QT = Tower(("Q", "T"))


def test_theta_low_orders():
    tw = Tower(("Q",))
    c = tw.q
    th = theta_series(c, 1, 2)
    x = Laurent.monomial(tw, (1,), c)
    one = Laurent.constant(tw, 1)
    assert th[0] == one - x
    # (1 - x)(1 - p/x)(1 - p x) at p^1
    assert th[1] == (one - x) * (Laurent.monomial(tw, (-1,), c.inv()) + x) * (-1)


def test_theta_reflection():
    # theta(x) = -x theta(1/x)
    tw = Tower(("Q",))
    c = tw.q
    a = theta_series(c, 1, 3)
    b = theta_series(c.inv(), -1, 3)
    x = Laurent.monomial(tw, (1,), -c)
    assert all(a[d] == b[d] * x for d in range(4))


@pytest.mark.parametrize("beta", (1, 2, 3, 4))
def test_vandermonde_ratio_order_p(beta):
    ok, witness = vandermonde_ratio_check(beta)
    assert ok, witness


def test_vandermonde_needs_beta():
    with pytest.raises(TowerMismatch):
        elliptic_vandermonde(QT, 1)
    with pytest.raises(TowerMismatch):
        elliptic_vandermonde(Tower(("Q",), beta=2), 1, beta=3)


def test_trig_vandermonde_beta1():
    tw = Tower(("Q",), beta=1)
    v = trig_vandermonde(tw)
    one = tw.one
    assert v == Laurent(tw, 1, {(0,): 2 * one, (1,): -one, (-1,): -one})


def test_lemma7_coefficient_value():
    tw = Tower(("Q",), beta=1)
    assert lemma7_coefficient(tw) == -2 * (1 - tw.q) * tw.q / (tw.q * (1 - tw.q))


@pytest.mark.parametrize("j", range(4))
def test_hamiltonian_reduces_at_p0(j):
    f = PSeries([macdonald_A1(j, QT)])
    image = ell_hamiltonian_apply(f, 0)
    x1 = Laurent.monomial(QT, (1, 0))
    x2 = Laurent.monomial(QT, (0, 1))
    # theta(r) theta(1/r) at p^0 is (1 - x1/x2)(1 - x2/x1) = -(x2 - x1)^2 / (x1 x2)
    den = image.den[0]
    assert den == (x2 - x1) * (x2 - x1) * Laurent.monomial(QT, (-1, -1), -1)
    assert image.num[0] == den * trig_hamiltonian_apply(f[0])
    assert divide_by_x2_minus_x1(image.num[0]) == (x2 - x1) * Laurent.monomial(QT, (-1, -1), -1) * (
        f[0] * (1 + QT.t * QT.q**j)
    )


@pytest.mark.parametrize("j", (0, 1))
def test_stationary_candidates_are_eigenfunctions(j):
    report = stationary_eigencheck(stationary_candidate(j, QT), 1)
    assert report.passed, report.summary()
    eig = report.notes["eigenvalue"]
    assert len(eig) == 2
    assert QT.parse(eig[0]) == 1 + QT.t * QT.q**j


def test_perturbed_candidate_fails():
    cand = stationary_candidate(0, QT)
    bad = PSeries([cand[0], cand[1] * 2])
    report = stationary_eigencheck(bad, 1)
    assert not report.passed
    assert "residual" in report.cells[0].witness


def test_ratio_form_matches_cleared_form():
    cand = stationary_candidate(0, QT)
    report = stationary_eigencheck(cand, 1)
    eig = [QT.parse(e) for e in report.notes["eigenvalue"]]
    image = ell_hamiltonian_ratio_form(cand, 1)
    rt = image[0].tower
    r = rt.gen("r")
    phi = [cand[d].map_exponents(lambda k: (k[0],), nvars=1).map_coeffs(rt, rt).evaluate(r) for d in range(2)]
    assert image[0] == rt(eig[0]) * phi[0]
    assert image[1] == rt(eig[0]) * phi[1] + rt(eig[1]) * phi[0]


def test_stationary_data_only_for_low_j():
    with pytest.raises(ValueError):
        stationary_candidate(2, QT)


@pytest.mark.parametrize("j", (0, 1))
def test_s_to_one_limit(j):
    tw = Tower(("Q", "S", "T"), t_half=True)
    report = s_to_one_limit_check(j, tw)
    assert report.passed, report.summary()


def test_s_to_one_limit_negative_control():
    tw = Tower(("Q", "S", "T"), t_half=True)
    assert not s_to_one_limit_check(1, tw, stationary_j=0).passed


def test_ratio_to_xy():
    tw = Tower(("Q",))
    f = Laurent(tw, 1, {(2,): tw.q, (-1,): tw.one})
    assert ratio_to_xy(f) == Laurent(tw, 2, {(2, -2): tw.q, (-1, 1): tw.one})
