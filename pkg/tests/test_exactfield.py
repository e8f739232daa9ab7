from fractions import Fraction

import pytest

from ellcmm.errors import (
    DivisionByZero,
    EvaluationPole,
    OddPowerResidue,
    PoleAtOrigin,
    TowerMismatch,
)
from ellcmm.exactfield import (
    PSeries,
    Tower,
    closed_form,
    eval_tower,
    even_power_project,
    generic_t,
    laurent_expand,
    parse_scalar,
    specialize_t,
    taylor_expand,
    valuation,
)


@pytest.fixture
def qst():
    return Tower(("Q", "S", "T"))


def test_tower_identity_and_fingerprint():
    a = Tower(("T", "Q"))
    b = Tower(("Q", "T"))
    assert a == b and hash(a) == hash(b)
    assert a.fingerprint == "Q,T"
    assert Tower(("Q",), beta=2).fingerprint == "Q;beta=2"
    assert Tower(("S",), values={"Q": Fraction(2, 3)}).fingerprint == "S;Q=2/3"


def test_tower_rejects_bad_combinations():
    with pytest.raises(ValueError):
        Tower(("Q", "T"), beta=1)
    with pytest.raises(ValueError):
        Tower(("Q", "S", "s"))
    with pytest.raises(ValueError):
        Tower(("Q",), beta=0)
    with pytest.raises(ValueError):
        Tower(("Q",), t_half=True)


def test_q_t_s_through_generators():
    tw = Tower(("Q",), beta=3)
    assert tw.t == tw.q**3
    assert tw.sqrt_t == tw.Q**3
    half = Tower(("Q", "T"), t_half=True)
    assert half.t == half.gen("T") ** 2
    st = Tower(("Q", "s", "T"))
    assert st.s == st.gen("s")
    with pytest.raises(OddPowerResidue):
        st.qts(S=1)
    with pytest.raises(TowerMismatch):
        Tower(("Q",)).s


def test_reduced_form_is_canonical(qst):
    q, t = qst.q, qst.t
    a = (1 - q * t) * (1 + q) / ((1 - q**2) * (1 - q * t))
    assert a == 1 / (1 - q)
    assert a.canonical() == parse_scalar(a.canonical(), qst).canonical()


def test_division_by_zero(qst):
    with pytest.raises(ZeroDivisionError):
        qst.one / qst.zero
    with pytest.raises(DivisionByZero):
        (qst.q - qst.q).inv()


def test_mixing_towers_is_an_error():
    a = Tower(("Q",)).q
    b = Tower(("Q", "T")).q
    with pytest.raises(TowerMismatch):
        a + b


def test_subs_and_pole(qst):
    q, t = qst.q, qst.t
    f = (1 - t) / (1 - q * t)
    assert f.subs("T", 0) == 1
    with pytest.raises(EvaluationPole):
        f.subs("T", q.inv())


def test_eval_tower():
    tw = Tower(("Q", "T"))
    f = (1 - tw.t) / (1 - tw.q)
    assert eval_tower(f, {"Q": Fraction(1, 2), "T": 3}) == Fraction(-2, 1) / Fraction(3, 4)
    with pytest.raises(EvaluationPole):
        eval_tower(f, {"Q": 1, "T": 3})


def test_even_power_project(qst):
    S = qst.S
    f = (1 - S**2 * qst.t) / (1 + S**4)
    g = even_power_project(f)
    assert g.tower.has("s")
    assert g == (1 - g.tower.s * g.tower.t) / (1 + g.tower.s**2)
    with pytest.raises(OddPowerResidue):
        even_power_project(S / (1 + S**2))


def test_laurent_and_taylor_expand():
    tw = Tower(("Q", "p"))
    p, q = tw.gen("p"), tw.q
    v, c = laurent_expand(q / (p**2 * (1 - q * p)), "p", 3)
    assert v == -2
    assert c == [q, q**2, q**3, q**4]
    assert taylor_expand(1 / (1 - p), "p", 4) == [tw.one] * 5
    with pytest.raises(PoleAtOrigin):
        taylor_expand(1 / p, "p", 2)
    assert valuation(p**3 / (1 + p), "p") == 3


def test_generic_t_specialization_removes_a_removable_point():
    # (1 - t^2) / (1 - t) at t = q^beta is fine, but also with t -> q^beta first.
    tw = Tower(("Q",), beta=1)
    value = closed_form(tw, lambda g: (1 - g.t**2) / (1 - g.t))
    assert value == 1 + tw.q
    g = generic_t(tw)
    assert g.has("T") and g.beta is None
    # a genuine pole stays a pole
    with pytest.raises(EvaluationPole):
        specialize_t(1 / (1 - g.t / g.q), tw)


def test_pseries_arithmetic():
    tw = Tower(("Q",))
    q = tw.q
    a = PSeries([tw.one, q, q**2])
    inv = a.inverse()
    prod = a * inv
    assert [c for c in prod] == [tw.one, tw.zero, tw.zero]
    assert (a / a)[0] == 1
    assert a.scale_param(q)[2] == q**4
    assert a.truncate(1).order == 1
