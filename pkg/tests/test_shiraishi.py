import json

import pytest

from ellcmm.errors import CacheError
from ellcmm.exactfield import Tower
from ellcmm.laurent import Laurent
from ellcmm.macdonald import macdonald_A1, macdonald_expand
from ellcmm.shiraishi import (
    cache_path,
    cached_shiraishi_series,
    lemma8_coeffs,
    order_one_combination,
    prop5_coeffs,
    reexpand_p_over_s,
    series_from_json,
    series_to_json,
    shiraishi_series,
    substitute_s,
    verify_prop5,
)

QST = Tower(("Q", "S", "T"))


@pytest.mark.parametrize("j", range(6))
def test_order_zero_is_macdonald(j):
    ser = shiraishi_series(j, 0, QST)
    assert ser[0] == macdonald_A1(j, ser.tower)


@pytest.mark.parametrize("beta", (1, 2))
def test_order_zero_with_beta(beta):
    ser = shiraishi_series(3, 0, Tower(("Q", "S"), beta=beta))
    assert ser[0] == macdonald_A1(3, ser.tower)


def test_j0_order_p_expansion():
    ser = shiraishi_series(0, 1, QST)
    st = ser.tower
    q, t, s = st.q, st.t, st.s
    side = q * (1 - t) * (1 - s * t**2) / (t * (1 - q * s * t) * (1 - q))
    const = (1 - t) * (q - s * t**2) / (t * (1 - s * t) * (1 - q)) + (1 - s * t**2) * (1 - q * s) * (1 - t) * (
        q - s * t
    ) / (t * (1 - q * s * t) * (1 - s * t) * (1 - q) * (1 - s))
    assert ser[1] == Laurent(st, 2, {(1, -1): side, (-1, 1): side, (0, 0): const})


@pytest.mark.parametrize("j", range(3))
def test_order_p_in_macdonald_basis(j):
    ser = shiraishi_series(j, 1, QST)
    st = ser.tower
    got = macdonald_expand(ser[1])
    reference = prop5_coeffs(j, st)
    fixed = prop5_coeffs(j, st, corrected=True)
    assert got.get(j + 2, st.zero) == reference[0]
    assert got.get(j - 2, st.zero) == (reference[2] if j >= 2 else st.zero)
    # the reference middle coefficient disagrees with the partition sum, the recomputed one does not
    assert got[j] != reference[1]
    assert got[j] == fixed[1]
    assert ser[1] == order_one_combination(j, fixed, st)


def _c1_recomputed(j, st):
    q, t, s = st.q, st.t, st.s
    bracket = 2 * q ** (2 * j) * t - q ** (j - 1) * (1 - q) ** 2 - q ** (j - 1) * (1 + q) * (t + q / t) + 2 / t
    return (q - s * t) * (1 - t) * bracket / ((1 - s) * (1 - q ** (j + 1) * t) * (1 - q ** (j - 1) * t) * (1 - q))


@pytest.mark.parametrize("j", range(4))
def test_middle_coefficient_recomputed_form(j):
    ser = shiraishi_series(j, 1, QST)
    assert macdonald_expand(ser[1])[j] == _c1_recomputed(j, ser.tower)


def test_reference_middle_coefficient_has_a_pole_at_t_equal_q():
    # the reference c1(0) carries 1/(1 - t/q); the partition sum is regular there
    from ellcmm.errors import EvaluationPole

    tw = Tower(("Q", "S"), beta=1)
    with pytest.raises(EvaluationPole):
        prop5_coeffs(0, tw.replace_gen("S", "s"))
    ser = shiraishi_series(0, 1, tw)
    assert ser[1] == order_one_combination(0, prop5_coeffs(0, ser.tower, corrected=True), ser.tower)


@pytest.mark.parametrize("j", range(2))
def test_reexpansion_in_macdonald_basis(j):
    ser = shiraishi_series(j, 3, QST)
    re = reexpand_p_over_s(ser, 1, headroom=1, check=True)
    st = re.tower
    assert re[0] == macdonald_A1(j, st)
    got = macdonald_expand(re[1])
    reference = lemma8_coeffs(j, st)
    fixed = lemma8_coeffs(j, st, corrected=True)
    assert got[j + 2] == reference[0]
    assert got[j] != reference[1]
    assert got[j] == fixed[1]
    # u1 is the s -> 0 value of the recomputed c1
    assert fixed[1] == prop5_coeffs(j, st, corrected=True)[1].subs("s", 0)


def test_reexpansion_j2_with_beta():
    tw = Tower(("Q", "S"), beta=2)
    ser = shiraishi_series(2, 3, tw)
    re = reexpand_p_over_s(ser, 1, headroom=1, check=True)
    assert re[1] == order_one_combination(2, lemma8_coeffs(2, re.tower, corrected=True), re.tower)
    assert macdonald_expand(re[1])[0] == lemma8_coeffs(2, re.tower)[2]


def test_reexpansion_needs_enough_terms():
    ser = shiraishi_series(0, 1, QST)
    with pytest.raises(ValueError):
        reexpand_p_over_s(ser, 1, headroom=1)


@pytest.mark.parametrize("j", range(3))
def test_reexpansion_does_not_depend_on_headroom(j):
    ser = shiraishi_series(j, 4, Tower(("Q", "S"), beta=2))
    outs = [reexpand_p_over_s(ser, 1, headroom=h, check=True).coeffs.coeffs for h in (0, 1, 2)]
    assert outs[0] == outs[1] == outs[2]


def test_substitute_s_zero_keeps_order_zero():
    ser = shiraishi_series(1, 1, Tower(("Q", "S"), beta=2))
    sub = substitute_s(ser, 0)
    assert sub[0] == ser[0]
    assert sub.s_mode == "substituted"


def test_evaluated_backend_prop5():
    report = verify_prop5(3, backend="evaluated", points=2, seed=5, corrected=True)
    assert report.passed
    assert len(report.points) == 2


# -- cache -----------------------------------------------------------------------


def test_cache_round_trip_is_bit_identical(tmp_path, monkeypatch):
    monkeypatch.delenv("ELLCMM_CACHE", raising=False)
    tw = Tower(("Q", "S"), beta=2)
    first = cached_shiraishi_series(1, 2, tw, tmp_path)
    path = cache_path(tmp_path, 1, 2, first.tower)
    text = path.read_text()
    second = cached_shiraishi_series(1, 2, tw, tmp_path)
    assert second.coeffs.coeffs == first.coeffs.coeffs
    assert json.dumps(series_to_json(second), indent=1) == text


def test_env_var_overrides_directory(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("ELLCMM_CACHE", str(env_dir))
    tw = Tower(("Q", "S"), beta=1)
    cached_shiraishi_series(0, 1, tw, tmp_path / "arg")
    assert list(env_dir.glob("*.json"))
    assert not (tmp_path / "arg").exists()


def test_corrupted_cache_raises(tmp_path, monkeypatch):
    monkeypatch.delenv("ELLCMM_CACHE", raising=False)
    tw = Tower(("Q", "S"), beta=1)
    ser = cached_shiraishi_series(0, 1, tw, tmp_path)
    path = cache_path(tmp_path, 0, 1, ser.tower)
    path.write_text(path.read_text()[:-20])
    with pytest.raises(CacheError):
        cached_shiraishi_series(0, 1, tw, tmp_path)
    data = series_to_json(ser)
    data["schema"] = 99
    with pytest.raises(CacheError):
        series_from_json(data, ser.tower)
    data = series_to_json(ser)
    with pytest.raises(CacheError):
        series_from_json(data, Tower(("Q", "s"), beta=2))
    del data["coeffs"][0]["terms"]
    with pytest.raises(CacheError):
        series_from_json(data, ser.tower)


@pytest.mark.parametrize("j", range(4))
def test_symmetry_reported_through_order_three(j):
    ser = shiraishi_series(j, 3, Tower(("Q", "S"), beta=2))
    assert ser.asymmetric_orders() == []
