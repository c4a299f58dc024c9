import json
import math

import pytest
from hypothesis import given

from sibi.params import FieldPoint, ParameterError, SystemParams

from conftest import system_params


def test_si_bi_defaults(sibi):
    assert (sibi.A, sibi.delta, sibi.I2) == (1.4754, 2.488e-4, 9)
    assert sibi.I_nuc == 4.5 and sibi.m_max == 5.0 and sibi.dim == 20
    assert sibi.m_values() == [float(m) for m in range(-5, 6)]


def test_si_p_is_spin_half(sip):
    assert sip.dim == 4 and sip.m_max == 1.0
    assert sip.A == pytest.approx(0.1175)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"A": 0.0},
        {"A": -1.0},
        {"A": math.nan},
        {"delta": -1e-4},
        {"delta": 1.0},
        {"I2": 0},
        {"I2": 2.5},
        {"I2": True},
        {"gamma_e": 0.0},
        {"gamma_e": math.inf},
    ],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ParameterError):
        SystemParams(**kwargs)


@given(system_params())
def test_json_round_trip(p):
    assert SystemParams.from_json(p.to_json()) == p


def test_from_dict_partial_and_unknown():
    p = SystemParams.from_dict({"A_GHz": 0.5})
    assert p.A == 0.5 and p.I2 == 9
    with pytest.raises(ParameterError, match="unknown"):
        SystemParams.from_dict({"A": 1.0})
    with pytest.raises(ParameterError):
        SystemParams.from_json("[1, 2]")
    with pytest.raises(ParameterError):
        SystemParams.from_json("{not json")


def test_load(tmp_path, sibi):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"A_GHz": 1.4754, "I2": 9}))
    assert SystemParams.load(path) == sibi


def test_field_point_representations(sibi):
    fp = FieldPoint.from_field(sibi, 0.3)
    assert fp.omega0 == pytest.approx(0.3 * 28.0042)
    assert fp.omega0_tilde == pytest.approx(fp.omega0 / sibi.A)
    back = FieldPoint.from_omega0_tilde(sibi, fp.omega0_tilde)
    assert back.B == pytest.approx(0.3, rel=1e-15)
    with pytest.raises(ParameterError):
        sibi.field(-0.1)
