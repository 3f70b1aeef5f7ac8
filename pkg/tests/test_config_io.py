from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohmkn.config import DEFAULT_CONFIG, default_config_text, parse_config
from bohmkn.errors import ConfigError
from bohmkn.io import Table, read_csv, render, to_csv
from bohmkn.units import SI_ELECTRON


def _doc(**over):
    d = json.loads(default_config_text())
    d.update(over)
    return json.dumps(d, indent=2)


def test_default_parses():
    sc = parse_config(default_config_text())
    assert sc.N == DEFAULT_CONFIG["ensemble"]["N"] and sc.grid_points().shape == (5, 4)


@pytest.mark.parametrize("mutate,field", [
    (lambda d: d["packet"].update(sigmaI=[1, -1, 1, 1]), "packet.sigmaI[1]"),
    (lambda d: d["packet"].update(u=[1, 0, 0]), "packet.u"),
    (lambda d: d["packet"].update(M=2.0), "packet.M"),
    (lambda d: d["ensemble"].update(N=0), "ensemble.N"),
    (lambda d: d["ensemble"].update(weighting="flat"), "ensemble.weighting"),
    (lambda d: d["ensemble"].update(weighting="equalPair"), "ensemble.amp"),
    (lambda d: d.update(units="cgs"), "units"),
    (lambda d: d.update(colour="red"), "colour"),
    (lambda d: d.update(radii=[]), "radii"),
    (lambda d: d["output"].update(format="xml"), "output.format"),
])
def test_validation_names_field_and_line(mutate, field):
    d = json.loads(default_config_text())
    mutate(d)
    text = json.dumps(d, indent=2)
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert e.value.field == field
    assert e.value.line is not None and e.value.line >= 1


def test_malformed_json():
    with pytest.raises(ConfigError) as e:
        parse_config('{"packet": ')
    assert e.value.line == 1


def test_si_preset_converts_lengths():
    sc = parse_config(json.dumps({"units": "SI-electron",
                                  "packet": {"u": [1, 0, 0, 0], "sigmaI": [1e-10] * 4}}))
    assert np.allclose(sc.packet.sigma_i, 1.0) and sc.packet.hbar == SI_ELECTRON.hbar
    # Gamma in 1/s for a one-angstrom packet
    assert SI_ELECTRON.rate_si(sc.packet.gamma[0]) == pytest.approx(5.78e15, rel=5e-3)


def test_spin_offset():
    sc = parse_config(_doc(spin={"J": [0, 0, 2.0]}))
    assert np.allclose(sc.offset, [0, 0, 0, 2.0j])


floats = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(floats, min_size=1, max_size=8))
def test_csv_floats_round_trip_exactly(vals):
    t = Table(["v"], [[v] for v in vals], {"note": "x"})
    back = read_csv(to_csv(t))
    assert [float(r[0]) for r in back.rows] == vals
    assert back.header["note"] == "x"


def test_json_mirrors_csv():
    t = Table(["a", "b"], [[0.1, True], [np.float64(2.5), False]], {"k": [1.0, 2.0]})
    doc = json.loads(render(t, "json"))
    assert doc["columns"] == ["a", "b"] and doc["rows"][1] == [2.5, False] and doc["header"]["k"] == [1.0, 2.0]
    with pytest.raises(ValueError):
        render(t, "xml")


def test_shipped_configs_parse():
    from pathlib import Path
    files = sorted((Path(__file__).resolve().parents[1] / "configs").glob("*.json"))
    assert files
    for f in files:
        parse_config(f.read_text())
