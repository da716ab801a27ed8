import math

import numpy as np
import pytest

from deev.gridio import (AxisSpec, DiscrepancyReport, Field2D, GridSpec, Verdict, read_csv,
                         read_verdict, sample_field, write_csv, write_pgm, write_report)


def grid(c1=4, c2=3):
    return GridSpec(axis1=AxisSpec("x", -1.0, 2.0, c1), axis2=AxisSpec("y", 0.0, 1.0, c2))


def test_axis_validation():
    with pytest.raises(ValueError):
        AxisSpec("q", 0.0, 1.0, 5)
    with pytest.raises(ValueError):
        AxisSpec("x", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        AxisSpec("x", 2.0, 1.0, 5)
    with pytest.raises(ValueError):
        AxisSpec("x", 0.0, math.inf, 5)


def test_field_shape_validation():
    with pytest.raises(ValueError):
        Field2D(spec=grid(), values=np.zeros((3, 3)))
    with pytest.raises(ValueError):
        Field2D(spec=grid(), values=np.full((4, 3), np.nan))


def test_csv_round_trip_bitwise(tmp_path):
    rng = np.random.default_rng(0)
    f = Field2D(spec=grid(), values=rng.normal(size=(4, 3)) * 1e-7, metadata={"quantity": "test"})
    path = tmp_path / "f.csv"
    write_csv(f, str(path))
    g = read_csv(str(path))
    assert g.spec == f.spec
    assert (g.values == f.values).all()
    assert g.metadata["quantity"] == "test"
    # writing again is byte-identical
    path2 = tmp_path / "f2.csv"
    write_csv(g, str(path2))
    assert path.read_bytes() == path2.read_bytes()


def test_csv_two_by_two_has_four_rows(tmp_path):
    g2 = GridSpec(axis1=AxisSpec("x", 0.0, 1.0, 2), axis2=AxisSpec("y", 0.0, 1.0, 2))
    f = Field2D(spec=g2, values=np.ones((2, 2)))
    path = tmp_path / "unit.csv"
    write_csv(f, str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 2 + 4
    assert lines[1] == "x,y,value"


def test_csv_nonfinite_tokens(tmp_path):
    vals = np.array([[1.5, math.inf], [-math.inf, math.nan]])
    g2 = GridSpec(axis1=AxisSpec("r", 0.0, 1.0, 2), axis2=AxisSpec("s", 0.0, 1.0, 2))
    f = Field2D(spec=g2, values=vals, metadata={"allow_nonfinite": "true"})
    path = tmp_path / "inf.csv"
    write_csv(f, str(path))
    text = path.read_text()
    assert "inf" in text and "-inf" in text and "nan" in text
    g = read_csv(str(path))
    assert g.values[0, 1] == math.inf
    assert g.values[1, 0] == -math.inf
    assert math.isnan(g.values[1, 1])
    assert g.values[0, 0] == 1.5


def test_pgm_deterministic_and_uniform(tmp_path):
    f = Field2D(spec=grid(), values=np.full((4, 3), 2.5))
    p1, p2 = tmp_path / "a.pgm", tmp_path / "b.pgm"
    write_pgm(f, str(p1), clamp="auto")
    write_pgm(f, str(p2), clamp="auto")
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    assert b1.startswith(b"P5\n")
    # constant field renders uniform mid-gray
    body = b1.rsplit(b"65535\n", 1)[1]
    levels = np.frombuffer(body, dtype=">u2")
    assert (levels == 32768).all()


def test_pgm_mapping_and_clipping(tmp_path):
    vals = np.array([[-2.0, 0.0], [1.0, 5.0]])
    g2 = GridSpec(axis1=AxisSpec("x", 0.0, 1.0, 2), axis2=AxisSpec("y", 0.0, 1.0, 2))
    f = Field2D(spec=g2, values=vals)
    path = tmp_path / "c.pgm"
    write_pgm(f, str(path), clamp=1.0)
    data = path.read_bytes()
    assert b"# map vmin=-1 vmax=1" in data
    levels = np.frombuffer(data.rsplit(b"65535\n", 1)[1], dtype=">u2").reshape(2, 2)
    assert levels[0, 0] == 0          # below -clamp
    assert levels[0, 1] == 32768      # zero -> middle
    assert levels[1, 0] == 65535      # at +clamp
    assert levels[1, 1] == 65535      # above +clamp clips
    with pytest.raises(ValueError):
        write_pgm(f, str(path), clamp=-1.0)


def test_sample_field_thread_determinism():
    def fn(x, y):
        return np.sin(3 * x) * np.cos(2 * y) + x * y

    g = GridSpec(axis1=AxisSpec("x", -2.0, 2.0, 64), axis2=AxisSpec("y", -1.0, 1.0, 33))
    a = sample_field(fn, g, threads=1)
    b = sample_field(fn, g, threads=5)
    assert (a.values == b.values).all()


def report_fixture(verdict):
    return DiscrepancyReport(
        label="fixture",
        probes=((0.1, 0.2, 0.3, 0.4), (0.5, 0.6, 0.7, 0.8)),
        closed_form=(1.0, 2.0),
        oracle=(1.1, 2.2),
        ratios=(1.1, 1.1),
        nominal_constant=1.0,
        calibrated_constant=1.1,
        verdict=verdict,
        stable_under_halving=True,
    )


def test_report_round_trip(tmp_path):
    for verdict in Verdict:
        path = tmp_path / f"{verdict.name}.txt"
        write_report(report_fixture(verdict), str(path))
        lines = path.read_text().splitlines()
        assert lines[-1] == f"verdict={verdict.value}"
        assert read_verdict(str(path)) is verdict
        assert any(l.startswith("probe0=") for l in lines)
        assert any(l.startswith("calibrated_constant=") for l in lines)


def test_writes_fail_cleanly_on_missing_directory(tmp_path):
    f = Field2D(spec=grid(), values=np.zeros((4, 3)))
    missing = str(tmp_path / "nope" / "f.csv")
    with pytest.raises(OSError):
        write_csv(f, missing)
    with pytest.raises(OSError):
        write_pgm(f, missing, clamp="auto")
