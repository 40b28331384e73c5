import warnings
from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathdep.catalog import (
    DUPLICATE_NUDGE,
    CatalogParseError,
    load_catalog,
    parse_timestamp,
    read_normalized,
    write_catalog,
)

START, END = "2008-01-01T00:00:00Z", "2023-01-01T00:00:00Z"


def write(tmp_path, text, name="cat.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_header_only(tmp_path):
    p = write(tmp_path, "time,magnitude\n")
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        cat = load_catalog(p, start=START, end=END)
    assert len(cat) == 0
    assert cat.horizon == pytest.approx(15.0, abs=0.01)
    assert any("no events" in str(x.message) for x in w)


def test_threshold_filter(tmp_path):
    p = write(tmp_path, "time,magnitude\n2010-01-01T00:00:00Z,5.2\n2011-01-01T00:00:00Z,4.9\n2012-06-01T12:00:00Z,6.0\n")
    cat = load_catalog(p, 5.0, START, END)
    assert len(cat) == 2
    np.testing.assert_array_equal(cat.magnitudes, [5.2, 6.0])


def test_inclusive_threshold(tmp_path):
    p = write(tmp_path, "time,magnitude\n2010-01-01T00:00:00Z,5.0\n")
    assert len(load_catalog(p, 5.0, START, END)) == 1


def test_fractional_years(tmp_path):
    p = write(tmp_path, "time,magnitude,lat,lon\n2008-07-02T03:00:00Z,5.5,31.0,103.4\n")
    cat = load_catalog(p, 5.0, START, END)
    secs = (datetime(2008, 7, 2, 3, tzinfo=timezone.utc) - datetime(2008, 1, 1, tzinfo=timezone.utc)).total_seconds()
    assert cat.times[0] == pytest.approx(secs / (365.25 * 86400), rel=1e-14)


def test_window_and_sorting(tmp_path):
    p = write(tmp_path, "time,magnitude\n2015-01-01,5.5\n2007-05-01,6.0\n2009-01-01,5.1\n2024-01-01,7.0\n")
    cat = load_catalog(p, 5.0, START, END)
    assert len(cat) == 2 and np.all(np.diff(cat.times) > 0)


def test_duplicates_nudged(tmp_path):
    row = "2010-05-12T06:28:00Z,5.5\n"
    p = write(tmp_path, "time,magnitude\n" + row * 3)
    cat = load_catalog(p, 5.0, START, END)
    np.testing.assert_allclose(np.diff(cat.times), DUPLICATE_NUDGE, rtol=1e-3)


def test_parse_error_row(tmp_path):
    p = write(tmp_path, "time,magnitude\n2010-01-01,5.5\nnot-a-date,5.5\n")
    with pytest.raises(CatalogParseError) as exc:
        load_catalog(p, 5.0, START, END)
    assert exc.value.row == 3
    p = write(tmp_path, "time,magnitude\n2010-01-01,big\n", "b.csv")
    with pytest.raises(CatalogParseError, match="row 2"):
        load_catalog(p, 5.0, START, END)


def test_missing_columns(tmp_path):
    with pytest.raises(CatalogParseError):
        load_catalog(write(tmp_path, "date,mag\n2010-01-01,5\n"), 5.0, START, END)


def test_timestamp_forms():
    a = parse_timestamp("2010-01-01T00:00:00Z")
    assert a == parse_timestamp("2010-01-01 00:00:00") == parse_timestamp("2010-01-01T08:00:00+08:00")


def test_roundtrip(tmp_path):
    p = write(tmp_path, "time,magnitude\n2010-01-01,5.5\n2012-03-04T05:06:07Z,6.1\n")
    cat = load_catalog(p, 5.0, START, END)
    out = tmp_path / "norm.csv"
    write_catalog(cat, out)
    assert out.read_text().splitlines()[0] == "t_years,magnitude"
    back = read_normalized(out, cat.horizon)
    np.testing.assert_array_equal(back.times, cat.times)


@given(st.lists(st.tuples(st.integers(0, 10**8), st.floats(3.0, 8.0)), max_size=40), st.floats(4.0, 7.0))
def test_filter_idempotent(rows, thr):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        lines = ["time,magnitude"] + [
            f"{datetime.fromtimestamp(1199145600 + s, tz=timezone.utc).isoformat()},{m!r}" for s, m in rows
        ]
        p = Path(d) / "c.csv"
        p.write_text("\n".join(lines) + "\n")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cat = load_catalog(p, thr, START, END)
            assert np.all(cat.times >= 0) and np.all(cat.times <= cat.horizon)
            assert np.all(np.diff(cat.times) > 0)
            # rewrite what survived and filter again
            q = Path(d) / "again.csv"
            keep = sorted((s, m) for s, m in rows if m >= thr)
            q.write_text("\n".join(["time,magnitude"] + [
                f"{datetime.fromtimestamp(1199145600 + s, tz=timezone.utc).isoformat()},{m!r}" for s, m in keep
            ]) + "\n")
            again = load_catalog(q, thr, START, END)
    np.testing.assert_array_equal(again.times, cat.times)
