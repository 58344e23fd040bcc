import json

import pytest

from kinetics_figures import FigureSpecError, load_spec, parse_spec, render
from kinetics_figures.render import main_for_kind

from conftest import make_spec, write_csv


def test_spec_validation_errors(tmp_path, synthetic_tables):
    with pytest.raises(FigureSpecError, match="kind"):
        parse_spec({"kind": "scatter", "inputs": {}, "output": "x.png"})
    with pytest.raises(FigureSpecError, match="does not exist"):
        parse_spec({"kind": "heatmap",
                    "inputs": {"sweep": str(tmp_path / "nope.csv")},
                    "output": "x.png"})
    with pytest.raises(FigureSpecError, match="missing"):
        parse_spec({"kind": "lines",
                    "inputs": {"steady": str(synthetic_tables["steady"])},
                    "output": "x.png"})
    with pytest.raises(FigureSpecError, match="unknown spec fields"):
        parse_spec({"kind": "heatmap",
                    "inputs": {"sweep": str(synthetic_tables["sweep"])},
                    "output": "x.png", "grid": True})


@pytest.mark.parametrize("kind,roles", [
    ("lines", ("steady", "perturbative")),
    ("heatmap", ("sweep",)),
    ("snapshots", ("snapshots",)),
])
def test_render_each_kind(tmp_path, synthetic_tables, kind, roles):
    spec_path, out = make_spec(tmp_path, kind,
                               {r: synthetic_tables[r] for r in roles})
    spec = load_spec(spec_path)
    assert render(spec) == out
    assert out.exists() and out.stat().st_size > 0


def test_schema_mismatch_lists_expected_and_found(tmp_path, synthetic_tables):
    bad = write_csv(tmp_path / "bad.csv", ["mode", "n"], [[0, 1.0]])
    spec_path, out = make_spec(tmp_path, "snapshots", {"snapshots": bad})
    with pytest.raises(FigureSpecError) as err:
        render(load_spec(spec_path))
    assert "expected" in str(err.value) and "found" in str(err.value)
    assert "tau" in str(err.value) and "mode" in str(err.value)
    assert not out.exists()


def test_empty_table_rejected_before_writing(tmp_path, synthetic_tables):
    empty = write_csv(tmp_path / "empty.csv",
                      ["tau", "mode_index", "omega_over_J", "n"], [])
    spec_path, out = make_spec(tmp_path, "snapshots", {"snapshots": empty})
    with pytest.raises(FigureSpecError, match="no data rows"):
        render(load_spec(spec_path))
    assert not out.exists()


def test_heatmap_unknown_metric(tmp_path, synthetic_tables):
    spec_path, out = make_spec(tmp_path, "heatmap",
                               {"sweep": synthetic_tables["sweep"]},
                               metric="entropy")
    with pytest.raises(FigureSpecError, match="entropy"):
        render(load_spec(spec_path))
    assert not out.exists()


def test_heatmap_tolerates_error_rows(tmp_path, synthetic_tables):
    spec_path, out = make_spec(tmp_path, "heatmap",
                               {"sweep": synthetic_tables["sweep"]}, metric="R")
    render(load_spec(spec_path))
    assert out.exists()


def test_script_entry_point(tmp_path, synthetic_tables, capsys):
    spec_path, out = make_spec(tmp_path, "snapshots",
                               {"snapshots": synthetic_tables["snapshots"]})
    assert main_for_kind("snapshots", [str(spec_path)]) == 0
    assert out.exists()
    assert main_for_kind("lines", [str(spec_path)]) == 1
    assert "does not match" in capsys.readouterr().err
    assert main_for_kind("lines", []) == 2


def test_labels_applied(tmp_path, synthetic_tables):
    spec_path, out = make_spec(
        tmp_path, "lines",
        {"steady": synthetic_tables["steady"],
         "perturbative": synthetic_tables["perturbative"]},
        labels={"x": "energy", "y": "n", "title": "overlay"},
    )
    render(load_spec(spec_path))
    assert out.exists()


def test_spec_file_errors(tmp_path):
    missing = tmp_path / "missing.json"
    with pytest.raises(FigureSpecError, match="cannot read"):
        load_spec(missing)
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    with pytest.raises(FigureSpecError, match="not valid JSON"):
        load_spec(garbled)
    not_object = tmp_path / "list.json"
    not_object.write_text(json.dumps([1, 2]))
    with pytest.raises(FigureSpecError, match="JSON object"):
        load_spec(not_object)
