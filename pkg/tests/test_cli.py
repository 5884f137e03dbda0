import io
import json

import pytest

from carpetdim import gallery
from carpetdim.cli import main
from carpetdim.core import dump_spec, load_spec


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def export(tmp_path):
    def make(name, *params):
        path = tmp_path / f"{name}.json"
        args = ["example", name, "--export", path]
        for p in params:
            args += ["--param", p]
        assert run(*args)[0] == 0
        return path
    return make


def test_example_full_fm():
    code, out, _ = run("example", "fm_carpet", "--param", "0.3", "--full", "--kmax", "8")
    assert code == 0
    assert "dim_H = 1.575717" in out
    assert "PASS: matches expected within 1e-06" in out
    assert out.rstrip().endswith("overall: PASS")


def test_example_zipper_closed_form():
    code, out, _ = run("example", "zipper", "--full")
    assert code == 0 and "(closed form)" in out and "overall: PASS" in out


def test_dims_json(export):
    path = export("smiley")
    code, out, _ = run("dims", path, "--json")
    doc = json.loads(out)
    assert code == 0 and round(doc["s"], 5) == 1.21340
    assert list(doc) == sorted(doc)
    assert doc["equal_HB"] == "strict"


def test_check_fm_overlap(export):
    path = export("fm_overlap", 0.15)
    code, out, _ = run("check", path, "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["rosc"]["status"] == "fails"
    assert doc["transversality_sufficient"]["status"] == "inconclusive"
    assert doc["cond_main"]["holds"] is True
    code, out, _ = run("check", path)
    assert code == 0 and "inconclusive" in out


def test_export_import_idempotent(tmp_path, export):
    for name in gallery.names():
        if gallery.get(name).bespoke:
            continue
        path = export(name)
        assert run("validate", path)[0] == 0, name
        again = tmp_path / "again.json"
        dump_spec(load_spec(path), again)
        assert again.read_bytes() == path.read_bytes()


def test_zipper_import_rejected(export):
    code, _, err = run("validate", export("zipper"))
    assert code == 2 and "invalid" in err


def test_exit_codes(tmp_path, export):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"class": "tgl", "columns": [1, 1],
                               "maps": [{"b": 0.5, "a": 0.6, "d": 0, "tx": 0, "ty": 0},
                                        {"b": 0.5, "a": 0.2, "d": 0, "tx": 0.5, "ty": 0}]}))
    assert run("validate", bad)[0] == 2
    assert run("validate", tmp_path / "missing.json")[0] == 4
    assert run("frobnicate")[0] == 64
    assert run("dims")[0] == 64
    assert run("example", "nope")[0] == 2
    assert run("check", export("smiley"), "--overlap-scan", 30)[0] == 3
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run("dims", garbled)[0] == 2


def test_render_and_estimate(tmp_path, export):
    path = export("mcmullen")
    img = tmp_path / "m.pgm"
    code, out, _ = run("render", path, "--out", img, "--res", 64, "--points", 5000)
    assert code == 0 and img.read_bytes().startswith(b"P5\n64 64\n255\n")
    assert run("render", path, "--out", img, "--res", 81)[0] == 2
    csv_path = tmp_path / "n.csv"
    code, out, _ = run("estimate", path, "--kmax", 8, "--csv", csv_path, "--json")
    assert code == 0 and json.loads(out)["method"] == "cylinder-cover"
    assert csv_path.read_text().startswith("k,delta,count\n")
    code, out, _ = run("estimate", path, "--projection")
    assert code == 0 and "interval-cover" in out


def test_uplift_cli(export):
    path = export("uplift_demo")
    code, out, _ = run("dims", path, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["uplift"]["conditions_met"] is True
    code, out, _ = run("report", path, "--kmax", 6)
    doc = json.loads(out)
    assert set(doc) == {"dimensions", "conditions", "estimate", "uplift", "uplift_skew_bounds"}


def test_a2_warning_on_stderr(tmp_path):
    path = tmp_path / "a2.json"
    path.write_text(json.dumps({"class": "tgl", "columns": [1, 1],
                                "maps": [{"b": 0.3, "a": 0.2, "d": 0, "tx": 0.1, "ty": 0},
                                         {"b": 0.3, "a": 0.2, "d": 0, "tx": 0.5, "ty": 0}]}))
    code, _, err = run("validate", path)
    assert code == 0 and "warning" in err
