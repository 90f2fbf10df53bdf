import json

from llvkit.cli import main
from llvkit.rings import ring_to_dict


def run(args, capsys):
    rc = main(args)
    out = capsys.readouterr().out
    return rc, out


def test_validate_fixture_k3(capsys):
    rc, out = run(["validate", "--fixture", "k3"], capsys)
    assert rc == 0
    assert "result: pass" in out


def test_validate_bogomolov_dims(capsys):
    rc, out = run(["validate", "--fixture", "bogomolov", "--b2", "5",
                   "--n", "2"], capsys)
    assert rc == 0
    assert "[1, 0, 5, 0, 15, 0, 5, 0, 1]" in out


def test_validate_broken_ring_exits_one(tmp_path, capsys, k3):
    data = ring_to_dict(k3)
    data["integration"] = ["0"]
    path = tmp_path / "broken.ring"
    path.write_text(json.dumps(data))
    rc, out = run(["validate", "--input", str(path)], capsys)
    assert rc == 1
    assert "fail" in out


def test_parse_error_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.ring"
    path.write_text("{oops")
    rc, _ = run(["validate", "--input", str(path)], capsys)
    assert rc == 2


def test_usage_error_exits_two(capsys):
    rc, _ = run(["validate"], capsys)
    assert rc == 2
    rc, _ = run(["kuga", "--dim", "11", "--q", "diag:" + ",".join(["1"] * 11)],
                capsys)
    assert rc == 2


def test_llv_small_model(capsys):
    rc, out = run(["llv", "--fixture", "bogomolov", "--b2", "5", "--n", "2",
                   "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    by_name = {r["name"]: r for r in data["records"]}
    assert by_name["bracket closure"]["data"]["dim"] == 21
    assert by_name["so identification"]["data"]["killing_compact_noncompact"] \
        == [9, 12]
    assert data["ok"] is True


def test_llv_torus_skips_verdict(capsys):
    rc, out = run(["llv", "--fixture", "torus", "--g", "2",
                   "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    so = next(r for r in data["records"] if r["name"] == "so identification")
    assert so["verdict"] == "skip"
    closure = next(r for r in data["records"] if r["name"] == "bracket closure")
    assert closure["data"]["dim"] > 0


def test_pw_command_and_shift(capsys):
    rc, out = run(["pw", "--fixture", "bogomolov", "--b2", "5", "--n", "2",
                   "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    rec = next(r for r in data["records"] if r["name"] == "weak P = W")
    assert rec["verdict"] == "pass"
    assert rec["data"]["degree2_nilpotent_index"] == 3


def test_pw_rejects_nonisotropic_beta(capsys):
    rc, _ = run(["pw", "--fixture", "bogomolov", "--b2", "5", "--n", "2",
                 "--beta", "1,0,0,0,0"], capsys)
    assert rc == 2


def test_kuga_command(capsys):
    rc, out = run(["kuga", "--dim", "5", "--q", "diag:1,1,-1,-1,-1",
                   "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    by_name = {r["name"]: r for r in data["records"]}
    assert by_name["algebra dimension"]["data"]["dim"] == 32
    assert by_name["trace polarization"]["data"]["positive_sign"] in (1, -1)


def test_kuga_inadmissible_pair_skips(capsys):
    rc, out = run(["kuga", "--dim", "5", "--q", "diag:2,3,-1,-1,-1",
                   "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    mu = next(r for r in data["records"] if r["name"] == "complex structure")
    assert mu["verdict"] == "skip"


def test_hl_command(capsys):
    rc, out = run(["hl", "--fixture", "bogomolov", "--b2", "5", "--n", "2"],
                  capsys)
    assert rc == 0
    assert "result: pass" in out


def test_verbitsky_command(capsys):
    rc, out = run(["verbitsky", "--fixture", "bogomolov", "--b2", "5",
                   "--n", "2", "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    rec = next(r for r in data["records"]
               if r["name"] == "degree-2 generated subalgebra")
    assert rec["data"]["dims"] == [1, 5, 15, 5, 1]


def test_torus_weil_with_gaussian_field(capsys):
    rc, out = run(["llv", "--fixture", "torus", "--g", "2",
                   "--field", "gaussian", "--format", "structured"], capsys)
    assert rc == 0
    data = json.loads(out)
    weil = next(r for r in data["records"] if r["name"] == "Weil operator")
    assert weil["verdict"] == "pass"


def test_file_input_bigraded_ring(tmp_path, model52, capsys):
    from llvkit.rings import save_ring
    path = tmp_path / "model.ring.json"
    save_ring(model52, path)
    rc, out = run(["llv", "--input", str(path), "--format", "structured"],
                  capsys)
    assert rc == 0
    data = json.loads(out)
    by_name = {r["name"]: r for r in data["records"]}
    assert by_name["bracket closure"]["data"]["dim"] == 21
    # no rational companion in a file ring: Killing signature is skipped
    assert by_name["so identification"]["verdict"] == "skip"
    assert by_name["Weil operator"]["verdict"] == "pass"
    rc, out = run(["pw", "--input", str(path), "--format", "structured"],
                  capsys)
    assert rc == 0
    data = json.loads(out)
    rec = next(r for r in data["records"] if r["name"] == "weak P = W")
    assert rec["verdict"] == "pass"


def test_reports_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["pw", "--fixture", "bogomolov", "--b2", "5", "--n", "2",
                 "--format", "structured", "--out", str(out1)]) == 0
    assert main(["pw", "--fixture", "bogomolov", "--b2", "5", "--n", "2",
                 "--format", "structured", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
