"""End-to-end command-line behavior: exit codes, artifacts, determinism."""

import json

import pytest

from widthlab import exact_content, generate
from widthlab.cli import main, parse_flat_config

CLUSTER_SPEC = {
    "kind": "clusters", "count": 2, "size": 8, "diam": 1.0,
    "separation": 400.0,
}
LINE_SPEC = {"kind": "strip", "length": 201, "width": 1, "spacing": 1.0}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    record = json.loads(captured.out)
    return code, record


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.delenv("WIDTHLAB_OUT", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write_spec(workdir, spec, name="spec.json"):
    path = workdir / name
    path.write_text(json.dumps(spec))
    return path


class TestFlatConfig:
    def test_value_types(self):
        cfg = parse_flat_config(
            '# comment\n'
            'name = "hello"\n'
            'count = 3\n'
            'scale = 2.5\n'
            'big = 1e6\n'
            '\n'
            'flag = true\n'
            'other = false  # trailing\n'
        )
        assert cfg == {"name": "hello", "count": 3, "scale": 2.5,
                       "big": 1e6, "flag": True, "other": False}

    def test_missing_equals(self):
        from widthlab import WidthlabError

        with pytest.raises(WidthlabError, match="line 1"):
            parse_flat_config("just some words\n")

    def test_empty_key(self):
        from widthlab import WidthlabError

        with pytest.raises(WidthlabError, match="empty key"):
            parse_flat_config("= 3\n")

    def test_unparseable_value(self):
        from widthlab import WidthlabError

        with pytest.raises(WidthlabError, match="cannot parse"):
            parse_flat_config("key = maybe\n")


class TestPipeline:
    def test_gen_content_decompose_verify(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)

        code, rec = run(capsys, "gen", spec, "--out", "space.csv")
        assert code == 0
        assert rec["points"] == 16
        assert (workdir / "space.csv").exists()
        meta = json.loads((workdir / "space.meta.json").read_text())
        assert meta["kind"] == "clusters"

        code, rec = run(capsys, "content", "space.csv",
                        "--n", 1, "--method", "exact", "--target", "0,1,2")
        assert code == 0
        space = generate(CLUSTER_SPEC)
        want = exact_content(space, [0, 1, 2], 1, float("inf"))
        assert rec["estimate"]["value"] == want.value
        assert rec["input"]["mesh_h"] == pytest.approx(space.mesh_h)

        code, rec = run(capsys, "decompose", "space.csv",
                        "--n", 1, "--R", 150.0, "--cert", "cert.json")
        assert code == 0
        assert rec["outcome"] == "certified"
        assert rec["complex"]["dimension"] == 0
        assert (workdir / "cert.json").exists()

        code, rec = run(capsys, "verify", "space.csv",
                        "--cert", "cert.json")
        assert code == 0
        assert rec["report"]["ok"] is True

    def test_tampered_certificate_rejected(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        run(capsys, "gen", spec, "--out", "space.csv")
        run(capsys, "decompose", "space.csv", "--n", 1, "--R", 150.0,
            "--cert", "cert.json")
        cert = json.loads((workdir / "cert.json").read_text())
        cert["claimed_R"] = 0.01
        (workdir / "cert.json").write_text(json.dumps(cert))

        code, rec = run(capsys, "verify", "space.csv", "--cert", "cert.json")
        assert code == 2
        assert rec["report"]["ok"] is False
        assert rec["report"]["checks"]["fiber_diameters"] is False

    def test_generator_spec_input_is_accepted_directly(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        code, rec = run(capsys, "content", spec, "--n", 1)
        assert code == 0
        assert rec["input"]["generator"] == "clusters"

    def test_graph_json_input(self, workdir, capsys):
        path = workdir / "graph.json"
        path.write_text(json.dumps({
            "mesh_h": 1.0,
            "edges": [{"u": "a", "v": "b", "len": 4.0}],
        }))
        code, rec = run(capsys, "content", path, "--n", 1)
        assert code == 0
        assert rec["input"]["points"] == 5


class TestExitCodes:
    def test_hypothesis_violation_is_2(self, workdir, capsys):
        spec = write_spec(workdir, LINE_SPEC)
        code, rec = run(capsys, "decompose", spec, "--n", 1, "--R", 150.0)
        assert code == 2
        assert rec["outcome"] == "hypothesis_violated"
        assert rec["hypothesis"]["passed"] is False
        assert "force=True" in rec["message"]

    def test_forced_run_still_exits_2(self, workdir, capsys):
        spec = write_spec(workdir, LINE_SPEC)
        code, rec = run(capsys, "decompose", spec, "--n", 1, "--R", 150.0,
                        "--force")
        assert code == 2
        assert rec["outcome"] == "forced_certificate_verified"
        assert rec["verify"]["ok"] is True
        assert rec["meta"]["any_hypothesis_failed"] is True

    def test_boundary_check_codes(self, workdir, capsys):
        spec = write_spec(workdir, {"kind": "strip", "length": 401,
                                    "width": 1, "spacing": 1.0})
        code, rec = run(capsys, "boundary-check", spec,
                        "--x", 200, "--R", 15.0, "--n", 2)
        assert code == 2 and rec["report"]["passed"] is False
        code, rec = run(capsys, "boundary-check", spec,
                        "--x", 200, "--R", 15.0, "--n", 2,
                        "--eps-scale", 1e12)
        assert code == 0 and rec["report"]["passed"] is True

    def test_coarea_check_passes(self, workdir, capsys):
        from widthlab import annulus

        spec_dict = {"kind": "strip", "length": 30, "width": 3,
                     "spacing": 1.0}
        spec = write_spec(workdir, spec_dict)
        members = annulus(generate(spec_dict), 0, 5.0, 15.0)
        code, rec = run(capsys, "coarea-check", spec,
                        "--target", ",".join(str(i) for i in members),
                        "--center", 0, "--r1", 5.0, "--r2", 15.0,
                        "--n", 2, "--zeta", 2.0)
        assert code == 0
        assert rec["report"]["passed"] is True

    def test_k5_audit_passes(self, workdir, capsys):
        code, rec = run(capsys, "k5-audit", "pentagon", "--R", 3.0)
        assert code == 0
        assert rec["report"]["passed"] is True
        assert rec["report"]["witness"]["graph_dist"] >= 30.0

    def test_missing_file_is_1(self, workdir, capsys):
        code, rec = run(capsys, "content", "nope.csv", "--n", 1,
                        "--mesh-h", 1.0)
        assert code == 1
        assert rec["outcome"] == "error"

    def test_below_floor_is_1(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        code, rec = run(capsys, "decompose", spec, "--n", 1, "--R", 0.5)
        assert code == 1
        assert "resolution floor" in rec["message"]

    def test_csv_without_mesh_is_1(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        run(capsys, "gen", spec, "--out", "space.csv")
        (workdir / "space.meta.json").unlink()
        code, rec = run(capsys, "content", "space.csv", "--n", 1)
        assert code == 1
        assert "no mesh width" in rec["message"]

    def test_json_without_kind_or_edges_is_1(self, workdir, capsys):
        path = workdir / "odd.json"
        path.write_text(json.dumps({"foo": 1}))
        code, rec = run(capsys, "content", path, "--n", 1)
        assert code == 1
        assert "'kind' or 'edges'" in rec["message"]


class TestArtifactRouting:
    def test_out_dir_flag(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        target = workdir / "artifacts"
        code, _ = run(capsys, "--out-dir", target, "gen", spec,
                      "--out", "space.csv")
        assert code == 0
        assert (target / "space.csv").exists()
        assert not (workdir / "space.csv").exists()

    def test_env_var_wins(self, workdir, capsys, monkeypatch):
        spec = write_spec(workdir, CLUSTER_SPEC)
        env_dir = workdir / "from-env"
        flag_dir = workdir / "from-flag"
        monkeypatch.setenv("WIDTHLAB_OUT", str(env_dir))
        code, _ = run(capsys, "--out-dir", flag_dir, "gen", spec,
                      "--out", "space.csv")
        assert code == 0
        assert (env_dir / "space.csv").exists()
        assert not flag_dir.exists()

    def test_config_fills_unset_options(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        run(capsys, "gen", spec, "--out", "space.csv")
        (workdir / "space.meta.json").unlink()
        cfg = workdir / "widthlab.cfg"
        cfg.write_text("mesh-h = 0.142857\n")
        code, rec = run(capsys, "--config", cfg, "content", "space.csv",
                        "--n", 1)
        assert code == 0
        assert rec["input"]["mesh_h"] == pytest.approx(0.142857)

    def test_explicit_flag_beats_config(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        run(capsys, "gen", spec, "--out", "space.csv")
        (workdir / "space.meta.json").unlink()
        cfg = workdir / "widthlab.cfg"
        cfg.write_text("mesh-h = 0.01\n")
        code, rec = run(capsys, "--config", cfg, "content", "space.csv",
                        "--n", 1, "--mesh-h", 0.142857)
        assert code == 0
        assert rec["input"]["mesh_h"] == pytest.approx(0.142857)


class TestSweep:
    def test_csv_shape_and_verdicts(self, workdir, capsys):
        spec = write_spec(workdir, LINE_SPEC)
        code, rec = run(capsys, "sweep", spec, "--n", 1,
                        "--radii", "150", "--eps-scales", "1,1e6",
                        "--csv", "sweep.csv")
        assert code == 0
        lines = (workdir / "sweep.csv").read_text().splitlines()
        assert lines[0] == \
            "R,eps_scale,threshold,worst_value,worst_x,failures,passed"
        assert len(lines) == 3
        assert lines[1].endswith("false") and lines[2].endswith("true")
        assert rec["rows"][0]["passed"] is False
        assert rec["rows"][1]["passed"] is True

    def test_no_floor_allows_small_radii(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        code, rec = run(capsys, "sweep", spec, "--n", 1,
                        "--radii", "1", "--eps-scales", "1",
                        "--csv", "s.csv", "--no-floor")
        assert code == 0
        assert len(rec["rows"]) == 1


class TestDeterminism:
    def test_stdout_byte_identical(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        outs = []
        for _ in range(2):
            main(["k5-audit", "random:5", "--R", "3.0", "--tol", "0.1"])
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1]

        outs = []
        for _ in range(2):
            main([str(a) for a in
                  ("decompose", spec, "--n", 1, "--R", 150.0)])
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1]

    def test_identical_certificates_on_disk(self, workdir, capsys):
        spec = write_spec(workdir, CLUSTER_SPEC)
        blobs = []
        for name in ("a.json", "b.json"):
            run(capsys, "decompose", spec, "--n", 1, "--R", 150.0,
                "--cert", name)
            blobs.append((workdir / name).read_bytes())
        assert blobs[0] == blobs[1]
