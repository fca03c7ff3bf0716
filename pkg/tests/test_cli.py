import pytest

from strand_id import cli, verify


def test_missing_config_is_config_error(tmp_path):
    assert cli.main(["simulate", "--out", str(tmp_path)]) == cli.EXIT_CONFIG


def test_bad_config_file(tmp_path):
    (tmp_path / "c.cfg").write_text("n = 4\nnope = 2\n")
    assert cli.main(["thresholds", "--config", str(tmp_path / "c.cfg"), "--out", str(tmp_path)]) == 2
    assert cli.main(["thresholds", "--config", str(tmp_path / "absent.cfg"), "--out", str(tmp_path)]) == 2


def test_unknown_mode_exits_2():
    with pytest.raises(SystemExit) as e:
        cli.main(["plot"])
    assert e.value.code == 2


def test_thresholds_table(tmp_path, capsys):
    (tmp_path / "c.cfg").write_text("n = 6\nN = 20\np = 0.3\nbeta = b0\n")
    assert cli.main(["thresholds", "--config", str(tmp_path / "c.cfg"), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == "n N p eps1 eps2 L beta_th beta_0 n_th n_0 u_cycle u0 u1 u2 region".split()
    assert out[1].split()[-1] == "R''"
    assert (tmp_path / "thresholds.csv").exists()


def test_figures(tmp_path):
    assert cli.main(["figures", "--out", str(tmp_path)]) == 0
    assert len(list(tmp_path.glob("*.csv"))) == 4


def test_simulate_reruns_identical(tmp_path, monkeypatch):
    monkeypatch.delenv("STRAND_ID_SEED", raising=False)
    (tmp_path / "c.cfg").write_text("n = 3\nN = 2\np = 0.3\nbeta = 2\ntrials = 4\nseed = 1\n")
    for d in ("a", "b"):
        cli.main(["simulate", "--config", str(tmp_path / "c.cfg"), "--out", str(tmp_path / d)])
    assert (tmp_path / "a/simulate.csv").read_bytes() == (tmp_path / "b/simulate.csv").read_bytes()
    monkeypatch.setenv("STRAND_ID_SEED", "2")
    cli.main(["simulate", "--config", str(tmp_path / "c.cfg"), "--out", str(tmp_path / "c")])
    assert (tmp_path / "a/simulate.csv").read_bytes() != (tmp_path / "c/simulate.csv").read_bytes()


def test_simulate_bound_failure_exit(tmp_path, monkeypatch):
    (tmp_path / "c.cfg").write_text("n = 3\nN = 2\np = 0.3\nbeta = 1\ntrials = 3\n")
    monkeypatch.setattr(cli.harness, "bound_checks", lambda cf, emp: {"check_success": "fail"})
    assert cli.main(["simulate", "--config", str(tmp_path / "c.cfg"), "--out", str(tmp_path)]) == 1


def test_verify_plumbing(tmp_path, monkeypatch):
    monkeypatch.setattr(verify, "PEELING_SHAPES", ((1, 1),))
    monkeypatch.setattr(verify, "UNIQUENESS_SHAPES", ((1, 1, 1),))
    assert cli.main(["verify", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "verify.csv").read_text().splitlines()
    assert lines[0] == "check,cases,failures,status"
    assert all(line.endswith(",pass") for line in lines[1:])
    monkeypatch.setattr(verify, "PEELING_SHAPES", ((1, 2),))
    assert cli.main(["verify", "--out", str(tmp_path)]) == 1
