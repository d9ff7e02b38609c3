import json

import pytest

from taumackey import cli, criteria
from taumackey.errors import SpecError


def test_run_job_simply_reducible_q8():
    report, code = cli.run_job(
        {"command": "simply-reducible", "group": {"family": "quaternion8"},
         "tau": "inverse"},
        seed=1,
    )
    assert code == 0
    assert report["payload"]["simply_reducible"] is True
    assert report["payload"]["mackey_wigner"]["sum_twisted_cubes"]["value"] == "224"


def test_run_job_power_sums_strings():
    report, code = cli.run_job(
        {"command": "power-sums", "group": {"family": "symmetric", "n": 3},
         "tau": "inverse", "n": 2},
        seed=1,
    )
    assert code == 0
    p = report["payload"]
    assert p["sum_twisted_pow"]["value"] == "66"
    assert p["sum_centralizer_pow"]["value"] == "66"
    assert p["equal"] is True


def test_run_job_char_table_trivial():
    report, code = cli.run_job(
        {"command": "char-table", "group": {"family": "cyclic", "n": 1}},
        seed=1,
    )
    assert code == 0
    assert report["payload"]["rows"] == [[[1.0, 0.0]]]


def test_unknown_command_and_family():
    with pytest.raises(SpecError):
        cli.run_job({"command": "nonsense"}, 1)
    with pytest.raises(SpecError):
        cli.run_job({"command": "fs", "group": {"family": "nope"}}, 1)


def test_identity_tau_on_nonabelian_is_spec_error():
    with pytest.raises(SpecError):
        cli.run_job(
            {"command": "fs", "group": {"family": "symmetric", "n": 3},
             "tau": "identity"},
            seed=1,
        )


def test_group_spec_variants():
    g = cli.build_group({"generators": ["(1 2)", "(1 2 3)"], "degree": 3})
    assert g.order == 6
    p = cli.build_group({"product": [{"family": "cyclic", "n": 2},
                                     {"family": "cyclic", "n": 3}]})
    assert p.order == 6
    sd = cli.build_group({"semidirect": {"base": {"family": "cyclic", "n": 3},
                                         "tau": "identity"}})
    assert sd.order == 6 and not sd.is_abelian()
    with pytest.raises(SpecError):
        cli.build_group({"generators": ["(1 2)"]})
    with pytest.raises(SpecError):
        cli.build_group({})


def test_subgroup_spec_variants():
    g = cli.build_group({"family": "symmetric", "n": 4})
    ids = cli.build_subgroup(g, {"generators": ["(1 2)", "(1 2 3)"]})
    assert len(ids) == 6
    ids2 = cli.build_subgroup(g, {"centralizer_of_sigma": {"inner": "(1 2)(3 4)"}})
    assert len(ids2) == 8


def test_report_determinism():
    job = {"command": "fs", "group": {"family": "symmetric", "n": 4}, "tau": "inverse"}
    r1, _ = cli.run_job(job, 7)
    r2, _ = cli.run_job(job, 7)
    assert cli.render_report(r1) == cli.render_report(r2)


def test_exit_code_two_on_forced_disagreement(monkeypatch):
    def fake(G, tau, table=None, pair_budget=0):
        return criteria.SRVerdict(True, True, False, True, (1, 2))

    monkeypatch.setattr(criteria, "simply_reducible_verdict", fake)
    report, code = cli.run_job(
        {"command": "simply-reducible", "group": {"family": "cyclic", "n": 2},
         "tau": "inverse"},
        seed=1,
    )
    assert code == 2
    assert report["payload"]["agree"] is False


def test_batch_empty_manifest():
    aggregate, code, stats = cli.run_batch({"jobs": []}, 1)
    assert code == 0 and aggregate["jobs"] == [] and stats["jobs"] == 0


def test_batch_cache_and_isolation(tmp_path):
    manifest = {
        "jobs": [
            {"command": "power-sums", "group": {"family": "cyclic", "n": 5},
             "tau": "identity", "n": 2},
            {"command": "fs", "group": {"family": "missing-family"}},
        ]
    }
    cache = tmp_path / "cache"
    agg1, code1, stats1 = cli.run_batch(manifest, 3, cache_dir=cache)
    assert code1 == 1  # the bad job is isolated and reported
    assert stats1["cache_misses"] == 2
    assert "error" in agg1["jobs"][1]["payload"]
    assert agg1["jobs"][0]["payload"]["equal"] is True
    agg2, code2, stats2 = cli.run_batch(manifest, 3, cache_dir=cache)
    assert stats2["cache_hits"] == 2
    assert cli.render_report(agg1) == cli.render_report(agg2)


def test_main_end_to_end(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main([
        "simply-reducible", "--group", '{"family":"quaternion8"}',
        "--tau", "inverse", "--out", str(out), "--seed", "2",
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["payload"]["simply_reducible"] is True
    assert data["seed"] == 2


def test_main_usage_error(capsys):
    code = cli.main(["fs", "--group", '{"family":"unknown-thing"}'])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_main_text_format(tmp_path):
    out = tmp_path / "r.txt"
    code = cli.main([
        "char-table", "--group", '{"family":"cyclic","n":2}',
        "--format", "text", "--out", str(out),
    ])
    assert code == 0
    assert "degrees" in out.read_text()


def test_main_group_from_file(tmp_path):
    spec = tmp_path / "g.json"
    spec.write_text('{"family": "dihedral", "n": 4}')
    out = tmp_path / "r.json"
    assert cli.main(["fs", "--group", f"@{spec}", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["payload"]["order"] == 8


def test_env_seed(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.ENV_SEED, "99")
    out = tmp_path / "r.json"
    assert cli.main(["char-table", "--group", '{"family":"cyclic","n":3}',
                     "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 99
    monkeypatch.setenv(cli.ENV_SEED, "not-a-number")
    assert cli.main(["char-table", "--group", '{"family":"cyclic","n":3}']) == 1
