"""Command-line surface: exit codes, outputs and reproducibility."""
import csv
import json

import pytest

from unifsel import __version__
from unifsel.bayesnet import forward_sample, load_network, save_network, screened_networks
from unifsel.cli import main
from unifsel.dataset import load_json, save_csv


@pytest.fixture(scope="module")
def alarm_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "alarm.csv"
    save_csv(forward_sample(load_network("alarm"), 5000, seed=0, target="HR"), p)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def check_envelope(doc, command):
    assert doc["format"] == "unifsel/1"
    assert doc["version"] == __version__
    assert doc["command"] == command
    assert "config" in doc and "seed" in doc


# ------------------------------------------------------------ select

def test_select_mrmr_finds_pc_of_hr(capsys, alarm_csv):
    doc = run_json(capsys, "select", "--data", alarm_csv, "--class", "HR", "--method", "mrmr",
                   "--psi", 8)
    check_envelope(doc, "select")
    assert len(doc["selected"]) == 8 == len(doc["step_scores"])
    assert load_pc_names() <= set(doc["selected"])
    assert doc["config"]["psi"] == 8 and doc["config"]["class"] == "HR"


def load_pc_names():
    from unifsel.bayesnet import true_mb
    bn = load_network("alarm")
    return {bn.node_names[v] for v in true_mb(bn, bn.index_of("HR")).pc}


def test_select_missing_psi_is_usage_error(capsys, alarm_csv):
    code, _, err = run(capsys, "select", "--data", alarm_csv, "--class", "HR", "--method", "mrmr")
    assert code == 2 and "--psi" in err


def test_select_fcbf_ignores_psi_with_warning(capsys, alarm_csv):
    code, out, err = run(capsys, "select", "--data", alarm_csv, "--class", "HR", "--method", "fcbf",
                         "--psi", 3)
    assert code == 0 and "--psi is ignored" in err
    assert json.loads(out)["config"]["psi"] is None


def test_select_psi_out_of_range_is_method_error(capsys, alarm_csv):
    code, _, err = run(capsys, "select", "--data", alarm_csv, "--class", "HR", "--method", "mim",
                       "--psi", 99)
    assert code == 4 and "psi" in err


@pytest.mark.parametrize("argv", [
    ("select", "--data", "nope.csv", "--class", "HR", "--method", "mim", "--psi", 2),
    ("oracle", "--network", "lungcancer", "--target", "Nobody", "--mb"),
    ("sample", "--network", "nonexistent.json", "--rows", 5, "--out", "x.csv"),
])
def test_data_errors_exit_3(capsys, tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, *argv)[0] == 3


def test_bad_class_column_is_data_error(capsys, alarm_csv):
    assert run(capsys, "select", "--data", alarm_csv, "--class", "NOPE", "--method", "mim",
               "--psi", 1)[0] == 3


# ------------------------------------------------------------ mb

def test_mb_hitonmb_on_alarm(capsys, alarm_csv, tmp_path):
    ledger = tmp_path / "ledger.json"
    doc = run_json(capsys, "mb", "--algo", "hitonmb", "--data", alarm_csv, "--class", "HR",
                   "--ledger", ledger)
    check_envelope(doc, "mb")
    assert len(doc["mb"]) == 8
    assert set(doc["pc"]) | set(doc["spouses"]) == set(doc["mb"])
    assert doc["config"]["gamma_cap"] == 3 and doc["config"]["alpha"] == 0.05
    led = json.loads(ledger.read_text())
    assert len(led["ledger"]) == doc["tests_run"]
    assert all(isinstance(e["x_name"], str) and isinstance(e["s_names"], list) for e in led["ledger"])


def test_mb_gamma_zero_is_marginal_only(capsys, alarm_csv, tmp_path):
    ledger = tmp_path / "l0.json"
    doc = run_json(capsys, "mb", "--algo", "mmpc", "--data", alarm_csv, "--class", "HR",
                   "--gamma", 0, "--ledger", ledger)
    assert doc["config"]["gamma_cap"] == 0
    assert all(not e["s"] for e in json.loads(ledger.read_text())["ledger"])


def test_unknown_algo_lists_valid_names(capsys, alarm_csv):
    code, _, err = run(capsys, "mb", "--algo", "pcstable", "--data", alarm_csv, "--class", "HR")
    assert code == 2
    assert "hitonmb" in err and "stmb" in err


def test_bad_gamma_is_usage_error(capsys, alarm_csv):
    assert run(capsys, "mb", "--algo", "iamb", "--data", alarm_csv, "--class", "HR",
               "--gamma", "-1")[0] == 2


# ------------------------------------------------------------ sample / oracle

def test_oracle_lungcancer_mb(capsys):
    doc = run_json(capsys, "oracle", "--network", "lungcancer", "--target", "LungCancer", "--mb")
    check_envelope(doc, "oracle")
    assert doc["mb"] == ["Allergy", "Coughing", "Fatigue", "Genetics", "Smoking"]
    assert doc["spouses"] == ["Allergy"]


def test_oracle_best_subset_matches_strong_set_on_twelve_nodes(capsys, tmp_path):
    _, bn, t = next(iter(screened_networks(1, n_range=(12, 12), seed=42)))
    p = tmp_path / "net12.json"
    save_network(bn, p)
    doc = run_json(capsys, "oracle", "--network", p, "--target", bn.node_names[t], "--relevance",
                   "--best-subset", "--mb")
    assert doc["best_subset"] == doc["relevance"]["strong"] == doc["mb"]
    assert doc["best_subset_mi_nats"] == pytest.approx(doc["mb_mi_nats"], abs=1e-9)


def test_oracle_cap_exceeded_is_method_error(capsys):
    assert run(capsys, "oracle", "--network", "alarm", "--target", "HR", "--relevance")[0] == 4


def test_sample_zero_rows(capsys, tmp_path):
    out = tmp_path / "empty.json"
    assert run(capsys, "sample", "--network", "lungcancer", "--rows", 0, "--target", "LungCancer",
               "--seed", 1, "--out", out)[0] == 0
    d = load_json(out)
    assert d.m == 0 and d.class_name == "LungCancer" and d.n_columns == 12
    doc = json.loads(out.read_text())
    assert doc["seed"] == 1 and doc["version"] == __version__ and doc["config"]["rows"] == 0


def test_sample_seed_env_fallback(capsys, tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("UNIFSEL_SEED", "11")
    assert run(capsys, "sample", "--network", "lungcancer", "--rows", 50, "--out", a)[0] == 0
    monkeypatch.delenv("UNIFSEL_SEED")
    assert run(capsys, "sample", "--network", "lungcancer", "--rows", 50, "--seed", 11,
               "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads((tmp_path / "a.csv.meta.json").read_text())["seed"] == 11


def test_negative_rows_is_usage_error(capsys, tmp_path):
    assert run(capsys, "sample", "--network", "lungcancer", "--rows", -1, "--out",
               tmp_path / "x.csv")[0] == 2


# ------------------------------------------------------------ bench

def bench(capsys, out, *extra):
    code, _, err = run(capsys, "bench", "--network", "lungcancer", "--target", "LungCancer",
                       "--train-sizes", "200,50", "--test-size", 100, "--seeds", 1, "--seed", 3,
                       "--psi", 3, "--out", out, *extra)
    assert code == 0, err
    return out.read_bytes()


def test_bench_is_reproducible(capsys, tmp_path):
    a = bench(capsys, tmp_path / "a.csv", "--methods", "mmmb,mrmr,truemb")
    b = bench(capsys, tmp_path / "b.csv", "--methods", "mmmb,mrmr,truemb")
    assert a == b
    rows = list(csv.DictReader(open(tmp_path / "a.csv", newline="")))
    assert {(r["method"], r["train_size"], r["classifier"]) for r in rows} == {
        (m, s, c) for m in ("mmmb", "mrmr", "truemb") for s in ("200", "50") for c in ("knn", "nbc")}
    detail = json.loads((tmp_path / "a.json").read_text())
    check_envelope(detail, "bench")


@pytest.mark.slow
def test_bench_all_methods_small_sample(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "--network", "alarm", "--target", "HR", "--train-sizes", 50,
                       "--test-size", 100, "--seeds", 2, "--methods", "all", "--out",
                       tmp_path / "s.csv")
    assert code == 0, err
    rows = list(csv.DictReader(open(tmp_path / "s.csv", newline="")))
    assert len(rows) == 2 * 18


def test_bench_unknown_method_is_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "--network", "lungcancer", "--methods", "magic",
                       "--out", tmp_path / "x.csv")
    assert code == 2 and "magic" in err
