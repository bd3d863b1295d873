import functools
import json

import pytest

from ctinovelty import cli
from ctinovelty.centroid import CentroidModel
from ctinovelty.ingest import load_jsonl, read_results
from ctinovelty.models import load_model
from ctinovelty.ocsvm import OcsvmModel
from ctinovelty.synth import baseline_corpus
from ctinovelty.textprep import load_stopwords, normalize
from ctinovelty.vectorspace import embed

CVES = [
    {"cve_id": "CVE-2017-0144", "description": "SMBv1 server remote code execution via crafted packets", "published": "2017-03-17"},
    {"cve_id": "CVE-2017-11882", "description": "Microsoft Office memory corruption remote code execution", "published": "2017-11-15"},
    {"cve_id": "CVE-2017-5638", "description": "Apache Struts Jakarta multipart parser remote command injection", "published": "2017-03-11"},
    {"cve_id": "CVE-2018-0101", "description": "Cisco ASA SSL VPN double free remote code execution", "published": "2018-01-29"},
]
DOCS = [
    {"id": "t1", "text": "New Struts multipart parser bug allows remote command injection", "label": "positive"},
    {"id": "t2", "text": "Great coffee this morning with the team!", "label": "negative"},
    {"id": "t3", "text": CVES[0]["description"], "label": "positive"},
    {"id": "t4", "text": "Office memory corruption exploited in the wild #infosec", "label": "positive"},
    {"id": "t5", "text": "Weekend football results", "label": "negative"},
]


def jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "cve": jsonl(tmp_path / "cve.jsonl", CVES),
        "docs": jsonl(tmp_path / "docs.jsonl", DOCS),
        "dir": tmp_path,
    }


def run(*argv):
    return cli.main([str(a) for a in argv])


def train_2017(files, *extra):
    out = files["dir"] / "model.json"
    code = run("train", "--cve", files["cve"], "--from", "2017-01-01", "--to", "2017-12-31", "--out", out, *extra)
    return code, out


def test_train_centroid_records_corpus_size(files, capsys):
    code, out = train_2017(files)
    assert code == 0
    m = load_model(out)
    assert isinstance(m, CentroidModel) and m.vocab.corpus_size == 3
    assert "N=3" in capsys.readouterr().err


def test_train_ocsvm_invariants_on_load(files):
    code, out = train_2017(files, "--model", "ocsvm", "--nu", "0.5")
    assert code == 0
    m = load_model(out)
    assert isinstance(m, OcsvmModel)
    assert abs(m.alphas.sum() - 1) <= 1e-8 and m.alphas.max() <= 1 / (0.5 * 3)


def test_train_empty_after_filter(files):
    out = files["dir"] / "m.json"
    assert run("train", "--cve", files["cve"], "--from", "2016-01-01", "--to", "2016-12-31", "--out", out) == 3
    assert not out.exists()


def test_train_strict_convergence(files):
    code, _ = train_2017(files, "--model", "ocsvm", "--nu", "0.3", "--tol", "1e-15", "--max-iter", "0", "--strict")
    assert code == 4


def test_usage_errors(files):
    assert run("train", "--cve", files["dir"] / "missing.jsonl", "--out", files["dir"] / "m.json") == 2
    assert run("bogus") == 2
    assert run("train", "--cve", files["cve"], "--from", "2017-13-01", "--out", files["dir"] / "m.json") == 2
    assert run("train", "--cve", files["cve"], "--from", "2018-01-01", "--to", "2017-01-01",
               "--out", files["dir"] / "m.json") == 2


def test_bad_feed_is_data_error(files):
    bad = jsonl(files["dir"] / "bad.jsonl", [{"cve_id": "CVE-18-1", "description": "x", "published": "2018-01-01"}])
    assert run("train", "--cve", bad, "--out", files["dir"] / "m.json") == 3


def test_classify_empty_input(files):
    _, model = train_2017(files)
    empty = files["dir"] / "empty.jsonl"
    empty.write_text("")
    out = files["dir"] / "r.jsonl"
    assert run("classify", "--model", model, "--docs", empty, "--out", out) == 0
    assert out.read_text() == ""


def test_classify_matches_library(files):
    _, model_path = train_2017(files, "--threshold", "0.6")
    out = files["dir"] / "r.jsonl"
    assert run("classify", "--model", model_path, "--docs", files["docs"], "--out", out) == 0
    model = load_model(model_path)
    tok = functools.partial(normalize, stopwords=load_stopwords())
    expected = []
    for d in load_jsonl(files["docs"]):
        v = embed(tok(d.text), model.vocab)
        expected.append((d.id, model.predict(v), model.score(v)))
    assert read_results(out) == expected
    # t3 repeats a training description: low score, normal
    t3 = next(r for r in expected if r[0] == "t3")
    assert t3[1] == "normal" and t3[2] < 0.6


def test_rank(files):
    _, model = train_2017(files)
    out = files["dir"] / "rank.jsonl"
    assert run("rank", "--model", model, "--docs", files["docs"], "--k", 3, "--out", out) == 0
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(rows) == 3
    weights = [r["relevance_weight"] for r in rows]
    assert weights == sorted(weights, reverse=True)
    assert run("rank", "--docs", files["docs"], "--out", out) == 2


def test_rank_from_cve_feed_matches_model_vocab(files):
    _, model = train_2017(files)
    a, b = files["dir"] / "a.jsonl", files["dir"] / "b.jsonl"
    run("rank", "--model", model, "--docs", files["docs"], "--out", a)
    run("rank", "--cve", files["cve"], "--from", "2017-01-01", "--to", "2017-12-31", "--docs", files["docs"], "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_link_verbatim(files):
    out = files["dir"] / "link.jsonl"
    assert run("link", "--cve", files["cve"], "--from", "2015-01-01", "--to", "2019-04-30",
               "--docs", files["docs"], "--k", 2, "--out", out) == 0
    rows = {r["id"]: r for r in map(json.loads, out.read_text().splitlines())}
    assert rows["t3"]["matches"][0] == {"cve_id": "CVE-2017-0144", "score": pytest.approx(1.0, abs=1e-12)}
    assert all(len(r["matches"]) == 2 for r in rows.values())


def test_link_skip_cited(files):
    docs = jsonl(files["dir"] / "cited.jsonl", [{"id": "a", "text": "patch CVE-2018-0101 now"}, {"id": "b", "text": "vpn bug"}])
    out = files["dir"] / "link.jsonl"
    assert run("link", "--cve", files["cve"], "--docs", docs, "--skip-cited", "--out", out) == 0
    assert [json.loads(x)["id"] for x in out.read_text().splitlines()] == ["b"]


def test_eval_baseline_reproduces_reported_f1(files):
    docs = [{"id": d.id, "text": d.text, "label": d.label} for d in baseline_corpus(seed=1)]
    path = jsonl(files["dir"] / "lab.jsonl", docs)
    out = files["dir"] / "report.json"
    assert run("eval", "--docs", path, "--baseline", "cve", "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["f1"] == pytest.approx(0.361, abs=1e-3)
    assert rep["confusion"]["tp"] == 53


def test_eval_results_and_sweep(files):
    _, model = train_2017(files)
    res = files["dir"] / "r.jsonl"
    run("classify", "--model", model, "--docs", files["docs"], "--out", res)
    rep_path = files["dir"] / "rep.json"
    assert run("eval", "--docs", files["docs"], "--results", res, "--out", rep_path) == 0
    rep = json.loads(rep_path.read_text())
    assert sum(rep["confusion"].values()) == len(DOCS)
    csv_path = files["dir"] / "pr.csv"
    assert run("sweep", "--model", model, "--docs", files["docs"], "--out", csv_path) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "threshold,precision,recall,f1" and len(lines) >= 2
    assert run("eval", "--docs", files["docs"], "--out", rep_path) == 2


def test_eval_unlabelled_is_data_error(files):
    unl = jsonl(files["dir"] / "u.jsonl", [{"id": "a", "text": "CVE-2018-0101"}])
    assert run("eval", "--docs", unl, "--baseline", "cve") == 3


def test_train_with_dev_threshold(files):
    code, out = train_2017(files, "--dev", files["docs"])
    assert code == 0
    assert 0.0 <= load_model(out).threshold <= 1.0


def test_stopwords_dump(files, capsys):
    assert run("stopwords-dump") == 0
    assert capsys.readouterr().out.splitlines()[:3] == ["i", "me", "my"]


def test_config_override(files):
    cfg = files["dir"] / "cfg.json"
    cfg.write_text(json.dumps({"cve": files["cve"], "from": "2017-01-01", "to": "2017-12-31",
                               "model": "ocsvm", "nu": 0.9, "out": str(files["dir"] / "c.json")}))
    assert run("--config", cfg, "train") == 0
    m = load_model(files["dir"] / "c.json")
    assert isinstance(m, OcsvmModel) and m.nu == 0.9
    # explicit flags win over the config file
    assert run("--config", cfg, "train", "--nu", "0.5") == 0
    assert load_model(files["dir"] / "c.json").nu == 0.5
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("--config", cfg, "train") == 2


def test_synth_writes_fixtures(tmp_path):
    assert run("synth", "--out-dir", tmp_path, "--seed", 3) == 0
    assert {p.name for p in tmp_path.iterdir()} == {"cve.jsonl", "dev.jsonl", "test.jsonl"}
    assert len(load_jsonl(tmp_path / "dev.jsonl")) == 200
    assert run("synth", "--kind", "cve-baseline", "--out-dir", tmp_path) == 0
    assert len(load_jsonl(tmp_path / "labelled.jsonl")) == 532
