import json

import pytest

from corpus_cases import CATEGORY_EXAMPLES, LITERAL_EXAMPLES
from jsgen.cli import main
from jsgen.config import RunConfig, load_config
from jsgen.prep.corpus import Example, load_corpus, save_corpus


def _write(path, rows):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), encoding="utf-8")
    return str(path)


@pytest.fixture
def category_corpus(tmp_path):
    return _write(tmp_path / "cat.jsonl",
                  [{"description": d, "code": c, "category": k} for k, d, c in CATEGORY_EXAMPLES])


def test_roundtrip_category_rows(category_corpus, capsys):
    assert main(["roundtrip", category_corpus]) == 0
    out = capsys.readouterr()
    assert out.out.count("PASS") == 4 and "4/4 pass" in out.err


def test_roundtrip_reports_bad_code(tmp_path, capsys):
    path = _write(tmp_path / "bad.jsonl", [{"description": "x", "code": "{a ||"}, {"description": "y", "code": "{a;}"}])
    assert main(["roundtrip", path]) == 2
    assert "FAIL\t1" in capsys.readouterr().out


def test_preprocess_drops_and_is_idempotent(tmp_path):
    rows = [{"description": d, "code": c} for d, c, _, _ in LITERAL_EXAMPLES] + [{"description": "x", "code": "{a ||"}]
    src = _write(tmp_path / "raw.jsonl", rows)
    once, twice, report = tmp_path / "p1.jsonl", tmp_path / "p2.jsonl", tmp_path / "report.json"
    assert main(["preprocess", src, str(once), "--report", str(report)]) == 0
    assert [e.code for e in load_corpus(once)] == [c for _, _, _, c in LITERAL_EXAMPLES]
    assert [d["line"] for d in json.loads(report.read_text(encoding="utf-8"))["dropped"]] == [3]
    assert main(["preprocess", str(once), str(twice)]) == 0
    assert once.read_bytes() == twice.read_bytes()
    manifest = json.loads((tmp_path / "p1.jsonl.manifest.json").read_text(encoding="utf-8"))
    assert set(manifest) >= {"command", "config", "seed", "inputs", "versions"} and src in manifest["inputs"]


def test_exit_codes(tmp_path, capsys):
    assert main(["frobnicate"]) == 1
    assert main(["roundtrip", str(tmp_path / "missing.jsonl")]) == 2
    (tmp_path / "broken.jsonl").write_text("{oops\n", encoding="utf-8")
    assert main(["roundtrip", str(tmp_path / "broken.jsonl")]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["generate", "--checkpoint", str(tmp_path / "none.pt"), "展示"]) == 2
    assert main(["eval", "--test", str(tmp_path / "broken.jsonl")]) == 1
    assert main(["train", "--out", str(tmp_path / "o"), "--augment", "mix", "--train",
                 str(tmp_path / "missing.jsonl")]) == 2


def test_eval_perfect_predictions_is_reproducible(category_corpus, tmp_path, capsys):
    preds = _write(tmp_path / "preds.jsonl", [{"candidates": [c]} for _, _, c in CATEGORY_EXAMPLES])
    reports = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        assert main(["eval", "--test", category_corpus, "--predictions", preds, "--out", str(out)]) == 0
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]
    rep = json.loads(reports[0])
    assert (rep["acc_1"], rep["bleu"], rep["edit_sim"]) == (100.0, 100.0, 100.0)
    assert set(rep["categories"]) == {"STE", "OLE", "CE", "DPE"}
    assert "Acc-1" in capsys.readouterr().out


def test_augment_build(tmp_path):
    table = _write(tmp_path / "t.jsonl", [{"name": "picUrl", "semantic": "图片链接"},
                                         {"name": "roomStatus", "semantic": "直播状态"}])
    cg, vp = tmp_path / "cg.jsonl", tmp_path / "vp.jsonl"
    assert main(["augment", "build", "--table", table, "--task", "cg", "--out", str(cg)]) == 0
    assert main(["augment", "build", "--table", table, "--task", "vp", "--out", str(vp)]) == 0
    assert [(e.description, e.code) for e in load_corpus(cg)] == [("展示图片链接", "{picUrl;}"),
                                                                   ("展示直播状态", "{roomStatus;}")]
    assert [e.provenance for e in load_corpus(vp)] == ["aux_vp", "aux_vp"]


def test_synth_train_generate_eval(tmp_path, capsys):
    data, run = tmp_path / "data", tmp_path / "run"
    assert main(["synth", "--out", str(data), "--per-category", "3", "--table-size", "40", "--heldout", "4",
                 "--train-names", "12", "--seed", "1"]) == 0
    assert {p.name for p in data.iterdir()} >= {"train.jsonl", "test.jsonl", "table.jsonl", "heldout.json",
                                                 "manifest.json"}
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"hidden": 8, "embed": 4, "epochs": 50, "batch_size": 4}), encoding="utf-8")
    args = ["train", "--config", str(cfg), "--train", str(data / "train.jsonl"), "--table", str(data / "table.jsonl"),
            "--augment", "mix", "--epochs", "2", "--out", str(run)]
    assert main(args) == 0
    manifest = json.loads((run / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["config"]["epochs"] == 2 and manifest["config"]["hidden"] == 8
    assert (run / "loss_curve.csv").read_text().splitlines()[0] == "epoch,train_nll,val_nll"
    capsys.readouterr()
    assert main(["generate", "--checkpoint", str(run / "model.pt"), "--beam", "5", "展示图片链接"]) in (0, 2)
    lines = capsys.readouterr().out.splitlines()
    scores = [float(line.split("\t")[0]) for line in lines]
    assert len(lines) <= 5 and scores == sorted(scores, reverse=True)
    assert main(["eval", "--test", str(data / "test.jsonl"), "--checkpoint", str(run / "model.pt"),
                 "--beam", "2"]) == 0


def test_config_precedence(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"hidden": 32, "lr": 0.01}), encoding="utf-8")
    cfg = load_config(path, {"lr": 0.5, "hidden": None})
    assert (cfg.hidden, cfg.lr, cfg.embed) == (32, 0.5, 128)
    defaults = RunConfig()
    assert (defaults.hidden, defaults.embed, defaults.batch_size, defaults.epochs, defaults.lr, defaults.beam,
            defaults.val_fraction) == (256, 128, 32, 300, 1e-3, 5, 0.1)
    path.write_text(json.dumps({"hiden": 3}), encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(path)
    with pytest.raises(ValueError):
        RunConfig(augment="sometimes")


def test_corpus_helpers_are_lf_utf8(tmp_path):
    path = tmp_path / "c.jsonl"
    save_corpus(path, [Example("展示", "{a;}")])
    assert path.read_bytes() == '{"description": "展示", "code": "{a;}"}\n'.encode("utf-8")
