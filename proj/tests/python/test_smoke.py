import json
import math

import pytest

import headsum


def test_text_helpers():
    assert headsum.normalize_text("  Hello   world  ") == "Hello world"
    assert headsum.split_sentences("One. Two! Three?") == ["One.", "Two!", "Three?"]
    assert headsum.tokenize("The cat, fast.") == ["The", "cat", ",", "fast", "."]


def test_overlap_metrics():
    assert headsum.rouge_n([3, 4, 5], [3, 4, 6], n=1) == pytest.approx(2 / 3)
    assert headsum.rouge_n([3, 4, 5], [3, 4, 5, 6], n=2) == pytest.approx(0.8)
    assert headsum.rouge_l([3, 9, 4], [3, 4]) == pytest.approx(0.8)
    assert headsum.bleu([3, 4, 5, 6], [3, 4, 5, 6, 7, 8, 9, 10]) == pytest.approx(0.5)


def test_prf_conventions():
    assert headsum.prf(2, 1, 1) == pytest.approx((2 / 3, 2 / 3, 2 / 3))
    assert headsum.prf(0, 0, 0) == (1.0, 1.0, 1.0)
    assert headsum.prf(0, 1, 0) == (0.0, 1.0, 0.0)


def test_oracle_picks_planted_sentences():
    sentences = [[3, 4], [5, 6], [7, 8]]
    summary = [[3, 4], [7, 8]]
    assert headsum.oracle_indices(sentences, summary, tau=4) == [1, 3]
    assert headsum.oracle_indices(sentences, [[90, 91]], tau=4) == []


def test_scoring_helpers():
    assert headsum.cosine([1.0, 0.0], [1.0, 0.0]) == pytest.approx(1.0)
    assert headsum.cosine([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)
    assert headsum.aggregate(0.8, 0.4, mode="sa") == pytest.approx(0.6)
    hm = headsum.aggregate(0.8, 0.4, mode="hm")
    assert hm == pytest.approx(2 * 0.8 * 0.4 / 1.2)
    assert headsum.aggregate(0.8, 0.4, mode="weighted", alpha=1.0) == 0.8
    assert headsum.select([0.5, 0.49, 0.9], threshold=0.5) == [1, 3]


def _write_corpus(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")


def test_pipeline_roundtrip(tmp_path):
    rows = []
    for i in range(6):
        a, b, c = f"alpha{i}", f"beta{i}", f"gamma{i}"
        rows.append(
            {
                "id": f"doc-{i}",
                "source": "daily" if i % 2 == 0 else "weekly",
                "headline": f"{a} {b}",
                "body": f"{a} {b} {c}. filler one here. filler two there.",
                "summary": f"{a} {b} {c}.",
            }
        )
    corpus = tmp_path / "train.jsonl"
    _write_corpus(corpus, rows)

    config = {
        "seed": 3,
        "outDir": str(tmp_path / "out"),
        "corpus": {"train": str(corpus)},
        "model": {"d": 8, "heads": 2, "layers": 1, "maxPositions": 64},
        "train": {"epochs": 1},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))

    report = json.loads(headsum.run_pipeline(str(config_path)))
    assert report["split"] == "train"
    assert report["documents"] == 6
    systems = [row["system"] for row in report["sources"][0]["rows"]]
    assert systems == ["oracle", "lead-2", "hl", "hl-cos", "sel-only", "hm", "sa"]
    oracle_row = report["sources"][0]["rows"][0]
    assert oracle_row["extractive"]["rouge1"] == pytest.approx(1.0)

    checkpoint = tmp_path / "out" / "checkpoint.bin"
    assert checkpoint.exists()
    replay = json.loads(headsum.run_pipeline(str(config_path), str(checkpoint)))
    assert replay["sources"] == report["sources"]

    sweep = json.loads(
        headsum.alpha_sweep(str(config_path), [0.0, 0.5, 1.0], str(checkpoint))
    )
    assert [point["alpha"] for point in sweep["alphaSweep"]] == [0.0, 0.5, 1.0]
    for point in sweep["alphaSweep"]:
        assert 0.0 <= point["sentence"]["f1"] <= 1.0

    analysis = json.loads(headsum.analyze(str(config_path), str(checkpoint)))
    assert analysis["similarity"]["positive"]["count"] >= 1
    assert len(analysis["gridAxis"]) == 101
    assert not math.isnan(analysis["similarity"]["positive"]["median"])
