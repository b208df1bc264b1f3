"""End-to-end sanity checks for the python bindings."""

import os
import pathlib

import pytest

import newsdig as nd

FIXTURES = pathlib.Path(os.environ["NEWSDIG_FIXTURE_DIR"])


def test_edit_distance_and_cer():
    assert nd.levenshtein("kitten", "sitting") == 3
    assert nd.levenshtein("", "abc") == 3
    assert nd.levenshtein("café", "cafe") == 1  # scalar values, not bytes
    assert nd.cer(["abc"], ["abd"]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        nd.cer(["x"], [""])


def test_boxes_and_nms():
    a = nd.BoundingBox(0, 0, 10, 10)
    b = nd.BoundingBox(5, 0, 15, 10)
    assert nd.iou(a, b) == pytest.approx(50 / 150)
    dets = [
        nd.Detection(nd.BoundingBox(0, 0, 10, 10), "headline", 0.9),
        nd.Detection(nd.BoundingBox(1, 0, 11, 10), "headline", 0.8),
        nd.Detection(nd.BoundingBox(200, 200, 240, 220), "headline", 0.7),
    ]
    kept = nd.nms(dets, 0.2)
    assert [d.score for d in kept] == [0.9, 0.7]


def test_lexicon_and_spell():
    lex = nd.Lexicon()
    lex.add(nd.Term("village", frequency=10))
    lex.add(nd.Term("villain", frequency=5))
    assert "village" in lex
    assert len(lex) == 2
    spell = nd.SpellIndex(lex, max_edit=2)
    assert spell.correct("vilage") == "village"
    assert spell.correct("VILAGE") == "VILLAGE"
    assert spell.correct("villain") == "villain"


def test_exemplar_index_and_contrastive_math():
    index = nd.ExemplarIndex.build(
        nd.IndexKind.word, ["alpha", "beta"], [[1.0, 0.0], [0.0, 1.0]]
    )
    hit = index.nearest([0.9, 0.1])
    assert (hit.label, hit.row) == ("alpha", 0)

    batch = nd.EmbeddingBatch(
        [[1.0, 0.0], [0.6, 0.8], [0.0, 1.0], [0.8, 0.6]], [0, 0, 1, 1]
    )
    loss = nd.supcon_loss(batch, 0.1)
    assert loss > 0.0
    grad = nd.supcon_gradient(batch, 0.1)
    assert len(grad) == 4 and len(grad[0]) == 2


def test_sampler_balance():
    variants = {f"w{i}": [f"w{i}-v{j}" for j in range(3)] for i in range(6)}
    cfg = nd.SamplerConfig()
    cfg.m_per_class = 4
    cfg.batch_size = 8
    cfg.seed = 7
    drawn = [item.class_id for batch in nd.sample_epoch(variants, cfg) for item in batch]
    assert len(drawn) == 24
    for i in range(6):
        assert drawn.count(f"w{i}") == 4


def test_association():
    scan = nd.PageScan()
    scan.scan_id = "s"
    scan.width_px = 1000
    scan.height_px = 1000
    head = nd.ContentRegion()
    head.id = "h"
    head.cls = nd.ContentClass.headline
    head.box = nd.BoundingBox(100, 100, 500, 150)
    head.text = "HEAD"
    body = nd.ContentRegion()
    body.id = "a"
    body.cls = nd.ContentClass.article
    body.box = nd.BoundingBox(100, 170, 500, 800)
    body.text = "body"
    scan.regions = [head, body]

    result = nd.associate_regions(scan)
    assert result.headline_links == [("h", "a")]
    assert result.articles[0].headline == "HEAD"
    assert result.articles[0].source_region_ids == ["h", "a"]
    assert nd.association_f1({("h", "a")}, {("h", "a")}) == 1.0


def test_batch_run_matches_reference(tmp_path):
    cfg = nd.PipelineConfig.load(str(FIXTURES / "batch3" / "config.json"))
    summary = nd.run_batch(
        str(FIXTURES / "batch3" / "manifest.jsonl"), cfg, str(tmp_path)
    )
    assert summary.scans_processed == 3
    assert summary.scans_failed == 0
    assert summary.article_count == 2
    for name in ("articles.jsonl", "scans.jsonl", "errors.jsonl", "summary.json"):
        golden = (FIXTURES / "batch3" / "golden" / name).read_bytes()
        assert (tmp_path / name).read_bytes() == golden, name


def test_eval_report(tmp_path):
    gold = tmp_path / "gold.jsonl"
    pred = tmp_path / "pred.jsonl"
    gold.write_text(
        '{"id": "a1", "class": "headline", "text": "THE STORM"}\n'
        '{"id": "a2", "class": "article", "text": "rain fell all day"}\n'
    )
    pred.write_text(
        '{"id": "a1", "class": "headline", "text": "THE STORM"}\n'
        '{"id": "a2", "class": "article", "text": "rain fel oll day"}\n'
    )
    report = nd.evaluate_files(str(pred), str(gold))
    assert report.pair_count == 2
    assert report.cer_total == pytest.approx(2 / 26)
    assert report.cer_by_class["headline"] == 0.0
