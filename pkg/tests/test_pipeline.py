import json
import os

import pytest

from tweetscope.cli import main as cli_main
from tweetscope.config import PipelineConfig, config_from_dict, load_config
from tweetscope.errors import ConfigError, StageError
from tweetscope.pipeline import (ARTIFACT_NAMES, run_pipeline, sha256_file,
                                 verify_manifest, write_json)
from tweetscope.synthetic import SynthParams, generate_corpus


def make_config(tmp_path, **overrides) -> PipelineConfig:
    raw_dir = tmp_path / "raw"
    generate_corpus(str(raw_dir), SynthParams(n_records=800, seed=5, n_files=2,
                                              n_days=12))
    base = {
        "input_globs": [str(raw_dir / "*.ndjson")],
        "store_dir": str(tmp_path / "out" / "store"),
        "out_dir": str(tmp_path / "out"),
        "topics": {"k": 4, "sample_cap": 400},
        "export": {"cascade_limit": 20},
    }
    base.update(overrides)
    return config_from_dict(base)


@pytest.fixture(scope="module")
def pipeline_out(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("pipe")
    cfg = make_config(tmp_path)
    results = run_pipeline(cfg)
    return tmp_path, cfg, results


class TestRunPipeline:
    def test_all_artifacts_present(self, pipeline_out):
        tmp_path, cfg, results = pipeline_out
        manifest = json.load(open(os.path.join(cfg.out_dir, "artifacts", "manifest.json")))
        assert set(manifest["files"]) == set(ARTIFACT_NAMES)
        assert len(manifest["files"]) == 12
        for entry in manifest["files"].values():
            path = os.path.join(cfg.out_dir, "artifacts", entry["path"])
            assert os.path.exists(path)
            assert sha256_file(path) == entry["sha256"]

    def test_manifest_verifies(self, pipeline_out):
        _, cfg, _ = pipeline_out
        assert verify_manifest(os.path.join(cfg.out_dir, "artifacts")) == []

    def test_rerun_skips_and_preserves_hashes(self, pipeline_out):
        _, cfg, _ = pipeline_out
        manifest_path = os.path.join(cfg.out_dir, "artifacts", "manifest.json")
        before = sha256_file(manifest_path)
        results = run_pipeline(cfg)
        assert all(r.skipped for r in results)
        assert sha256_file(manifest_path) == before

    def test_misinfo_daily_schema(self, pipeline_out):
        _, cfg, _ = pipeline_out
        daily_dir = os.path.join(cfg.out_dir, "artifacts", "misinfo_daily")
        files = sorted(os.listdir(daily_dir))
        assert files, "fixture produced no misinformation days"
        rows = json.load(open(os.path.join(daily_dir, files[0])))
        sizes = [r["cascade_size"] for r in rows]
        assert sizes == sorted(sizes, reverse=True)
        for row in rows:
            assert set(row) == {"tweet_id", "text", "categories",
                                "matched_domain", "cascade_size"}
            assert isinstance(row["tweet_id"], str)
            assert row["categories"]
            assert len(row["text"]) <= 280

    def test_cascade_files_schema(self, pipeline_out):
        _, cfg, _ = pipeline_out
        cascade_dir = os.path.join(cfg.out_dir, "artifacts", "cascades")
        files = os.listdir(cascade_dir)
        assert 0 < len(files) <= 20
        largest = None
        for fname in files:
            payload = json.load(open(os.path.join(cascade_dir, fname)))
            assert payload["root_id"] == fname[:-5]
            assert payload["size"] == len(payload["members"])
            none_parents = [m for m in payload["members"] if m["parent_id"] is None]
            assert len(none_parents) == 1
            for point in payload["trace"]:
                assert point["kind"] in ("source", "response")
            times = [p["t"] for p in payload["trace"]]
            assert times == sorted(times)
            if largest is None or payload["size"] > largest:
                largest = payload["size"]

    def test_dataset_stats_artifact(self, pipeline_out):
        _, cfg, _ = pipeline_out
        stats = json.load(open(os.path.join(cfg.out_dir, "artifacts",
                                            "dataset_stats.json")))
        assert 0 <= stats["pct_english"] <= 100
        assert 0 <= stats["pct_geo_of_english"] <= 100
        assert stats["n_tweets"] > 0

    def test_misinfo_stats_schema(self, pipeline_out):
        _, cfg, _ = pipeline_out
        payload = json.load(open(os.path.join(cfg.out_dir, "artifacts",
                                              "misinfo_stats.json")))
        assert set(payload["misinfo"]) == {"n_source_tweets", "n_source_with_urls",
                                           "n_misinfo_source", "fraction"}
        assert payload["graph"]["node_count"] >= payload["graph"]["edge_count"]

    def test_narratives_schema(self, pipeline_out):
        _, cfg, _ = pipeline_out
        narratives = json.load(open(os.path.join(cfg.out_dir, "artifacts",
                                                 "narratives.json")))
        assert set(narratives) == {"unreliable", "conspiracy", "clickbait",
                                   "political_biased", "distinctive"}
        for rows in (narratives[c] for c in ("unreliable", "conspiracy")):
            for row in rows:
                assert set(row) == {"hashtag", "tf", "idf", "score"}

    def test_multi_category_root_exports_array(self, pipeline_out):
        _, cfg, _ = pipeline_out
        daily_dir = os.path.join(cfg.out_dir, "artifacts", "misinfo_daily")
        multi = []
        for fname in os.listdir(daily_dir):
            for row in json.load(open(os.path.join(daily_dir, fname))):
                if len(row["categories"]) >= 2:
                    multi.append(row)
        assert multi, "fixture should contain at least one multi-category root"


class TestStageIsolation:
    def test_missing_catalog_aborts_label_stage(self, tmp_path):
        cfg = make_config(tmp_path)
        run_pipeline(cfg, upto="geo")
        stats_path = os.path.join(cfg.out_dir, "artifacts", "dataset_stats.json")
        assert os.path.exists(stats_path)
        before = sha256_file(stats_path)
        cfg.catalogs = [str(tmp_path / "nope.csv")]
        with pytest.raises(StageError) as err:
            run_pipeline(cfg)
        assert err.value.stage == "label"
        assert sha256_file(stats_path) == before    # prior artifacts intact
        completed = [r.name for r in err.value.completed]
        assert "ingest" in completed and "label" not in completed

    def test_partial_run_then_resume(self, tmp_path):
        cfg = make_config(tmp_path)
        first = run_pipeline(cfg, upto="cascades")
        assert [r.name for r in first] == ["ingest", "label", "cascades"]
        rest = run_pipeline(cfg)
        by_name = {r.name: r for r in rest}
        assert by_name["ingest"].skipped
        assert by_name["cascades"].skipped
        assert not by_name["export"].skipped

    def test_changed_input_invalidates(self, tmp_path):
        cfg = make_config(tmp_path)
        run_pipeline(cfg, upto="ingest")
        raw = next(iter(sorted(os.listdir(tmp_path / "raw"))))
        with open(tmp_path / "raw" / raw, "at", encoding="utf-8") as fh:
            fh.write('{"id_str":"777000","text":"covid19 extra","lang":"en",'
                     '"created_at":"2020-03-05T00:00:00Z",'
                     '"user":{"id_str":"1","screen_name":"x"}}\n')
        results = run_pipeline(cfg, upto="ingest")
        assert not results[-1].skipped


class TestConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"input_globs": [], "bogus": 1})

    def test_unknown_section_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"topics": {"clusters": 3}})

    def test_bad_date(self):
        with pytest.raises(ConfigError):
            config_from_dict({"date_start": "March 1st"})

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "input_globs": ["raw/*.ndjson"], "store_dir": "o/store",
            "out_dir": "o"}))
        cfg = load_config(str(cfg_path))
        assert cfg.out_dir == str(tmp_path / "o")
        assert cfg.input_globs == [str(tmp_path / "raw" / "*.ndjson")]

    def test_empty_keywords_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"keywords": []})


class TestCli:
    def write_cfg(self, tmp_path, **extra):
        raw_dir = tmp_path / "raw"
        generate_corpus(str(raw_dir), SynthParams(n_records=300, seed=2, n_files=1))
        cfg = {"input_globs": ["raw/*.ndjson"], "store_dir": "out/store",
               "out_dir": "out", "topics": {"k": 3, "sample_cap": 200},
               "export": {"cascade_limit": 5}}
        cfg.update(extra)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        return str(path)

    def test_exit_zero_on_success(self, tmp_path, capsys):
        rc = cli_main(["all", "--config", self.write_cfg(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "[export] done" in out

    def test_exit_two_on_config_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli_main(["all", "--config", str(bad)]) == 2

    def test_exit_two_on_missing_config(self, tmp_path):
        assert cli_main(["all", "--config", str(tmp_path / "none.json")]) == 2

    def test_exit_three_on_stage_failure(self, tmp_path, capsys):
        cfg_path = self.write_cfg(tmp_path, catalogs=["missing_catalog.csv"])
        # config validation catches the missing file up front -> exit 2;
        # deleting it after validation is the stage-failure path, so point
        # at a file that exists but is malformed
        bad = tmp_path / "malformed.csv"
        bad.write_text("domain,provider,tags\nx.org,nonsense,fake\n")
        cfg_path = self.write_cfg(tmp_path, catalogs=[str(bad)])
        rc = cli_main(["all", "--config", cfg_path])
        assert rc == 3
        err = capsys.readouterr().err
        assert "label" in err

    def test_single_stage_command(self, tmp_path, capsys):
        cfg_path = self.write_cfg(tmp_path)
        assert cli_main(["ingest", "--config", cfg_path]) == 0
        out = capsys.readouterr().out
        assert "[ingest] done" in out
        assert "export" not in out

    def test_verify_command(self, tmp_path, capsys):
        cfg_path = self.write_cfg(tmp_path)
        assert cli_main(["all", "--config", cfg_path]) == 0
        assert cli_main(["verify", "--config", cfg_path]) == 0
        assert "manifest ok" in capsys.readouterr().out


class TestWriteJson:
    def test_deterministic_bytes(self, tmp_path):
        p1, p2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        write_json(p1, {"b": 1, "a": [1.5, 2], "c": {"y": None, "x": "é"}})
        write_json(p2, {"c": {"x": "é", "y": None}, "a": [1.5, 2], "b": 1})
        assert open(p1, "rb").read() == open(p2, "rb").read()
