"""Command-line surface: configs, key syntax, caches, and exit codes."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from orbicorr.shell import (
    EXIT_ENGINE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY,
    KeyNotFound,
    PINNED_GENUS1,
    TheoryConfig,
    cache_header,
    default_cache_path,
    key_string,
    load_cache,
    main,
    parse_key,
    write_cache,
)
from orbicorr.statespace import UnsupportedTarget


@pytest.fixture()
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("ORBICORR_CACHE_DIR", str(tmp_path))
    return tmp_path


class TestTheoryConfig:
    def test_defaults(self):
        cfg = TheoryConfig("gw:p333")
        assert cfg.n_max == 6 and cfg.d_max == 6
        assert cfg.strategy == "rewrite"
        assert cfg.sign_value == 1
        assert cfg.is_gw

    def test_unknown_target(self):
        with pytest.raises(UnsupportedTarget):
            TheoryConfig("gw:p555")

    def test_invalid_caps(self):
        with pytest.raises(ValueError):
            TheoryConfig("gw:p333", n_max=2)
        with pytest.raises(ValueError):
            TheoryConfig("gw:p333", d_max=-1)
        with pytest.raises(ValueError):
            TheoryConfig("gw:p333", order=0)

    def test_invalid_strategy_and_sign(self):
        with pytest.raises(ValueError):
            TheoryConfig("gw:p333", strategy="guess")
        with pytest.raises(ValueError):
            TheoryConfig("fjrw:p8", broad_sign="negative")

    def test_canonical_excludes_cache_path(self):
        a = TheoryConfig("gw:p333", cache_path="/tmp/a.jsonl")
        b = TheoryConfig("gw:p333", cache_path=None)
        assert a.canonical() == b.canonical()

    def test_canonical_degree_cap_is_none_for_singularities(self):
        cfg = TheoryConfig("fjrw:p8", d_max=6)
        assert cfg.canonical()["d_max"] is None

    def test_sign_value_minus(self):
        assert TheoryConfig("fjrw:x9t", broad_sign="minus").sign_value == -1


class TestKeySyntax:
    def test_orbifold_line_roundtrip(self, spaces):
        sp = spaces("gw:p333")
        ids = tuple(sorted(sp.element(v).id for v in ("x1", "y1", "z1")))
        text = key_string(sp, ids, 2)
        assert text == "x1,y1,z1@d2"
        assert parse_key(sp, text) == (0, ids, 2)

    def test_singularity_roundtrip(self, spaces):
        sp = spaces("fjrw:p8")
        ids = tuple(sorted(sp.element(v).id for v in ("ex", "ex", "ex", "exyz")))
        text = key_string(sp, ids, None)
        assert "@" not in text
        assert parse_key(sp, text) == (0, ids, None)

    def test_genus_one_prefix(self, spaces):
        sp = spaces("gw:p333")
        pid = sp.top_id
        text = key_string(sp, (pid,), 3, genus=1)
        assert text.startswith("g1:")
        assert parse_key(sp, text) == (1, (pid,), 3)

    def test_parse_errors(self, spaces):
        sp = spaces("gw:p333")
        with pytest.raises(KeyNotFound):
            parse_key(sp, "x1,bogus@d1")
        with pytest.raises(KeyNotFound):
            parse_key(sp, "x1,y1,z1@dfoo")
        with pytest.raises(KeyNotFound):
            parse_key(sp, "")


class TestCacheFiles:
    def test_default_path_uses_env_dir(self, cache_dir):
        cfg = TheoryConfig("gw:p333")
        path = default_cache_path(cfg)
        assert path.parent == cache_dir
        assert path.name == "gw-p333.jsonl"

    def test_explicit_path_wins(self, cache_dir):
        cfg = TheoryConfig("gw:p333", cache_path=str(cache_dir / "custom.jsonl"))
        assert default_cache_path(cfg) == cache_dir / "custom.jsonl"

    def test_write_then_load(self, cache_dir, spaces):
        from orbicorr.recon0 import default_seeds

        sp = spaces("gw:p333")
        cfg = TheoryConfig("gw:p333", n_max=4, d_max=2)
        header = cache_header(cfg, sp, default_seeds(sp))
        row = {
            "children": [],
            "degree": 1,
            "genus": 0,
            "ins": ["x1", "y1", "z1"],
            "key": "x1,y1,z1@d1",
            "length": 0,
            "rule": "Seed",
            "theory": "gw:p333",
            "value": "1",
        }
        path = default_cache_path(cfg)
        write_cache(path, header, [row])
        got_header, got_rows = load_cache(path)
        assert got_header == header
        assert got_rows == {"x1,y1,z1@d1": row}

    def test_load_missing_raises(self, cache_dir):
        with pytest.raises(KeyNotFound):
            load_cache(cache_dir / "absent.jsonl")


class TestComputeCommand:
    def test_compute_is_deterministic(self, cache_dir):
        args = ["compute", "--theory", "gw:p333", "--nmax", "4", "--dmax", "2",
                "--tops", "2", "--order", "4"]
        assert main(args) == EXIT_OK
        path = cache_dir / "gw-p333.jsonl"
        first = path.read_bytes()
        assert main(args) == EXIT_OK
        assert path.read_bytes() == first

    def test_cache_contents(self, cache_dir):
        main(["compute", "--theory", "fjrw:p8", "--nmax", "5", "--tops", "3"])
        path = cache_dir / "fjrw-p8.jsonl"
        header, rows = load_cache(path)
        assert header["config"]["target"] == "fjrw:p8"
        assert "seed_hash" in header and "engine_version" in header
        seed = rows["ex,ex,ex,exyz"]
        assert seed["value"] == "1/3"
        assert seed["rule"] == "Seed"
        assert rows["g1:exyz,exyz,exyz"]["value"] == "1/324"
        # the file stores rows sorted by (genus, size, degree, insertions)
        raw = [json.loads(line) for line in path.read_text().splitlines()[1:]]
        assert raw == sorted(
            raw,
            key=lambda r: (
                r["genus"],
                len(r["ins"]),
                -1 if r.get("degree") is None else r["degree"],
                tuple(r["ins"]),
            ),
        )

    def test_both_strategies_agree(self, cache_dir):
        code = main(["compute", "--theory", "gw:p442", "--nmax", "4", "--dmax", "2",
                     "--tops", "1", "--strategy", "both"])
        assert code == EXIT_OK


class TestExplainCommand:
    def test_explains_cached_key(self, cache_dir, capsys):
        main(["compute", "--theory", "gw:p333", "--nmax", "4", "--dmax", "2",
              "--tops", "1"])
        code = main(["explain", "--theory", "gw:p333", "--nmax", "4", "--dmax", "2",
                     "--tops", "1", "x1,x1,x2,x2@d0"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "x1,x1,x2,x2@d0" in out
        assert "-1/9" in out
        # seed keys always carry the Seed rule regardless of evaluation order
        code = main(["explain", "--theory", "gw:p333", "--nmax", "4", "--dmax", "2",
                     "--tops", "1", "x1,y1,z1@d1"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Seed" in out

    def test_constant_keys_need_no_cache(self, cache_dir, capsys):
        code = main(["explain", "--theory", "gw:p333", "x1,x1,x2@d2"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Selection0" in out

    def test_missing_cache_is_an_engine_error(self, cache_dir):
        code = main(["explain", "--theory", "gw:p333", "x1,y1,z1@d1"])
        assert code == EXIT_ENGINE

    def test_malformed_key_is_an_engine_error(self, cache_dir):
        code = main(["explain", "--theory", "gw:p333", "x1,bogus@d1"])
        assert code == EXIT_ENGINE


class TestExportCommand:
    def test_json_export(self, cache_dir, tmp_path):
        main(["compute", "--theory", "fjrw:x9t", "--nmax", "4", "--tops", "3"])
        out = tmp_path / "dump.json"
        code = main(["export", "--theory", "fjrw:x9t", "--nmax", "4", "--tops", "3",
                     "--format", "json", "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text())
        assert data["header"]["config"]["target"] == "fjrw:x9t"
        assert data["rows"]
        first = out.read_bytes()
        main(["export", "--theory", "fjrw:x9t", "--nmax", "4", "--tops", "3",
              "--format", "json", "--out", str(out)])
        assert out.read_bytes() == first

    def test_csv_export(self, cache_dir, tmp_path):
        main(["compute", "--theory", "fjrw:x9t", "--nmax", "4", "--tops", "3"])
        out = tmp_path / "dump.csv"
        code = main(["export", "--theory", "fjrw:x9t", "--nmax", "4", "--tops", "3",
                     "--format", "csv", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "theory,genus,insertions,degree,value"
        assert any("fjrw:x9t" in line for line in lines[1:])

    def test_export_without_cache_fails(self, cache_dir, tmp_path):
        code = main(["export", "--theory", "fjrw:x9t", "--format", "json",
                     "--out", str(tmp_path / "x.json")])
        assert code == EXIT_ENGINE


class TestVerifyCommand:
    def test_ring_suite_single_theory(self, cache_dir, capsys):
        code = main(["verify", "--theory", "gw:p333", "--suite", "ring"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is True
        assert report["results"][0]["theory"] == "gw:p333"

    def test_ring_suite_all_theories(self, cache_dir, capsys):
        code = main(["verify", "--suite", "ring"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert [r["theory"] for r in report["results"]] == [
            "gw:p333",
            "gw:p442",
            "gw:p632",
            "fjrw:p8",
            "fjrw:x9t",
            "fjrw:j10t",
        ]


class TestBoundsCommand:
    def test_small_caps_pass(self, cache_dir, capsys):
        code = main(["bounds", "--theory", "fjrw:p8", "--nmax", "5", "--tops", "2"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is True


class TestExitCodes:
    def test_unknown_theory_is_usage(self):
        with pytest.raises(SystemExit) as err:
            main(["compute", "--theory", "gw:bogus"])
        assert err.value.code == EXIT_USAGE

    def test_unknown_command_is_usage(self):
        with pytest.raises(SystemExit) as err:
            main(["transmogrify"])
        assert err.value.code == EXIT_USAGE

    def test_bad_caps_are_usage(self):
        assert main(["compute", "--theory", "gw:p333", "--nmax", "1"]) == EXIT_USAGE


class TestPinnedGenusOne:
    def test_table_matches_known_values(self):
        assert PINNED_GENUS1["gw:p333"] == {0: Fraction(-1, 24), 3: Fraction(1)}
        assert PINNED_GENUS1["gw:p442"] == {0: Fraction(-1, 24), 4: Fraction(1)}
        assert PINNED_GENUS1["gw:p632"] == {0: Fraction(-1, 24), 6: Fraction(1)}
        assert PINNED_GENUS1["fjrw:p8"] == {3: Fraction(1, 324)}
        assert PINNED_GENUS1["fjrw:x9t"] == {3: Fraction(-1, 432)}
        assert PINNED_GENUS1["fjrw:j10t"] == {3: Fraction(-1, 648)}
