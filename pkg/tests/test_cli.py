import builtins
import json
import sys

import pytest

from conftest import FIXTURES, write_config
from recthes.cli import main


@pytest.fixture()
def config_path(tmp_path):
    return write_config(tmp_path)


def run(config_path, *args):
    return main(["--config", str(config_path), *args])


def write_full_manifest(tmp_path):
    rows = []
    for nd in (1, 2, 3, 4):
        doc = FIXTURES / "corpus" / "en" / f"doc{nd}.txt"
        rows.append(f"{nd}\ten\t{doc}\tdoc{nd}")
    path = tmp_path / "manifest_all.tsv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def write_resolutions(tmp_path):
    path = tmp_path / "res.tsv"
    path.write_text("bank\ten\tfinance\ngigantic\ten\t-\n", encoding="utf-8")
    return path


class TestDictValidate:
    def test_fixture_dictionaries_are_clean(self, config_path, capsys):
        assert run(config_path, "dict", "validate") == 0
        out = capsys.readouterr().out
        assert "0 error(s), 0 warning(s)" in out

    def test_broken_dictionary_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("xx\tonly\tthree\n", encoding="utf-8")
        empty = tmp_path / "empty.tsv"
        empty.write_text("", encoding="utf-8")
        cfg = write_config(tmp_path, languages={
            "xx": {"main": str(bad), "variations": str(empty),
                   "stopwords": str(empty)}})
        assert run(cfg, "dict", "validate") == 1
        err = capsys.readouterr().err
        assert "bad.tsv:1" in err and "columns" in err


class TestIndexAndQuery:
    def test_end_to_end(self, config_path, capsys):
        manifest = FIXTURES / "manifest_en.tsv"
        assert run(config_path, "index", str(manifest)) == 0
        out = capsys.readouterr().out
        assert "inserted 3 rectangle(s)" in out
        assert "doc 1: significant terms: C_DB, C_SW" in out

        assert run(config_path, "query", "--lang", "en", "database") == 0
        out = capsys.readouterr().out
        assert "documents: 1 2" in out

        assert run(config_path, "query", "--lang", "de", "Datenbanken") == 0
        assert "documents: 1 2" in capsys.readouterr().out

    def test_compound_query_term(self, config_path, capsys):
        run(config_path, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(config_path, "query", "--lang", "en",
                   "operating systems") == 0
        assert "documents: 3" in capsys.readouterr().out

    def test_query_without_match_is_not_an_error(self, config_path, capsys):
        run(config_path, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(config_path, "query", "--lang", "en",
                   "design", "operating system") == 0
        assert "broaden" in capsys.readouterr().out

    def test_ambiguous_query_exits_nonzero(self, config_path, capsys):
        run(config_path, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(config_path, "query", "--lang", "en", "bank") == 2
        err = capsys.readouterr().err
        assert "bank:finance" in err and "bank:geography" in err

    def test_scripted_resolutions(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        manifest = write_full_manifest(tmp_path)
        res = write_resolutions(tmp_path)
        assert run(cfg, "index", str(manifest), "--resolutions",
                   str(res)) == 0
        assert "inserted 4 rectangle(s)" in capsys.readouterr().out
        assert run(cfg, "query", "--lang", "en", "bank:finance") == 0
        assert "documents: 4" in capsys.readouterr().out

    def test_pending_without_terminal_fails_with_listing(self, tmp_path,
                                                         capsys, monkeypatch):
        monkeypatch.setattr(sys.stdin, "isatty", lambda: False)
        cfg = write_config(tmp_path)
        manifest = write_full_manifest(tmp_path)
        assert run(cfg, "index", str(manifest)) == 1
        err = capsys.readouterr().err
        assert "'bank'" in err and "finance" in err

    def test_interactive_equals_scripted(self, tmp_path, capsys, monkeypatch):
        scripted_dir = tmp_path / "a"
        scripted_dir.mkdir()
        cfg_a = write_config(scripted_dir)
        run(cfg_a, "index", str(write_full_manifest(scripted_dir)),
            "--resolutions", str(write_resolutions(scripted_dir)))

        interactive_dir = tmp_path / "b"
        interactive_dir.mkdir()
        cfg_b = write_config(interactive_dir)
        monkeypatch.setattr(sys.stdin, "isatty", lambda: True)
        answers = iter(["1!", "d"])
        monkeypatch.setattr(builtins, "input", lambda *a: next(answers))
        assert run(cfg_b, "index",
                   str(write_full_manifest(interactive_dir))) == 0
        capsys.readouterr()

        a = (scripted_dir / "data" / "thesaurus.json").read_bytes()
        b = (interactive_dir / "data" / "thesaurus.json").read_bytes()
        assert a == b

    def test_bad_manifest(self, config_path, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("1\ten\n", encoding="utf-8")
        assert run(config_path, "index", str(bad)) == 1
        assert "manifest" in capsys.readouterr().err


class TestThesaurusExportImport:
    def test_round_trip(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        run(cfg, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()

        dump = tmp_path / "export.json"
        assert run(cfg, "thesaurus", "export", "-o", str(dump)) == 0
        assert json.loads(dump.read_text())["format"] == "recthes-thesaurus"

        other = tmp_path / "other"
        other.mkdir()
        cfg2 = write_config(other)
        assert run(cfg2, "thesaurus", "import", str(dump)) == 0
        capsys.readouterr()

        run(cfg, "query", "--lang", "en", "software")
        first = capsys.readouterr().out
        run(cfg2, "query", "--lang", "en", "software")
        second = capsys.readouterr().out
        assert first == second

    def test_simplified_round_trip(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        run(cfg, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        dump = tmp_path / "simple.json"
        assert run(cfg, "thesaurus", "export", "--simplified",
                   "-o", str(dump)) == 0
        other = tmp_path / "other"
        other.mkdir()
        cfg2 = write_config(other)
        assert run(cfg2, "thesaurus", "import", str(dump)) == 0
        capsys.readouterr()
        run(cfg, "query", "--lang", "en", "database")
        first = capsys.readouterr().out
        run(cfg2, "query", "--lang", "en", "database")
        assert capsys.readouterr().out == first

    def test_export_to_stdout(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        run(cfg, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(cfg, "thesaurus", "export") == 0
        assert '"format": "recthes-thesaurus"' in capsys.readouterr().out


class TestStatsExport:
    def test_doc1_table(self, config_path, capsys):
        run(config_path, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(config_path, "stats", "export", "1") == 0
        out = capsys.readouterr().out
        assert out.splitlines() == [
            "term1\tterm2\tb\tf\tb/f\tk\tM",
            "Database\tSoftware\t3\t3\t1\t0.3\t0.3",
        ]

    def test_doc4_with_resolutions(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        res = write_resolutions(tmp_path)
        run(cfg, "index", str(write_full_manifest(tmp_path)),
            "--resolutions", str(res))
        capsys.readouterr()
        assert run(cfg, "stats", "export", "4", "--resolutions",
                   str(res)) == 0
        out = capsys.readouterr().out
        assert "Bank\tSoftware\t2\t2\t1\t0.12\t0.12" in out

    def test_unregistered_document(self, config_path, capsys):
        run(config_path, "index", str(FIXTURES / "manifest_en.tsv"))
        capsys.readouterr()
        assert run(config_path, "stats", "export", "99") == 1
        assert "not in the registry" in capsys.readouterr().err


class TestConfigHandling:
    def test_missing_config_file(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["--config", str(missing), "dict", "validate"]) == 1
        assert "not found" in capsys.readouterr().err

    def test_env_var_fallback(self, tmp_path, capsys, monkeypatch):
        cfg = write_config(tmp_path)
        monkeypatch.setenv("RECTHES_CONFIG", str(cfg))
        assert main(["dict", "validate"]) == 0
