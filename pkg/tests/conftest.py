import json
from pathlib import Path

import pytest

from recthes.lexicon import LanguagePaths, load_lexicon

FIXTURES = Path(__file__).parent / "fixtures"


def write_config(directory: Path, **overrides) -> Path:
    """Drop a config file into ``directory`` wired to the fixture
    dictionaries, with data under ``directory``/data."""
    cfg = {
        "languages": {
            lang: {
                "main": str(FIXTURES / "dict" / lang / "main.tsv"),
                "variations": str(FIXTURES / "dict" / lang / "variations.tsv"),
                "stopwords": str(FIXTURES / "dict" / lang / "stopwords.tsv"),
            }
            for lang in ("en", "de")
        },
        "data_dir": str(directory / "data"),
    }
    cfg.update(overrides)
    path = directory / "recthes.json"
    path.write_text(json.dumps(cfg, indent=2), encoding="utf-8")
    return path


def fixture_language_paths() -> dict[str, LanguagePaths]:
    out = {}
    for lang in ("en", "de"):
        d = FIXTURES / "dict" / lang
        out[lang] = LanguagePaths(
            variations=d / "variations.tsv",
            main=d / "main.tsv",
            stopwords=d / "stopwords.tsv",
        )
    return out


@pytest.fixture(scope="session")
def lexicon():
    lex, report = load_lexicon(fixture_language_paths())
    assert report.ok, [i.message for i in report.errors]
    return lex


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
