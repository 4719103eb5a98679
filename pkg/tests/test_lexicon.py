"""Dictionary loading, normalization and concept resolution."""

from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from recthes.errors import (
    ConceptUnknownInLanguage,
    DictionaryParseError,
    InjectivityError,
    NoDictionaryForLanguage,
)
from recthes.lexicon import (
    Ambiguous,
    DistMatrix,
    LanguagePaths,
    Resolved,
    Unknown,
    load_lexicon,
    pair_threshold,
)

from conftest import fixture_language_paths


def write_language(tmp_path: Path, main="", variations="", stopwords=""):
    d = tmp_path / "xx"
    d.mkdir(exist_ok=True)
    (d / "main.tsv").write_text(main, encoding="utf-8")
    (d / "variations.tsv").write_text(variations, encoding="utf-8")
    (d / "stopwords.tsv").write_text(stopwords, encoding="utf-8")
    return {"xx": LanguagePaths(d / "variations.tsv", d / "main.tsv",
                                d / "stopwords.tsv")}


class TestLoading:
    def test_fixture_loads_clean(self):
        lex, report = load_lexicon(fixture_language_paths())
        assert report.ok
        assert not report.warnings
        assert set(lex.languages) == {"en", "de"}
        assert "C_DB" in lex.concepts

    def test_duplicate_main_entry_reported(self, tmp_path):
        main = ("xx\tquery\tIR\tC_Q\tQuery\tnoun\t\n"
                "xx\tquery\tIR\tC_Q2\tQuery2\tnoun\t\n")
        lex, report = load_lexicon(write_language(tmp_path, main=main))
        assert not report.ok
        assert "duplicate main entry" in report.errors[0].message
        # first row wins in the handle
        assert lex.resolve("query", "xx") == Resolved(
            "C_Q", lex.resolve("query", "xx").entry)

    def test_duplicate_variation_reported(self, tmp_path):
        main = "xx\tterm\tc\tC_T\tTerm\tnoun\t\n"
        variations = "xx\tterms\tterm\nxx\tterms\tterm\n"
        _, report = load_lexicon(
            write_language(tmp_path, main=main, variations=variations))
        assert [i for i in report.errors
                if "duplicate variation" in i.message]

    def test_dangling_related_warns(self, tmp_path):
        main = "xx\tterm\tc\tC_T\tTerm\tnoun\tC_MISSING\n"
        _, report = load_lexicon(write_language(tmp_path, main=main))
        assert report.ok
        assert any("C_MISSING" in w.message for w in report.warnings)

    def test_bad_column_count_raises_with_line(self, tmp_path):
        main = "xx\tterm\tc\tC_T\tTerm\tnoun\t\nxx\tonly three\tcols\n"
        with pytest.raises(DictionaryParseError) as err:
            load_lexicon(write_language(tmp_path, main=main))
        assert err.value.line == 2

    def test_language_mismatch_raises(self, tmp_path):
        main = "yy\tterm\tc\tC_T\tTerm\tnoun\t\n"
        with pytest.raises(DictionaryParseError):
            load_lexicon(write_language(tmp_path, main=main))

    def test_unknown_category_raises(self, tmp_path):
        main = "xx\tterm\tc\tC_T\tTerm\tadverb\t\n"
        with pytest.raises(DictionaryParseError):
            load_lexicon(write_language(tmp_path, main=main))

    def test_representative_fanout_is_hard_error(self, tmp_path):
        # one representative, two concepts in a single (language, context)
        main = ("xx\talpha\tc\tC_A\tShared\tnoun\t\n"
                "xx\tbeta\tc\tC_B\tShared\tnoun\t\n")
        with pytest.raises(InjectivityError):
            load_lexicon(write_language(tmp_path, main=main))

    def test_two_representatives_one_concept_is_hard_error(self, tmp_path):
        main = ("xx\talpha\tc\tC_A\tAlpha\tnoun\t\n"
                "xx\tbeta\tc\tC_A\tBeta\tnoun\t\n")
        with pytest.raises(InjectivityError):
            load_lexicon(write_language(tmp_path, main=main))

    def test_synonym_normal_forms_share_concept_ok(self, tmp_path):
        # same concept, same representative: plain synonymy, accepted
        main = ("xx\talpha\tc\tC_A\tAlpha\tnoun\t\n"
                "xx\talef\tc\tC_A\tAlpha\tnoun\t\n")
        lex, report = load_lexicon(write_language(tmp_path, main=main))
        assert report.ok
        assert lex.synonyms("C_A", "xx") == ("alef", "alpha")

    def test_stopword_overlap_warns(self, tmp_path):
        main = "xx\tterm\tc\tC_T\tTerm\tnoun\t\n"
        stop = "xx\tterm\n"
        lex, report = load_lexicon(
            write_language(tmp_path, main=main, stopwords=stop))
        assert any("stopword" in w.message for w in report.warnings)
        # the stopword wins during normalization
        assert lex.normalize(["term"], "xx").terms == ()


class TestNormalize:
    def test_compound_consumes_two_tokens(self, lexicon):
        res = lexicon.normalize(["data", "base", "design"], "en")
        assert [(t.normal_form, t.start, t.token_count) for t in res.terms] == [
            ("data base", 0, 2), ("design", 2, 1)]
        assert res.unknown == ()

    def test_stopword_and_variant(self, lexicon):
        res = lexicon.normalize(["the", "databases"], "en")
        assert [t.normal_form for t in res.terms] == ["database"]
        assert res.terms[0].surface == "databases"

    def test_longest_match_wins(self, lexicon):
        # "data" alone is a dictionary form; the compound still wins
        res = lexicon.normalize(["data", "base"], "en")
        assert [t.normal_form for t in res.terms] == ["data base"]
        res2 = lexicon.normalize(["data", "design"], "en")
        assert [t.normal_form for t in res2.terms] == ["data", "design"]

    def test_compound_variant_maps_to_normal_form(self, lexicon):
        res = lexicon.normalize(["Data", "bases"], "en")
        assert [t.normal_form for t in res.terms] == ["data base"]
        assert res.terms[0].surface == "Data bases"

    def test_case_folding(self, lexicon):
        res = lexicon.normalize(["DATABASE", "Software"], "en")
        assert [t.normal_form for t in res.terms] == ["database", "software"]

    def test_unknown_tokens_are_queued(self, lexicon):
        res = lexicon.normalize(["gigantic", "database"], "en")
        assert [u.surface for u in res.unknown] == ["gigantic"]
        assert res.unknown[0].index == 0

    def test_german_compound_single_token(self, lexicon):
        res = lexicon.normalize(["Datenbank"], "de")
        assert [t.normal_form for t in res.terms] == ["datenbank"]

    def test_missing_language(self, lexicon):
        with pytest.raises(NoDictionaryForLanguage):
            lexicon.normalize(["a"], "fr")

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from(
        ["data", "base", "bases", "design", "the", "software", "zzz",
         "operating", "system", "bank", "databases"]), max_size=12))
    def test_every_token_accounted_once(self, lexicon, tokens):
        res = lexicon.normalize(tokens, "en")
        claimed = []
        for t in res.terms:
            claimed.extend(range(t.start, t.start + t.token_count))
        claimed.extend(u.index for u in res.unknown)
        assert len(claimed) == len(set(claimed))
        leftovers = set(range(len(tokens))) - set(claimed)
        for i in leftovers:
            assert tokens[i].casefold() in ("the",)
        assert res.token_count == len(tokens)


class TestResolve:
    def test_context_pins_entry(self, lexicon):
        r = lexicon.resolve("bank", "en", context="finance")
        assert isinstance(r, Resolved)
        assert r.concept == "C_FIN"
        assert r.entry.category == "noun"

    def test_ambiguity_lists_all_candidates(self, lexicon):
        r = lexicon.resolve("bank", "en")
        assert isinstance(r, Ambiguous)
        assert r.candidates == (
            ("finance", "C_FIN"), ("geography", "C_RIVERBANK"))

    def test_unknown_term(self, lexicon):
        assert lexicon.resolve("qwzx", "en") == Unknown("qwzx")

    def test_wrong_context_is_unknown(self, lexicon):
        assert lexicon.resolve("bank", "en", context="sports") == \
            Unknown("bank")

    def test_single_entry_needs_no_context(self, lexicon):
        r = lexicon.resolve("software", "en")
        assert isinstance(r, Resolved)
        assert r.concept == "C_SW"

    def test_cross_language_same_concept(self, lexicon):
        en = lexicon.resolve("data base", "en")
        de = lexicon.resolve("Datenbank", "de")
        assert isinstance(en, Resolved) and isinstance(de, Resolved)
        assert en.concept == de.concept == "C_DB"


class TestRepresentative:
    def test_representative_and_related(self, lexicon):
        rep, related = lexicon.representative("C_DB", "en")
        assert rep == "Database"
        assert set(related) == {"C_DATA", "C_SW"}

    def test_german_representative(self, lexicon):
        rep, _ = lexicon.representative("C_DB", "de")
        assert rep == "Datenbank"

    def test_concept_missing_from_language(self, lexicon):
        with pytest.raises(ConceptUnknownInLanguage):
            lexicon.representative("C_NOPE", "en")

    def test_concept_category_deterministic(self, lexicon):
        assert lexicon.concept_category("C_DB") == "noun"
        # unmapped concepts fall back to the first configured category
        assert lexicon.concept_category("C_MYSTERY") == "noun"


class TestDistMatrix:
    def test_default_is_five(self):
        m = DistMatrix()
        assert pair_threshold("noun", "noun", m) == 5

    def test_symmetry(self):
        m = DistMatrix(default=5, overrides={("noun", "adjective"): 2})
        assert pair_threshold("noun", "adjective", m) == 2
        assert pair_threshold("adjective", "noun", m) == 2
        assert pair_threshold("verb", "noun", m) == 5

    def test_entries_must_be_positive(self):
        with pytest.raises(Exception):
            DistMatrix(default=0)
        with pytest.raises(Exception):
            DistMatrix(overrides={("noun", "noun"): 0})
