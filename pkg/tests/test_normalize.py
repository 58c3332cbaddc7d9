"""Canonicalization: character folds, offset maps, artifact repair."""

from __future__ import annotations

import pytest

from statex import load_corpus, normalize_text, repair_pdf_artifacts
from statex.normalize import _CHI_LETTERS


class TestNormalizeText:
    def test_greek_chi_with_superscript(self):
        assert normalize_text("χ²(12)=3.4, p<.05").text == "chi2(12)=3.4, p<.05"

    def test_greek_chi_caret(self):
        assert normalize_text("χ^2(12)=3.4, p<.05").text == "chi2(12)=3.4, p<.05"

    def test_spelled_chi_variants(self):
        assert normalize_text("Chi^2(12)=3.4").text == "chi2(12)=3.4"
        assert normalize_text("chi2(12)=3.4").text == "chi2(12)=3.4"
        assert normalize_text("CHI2(12)=3.4").text == "chi2(12)=3.4"
        assert normalize_text("Χ(12)=3.4").text == "chi2(12)=3.4"

    def test_every_chi_codepoint_folds(self):
        for ch in _CHI_LETTERS:
            assert normalize_text("%s(12)=3.4" % ch).text == "chi2(12)=3.4", hex(ord(ch))

    def test_chi_inside_words_untouched(self):
        assert normalize_text("matching children in Chicago").text == (
            "matching children in Chicago"
        )

    def test_html_sup_markup(self):
        assert normalize_text("χ<sup>2</sup>(12)=3.4").text == "chi2(12)=3.4"

    def test_html_entities_decoded(self):
        assert normalize_text("&#967;2(12)=3.4").text == "chi2(12)=3.4"
        assert normalize_text("&#x3c7;2(12)=3.4").text == "chi2(12)=3.4"
        assert normalize_text("p&lt;.05").text == "p<.05"

    def test_whitespace_collapse(self):
        assert normalize_text("t(12)=1.2,  p<.05").text == "t(12)=1.2, p<.05"
        assert normalize_text("t(12)=1.2,\t\n p<.05").text == "t(12)=1.2, p<.05"

    def test_square_brackets_become_parens(self):
        assert normalize_text("t[12]=1.2, p<.05").text == "t(12)=1.2, p<.05"
        assert normalize_text("F[1,23]=4.5").text == "F(1,23)=4.5"

    def test_non_numeric_brackets_untouched(self):
        assert normalize_text("as shown in [ref]").text == "as shown in [ref]"

    def test_relational_glyphs(self):
        assert normalize_text("t(12)≤1.2, p≥.05").text == "t(12)<=1.2, p>=.05"

    def test_identity_on_plain_ascii(self):
        assert normalize_text("plain ascii text").text == "plain ascii text"

    def test_beta_letter_folds(self):
        assert normalize_text("β=1.2, SE=.34").text == "beta=1.2, SE=.34"

    def test_idempotent_on_corpus(self):
        for case in load_corpus():
            once = normalize_text(case.input).text
            assert normalize_text(once).text == once, case.id

    def test_never_deletes_digits_or_comparators(self):
        for case in load_corpus():
            normalized = normalize_text(case.input).text
            for ch in set(case.input):
                if ch.isdigit() or ch in "=<>.":
                    assert normalized.count(ch) >= case.input.count(ch), (case.id, ch)

    def test_offset_map_monotone_and_total(self):
        for case in load_corpus():
            nt = normalize_text(case.input)
            assert len(nt.offset_map) == len(nt.text)
            assert all(a <= b for a, b in zip(nt.offset_map, nt.offset_map[1:]))
            assert all(0 <= i < len(case.input) for i in nt.offset_map)


class TestRepairPdfArtifacts:
    def test_documented_repair(self):
        nt = repair_pdf_artifacts(normalize_text("t(12) 1.2, p 5 .34"))
        assert nt.text == "t(12)<=>1.2, p=.34"

    def test_no_artifact_unchanged(self):
        nt = repair_pdf_artifacts(normalize_text("t(12)=1.2, p=.34"))
        assert nt.text == "t(12)=1.2, p=.34"

    def test_f_family_repair_round_trips(self):
        from statex import analyze_text

        analyses = analyze_text("F(1,23) 4.5, p 5 .23")
        assert len(analyses) == 1
        res = analyses[0].result
        assert res.stat_value == pytest.approx(4.5)
        assert (res.df1, res.df2) == (1.0, 23.0)
        assert res.reported_p == pytest.approx(0.23)

    def test_repair_idempotent(self):
        nt = repair_pdf_artifacts(normalize_text("t(12) 1.2, p 5 .34"))
        again = repair_pdf_artifacts(nt)
        assert again.text == nt.text

    def test_no_global_repair_outside_windows(self):
        text = "in chapter 5 we see 5 more"
        nt = repair_pdf_artifacts(normalize_text(text))
        assert nt.text == text


class TestOffsetRecovery:
    def test_raw_span_contains_label_for_corpus(self):
        from statex import find_result_spans

        for case in load_corpus():
            nt = repair_pdf_artifacts(normalize_text(case.input))
            spans = find_result_spans(nt)
            assert spans, case.id
            raw_slice = case.input[spans[0].raw_start:spans[0].raw_end]
            assert raw_slice, case.id
            assert any(c.isdigit() for c in raw_slice), case.id

    def test_raw_span_exact_for_folded_text(self):
        from statex import find_result_spans

        raw = "see χ²(12)=3.4, p<.05 end"
        nt = normalize_text(raw)
        span = find_result_spans(nt)[0]
        assert raw[span.raw_start:span.raw_end] == "χ²(12)=3.4, p<.05"
