import json
import random

import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_bleu, full_matrix_levenshtein, oracle_edit_similarity
from corpus_cases import all_codes
from jsgen.metrics import (corpus_bleu, edit_similarity, evaluate, exact_match, identifiers, levenshtein, prf,
                           variable_usage)


def test_exact_match_cases():
    assert exact_match(["{a || b;}"], "{a||b}") == (True, True)
    assert exact_match(["{b || a;}"], "{a || b;}") == (False, False)
    assert exact_match(["{x;}", "{y;}", "{a;}", "{z;}", "{w;}"], "{a;}") == (False, True)
    assert exact_match(["{x;}", "{y;}", "{a;}"], "{a;}", k=2) == (False, False)


def test_unparseable_candidate_is_a_miss():
    assert exact_match(["{a ||", "{a;}"], "{a;}") == (False, True)
    assert exact_match([], "{a;}") == (False, False)


@pytest.mark.parametrize("code", all_codes())
def test_exact_match_is_reflexive(code):
    assert exact_match([code], code) == (True, True)


def test_bleu_short_prediction():
    assert corpus_bleu([list("abcd")], [list("abcde")]) == pytest.approx(77.88, abs=0.01)


def test_bleu_limits():
    refs = [list("abcdef"), list("xyzwv")]
    assert corpus_bleu(refs, refs) == pytest.approx(100.0)
    assert corpus_bleu([list("abc")], [list("abc")]) == 0.0
    with pytest.raises(ValueError):
        corpus_bleu([], [])


def _random_corpus(rng):
    alphabet = "abcd"
    n = rng.randint(1, 10)
    preds = [[rng.choice(alphabet) for _ in range(rng.randint(0, 12))] for _ in range(n)]
    refs = [[rng.choice(alphabet) for _ in range(rng.randint(1, 12))] for _ in range(n)]
    return preds, refs


@given(st.integers(0, 2**32 - 1))
def test_bleu_matches_brute_force(seed):
    preds, refs = _random_corpus(random.Random(seed))
    assert corpus_bleu(preds, refs) == pytest.approx(brute_force_bleu(preds, refs), abs=1e-9)


def test_edit_similarity_examples():
    assert edit_similarity("abc", "abd") == pytest.approx(66.67, abs=0.01)
    assert edit_similarity("", "abc") == 0.0
    assert edit_similarity("", "") == 100.0
    assert edit_similarity("{a;}", "{a;}") == 100.0


short = st.text(alphabet="ab{};春", max_size=12)


@given(short, short)
def test_edit_similarity_properties(a, b):
    assert levenshtein(a, b) == full_matrix_levenshtein(a, b)
    assert edit_similarity(a, b) == pytest.approx(oracle_edit_similarity(a, b))
    assert edit_similarity(a, b) == edit_similarity(b, a)
    assert (edit_similarity(a, b) == 100.0) == (a == b)


def test_variable_usage_examples():
    assert variable_usage("{picUrl;}", "{picUrl;}") == (1, 0, 0)
    assert variable_usage("{downTitle || '<STR1>';}", "{trainHeadTitle || '<STR1>';}") == (0, 1, 1)
    assert variable_usage("{a || a;}", "{a;}") == (1, 1, 0)
    assert variable_usage("{a ||", "{a || b;}") == (0, 0, 2)
    assert variable_usage(None, "{a;}") == (0, 0, 1)


def test_property_names_count_as_identifiers():
    assert identifiers("{title.substring(0, 10);}") == {"title": 1, "substring": 1}


def test_prf_conventions():
    assert prf(0, 0, 0) == (0.0, 0.0, 0.0)
    p, r, f = prf(3, 1, 2)
    assert f == pytest.approx(2 * p * r / (p + r))


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_prf_monotone_in_tp(tp, fp, fn):
    p0, r0, _ = prf(tp, fp, fn)
    p1, r1, _ = prf(tp + 1, fp, fn)
    assert p1 >= p0 and r1 >= r0


def test_evaluate_report():
    refs = ["{a;}", "{b || c;}", "{x ? y : z;}"]
    cands = [["{a;}"], ["{c || b;}", "{b || c;}"], ["{broken"]]
    rep = evaluate(cands, refs, ["STE", "OLE", "CE"])
    assert rep.n == 3
    assert rep.acc_1 == pytest.approx(100 / 3) and rep.acc_5 == pytest.approx(200 / 3)
    assert rep.categories["OLE"].acc_5 == 100.0 and set(rep.categories) == {"STE", "OLE", "CE"}
    for r in [rep, *rep.categories.values()]:
        values = [r.acc_1, r.acc_5, r.bleu, r.edit_sim, r.var_precision, r.var_recall, r.var_f1]
        assert all(0 <= v <= 100 for v in values) and r.acc_1 <= r.acc_5
    assert json.loads(rep.dumps())["categories"]["CE"]["n"] == 1
    assert "Acc-1" in rep.table() and "OLE" in rep.table()


def test_perfect_predictions_score_100():
    refs = all_codes()
    rep = evaluate([[c] for c in refs], refs)
    assert (rep.acc_1, rep.bleu, rep.edit_sim, rep.var_f1) == pytest.approx((100, 100, 100, 100))


def test_bad_reference_raises():
    with pytest.raises(ValueError):
        exact_match(["{a;}"], "{a ||")
