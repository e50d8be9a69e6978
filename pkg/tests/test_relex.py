import random
import re

import pytest

from relsearch.corpus import CprLabel, EntityMention, EType, GoldRelation, Sentence
from relsearch.errors import (
    ConfigurationError,
    MalformedRowError,
    MissingPredictionError,
    SpanOverlapError,
)
from relsearch.relex import (
    classify,
    CueBaselineClassifier,
    evaluate,
    expand_pairs,
    ExternalClassifier,
    insert_tags,
    OracleClassifier,
    read_pair_scores,
    resolve_classifier,
    TaggedInstance,
)

RAW = ("EGFR inhibitors currently under investigation include the small "
       "molecules gefitinib and erlotinib.")
FORM_I = ("<e2>EGFR</e2> inhibitors currently under investigation include the "
          "small molecules <e1>gefitinib</e1> and erlotinib.")
FORM_II = ("<e2>EGFR</e2> inhibitors currently under investigation include the "
           "small molecules gefitinib and <e1>erlotinib</e1>.")

_TAG = re.compile(r"</?e[12]>")


def _span(text, needle):
    start = text.index(needle)
    return start, start + len(needle)


def test_golden_tagging_forms():
    egfr = _span(RAW, "EGFR")
    assert insert_tags(RAW, _span(RAW, "gefitinib"), egfr) == FORM_I
    assert insert_tags(RAW, _span(RAW, "erlotinib"), egfr) == FORM_II


def test_tagging_boundary_cases():
    assert insert_tags("", (0, 0), (0, 0)) == "<e1></e1><e2></e2>"
    assert insert_tags("abc", (0, 3), (3, 3)) == "<e1>abc</e1><e2></e2>"
    assert insert_tags("ab", (0, 1), (1, 2)) == "<e1>a</e1><e2>b</e2>"


def test_tagging_rejects_overlap_and_nesting():
    with pytest.raises(SpanOverlapError):
        insert_tags("abcdef", (0, 4), (2, 6))
    with pytest.raises(SpanOverlapError):
        insert_tags("abcdef", (0, 6), (2, 4))
    with pytest.raises(ValueError):
        insert_tags("abc", (0, 9), (1, 2))


def test_tag_round_trip_on_random_spans():
    rng = random.Random(11)
    alphabet = "abcdefg hij"
    for _ in range(300):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(2, 40)))
        cut = sorted(rng.randint(0, len(text)) for _ in range(4))
        spans = [(cut[0], cut[1]), (cut[2], cut[3])]
        rng.shuffle(spans)
        tagged = insert_tags(text, spans[0], spans[1])
        assert _TAG.sub("", tagged) == text
        assert tagged.count("<e1>") == tagged.count("</e1>") == 1
        assert tagged.count("<e2>") == tagged.count("</e2>") == 1


def _sentence(text, doc="d", idx=0):
    return Sentence(doc_id=doc, sent_index=idx, start=0, end=len(text), text=text)


def _mention(mid, sentence, needle, etype, occurrence=0):
    start = -1
    for _ in range(occurrence + 1):
        start = sentence.text.index(needle, start + 1)
    return EntityMention(
        mention_id=mid, doc_id=sentence.doc_id, sent_index=sentence.sent_index,
        start=start, end=start + len(needle), surface=needle, etype=etype,
    )


def test_expand_pairs_counts_and_order():
    sentence = _sentence(RAW)
    chems = [_mention("c1", sentence, "gefitinib", EType.CHEMICAL),
             _mention("c2", sentence, "erlotinib", EType.CHEMICAL)]
    prot = _mention("p1", sentence, "EGFR", EType.PROTEIN)
    instances = expand_pairs(sentence, [chems[1], prot, chems[0]])
    assert [i.tagged_text for i in instances] == [FORM_I, FORM_II]
    assert expand_pairs(sentence, [prot]) == []

    three_two = _sentence("a1 a2 a3 b1 b2")
    mentions = [_mention(f"c{i}", three_two, f"a{i}", EType.CHEMICAL) for i in (1, 2, 3)]
    mentions += [_mention(f"p{i}", three_two, f"b{i}", EType.PROTEIN) for i in (1, 2)]
    assert len(expand_pairs(three_two, mentions)) == 6


def test_expand_pairs_skips_overlaps():
    sentence = _sentence("abcdef gh")
    chem = EntityMention("c1", "d", 0, 0, 4, "abcd", EType.CHEMICAL)
    prot = EntityMention("p1", "d", 0, 2, 6, "cdef", EType.PROTEIN)
    prot_ok = _mention("p2", sentence, "gh", EType.PROTEIN)
    assert len(expand_pairs(sentence, [chem, prot, prot_ok])) == 1


def test_expand_pairs_rejects_foreign_mentions():
    sentence = _sentence("abc")
    stray = EntityMention("m", "other", 3, 0, 1, "a", EType.CHEMICAL)
    with pytest.raises(ValueError):
        expand_pairs(sentence, [stray])


def _instance(text, chem="c", prot="p", doc="d", sent=0):
    return TaggedInstance(doc_id=doc, sent_index=sent, chem_mention_id=chem,
                          prot_mention_id=prot, tagged_text=text)


def test_cue_baseline_examples():
    model = CueBaselineClassifier()
    hit = _instance("In vitro, <e1>Favipiravir</e1> inhibits <e2>RdRp</e2> strongly.")
    miss = _instance("<e1>glucose</e1> and <e2>insulin</e2> were measured.")
    assert classify(hit, model).positive and classify(hit, model).score == 1.0
    assert not classify(miss, model).positive
    assert classify(miss, model).score == 0.0


def test_oracle_replays_gold_labels():
    gold = [GoldRelation("d", 0, "c", "p", CprLabel.CPR4),
            GoldRelation("d", 1, "c2", "p2", CprLabel.CPR10)]
    model = OracleClassifier.from_gold_relations(gold)
    assert classify(_instance("x", sent=0), model).score == 1.0
    assert classify(_instance("x", chem="c2", prot="p2", sent=1), model).score == 0.0
    assert classify(_instance("x", chem="nope", sent=0), model).score == 0.0


def test_external_classifier_roundtrip(tmp_path):
    path = tmp_path / "scores.tsv"
    path.write_text("d\t0\tc\tp\t0.75\nd\t1\tc\tp\t0.25\n")
    model = ExternalClassifier.from_tsv(path)
    assert classify(_instance("x"), model).positive
    assert not classify(_instance("x", sent=1), model).positive
    with pytest.raises(MissingPredictionError):
        classify(_instance("x", sent=9), model)
    (tmp_path / "bad.tsv").write_text("d\t0\tc\tp\n")
    with pytest.raises(MalformedRowError):
        read_pair_scores(tmp_path / "bad.tsv")


def test_threshold_is_inclusive_at_half():
    model = ExternalClassifier({("d", 0, "c", "p"): 0.5})
    assert classify(_instance("x"), model).positive


def test_resolve_classifier_handles():
    assert isinstance(resolve_classifier("cue-baseline"), CueBaselineClassifier)
    with pytest.raises(ConfigurationError):
        resolve_classifier("bert-large")
    with pytest.raises(ConfigurationError):
        resolve_classifier("oracle")
    with pytest.raises(ConfigurationError):
        resolve_classifier("external")


# --- evaluate ----------------------------------------------------------------

def test_evaluate_hand_confusion_matrix():
    predictions = [True, True, True, False] + [False] * 6
    gold = [True, True, False, True] + [False] * 6
    metrics = evaluate(predictions, gold)
    assert (metrics.tp, metrics.fp, metrics.fn, metrics.tn) == (2, 1, 1, 6)
    assert abs(metrics.precision - 2 / 3) < 1e-9
    assert abs(metrics.recall - 2 / 3) < 1e-9
    assert abs(metrics.f1 - 2 / 3) < 1e-9


def test_evaluate_perfect_and_degenerate():
    metrics = evaluate([True, False], [True, False])
    assert metrics.precision == metrics.recall == metrics.f1 == 1.0
    zero = evaluate([False, False], [True, True])
    assert zero.precision == zero.recall == zero.f1 == 0.0
    with pytest.raises(ValueError):
        evaluate([True], [True, False])


def test_evaluate_permutation_invariant_and_f1_identity():
    rng = random.Random(3)
    pairs = [(rng.random() < 0.5, rng.random() < 0.5) for _ in range(60)]
    metrics = evaluate([p for p, _ in pairs], [g for _, g in pairs])
    rng.shuffle(pairs)
    shuffled = evaluate([p for p, _ in pairs], [g for _, g in pairs])
    assert metrics == shuffled
    if metrics.precision + metrics.recall > 0:
        expected = (2 * metrics.precision * metrics.recall
                    / (metrics.precision + metrics.recall))
        assert abs(metrics.f1 - expected) < 1e-12
