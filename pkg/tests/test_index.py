import pytest

from relsearch.corpus import Corpus, Document, EntityMention, EType, Sentence
from relsearch.errors import (
    ChecksumError,
    DanglingReferenceError,
    IndexFormatError,
    UnknownClassError,
    VersionMismatchError,
)
from relsearch.index import (
    build_index,
    load_index,
    postings_for,
    related_entities,
    RelationKey,
    save_index,
)
from relsearch.normalization import build_equivalence_classes
from relsearch.relex import classify, ExternalClassifier, expand_pairs


def _by_canonical(index):
    return {cls.canonical: cls.class_id for cls in index.classes}


def test_fixture_partner_counts_match_manifest(small_index, corpus_manifest):
    ids = _by_canonical(small_index)
    fav = corpus_manifest["favipiravir"]
    got = [(small_index.classes[pid].canonical, count)
           for pid, count in related_entities(small_index, ids[fav["canonical"]])]
    assert got == [tuple(pair) for pair in fav["partners"]]

    rdrp = corpus_manifest["rdrp"]
    got = [(small_index.classes[pid].canonical, count)
           for pid, count in related_entities(small_index, ids[rdrp["canonical"]])]
    assert got == [tuple(pair) for pair in rdrp["partners"]]


def test_fixture_posting_totals(small_index, corpus_manifest):
    assert len(small_index.postings) == corpus_manifest["relation_keys"]
    total = sum(len(plist) for plist in small_index.postings.values())
    assert total == corpus_manifest["postings"]


def test_fixture_evidence_postings(small_index, corpus_manifest):
    ids = _by_canonical(small_index)
    key = RelationKey(ids["Favipiravir"], ids["RdRp"])
    postings = postings_for(small_index, key)
    got = [{"doc_id": p.doc_id, "sent_index": p.sent_index} for p in postings]
    assert got == corpus_manifest["favipiravir_rdrp_evidence"]
    # stored order is (doc_id, sent_index) ascending
    assert got == sorted(got, key=lambda p: (p["doc_id"], p["sent_index"]))
    for posting in postings:
        assert "RdRp" in posting.sentence_text or "polymerase" in posting.sentence_text


def test_unseen_pair_and_unknown_class(small_index):
    ids = _by_canonical(small_index)
    assert postings_for(small_index, RelationKey(ids["glucose"], ids["insulin"])) == []
    assert related_entities(small_index, ids["glucose"]) == []
    with pytest.raises(UnknownClassError):
        related_entities(small_index, 10_000)


def test_partner_tie_breaks_on_canonical(small_index, corpus_manifest):
    ids = _by_canonical(small_index)
    partners = related_entities(small_index, ids["RdRp"])
    ties = [small_index.classes[pid].canonical
            for pid, count in partners if count == 1]
    assert ties == sorted(ties)


# --- construction semantics ---------------------------------------------------

def _tiny_setup(scores):
    """One sentence, two chemical surface variants of the same class plus one
    protein; scores keyed like the sidecar file."""
    body = "DrugX, also called drugx, blocks TargetY."
    document = Document("doc1", "t", body)
    sentence = Sentence("doc1", 0, 0, len(body), body)
    mentions = [
        EntityMention("m1", "doc1", 0, 0, 5, "DrugX", EType.CHEMICAL),
        EntityMention("m2", "doc1", 0, 19, 24, "drugx", EType.CHEMICAL),
        EntityMention("m3", "doc1", 0, 33, 40, "TargetY", EType.PROTEIN),
    ]
    for m in mentions:
        assert body[m.start:m.end] == m.surface
    corpus = Corpus([document], [sentence])
    classes, assignment = build_equivalence_classes(mentions)
    instances = expand_pairs(sentence, mentions)
    model = ExternalClassifier(scores)
    predictions = [classify(inst, model) for inst in instances]
    return corpus, classes, assignment, predictions


def test_same_class_same_sentence_predictions_collapse():
    corpus, classes, assignment, predictions = _tiny_setup({
        ("doc1", 0, "m1", "m3"): 0.9,
        ("doc1", 0, "m2", "m3"): 0.7,
    })
    index = build_index(corpus, classes, assignment, predictions)
    assert len(index.postings) == 1
    (plist,) = index.postings.values()
    assert len(plist) == 1
    assert plist[0].score == 0.9  # max over the collapsed duplicates


def test_all_negative_predictions_yield_empty_index():
    corpus, classes, assignment, predictions = _tiny_setup({
        ("doc1", 0, "m1", "m3"): 0.1,
        ("doc1", 0, "m2", "m3"): 0.2,
    })
    index = build_index(corpus, classes, assignment, predictions)
    assert index.postings == {} and index.partners == {}


def test_dangling_assignment_is_rejected():
    corpus, classes, assignment, predictions = _tiny_setup({
        ("doc1", 0, "m1", "m3"): 0.9,
        ("doc1", 0, "m2", "m3"): 0.9,
    })
    del assignment["m1"]
    with pytest.raises(DanglingReferenceError):
        build_index(corpus, classes, assignment, predictions)


def test_monotonicity_under_added_positive():
    corpus, classes, assignment, predictions = _tiny_setup({
        ("doc1", 0, "m1", "m3"): 0.9,
        ("doc1", 0, "m2", "m3"): 0.1,
    })
    base = build_index(corpus, classes, assignment, predictions)
    corpus2, classes2, assignment2, predictions2 = _tiny_setup({
        ("doc1", 0, "m1", "m3"): 0.9,
        ("doc1", 0, "m2", "m3"): 0.8,
    })
    grown = build_index(corpus2, classes2, assignment2, predictions2)
    for key, plist in base.postings.items():
        assert len(grown.postings.get(key, [])) >= len(plist)
    for cid, pairs in base.partners.items():
        grown_counts = dict(grown.partners.get(cid, []))
        for pid, count in pairs:
            assert grown_counts.get(pid, 0) >= count


# --- index-wide invariants -------------------------------------------------------

def test_partner_count_accounting(small_index):
    posting_total = sum(len(plist) for plist in small_index.postings.values())
    partner_total = sum(count for pairs in small_index.partners.values()
                        for _pid, count in pairs)
    assert partner_total == 2 * posting_total


def test_partner_symmetry(small_index):
    for key, plist in small_index.postings.items():
        chem_view = dict(small_index.partners[key.chem_class_id])
        prot_view = dict(small_index.partners[key.prot_class_id])
        assert chem_view[key.prot_class_id] == prot_view[key.chem_class_id] == len(plist)


def test_bipartite_key_discipline(small_index):
    for key in small_index.postings:
        assert small_index.classes[key.chem_class_id].etype is EType.CHEMICAL
        assert small_index.classes[key.prot_class_id].etype is EType.PROTEIN


# --- persistence -----------------------------------------------------------------

def test_round_trip_structural_equality(small_index, tmp_path):
    path = tmp_path / "index.json"
    digest = save_index(small_index, path)
    loaded = load_index(path)
    assert loaded == small_index
    assert loaded.fingerprint == digest


def test_version_mismatch_rejected(small_index, tmp_path):
    path = tmp_path / "index.json"
    save_index(small_index, path)
    import hashlib
    payload, _, _tail = path.read_text().rstrip("\n").rpartition("\n")
    payload = payload.replace('"format_version": 1', '"format_version": 99')
    digest = hashlib.sha256(payload.encode()).hexdigest()
    path.write_text(f"{payload}\nsha256:{digest}\n")
    with pytest.raises(VersionMismatchError):
        load_index(path)


def test_tampered_content_rejected(small_index, tmp_path):
    path = tmp_path / "index.json"
    save_index(small_index, path)
    text = path.read_text()
    path.write_text(text.replace("RdRp", "XdXp", 1))
    with pytest.raises(ChecksumError):
        load_index(path)


def test_truncated_file_rejected(small_index, tmp_path):
    path = tmp_path / "index.json"
    save_index(small_index, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(IndexFormatError):
        load_index(path)
    path.write_text("")
    with pytest.raises(IndexFormatError):
        load_index(path)
