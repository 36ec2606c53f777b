import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from fuzzyprio.fuzzy_core import make_tfn, reciprocal
from fuzzyprio.judgments import (
    DuplicatePair,
    EmptyInput,
    FloorAboveModal,
    MissingPair,
    SelfComparison,
    ShapeMismatch,
    SpreadPolicy,
    UnknownItem,
    aggregate_experts,
    build_matrix,
    import_crisp,
    validate,
)


def test_build_two_items():
    m = build_matrix(["A", "B"], [("A", "B", (2, 3, 4))])
    assert m.n == 2
    assert m.judgments == {(0, 1): make_tfn(2, 3, 4)}


def test_build_stores_reverse_entry_as_reciprocal():
    m = build_matrix(["A", "B"], [("B", "A", (2, 3, 4))])
    t = m.judgments[(0, 1)]
    assert (t.l, t.m, t.u) == pytest.approx((0.25, 1 / 3, 0.5))


def test_build_missing_pair():
    with pytest.raises(MissingPair, match="B, C"):
        build_matrix("ABC", [("A", "B", (2, 3, 4)), ("A", "C", (2, 3, 4))])


def test_build_errors():
    with pytest.raises(SelfComparison):
        build_matrix("AB", [("A", "A", (2, 3, 4))])
    with pytest.raises(DuplicatePair):
        build_matrix("AB", [("A", "B", (2, 3, 4)), ("B", "A", (2, 3, 4))])
    with pytest.raises(UnknownItem):
        build_matrix("AB", [("A", "Z", (2, 3, 4))])


def test_build_accepts_positions():
    m = build_matrix(["p", "q"], [(1, 0, (2, 3, 4))])
    assert m.get_by_id("q", "p") == make_tfn(2, 3, 4)


def test_read_back_both_directions():
    entries = [("A", "B", (2, 3, 4)), ("C", "A", (1, 2, 3)), ("B", "C", (4, 5, 6))]
    m = build_matrix("ABC", entries)
    for a, b, band in entries:
        t = m.get_by_id(a, b)
        assert (t.l, t.m, t.u) == pytest.approx(band, rel=1e-12)
        r = m.get_by_id(b, a)
        assert (r.l, r.m, r.u) == pytest.approx(tuple(reciprocal(t)), rel=1e-12)


def test_aggregate_single_is_identity():
    m = build_matrix("AB", [("A", "B", (2, 3, 4))])
    assert aggregate_experts([m]) is m


def test_aggregate_geometric_mean():
    a = build_matrix("AB", [("A", "B", (2, 3, 4))])
    b = build_matrix("AB", [("A", "B", (4, 5, 6))])
    t = aggregate_experts([a, b]).judgments[(0, 1)]
    assert (t.l, t.m, t.u) == pytest.approx((math.sqrt(8), math.sqrt(15), math.sqrt(24)), rel=1e-14)
    assert t.l == pytest.approx(2.8284, abs=1e-4)
    assert t.m == pytest.approx(3.8729, abs=1e-4)
    assert t.u == pytest.approx(4.8989, abs=1e-4)


def test_aggregate_errors():
    with pytest.raises(EmptyInput):
        aggregate_experts([])
    with pytest.raises(ShapeMismatch):
        aggregate_experts([build_matrix("AB", [("A", "B", (2, 3, 4))]),
                           build_matrix("AC", [("A", "C", (2, 3, 4))])])


band = st.tuples(st.floats(0.1, 5), st.floats(0.01, 3), st.floats(0.01, 3)).map(
    lambda t: (t[0], t[0] + t[1], t[0] + t[1] + t[2]))


@st.composite
def expert_panels(draw):
    n = draw(st.integers(2, 4))
    k = draw(st.integers(1, 5))
    ids = [f"i{x}" for x in range(n)]
    pairs = list(itertools.combinations(ids, 2))
    return [build_matrix(ids, [(a, b, draw(band)) for a, b in pairs]) for _ in range(k)]


@given(expert_panels(), st.randoms(use_true_random=False))
def test_aggregate_permutation_invariant(panel, rnd):
    shuffled = panel[:]
    rnd.shuffle(shuffled)
    assert aggregate_experts(shuffled) == aggregate_experts(panel)


@given(expert_panels(), st.integers(1, 6))
def test_aggregate_copies_idempotent(panel, k):
    m = panel[0]
    agg = aggregate_experts([m] * k)
    for pair, t in m.judgments.items():
        assert tuple(agg.judgments[pair]) == pytest.approx(tuple(t), abs=1e-12)


@pytest.mark.parametrize("c, expected", [
    (3.2, (2.2, 3.2, 4.2)),
    (1.25, (0.25, 1.25, 2.25)),
    (1.05, (0.111, 1.05, 2.05)),
])
def test_import_crisp(c, expected):
    m = import_crisp("AB", [("A", "B", c)], SpreadPolicy(spread=1.0, floor=0.111))
    assert tuple(m.judgments[(0, 1)]) == pytest.approx(expected, abs=1e-12)


def test_import_crisp_floor_above_modal():
    with pytest.raises(FloorAboveModal):
        import_crisp("AB", [("A", "B", 0.1)], SpreadPolicy(spread=1.0, floor=0.5))


def test_spread_policy_invariants():
    with pytest.raises(ValueError):
        SpreadPolicy(spread=0)
    with pytest.raises(ValueError):
        SpreadPolicy(floor=1.0)
    assert SpreadPolicy().floor == pytest.approx(1 / 9)


@settings(max_examples=50)
@given(st.lists(st.floats(0.2, 8), min_size=3, max_size=3), st.floats(0.05, 2), st.floats(0.05, 2))
def test_import_crisp_shrinking_spread_narrows(cs, s1, s2):
    wide, narrow = max(s1, s2), min(s1, s2)
    entries = list(zip("AAB", "BCC", cs))
    a = import_crisp("ABC", entries, SpreadPolicy(wide, 0.01))
    b = import_crisp("ABC", entries, SpreadPolicy(narrow, 0.01))
    for pair in a.judgments:
        ta, tb = a.judgments[pair], b.judgments[pair]
        assert tb.l >= ta.l and tb.u <= ta.u and tb.m == ta.m


def test_validate_consistent_triple():
    m = build_matrix("ABC", [("A", "B", (1, 2, 3)), ("B", "C", (2, 3, 4)), ("A", "C", (5, 6, 7))])
    assert validate(m).max_triple_deviation == pytest.approx(0.0, abs=1e-15)


def test_validate_inconsistent_triple():
    m = build_matrix("ABC", [("A", "B", (1, 2, 3)), ("B", "C", (1, 2, 3)), ("A", "C", (1, 2, 3))])
    rep = validate(m)
    assert rep.max_triple_deviation == pytest.approx(1.0)
    assert rep.complete


def test_validate_two_items_has_no_triples():
    rep = validate(build_matrix("AB", [("A", "B", (2, 3, 4))]))
    assert not rep.has_triples
    assert any("no triples" in msg for msg in rep.messages)
    assert rep.band_widths == {("A", "B"): 2.0}


def test_permuted_matrix_reads_same_judgments():
    m = build_matrix("ABC", [("A", "B", (1, 2, 3)), ("B", "C", (2, 3, 4)), ("A", "C", (5, 6, 7))])
    p = m.permuted([2, 0, 1])
    assert p.item_ids == ("C", "A", "B")
    for a, b in itertools.permutations("ABC", 2):
        assert tuple(p.get_by_id(a, b)) == pytest.approx(tuple(m.get_by_id(a, b)), rel=1e-12)
