import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from omegamodal.frames import (
    NeighborhoodFrame,
    all_frames,
    all_relations,
    check_cf,
    check_conversely_wellfounded,
    check_kripke,
    check_mt,
    check_tp,
    common_knowledge_frame,
    core,
    frame_to_relation,
    kripke_frame,
    members,
    relation_to_frame,
    strict_partial_orders,
    supersets,
    to_mask,
    transitive_closure_union,
    upward_closure,
)


def frame(n, *families):
    return NeighborhoodFrame.from_sets(n, {"box": list(families)})


def test_mask_helpers():
    assert to_mask([0, 2]) == 0b101
    assert members(0b101) == [0, 2]
    assert sorted(supersets(0b01, 0b11)) == [0b01, 0b11]
    assert upward_closure([0b010], 2) == {0b10, 0b11}


@pytest.mark.parametrize(
    "f, expected",
    [
        (frame(1, [[0]]), True),
        (frame(2, [[0]], []), False),
        (frame(2, [[], [0], [1], [0, 1]], [[], [0], [1], [0, 1]]), True),
    ],
)
def test_check_mt(f, expected):
    assert check_mt(f) is expected


def test_check_tp_cf():
    assert check_tp(frame(1, [[0]]))
    assert not check_cf(frame(2, [[0], [1]], []))
    f = frame(2, [[0, 1]], [[0, 1]])
    assert check_tp(f) and check_cf(f)


def test_check_kripke_examples():
    up1 = [[1], [0, 1]]
    f = frame(2, up1, up1)
    assert check_kripke(f)
    assert frame_to_relation(f) == {"box": {(0, 1), (1, 1)}}
    # Empty family: its intersection is the whole universe, which is missing.
    assert not check_kripke(frame(1, []))
    g = NeighborhoodFrame(2, {"box": (upward_closure([0b01, 0b10], 2), frozenset({0b11}))})
    assert core(g, "box", 0) == 0
    assert check_kripke(g) is (0 in g.family("box", 0))
    assert not check_kripke(g)


def test_frame_to_relation_rejects_non_kripke():
    with pytest.raises(ValueError):
        frame_to_relation(frame(2, [[0], [1]], []))


def test_relation_to_frame_examples():
    assert relation_to_frame({"box": []}, 1).family("box", 0) == {0b0, 0b1}
    assert relation_to_frame({"box": [(0, 1)]}, 2).family("box", 0) == {0b10, 0b11}


def test_frame_validation():
    with pytest.raises(ValueError):
        NeighborhoodFrame(0, {"box": ()})
    with pytest.raises(ValueError):
        NeighborhoodFrame(1, {"box": (frozenset({0b10}),)})
    with pytest.raises(ValueError):
        NeighborhoodFrame(2, {"box": (frozenset(),)})
    with pytest.raises(ValueError):
        relation_to_frame({"box": [(0, 5)]}, 2)


relations3 = st.frozensets(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=9)


@given(relations3)
def test_relation_frames_are_kripke(rel):
    f = relation_to_frame({"box": rel}, 3)
    assert check_mt(f) and check_tp(f) and check_cf(f) and check_kripke(f)
    assert frame_to_relation(f)["box"] == rel


@given(st.integers(0, 255), st.integers(0, 3), st.integers(0, 3), st.integers(0, 1))
def test_mt_means_upward_closed(code, x, extra, c):
    f = list(all_frames(2))[code]
    y = x | extra
    if check_mt(f) and x in f.family("box", c):
        assert y in f.family("box", c)


def test_all_frames_count():
    assert sum(1 for _ in all_frames(1)) == 4
    assert sum(1 for _ in all_frames(2)) == 256


@pytest.mark.parametrize(
    "rel, expected",
    [({(0, 1), (1, 2), (0, 2)}, True), ({(0, 0)}, False), (set(), True), ({(0, 1), (1, 0)}, False)],
)
def test_conversely_wellfounded(rel, expected):
    assert check_conversely_wellfounded(rel) is expected


def _has_cycle_by_paths(rel, n):
    # Oracle: a cycle exists iff some node reaches itself within n steps.
    reach = {(x, y) for x, y in rel}
    for _ in range(n):
        reach |= {(x, z) for x, y in reach for y2, z in rel if y == y2}
    return any((v, v) in reach for v in range(n))


def test_conversely_wellfounded_matches_path_oracle():
    for rel in all_relations(3):
        assert check_conversely_wellfounded(rel) is not _has_cycle_by_paths(rel, 3)


@pytest.mark.parametrize(
    "rel, expected",
    [({(0, 1), (1, 2)}, {(0, 1), (1, 2), (0, 2)}), (set(), set()), ({(0, 0)}, {(0, 0)})],
)
def test_transitive_closure_examples(rel, expected):
    assert transitive_closure_union(rel) == expected


def _closure_by_powers(rel, n, identity):
    # Oracle: union of R^k for k = 1..n (plus R^0), composing pair sets.
    out = {(v, v) for v in range(n)} if identity else set()
    power = set(rel)
    for _ in range(n):
        out |= power
        power = {(x, z) for x, y in power for y2, z in rel if y == y2}
    return out


def test_transitive_closure_matches_powers():
    for rel in all_relations(3):
        assert transitive_closure_union(rel) == _closure_by_powers(rel, 3, False)
        assert transitive_closure_union(rel, 3, include_identity=True) == _closure_by_powers(rel, 3, True)


def test_include_identity_needs_worlds():
    with pytest.raises(ValueError):
        transitive_closure_union({(0, 1)}, include_identity=True)


def test_strict_partial_order_counts():
    # Labelled posets on n points: 1, 3, 19, 219.
    assert [sum(1 for _ in strict_partial_orders(n)) for n in (1, 2, 3, 4)] == [1, 3, 19, 219]


def test_common_knowledge_frame():
    f = common_knowledge_frame(3, [(0, 1), (1, 2)])
    rel = frame_to_relation(f)
    assert rel["E"] == {(0, 1), (1, 2)}
    assert rel["C"] == {(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)}
    g = common_knowledge_frame(3, [(0, 1), (1, 2)], include_identity=False)
    assert frame_to_relation(g)["C"] == {(0, 1), (1, 2), (0, 2)}


def test_kripke_frame_shorthand():
    f = kripke_frame(2, E=[(0, 1)], C=[(0, 1)])
    assert f.modalities == ("E", "C")
    assert kripke_frame(2, [(0, 1)]).modalities == ("box",)


def test_box_operator():
    f = relation_to_frame({"box": [(0, 1)]}, 2)
    # []X holds at 0 iff 1 is in X; holds at 1 always (no successors).
    for x in range(4):
        assert f.box("box", x) == (0b10 | (1 if x & 0b10 else 0))


def test_frames_are_not_hashable():
    with pytest.raises(TypeError):
        hash(frame(1, [[0]]))


def test_all_relations_irreflexive_count():
    assert sum(1 for _ in all_relations(3, reflexive=False)) == 2 ** 6
    assert all(all(x != y for x, y in r) for r in itertools.islice(all_relations(3, reflexive=False), 20))
