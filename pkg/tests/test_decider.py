import pytest

from evckit.decider import (
    validate_defense_family,
    DefenseFamily,
    FixpointTrace,
    is_spartan,
    spartan_fixpoint,
    strategy_export,
)
from evckit.errors import PreconditionError
from evckit.game import is_spartan_by_game
from evckit.graph import Graph, parse_edge_list

from conftest import random_graph_corpus


def test_footnote_not_spartan(named):
    v = is_spartan(named["footnote"])
    assert not v.spartan
    assert v.method == "konig"
    assert v.certificate["kind"] == "odd_cycle"
    assert len(v.certificate["cycle"]) == 3


def test_c4_spartan(named):
    v = is_spartan(named["C4"])
    assert v.spartan and v.method == "konig"
    assert v.family is not None
    assert set(v.family.covers) == {(0, 2), (1, 3)}


def test_c5_spartan_via_fixpoint(named):
    v = is_spartan(named["C5"])
    assert v.spartan and v.method == "fixpoint"
    assert len(v.family.covers) == 5  # every minimum cover survives


def test_bowtie_family(named):
    v = is_spartan(named["bowtie"])
    assert v.spartan
    assert len(v.family.covers) == 4


def test_p5_empty_fixpoint(named):
    result = spartan_fixpoint(named["P5"])
    assert isinstance(result, FixpointTrace)
    assert len(result.deletions) == 1  # the unique cover dies immediately
    cover, edge, round_no = result.deletions[0]
    assert cover == named["P5"].index_set(["b", "d"])


def test_c4_fixpoint_both_survive(named):
    fam = spartan_fixpoint(named["C4"])
    assert isinstance(fam, DefenseFamily)
    assert set(fam.covers) == {(0, 2), (1, 3)}
    assert validate_defense_family(named["C4"], fam) == []


def test_fixpoint_order_independence():
    for g in random_graph_corpus(25, 3, 6, seed=131):
        base = spartan_fixpoint(g)
        base_covers = (
            set(base.covers) if isinstance(base, DefenseFamily) else set()
        )
        for seed in (1, 2, 3):
            other = spartan_fixpoint(g, order_seed=seed)
            other_covers = (
                set(other.covers) if isinstance(other, DefenseFamily) else set()
            )
            assert base_covers == other_covers, g.edges


def test_family_transitions_replay(named):
    for name in ("C4", "C5", "C6", "bowtie", "K2"):
        v = is_spartan(named[name])
        assert v.spartan
        assert validate_defense_family(named[name], v.family) == [], name


def test_strategy_export_c4(named):
    v = is_spartan(named["C4"])
    table = strategy_export(v.family, named["C4"])
    assert len(table["states"]) == 2
    # every oriented boundary attack appears from each state
    assert len(table["transitions"]) == 8
    assert table["initial"] == 0


def test_strategy_export_k2(named):
    v = is_spartan(named["K2"])
    table = strategy_export(v.family, named["K2"])
    assert table["states"] == [["a"], ["b"]]
    moves = {
        (t["from"], tuple(t["attack"])): t["moves"] for t in table["transitions"]
    }
    assert moves[(0, ("a", "b"))] == [["a", "b"]]


def test_strategy_export_c6(named):
    v = is_spartan(named["C6"])
    table = strategy_export(v.family, named["C6"])
    assert len(table["states"]) == 2
    assert all(len(m) == 3 for t in table["transitions"] for m in [t["moves"]])


def test_disconnected_graph_per_component():
    g = parse_edge_list("a b\nb c\nc a\nx y")  # triangle + edge
    v = is_spartan(g)
    assert v.method == "perComponent"
    assert v.spartan  # triangle is Spartan (evc = mvc = 2), so is the edge
    assert len(v.components) == 2
    g2 = parse_edge_list("a b\nb c\nx y")  # path + edge: path P3 is not
    v2 = is_spartan(g2)
    assert not v2.spartan
    assert v2.certificate is not None


def test_rejects_isolated_vertices():
    g = Graph(("a", "b", "c"), ((0, 1),))
    with pytest.raises(PreconditionError):
        is_spartan(g)


def test_rejects_single_vertex():
    with pytest.raises(PreconditionError):
        is_spartan(Graph(("a",), ()))


def test_method_game(named):
    v = is_spartan(named["C5"], method="game")
    assert v.spartan and v.method == "gameOracle"
    v = is_spartan(named["footnote"], method="game")
    assert not v.spartan


def test_method_fixpoint_forced(named):
    # Koenig graphs still decide correctly when forced down the fixpoint lane
    v = is_spartan(named["C4"], method="fixpoint")
    assert v.spartan and v.method == "fixpoint"
    v = is_spartan(named["P5"], method="fixpoint")
    assert not v.spartan and v.certificate["kind"] == "empty_fixpoint"


def test_cross_check_agrees(named):
    for name in ("C4", "C5", "P5", "footnote", "bowtie"):
        v = is_spartan(named[name], cross_check=True)
        assert v.cross_check["agrees"]


def test_truncated_enumeration_falls_back_to_game(named):
    v = is_spartan(named["C5"], cover_cap=2)
    assert v.method == "gameOracle"
    assert v.spartan  # the game oracle still answers correctly
    assert v.certificate["kind"] == "cover_enumeration_truncated"


def test_decider_matches_oracle_random():
    for g in random_graph_corpus(120, 2, 7, seed=139):
        assert is_spartan(g).spartan == is_spartan_by_game(g), g.edges


def test_fixpoint_lane_agrees_on_konig_graphs():
    # even when the Koenig fast path is bypassed, the fixpoint answer equals
    # bipartite + essentially elementary whenever mm == mvc
    from evckit.covers import mvc_mask
    from evckit.graph import OddCycle, bipartition
    from evckit.matching import is_essentially_elementary, max_matching_size

    seen = 0
    for g in random_graph_corpus(80, 2, 6, seed=163):
        if max_matching_size(g) != mvc_mask(g, g.full_mask):
            continue
        seen += 1
        bip = not isinstance(bipartition(g), OddCycle)
        structural = bip and is_essentially_elementary(g)[0]
        assert is_spartan(g, method="fixpoint").spartan == structural, g.edges
    assert seen > 20
