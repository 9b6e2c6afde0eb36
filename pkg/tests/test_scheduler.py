import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmzi_fabric.graph import perfect_matchings
from gmzi_fabric.phases import RouteRequest, is_type_consistent
from gmzi_fabric.planner import Port, build_scheme, preset
from gmzi_fabric.scheduler import (
    DisjointnessViolation,
    UnsatisfiableRoute,
    choose_config,
    schedule_merge,
    schedule_msd_distribution,
    schedule_pairing,
    schedule_stabilizer_readout,
    trace_photon,
    verify_schedule,
)

from reference_values import PAIR_BLOCKS, contains_cycles


@pytest.mark.parametrize("pair", sorted(PAIR_BLOCKS))
def test_equalized_pairs_match_reference_cycles(pair):
    s = preset("equalized-5")
    sch = schedule_pairing(s, [tuple(pair)])
    for module, block in zip(pair, PAIR_BLOCKS[pair]):
        st_ = sch.setting(f"G{module}")
        assert contains_cycles(st_.perm.cycle_string(), block), (module, st_.perm.cycle_string())
        assert is_type_consistent(st_.phi) and st_.perm.sign_exponent == 0
    assert verify_schedule(s, sch)


def test_equalized_pair_passive_gmzis_idle_with_zero_phases():
    sch = schedule_pairing(preset("equalized-5"), [("A", "B")])
    for name in ("GC", "GD", "GE"):
        st_ = sch.setting(name)
        assert st_.idle and str(st_.phi) == "0" * 16


def test_entangler_side_override_moves_the_swap():
    s = preset("equalized-5")
    sch = schedule_pairing(s, [("A", "B")], entangler_side={"A-B": "A"})
    assert sch.setting("GA").perm.cycle_string().startswith("(1,5)")
    assert sch.setting("GB").perm.cycle_string() == "()"
    assert {c.entangler for _, c in sch.routes} == {"EA1", "EA2", "EA3", "EA4"}
    with pytest.raises(DisjointnessViolation):
        schedule_pairing(s, [("A", "B")], entangler_side={"A-B": "C"})


def test_default_entangler_side_is_lexicographic_without_preset_choice():
    s = build_scheme("gmzi_equalized", 4, 2)
    sch = schedule_pairing(s, [("B", "C")])
    assert {c.entangler for _, c in sch.routes} == {"EB1", "EB2"}


@pytest.mark.parametrize("first,second", [(p, q) for p in itertools.combinations("ABCDE", 2) for q in itertools.combinations("ABCDE", 2) if not set(p) & set(q) and p < q])
def test_equalized_two_pairs_at_once(first, second):
    s = preset("equalized-5")
    assert verify_schedule(s, schedule_pairing(s, [first, second]))


@pytest.mark.parametrize("kind", ["gmzi_direct", "spanke_direct", "spanke_probabilistic"])
@pytest.mark.parametrize("m", [4, 6])
def test_direct_and_spanke_schedule_every_matching(kind, m):
    q = 4 if m == 4 else 2
    s = build_scheme(kind, m, q)
    names = [x.name for x in s.modules]
    for match in perfect_matchings(names):
        sch = schedule_pairing(s, match)
        assert verify_schedule(s, sch)


def test_fock_recheck_of_direct_round():
    s = build_scheme("gmzi_direct", 4, 4)
    sch = schedule_pairing(s, [("A", "C"), ("B", "D")])
    assert verify_schedule(s, sch, fock_check=True)
    assert trace_photon(s, sch, Port("A", "module", 2)) == Port("C", "module", 2)


def test_pairing_disjointness_errors():
    s = preset("equalized-5")
    with pytest.raises(DisjointnessViolation):
        schedule_pairing(s, [("A", "A")])
    with pytest.raises(DisjointnessViolation):
        schedule_pairing(s, [("A", "B"), ("B", "C")])
    with pytest.raises(DisjointnessViolation):
        schedule_pairing(s, [("A", "Q")])


def test_empty_pairing_is_idle():
    s = preset("equalized-5")
    sch = schedule_pairing(s, [])
    assert all(x.idle for x in sch.settings)


def test_merge_reference_rows():
    s = preset("merge-5")
    x = schedule_merge(s, [("A", "B")], "X")
    z = schedule_merge(s, [("A", "B")], "Z")
    got = [(sch.setting(g).perm.cycle_string(), str(sch.setting(g).phi)) for sch in (x, z) for g in ("GA", "GB")]
    assert [c for c, _ in got] == ["()", "(1,3)(2,4)(5,7)(6,8)", "(1,5)(2,6)(3,7)(4,8)", "(1,3)(2,4)(5,7)(6,8)"]
    assert [p for _, p in got] == ["00000000", "11001100", "11110000", "11001100"]
    assert verify_schedule(s, x, fock_check=True) and verify_schedule(s, z, fock_check=True)


@pytest.mark.parametrize("pair", list(itertools.permutations("ABCDE", 2)))
@pytest.mark.parametrize("stab", ["X", "Z"])
def test_merge_any_ordered_pair(pair, stab):
    s = preset("merge-5")
    assert verify_schedule(s, schedule_merge(s, [pair], stab))


def test_merge_argument_errors():
    with pytest.raises(ValueError):
        schedule_merge(preset("merge-5"), [("A", "B")], "Y")
    with pytest.raises(ValueError):
        schedule_merge(preset("equalized-5"), [("A", "B")], "X")


def test_msd_examples():
    sch = schedule_msd_distribution(4, 1)
    assert str(sch.settings[0].phi) == "0000"
    sch = schedule_msd_distribution(4, 4, {i: (3, i) for i in range(4)})
    assert sch.settings[0].perm.cycle_string().startswith("(1,13)(2,14)(3,15)(4,16)")
    with pytest.raises(UnsatisfiableRoute):
        schedule_msd_distribution(4, 2, {0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (1, 0)})
    with pytest.raises(ValueError):
        schedule_msd_distribution(4, 2, {0: (2, 0)})


@given(st.sampled_from([2, 4, 8]), st.sampled_from([1, 2, 4]), st.data())
def test_msd_whole_block_moves_always_route(n, k, data):
    blk = data.draw(st.integers(0, k - 1))
    sch = schedule_msd_distribution(n, k, {i: (blk, i) for i in range(n)})
    assert all(sch.settings[0].perm.perm[i] == blk * n + i for i in range(n))


def test_stabilizer_round_single_check():
    s = preset("stabilizer-913")
    sch = schedule_stabilizer_readout(s, ["X2"])
    active = {x.gmzi for x in sch.settings if x.request.demands}
    assert active == {"GD5", "GD6", "GD8", "GD9", "GX2"}
    assert len(sch.steps) == 4
    table = s.wiring()
    for d in (5, 6, 8, 9):
        j = sch.setting(f"GD{d}").perm.perm[0]
        assert table[Port(f"GD{d}", "out", j)][0].node == "GX2"


def test_stabilizer_custom_order_and_errors():
    s = preset("stabilizer-913")
    sch = schedule_stabilizer_readout(s, ["Z1"], order={"Z1": [2, 6, 3, 5]})
    firsts = [step[0].request.demands[0][0] for step in sch.steps]
    assert firsts == [0, 3, 1, 2]
    assert all(not x.request.demands for x in schedule_stabilizer_readout(s, []).settings)
    with pytest.raises(DisjointnessViolation):
        schedule_stabilizer_readout(s, ["X1", "Z1"])
    with pytest.raises(ValueError):
        schedule_stabilizer_readout(s, ["Z1"], order={"Z1": [2, 5]})


def test_disjoint_checks_share_a_round():
    s = preset("stabilizer-913")
    sch = schedule_stabilizer_readout(s, ["X1", "X4", "Z4"])
    assert len(sch.steps) == 4


def test_choose_config_prefers_positive_then_smallest():
    req = RouteRequest.parse(4, "1->2")
    assert str(choose_config(4, req)) == "1010"
    assert choose_config(4, RouteRequest.parse(4, "1->2,2->3")) is None


def test_schedule_document_is_deterministic():
    s = preset("equalized-5")
    a = schedule_pairing(s, [("C", "E")]).to_json()
    b = schedule_pairing(s, [("C", "E")]).to_json()
    assert a == b and '"sign_exponent": 0' in a
