import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmzi_fabric.phases import (
    InvalidPhaseConfig,
    PhaseConfig,
    RouteRequest,
    SignedPermutation,
    _compose_direct,
    _reduce_pairwise,
    all_phase_configs,
    compile_phi,
    enumerate_valid,
    is_type_consistent,
    layer_pairs,
    phi_from_mask,
    phi_to_layer_transpositions,
    solve_route,
    xor_fast_path_enabled,
    xor_mask_report,
)
from strategies import any_phis, valid_phis


def test_phase_config_parsing():
    phi = PhaseConfig.from_string("0110")
    assert phi.bits == (0, 1, 1, 0) and phi.as_int() == 6 and str(phi) == "0110"
    assert PhaseConfig.from_int(6, 4) == phi
    for bad in ("", "012", "011"):
        with pytest.raises(ValueError):
            PhaseConfig.from_string(bad)


def test_layer_pairs():
    assert layer_pairs(8, 1) == [(0, 4), (1, 5), (2, 6), (3, 7)]
    assert layer_pairs(8, 3) == [(0, 1), (2, 3), (4, 5), (6, 7)]


def test_type_check_reports_first_failing_level():
    assert is_type_consistent(PhaseConfig.from_string("0110"))
    chk = is_type_consistent(PhaseConfig.from_string("1000"))
    assert not chk and chk.failed_level == 1
    chk = is_type_consistent(PhaseConfig.from_string("01100110"[:4] + "1001"))
    assert chk.valid


@given(any_phis(sizes=(2, 4, 8, 16)))
def test_validity_is_affine_form(phi):
    # Oracle: phi[x] = c ^ parity(m & x) for some c, m.
    n = phi.n_ports
    affine = any(
        all(phi.bits[x] == c ^ (bin(m & x).count("1") & 1) for x in range(n)) for c in (0, 1) for m in range(n)
    )
    assert bool(is_type_consistent(phi)) == affine


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_enumeration_equals_brute_force_filter(n):
    brute = [p for p in all_phase_configs(n) if is_type_consistent(p)]
    assert enumerate_valid(n) == brute
    assert len(brute) == 2 * n


def test_four_port_configurations():
    rows = {str(p): (compile_phi(p).cycle_string(), compile_phi(p).sign_symbol()) for p in enumerate_valid(4)}
    assert rows == {
        "0000": ("()", "+"),
        "1111": ("()", "-"),
        "1010": ("(1,2)(3,4)", "+"),
        "0101": ("(1,2)(3,4)", "-"),
        "1100": ("(1,3)(2,4)", "+"),
        "0011": ("(1,3)(2,4)", "-"),
        "0110": ("(1,4)(2,3)", "+"),
        "1001": ("(1,4)(2,3)", "-"),
    }


def test_eight_port_worked_example_both_routes():
    phi = PhaseConfig.from_string("01101001")
    products = phi_to_layer_transpositions(phi)
    assert [str(p) for p in products] == ["(1,5)(2,6)(3,7)(4,8)", "(1,3)(2,4)(5,7)(6,8)", "(1,2)(3,4)(5,6)(7,8)"]
    expected = (7, 6, 5, 4, 3, 2, 1, 0)
    assert _compose_direct(8, products) == expected
    assert _reduce_pairwise(8, products) == expected
    sp = compile_phi(phi)
    assert sp.cycle_string() == "(1,8)(2,7)(3,6)(4,5)"
    assert sp.sign(3) == -1 and sp.sign(2) == 1


def test_second_worked_example():
    sp = compile_phi(PhaseConfig.from_string("01011010"))
    assert sp.cycle_string() == "(1,6)(2,5)(3,8)(4,7)"


def test_invalid_phi_rejected_by_compiler():
    with pytest.raises(InvalidPhaseConfig) as err:
        compile_phi(PhaseConfig.from_string("10000000"))
    assert err.value.failed_level == 1


@given(valid_phis())
def test_compiled_permutations_are_signed_involutions(phi):
    sp = compile_phi(phi)
    assert sp.is_involution()
    assert sp.sign_exponent == phi.last
    assert sp.xor_mask() is not None


@given(valid_phis(sizes=(4, 8, 16)))
def test_layer_products_commute(phi):
    products = phi_to_layer_transpositions(phi)
    n = phi.n_ports
    ref = _compose_direct(n, products)
    for order in itertools.permutations(products):
        assert _compose_direct(n, order) == ref


@given(valid_phis(sizes=(2, 4, 8, 16, 32)))
def test_mask_inverse_round_trip(phi):
    sp = compile_phi(phi)
    assert phi_from_mask(phi.n_ports, sp.xor_mask(), sp.sign_exponent) == phi


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_xor_report_passes(n):
    rep = xor_mask_report(n)
    assert rep.passed and rep.configs == 2 * n and len(set(rep.masks)) == n
    assert xor_fast_path_enabled(n)


def test_signed_permutation_helpers():
    sp = SignedPermutation((1, 0, 3, 2), 1)
    assert sp.apply_to_occupation((2, 0, 1, 0)) == (-1, (0, 2, 0, 1))
    assert str(sp) == "-(1,2)(3,4)"
    assert sp.compose(sp) == SignedPermutation((0, 1, 2, 3), 0)
    with pytest.raises(ValueError):
        SignedPermutation((0, 0))


def test_route_request_parsing_and_validation():
    req = RouteRequest.parse(4, "2->4,1->3")
    assert req.demands == ((0, 2), (1, 3)) and str(req) == "1->3,2->4"
    with pytest.raises(ValueError):
        RouteRequest(4, ((0, 1), (0, 2)))
    with pytest.raises(ValueError):
        RouteRequest(4, ((0, 1), (2, 1)))
    with pytest.raises(ValueError):
        RouteRequest(4, ((0, 4),))


@given(st.sampled_from([2, 4, 8, 16]), st.data())
def test_fast_path_equals_exhaustive(n, data):
    k = data.draw(st.integers(0, min(n, 3)))
    ins = data.draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    outs = data.draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    req = RouteRequest(n, tuple(zip(ins, outs)))
    sign = data.draw(st.sampled_from([None, 0, 1]))
    assert solve_route(n, req, sign, "xor") == solve_route(n, req, sign, "exhaustive")


def test_solve_route_examples():
    sols = solve_route(4, RouteRequest.parse(4, "1->3"))
    assert [str(p) for p in sols] == ["0011", "1100"]
    assert solve_route(4, RouteRequest.parse(4, "1->2,2->3")) == []
    assert len(solve_route(8, RouteRequest(8, ()))) == 16
    with pytest.raises(ValueError):
        solve_route(4, RouteRequest(8, ()))
    with pytest.raises(ValueError):
        solve_route(4, RouteRequest(4, ()), method="magic")
