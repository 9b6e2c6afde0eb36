import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmzi_fabric.fock import (
    CapacityError,
    FockBasis,
    FockVector,
    GmziSpec,
    NotASwitch,
    apply_beamsplitter,
    basis_dimension,
    corner_sign_update,
    extract_signed_permutation,
    gmzi_unitary,
    pivot_sign,
    predict_output,
    sign_table,
    simulate_gmzi,
)
from gmzi_fabric.phases import InvalidPhaseConfig, PhaseConfig, all_phase_configs, compile_phi, enumerate_valid
from oracles import fock_amplitude
from strategies import occupations, valid_phis


def single_photon_matrix(spec, phi):
    """Mode transform U with U[out, in] read off single-photon propagation."""
    n = spec.size
    u = np.zeros((n, n), dtype=complex)
    for i in range(n):
        occ = [0] * n
        occ[i] = 1
        out = simulate_gmzi(spec, phi, FockVector.from_occupation(occ))
        for j in range(n):
            tgt = [0] * n
            tgt[j] = 1
            u[j, i] = out.amplitude(tgt)
    return u


# -- basis -----------------------------------------------------------------------------------


def test_basis_dimension_and_order():
    b = FockBasis.create(8, 3)
    assert b.dim == 120 == basis_dimension(8, 3)
    assert b.state(0) == (0,) * 7 + (3,)
    assert b.state(b.dim - 1) == (3,) + (0,) * 7
    codes = b.encode(b.states)
    assert np.all(np.diff(codes) > 0)


@given(st.integers(1, 5), st.integers(0, 4))
def test_basis_index_round_trip(modes, photons):
    b = FockBasis.create(modes, photons)
    assert b.dim == math.comb(modes + photons - 1, photons)
    assert list(b.index_of(b.states)) == list(range(b.dim))
    for i in range(b.dim):
        assert b.index_of(b.state(i)) == i


def test_index_of_missing_state():
    with pytest.raises(KeyError):
        FockBasis.create(3, 2).index_of((1, 1, 1))


def test_capacity_limit_from_environment(monkeypatch):
    FockBasis.create(8, 3)
    monkeypatch.setenv("GMZI_FABRIC_MAX_DIM", "100")
    with pytest.raises(CapacityError):
        FockBasis.create(8, 3)
    monkeypatch.setenv("GMZI_FABRIC_MAX_DIM", "0")
    with pytest.raises(ValueError):
        FockBasis.create(2, 1)


# -- beam splitters against permanents ---------------------------------------------------------


@given(st.integers(0, 4), st.floats(-3, 3, allow_nan=False))
def test_beamsplitter_is_bosonic_lift(n, theta):
    one = []
    for i in range(2):
        occ = [0, 0]
        occ[i] = 1
        out = apply_beamsplitter(FockVector.from_occupation(occ), 0, 1, theta)
        one.append([out.amplitude((1, 0)), out.amplitude((0, 1))])
    u = np.array(one).T
    for g in range(n + 1):
        out = apply_beamsplitter(FockVector.from_occupation((n - g, g)), 0, 1, theta)
        for h in range(n + 1):
            assert out.amplitude((n - h, h)) == pytest.approx(fock_amplitude(u, (n - g, g), (n - h, h)), abs=1e-10)


def test_beamsplitter_rejects_bad_modes():
    v = FockVector.from_occupation((1, 0, 0))
    with pytest.raises(ValueError):
        apply_beamsplitter(v, 0, 0)
    with pytest.raises(ValueError):
        apply_beamsplitter(v, 0, 3)


@given(st.lists(st.floats(0, 2 * math.pi, allow_nan=False), min_size=4, max_size=4), occupations(4, 3))
def test_gmzi_multi_photon_amplitudes_are_permanents(angles, occ):
    # Arbitrary phases, not only switch settings: the device is a linear-optical network.
    spec = GmziSpec.square(4)
    u = single_photon_matrix(spec, angles)
    out = simulate_gmzi(spec, angles, FockVector.from_occupation(occ))
    for s, amp in zip(out.basis.states, out.amplitudes):
        assert amp == pytest.approx(fock_amplitude(u, occ, tuple(s)), abs=1e-9)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_gmzi_is_unitary(n):
    spec = GmziSpec.square(n)
    rng = np.random.default_rng(n)
    u = gmzi_unitary(spec, rng.uniform(0, 2 * np.pi, n), 2)
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10)


# -- switching -----------------------------------------------------------------------------------


@given(valid_phis(sizes=(2, 4, 8)), st.data())
def test_simulation_matches_signed_permutation(phi, data):
    occ = data.draw(occupations(phi.n_ports, 3))
    spec = GmziSpec.square(phi.n_ports)
    state = FockVector.from_occupation(occ)
    out = simulate_gmzi(spec, phi, state)
    assert np.allclose(out.amplitudes, predict_output(compile_phi(phi), state).amplitudes, atol=1e-9)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_extraction_agrees_with_compiler_on_every_phi(n):
    spec = GmziSpec.square(n)
    for phi in all_phase_configs(n):
        got = extract_signed_permutation(spec, phi)
        try:
            expected = compile_phi(phi)
        except InvalidPhaseConfig:
            assert isinstance(got, NotASwitch) and not got
        else:
            assert got == expected


@pytest.mark.parametrize("n", [4, 8])
def test_layer_reordering_keeps_extracted_permutation(n):
    spec = GmziSpec.square(n)
    lam = int(math.log2(n))
    for phi in enumerate_valid(n):
        ref = compile_phi(phi)
        for order in itertools.permutations(range(lam, 0, -1)):
            assert extract_signed_permutation(spec, phi, layer_order=order) == ref


def test_layer_order_must_be_permutation():
    with pytest.raises(ValueError):
        simulate_gmzi(GmziSpec.square(4), PhaseConfig.zeros(4), FockVector.from_occupation((1, 0, 0, 0)), layer_order=[1, 1])


def test_rectangular_device_pads_inputs():
    spec = GmziSpec(4, 16)
    phi = PhaseConfig.from_string("0000111111110000")
    out = simulate_gmzi(spec, phi, FockVector.from_occupation((1, 0, 0, 0)))
    tgt = [0] * 16
    tgt[12] = 1
    assert abs(out.amplitude(tgt)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        GmziSpec(3, 4)


# -- signs ------------------------------------------------------------------------------------------


def test_pivot_history_for_eight_port_example():
    phi = PhaseConfig.from_string("10010110")
    sign, hist = pivot_sign(GmziSpec.square(8), phi, 1, return_history=True)
    assert hist == [
        (-1, 1, 1, -1, 1, -1, -1, 1),
        (1, -1, -1, 1, 1, -1, -1, 1),
        (-1, 1, -1, 1, -1, 1, -1, 1),
        (1,) * 8,
    ]
    assert sign == 1


@pytest.mark.parametrize("n_tot", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 4, 8])
def test_pivot_sign_is_last_bit_rule(n, n_tot):
    for phi in enumerate_valid(n):
        assert pivot_sign(GmziSpec.square(n), phi, n_tot) == (-1) ** (n_tot * phi.last)


@pytest.mark.parametrize("n_tot", [2, 3])
def test_pivot_sign_agrees_with_full_simulation(n_tot):
    spec = GmziSpec.square(4)
    for phi in enumerate_valid(4):
        occ = (n_tot, 0, 0, 0)
        out = simulate_gmzi(spec, phi, FockVector.from_occupation(occ))
        (state, amp), = out.support()
        assert round(amp.real) == pivot_sign(spec, phi, n_tot)


def test_pivot_sign_rejects_invalid_phi():
    with pytest.raises(InvalidPhaseConfig):
        pivot_sign(GmziSpec.square(4), PhaseConfig.from_string("1000"), 1)


@pytest.mark.parametrize("a,b", list(itertools.product((1, -1), repeat=2)))
def test_corner_rule_matches_conjugation(a, b):
    from gmzi_fabric.fock import _conjugated_corners

    for n in (1, 3, 5):
        assert _conjugated_corners(n, a, b) == corner_sign_update(a, b)


def test_sign_table_two_photons():
    rows = sign_table(GmziSpec.square(4), PhaseConfig.from_string("0110"), 2)
    cols = ["0011", "0101", "0110", "1001", "1010", "1100", "2000", "0200", "0020", "0002"]
    expected = [
        [-1, -1, 1, 1, -1, -1, 1, 1, 1, 1],
        [-1, 1, -1, -1, 1, -1, 1, 1, 1, 1],
        [1] * 10,
    ]
    for row, exp in zip(rows, expected):
        assert [row[tuple(int(c) for c in k)] for k in cols] == exp


def test_sign_table_three_photon_pivots():
    rows = sign_table(GmziSpec.square(4), PhaseConfig.from_string("0101"), 3)
    cols = [(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0), (0, 0, 0, 3)]
    assert [[r[c] for c in cols] for r in rows] == [[1, -1, 1, -1], [1, -1, 1, -1], [-1, -1, -1, -1]]
    assert set(rows[-1].values()) == {-1}
