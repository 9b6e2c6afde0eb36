"""Exact Fock-space simulation of GMZI devices.

Everything here is a dense state-vector simulation on the occupation-number
basis of ``N`` modes and ``n_tot`` photons. Beam splitters are applied per
two-mode sector (fixed ``n_k + n_l``) as small Wigner blocks; the full
``d x d`` unitary is only built on request by :func:`gmzi_unitary`.

Mode indices are 0-based. Beam-splitter convention: with ``B`` the block from
:func:`gmzi_fabric.wigner.beam_splitter_block`, the input-side network ``W``
applies ``B.T`` to each two-mode sector and the output side applies ``B``.
This is the single choice under which the conjugation ``W^T D W`` of one pair
gives ``diag(1, -1) -> -X``, which is what fixes the permutation signs.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .phases import PhaseConfig, SignedPermutation, is_power_of_two, is_type_consistent, InvalidPhaseConfig, layer_pairs, log2
from .wigner import beam_splitter_block

DEFAULT_MAX_DIM = 200_000
ZERO_TOL = 1e-7


class CapacityError(RuntimeError):
    pass


def max_dimension() -> int:
    raw = os.environ.get("GMZI_FABRIC_MAX_DIM")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    value = int(raw)
    if value < 1:
        raise ValueError(f"GMZI_FABRIC_MAX_DIM must be positive, got {raw!r}")
    return value


def basis_dimension(modes: int, photons: int) -> int:
    return math.comb(modes + photons - 1, photons)


def _compositions(modes: int, photons: int) -> list[tuple[int, ...]]:
    # Ascending lexicographic order, mode 0 most significant.
    if modes == 1:
        return [(photons,)]
    out = []
    for first in range(photons + 1):
        for rest in _compositions(modes - 1, photons - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Occupation vectors of ``modes`` modes holding ``photons`` photons, in ascending lexicographic order."""

    modes: int
    photons: int
    states: np.ndarray = field(repr=False)
    _codes: np.ndarray = field(repr=False)

    @classmethod
    def create(cls, modes: int, photons: int) -> "FockBasis":
        modes, photons = int(modes), int(photons)
        if modes < 1 or photons < 0:
            raise ValueError(f"need modes >= 1 and photons >= 0, got {modes}, {photons}")
        dim = basis_dimension(modes, photons)
        limit = max_dimension()
        # Checked before the cache so a lowered limit applies to cached bases too.
        if dim > limit:
            raise CapacityError(f"Fock basis with {modes} modes and {photons} photons has dimension {dim} > limit {limit}")
        return _basis(modes, photons)

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    def encode(self, occupations: np.ndarray) -> np.ndarray:
        radix = self.photons + 1
        weights = radix ** np.arange(self.modes - 1, -1, -1, dtype=np.int64)
        return np.asarray(occupations, dtype=np.int64) @ weights

    def index_of(self, occupations) -> np.ndarray | int:
        """Basis index of one occupation vector, or an array of indices for a 2-D input."""
        occ = np.asarray(occupations, dtype=np.int64)
        codes = self.encode(occ)
        idx = np.searchsorted(self._codes, codes)
        ok = (idx < len(self._codes)) & (self._codes[np.minimum(idx, len(self._codes) - 1)] == codes)
        if not np.all(ok):
            raise KeyError(f"occupation not in basis: {occupations!r}")
        return int(idx) if occ.ndim == 1 else idx

    def state(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.states[index])

    def __eq__(self, other) -> bool:
        return isinstance(other, FockBasis) and (self.modes, self.photons) == (other.modes, other.photons)

    def __hash__(self) -> int:
        return hash((self.modes, self.photons))


@lru_cache(maxsize=64)
def _basis(modes: int, photons: int) -> FockBasis:
    dim = basis_dimension(modes, photons)
    states = np.array(_compositions(modes, photons), dtype=np.int64).reshape(dim, modes)
    states.setflags(write=False)
    radix = photons + 1
    codes = states @ (radix ** np.arange(modes - 1, -1, -1, dtype=np.int64))
    codes.setflags(write=False)
    return FockBasis(modes, photons, states, codes)


@dataclass(frozen=True, eq=False)
class FockVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_occupation(cls, occupation: Sequence[int]) -> "FockVector":
        occ = tuple(int(v) for v in occupation)
        if any(v < 0 for v in occ):
            raise ValueError(f"occupations must be non-negative, got {occ}")
        basis = FockBasis.create(len(occ), sum(occ))
        amps = np.zeros(basis.dim, dtype=np.complex128)
        amps[basis.index_of(occ)] = 1.0
        return cls(basis, amps)

    @property
    def modes(self) -> int:
        return self.basis.modes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.index_of(tuple(occupation))])

    def support(self, tol: float = ZERO_TOL) -> list[tuple[tuple[int, ...], complex]]:
        """Non-negligible (occupation, amplitude) pairs in basis order."""
        idx = np.flatnonzero(np.abs(self.amplitudes) >= tol)
        return [(self.basis.state(i), complex(self.amplitudes[i])) for i in idx]


# -- beam splitters ------------------------------------------------------------


@lru_cache(maxsize=512)
def _pair_sectors(modes: int, photons: int, k: int, l: int) -> tuple[tuple[int, np.ndarray], ...]:
    """For each pair total n, a (groups, n + 1) index array over |n - g, g>_{k,l}."""
    basis = _basis(modes, photons)
    states = basis.states
    totals = states[:, k] + states[:, l]
    out = []
    for n in range(photons + 1):
        anchors = states[(totals == n) & (states[:, l] == 0)]
        if len(anchors) == 0:
            continue
        cols = []
        for g in range(n + 1):
            occ = anchors.copy()
            occ[:, k] = n - g
            occ[:, l] = g
            cols.append(basis.index_of(occ))
        idx = np.stack(cols, axis=1)
        idx.setflags(write=False)
        out.append((n, idx))
    return tuple(out)


def _apply_pair(amps: np.ndarray, modes: int, photons: int, k: int, l: int, theta: float, transpose: bool) -> np.ndarray:
    out = amps.copy()
    for n, idx in _pair_sectors(modes, photons, k, l):
        if n == 0:
            continue
        block = beam_splitter_block(n, theta)
        if transpose:
            block = block.T
        out[idx] = amps[idx] @ block.T
    return out


def _check_modes(modes: int, k: int, l: int) -> None:
    if k == l:
        raise ValueError(f"beam splitter needs two distinct modes, got {k} twice")
    for m in (k, l):
        if not 0 <= m < modes:
            raise ValueError(f"mode {m} out of range for {modes} modes")


def apply_beamsplitter(state: FockVector, k: int, l: int, theta: float = math.pi / 2, transpose: bool = False) -> FockVector:
    """Apply the Wigner block of each ``n_k + n_l`` sector; ``transpose`` applies its inverse.

    Sector amplitude ``gamma`` (state ``|n - gamma, gamma>``) is sent to
    ``sum_g' B[g', gamma] |n - g', g'>``.
    """
    _check_modes(state.modes, k, l)
    amps = _apply_pair(state.amplitudes, state.modes, state.basis.photons, k, l, float(theta), transpose)
    return FockVector(state.basis, amps)


# -- GMZI --------------------------------------------------------------------


@dataclass(frozen=True)
class GmziSpec:
    """An N->M GMZI, simulated as the square device of size max(N, M)."""

    inputs: int
    outputs: int

    def __post_init__(self):
        for name, v in (("inputs", self.inputs), ("outputs", self.outputs)):
            if not is_power_of_two(int(v)):
                raise ValueError(f"{name} must be a power of two, got {v}")

    @classmethod
    def square(cls, n: int) -> "GmziSpec":
        return cls(n, n)

    @property
    def size(self) -> int:
        return max(self.inputs, self.outputs)

    @property
    def lam(self) -> int:
        return log2(self.size)

    @property
    def padding_outputs(self) -> tuple[int, ...]:
        return tuple(range(self.outputs, self.size))

    @property
    def padding_inputs(self) -> tuple[int, ...]:
        return tuple(range(self.inputs, self.size))


def build_mmi(spec: GmziSpec) -> list[tuple[int, list[tuple[int, int]]]]:
    """Beam-splitter layers in application order of W: level lambda first, level 1 last."""
    n = spec.size
    return [(level, layer_pairs(n, level)) for level in range(spec.lam, 0, -1)]


def _phase_angles(phi, n: int) -> np.ndarray:
    if isinstance(phi, PhaseConfig):
        angles = np.pi * np.asarray(phi.bits, dtype=float)
    else:
        angles = np.asarray(phi, dtype=float)
    if angles.shape != (n,):
        raise ValueError(f"phase configuration has {angles.shape[0] if angles.ndim else 0} entries, device has {n} modes")
    return angles


def apply_phase_layer(state: FockVector, phi) -> FockVector:
    """Multiply each basis amplitude by exp(i sum_i n_i phi_i)."""
    n = state.modes
    if isinstance(phi, PhaseConfig):
        if phi.n_ports != n:
            raise ValueError(f"phase configuration has {phi.n_ports} entries, state has {n} modes")
        parity = (state.basis.states @ np.asarray(phi.bits, dtype=np.int64)) & 1
        factor = 1.0 - 2.0 * parity
    else:
        angles = _phase_angles(phi, n)
        factor = np.exp(1j * (state.basis.states @ angles))
    return FockVector(state.basis, state.amplitudes * factor)


def _embed(spec: GmziSpec, state: FockVector) -> FockVector:
    if state.modes == spec.size:
        return state
    if state.modes != spec.inputs:
        raise ValueError(f"input state has {state.modes} modes, device takes {spec.inputs} (square size {spec.size})")
    wide = FockBasis.create(spec.size, state.basis.photons)
    occ = np.zeros((state.basis.dim, spec.size), dtype=np.int64)
    occ[:, : state.modes] = state.basis.states
    amps = np.zeros(wide.dim, dtype=np.complex128)
    amps[wide.index_of(occ)] = state.amplitudes
    return FockVector(wide, amps)


def _layer_sequence(spec: GmziSpec, layer_order: Sequence[int] | None) -> list[int]:
    default = list(range(spec.lam, 0, -1))
    if layer_order is None:
        return default
    order = [int(v) for v in layer_order]
    if sorted(order) != sorted(default):
        raise ValueError(f"layer_order must be a permutation of levels 1..{spec.lam}, got {layer_order!r}")
    return order


def simulate_gmzi(spec: GmziSpec, phi, state: FockVector, layer_order: Sequence[int] | None = None) -> FockVector:
    """Apply W^T D(phi) W to ``state``.

    ``layer_order`` lists the levels in the order W applies them; the output
    network undoes them in reverse. Default is lambda, ..., 1.
    """
    state = _embed(spec, state)
    n = spec.size
    order = _layer_sequence(spec, layer_order)
    amps = state.amplitudes
    photons = state.basis.photons
    half = math.pi / 2
    for level in order:
        for k, l in layer_pairs(n, level):
            amps = _apply_pair(amps, n, photons, k, l, half, True)
    amps = apply_phase_layer(FockVector(state.basis, amps), phi).amplitudes
    for level in reversed(order):
        for k, l in layer_pairs(n, level):
            amps = _apply_pair(amps, n, photons, k, l, half, False)
    return FockVector(state.basis, amps)


def gmzi_unitary(spec: GmziSpec, phi, n_tot: int, layer_order: Sequence[int] | None = None) -> np.ndarray:
    """Dense matrix of the device on the ``n_tot``-photon space (column j = image of basis state j)."""
    basis = FockBasis.create(spec.size, n_tot)
    cols = []
    for j in range(basis.dim):
        e = np.zeros(basis.dim, dtype=np.complex128)
        e[j] = 1.0
        cols.append(simulate_gmzi(spec, phi, FockVector(basis, e), layer_order).amplitudes)
    return np.stack(cols, axis=1)


# -- switch extraction ------------------------------------------------------------


@dataclass(frozen=True)
class NotASwitch:
    """Single-photon probe at ``port`` did not land on one output with unit amplitude."""

    port: int
    max_off_target: float
    reason: str = "superposition"

    def __bool__(self) -> bool:
        return False


def extract_signed_permutation(
    spec: GmziSpec, phi, tol: float = ZERO_TOL, probe_order: Sequence[int] | None = None, layer_order=None
) -> SignedPermutation | NotASwitch:
    n = spec.size
    ports = list(range(n)) if probe_order is None else [int(p) for p in probe_order]
    if sorted(ports) != list(range(n)):
        raise ValueError("probe_order must be a permutation of the ports")
    image = [-1] * n
    signs = {}
    for port in ports:
        occ = [0] * n
        occ[port] = 1
        out = simulate_gmzi(spec, phi, FockVector.from_occupation(occ), layer_order)
        mags = np.abs(out.amplitudes)
        target = int(np.argmax(mags))
        off = float(np.max(np.delete(mags, target))) if n > 1 else 0.0
        amp = out.amplitudes[target]
        if off >= tol or abs(mags[target] - 1.0) >= tol or abs(amp.imag) >= tol:
            return NotASwitch(port, off)
        dest = int(np.flatnonzero(out.basis.states[target])[0])
        image[port] = dest
        signs[port] = 0 if amp.real > 0 else 1
    if sorted(image) != list(range(n)):
        return NotASwitch(ports[0], 0.0, "not a bijection")
    if len(set(signs.values())) != 1:
        return NotASwitch(ports[0], 0.0, "mixed signs")
    return SignedPermutation(tuple(image), signs[ports[0]])


# -- sign propagation ----------------------------------------------------------


def _require_consistent(phi: PhaseConfig) -> None:
    check = is_type_consistent(phi)
    if not check:
        raise InvalidPhaseConfig(phi, check.failed_level)


def corner_sign_update(a: int, b: int) -> tuple[int, int]:
    """Shorthand rule for the corner signs of a conjugated pair: (a, b) -> (b, b)."""
    return b, b


def _conjugated_corners(n: int, a: int, b: int) -> tuple[int, int]:
    """Signs of the non-zero entries in the first and last row of B D B^T on n photons."""
    block = beam_splitter_block(n)
    if n % 2:
        pk, pl = (a < 0), (b < 0)
        diag = np.array([(-1) ** ((n - g) * pk + g * pl) for g in range(n + 1)], dtype=float)
    else:
        diag = np.ones(n + 1)
    conj = block @ np.diag(diag) @ block.T
    corners = []
    for row in (0, n):
        nz = conj[row][np.abs(conj[row]) >= ZERO_TOL]
        if len(nz) != 1:
            raise AssertionError(f"pivot row {row} for n={n}, corners ({a},{b}) is not a signed permutation row")
        corners.append(1 if nz[0] > 0 else -1)
    return corners[0], corners[1]


def pivot_sign(spec: GmziSpec, phi: PhaseConfig, n_tot: int, return_history: bool = False):
    """Permutation sign from the all-photons-in-one-mode states alone.

    Tracks one sign per mode (the sign of ``|0..n_tot_i..0>``), starting from
    the phase layer, and conjugates it through beam-splitter levels 1, 2, ...
    pairwise on the two-state corner of each pair's pivot block.
    """
    _require_consistent(phi)
    n = spec.size
    if phi.n_ports != n:
        raise ValueError(f"phase configuration has {phi.n_ports} entries, device has {n} modes")
    signs = [(-1) ** (n_tot * b) for b in phi.bits]
    history = [tuple(signs)]
    for level in range(1, spec.lam + 1):
        nxt = list(signs)
        for k, l in layer_pairs(n, level):
            nxt[k], nxt[l] = _conjugated_corners(n_tot, signs[k], signs[l]) if n_tot else (signs[k], signs[l])
        signs = nxt
        history.append(tuple(signs))
    if len(set(signs)) != 1:
        raise AssertionError(f"pivot signs did not converge: {signs}")
    return (signs[0], history) if return_history else signs[0]


def sign_table(spec: GmziSpec, phi: PhaseConfig, n_tot: int) -> list[dict[tuple[int, ...], int]]:
    """Per-level sign of every basis state on the full ``n_tot`` space.

    Row 0 is the phase layer; row ``l`` is after conjugating by the level-``l``
    beam splitters. Within each level, basis states are grouped by the photon
    totals on that level's pairs; the sign diagonal of a group is conjugated by
    the tensor product of Wigner blocks and each row's sign is kept.
    """
    _require_consistent(phi)
    n = spec.size
    basis = FockBasis.create(n, n_tot)
    states = basis.states
    signs = 1 - 2 * ((states @ np.asarray(phi.bits, dtype=np.int64)) & 1)
    rows = [dict(zip(map(tuple, states.tolist()), signs.tolist()))]
    for level in range(1, spec.lam + 1):
        pairs = layer_pairs(n, level)
        totals = np.stack([states[:, k] + states[:, l] for k, l in pairs], axis=1)
        new = np.zeros_like(signs)
        for key in np.unique(totals, axis=0):
            members = np.flatnonzero(np.all(totals == key, axis=1))
            # Local coordinates: gamma on each pair, first pair most significant.
            gammas = np.stack([states[members, l] for _, l in pairs], axis=1)
            dims = [int(t) + 1 for t in key]
            flat = np.ravel_multi_index(gammas.T, dims)
            big = np.ones((1, 1))
            for t in key:
                big = np.kron(big, beam_splitter_block(int(t)))
            diag = np.zeros(big.shape[0])
            diag[flat] = signs[members]
            conj = big @ np.diag(diag) @ big.T
            for local, row in zip(members, flat):
                nz = conj[row][np.abs(conj[row]) >= ZERO_TOL]
                if len(nz) != 1 or abs(abs(nz[0]) - 1) >= ZERO_TOL:
                    raise AssertionError(f"level {level}: conjugated sign block is not a signed permutation")
                new[local] = 1 if nz[0] > 0 else -1
        signs = new
        rows.append(dict(zip(map(tuple, states.tolist()), signs.tolist())))
    return rows


def predict_output(sp: SignedPermutation, state: FockVector) -> FockVector:
    """Image of ``state`` under the signed permutation on occupation numbers."""
    basis = state.basis
    perm = np.asarray(sp.perm)
    moved = np.zeros_like(basis.states)
    moved[:, perm] = basis.states
    target = basis.index_of(moved)
    sign = sp.sign(basis.photons)
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[target] = sign * state.amplitudes
    return FockVector(basis, amps)
