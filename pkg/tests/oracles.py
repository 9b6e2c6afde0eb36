"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numba
import numpy as np
from scipy.linalg import expm


# -- validity count by brute force over every bit word ------------------------------


def _level_masks(n: int) -> list[tuple[int, int]]:
    """(shift, mask) per level: mask selects the first half of every block of that level."""
    out = []
    h = n // 2
    while h >= 1:
        m = 0
        for start in range(0, n, 2 * h):
            for u in range(start, start + h):
                m |= 1 << u
        out.append((h, m))
        h //= 2
    return out


@numba.njit(cache=True)
def _count_consistent(n_words, shifts, masks):
    total = 0
    for w in range(n_words):
        ok = 1
        for k in range(shifts.shape[0]):
            diff = (w ^ (w >> shifts[k])) & masks[k]
            if diff != 0 and diff != masks[k]:
                ok = 0
                break
        total += ok
    return total


def brute_force_valid_count(n: int) -> int:
    """Number of length-n bit words whose paired bits agree or all disagree at every level."""
    levels = _level_masks(n)
    shifts = np.array([h for h, _ in levels], dtype=np.uint64)
    masks = np.array([m for _, m in levels], dtype=np.uint64)
    return int(_count_consistent(np.uint64(1) << np.uint64(n), shifts, masks))


# -- Fock amplitudes from permanents ------------------------------------------------------


def permanent(a: np.ndarray) -> complex:
    n = a.shape[0]
    if n == 0:
        return 1.0
    total = 0j
    for perm in itertools.permutations(range(n)):
        total += np.prod([a[i, perm[i]] for i in range(n)])
    return total


def fock_amplitude(u: np.ndarray, occ_in, occ_out) -> complex:
    """<out| U |in> for a single-particle mode transform U (out_mode = sum_in U[out, in])."""
    rows = [i for i, c in enumerate(occ_out) for _ in range(c)]
    cols = [j for j, c in enumerate(occ_in) for _ in range(c)]
    sub = u[np.ix_(rows, cols)]
    norm = math.sqrt(np.prod([math.factorial(c) for c in occ_in]) * np.prod([math.factorial(c) for c in occ_out]))
    return permanent(sub) / norm


# -- Wigner blocks from the angular-momentum generator ----------------------------------


def wigner_expm(two_j: int, theta: float) -> np.ndarray:
    """exp(-i theta J_y) in the basis mu = +j .. -j."""
    j = two_j / 2
    mus = [j - k for k in range(two_j + 1)]
    jp = np.zeros((two_j + 1, two_j + 1))
    for col, m in enumerate(mus):
        if m < j:
            row = col - 1  # mu + 1 sits one row above
            jp[row, col] = math.sqrt(j * (j + 1) - m * (m + 1))
    jy = (jp - jp.T) / 2j
    return np.real_if_close(expm(-1j * theta * jy))


def jacobi_fraction(p: int, q: int, r: int, x: Fraction) -> Fraction:
    """Exact Jacobi polynomial P_r^(p,q)(x) from the binomial sum."""
    total = Fraction(0)
    for s in range(r + 1):
        total += math.comb(r + p, r - s) * math.comb(r + q, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (r - s)
    return total


# -- perfect matchings --------------------------------------------------------------------


def brute_force_matchings(n: int) -> int:
    """Count fixed-point-free involutions of n points directly."""
    count = 0
    for perm in itertools.permutations(range(n)):
        if all(perm[i] != i and perm[perm[i]] == i for i in range(n)):
            count += 1
    return count
