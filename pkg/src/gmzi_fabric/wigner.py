"""Jacobi polynomials and small Wigner d-matrices for two-mode beam splitters.

Row and column indices of a :class:`WignerBlock` run over ``mu = j, j-1, ..., -j``.
Index ``gamma`` (0-based) therefore corresponds to ``mu = j - gamma`` and, for a
beam splitter acting on modes ``(k, l)`` holding ``n = 2j`` photons, to the
two-mode Fock state ``|n - gamma, gamma>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


def jacobi_poly(p: int, q: int, r: int, x: float) -> float:
    """Jacobi polynomial P_r^{(p,q)}(x) as the finite binomial sum.

    ``p`` and ``q`` may be negative as long as ``r + p`` and ``r + q`` are not.
    """
    for name, value in (("p", p), ("q", q), ("r", r)):
        if int(value) != value:
            raise ValueError(f"{name} must be an integer, got {value!r}")
    p, q, r = int(p), int(q), int(r)
    if r < 0:
        raise ValueError(f"degree r must be non-negative, got {r}")
    if r + p < 0 or r + q < 0:
        raise ValueError(f"need r + p >= 0 and r + q >= 0, got p={p}, q={q}, r={r}")
    lo = (x - 1) / 2
    hi = (x + 1) / 2
    return sum(
        math.comb(r + p, r - s) * math.comb(r + q, s) * lo**s * hi ** (r - s)
        for s in range(r + 1)
    )


def _two_j(j) -> int:
    two_j = Fraction(j) * 2
    if two_j.denominator != 1 or two_j < 0:
        raise ValueError(f"2j must be a non-negative integer, got j={j!r}")
    return int(two_j)


@dataclass(frozen=True)
class WignerBlock:
    """Real orthogonal (2j+1)x(2j+1) matrix d^{(j)}(theta)."""

    two_j: int
    theta: float
    entries: np.ndarray

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def mu(self, index: int) -> Fraction:
        return Fraction(self.two_j - 2 * index, 2)


def _entry(two_j: int, a: int, b: int, theta: float) -> float:
    # Integer bookkeeping: j+mu = 2j-a, j-mu = a, likewise for nu with b.
    jpm, jmm = two_j - a, a
    jpn, jmn = two_j - b, b
    r = jmm
    p = b - a  # mu - nu
    q = two_j - a - b  # mu + nu
    pref = math.sqrt(
        math.factorial(jpm) * math.factorial(jmm) / (math.factorial(jpn) * math.factorial(jmn))
    )
    s_half = math.sin(theta / 2)
    c_half = math.cos(theta / 2)
    # sin^p cos^q P_r^{(p,q)}(cos theta), with (x-1)/2 = -sin^2 and (x+1)/2 = cos^2
    # folded into each term so negative powers of sin/cos never appear.
    total = 0.0
    for s in range(r + 1):
        c1 = math.comb(r + p, r - s) if r - s <= r + p else 0
        if c1 == 0:
            continue
        c2 = math.comb(r + q, s) if s <= r + q else 0
        if c2 == 0:
            continue
        total += (-1) ** s * c1 * c2 * s_half ** (p + 2 * s) * c_half ** (q + 2 * (r - s))
    return pref * total


def wigner_d(j, theta: float) -> WignerBlock:
    """Small Wigner matrix for spin ``j`` (integer or half-integer) at angle ``theta``."""
    two_j = _two_j(j)
    return WignerBlock(two_j, float(theta), _wigner_matrix(two_j, float(theta)))


@lru_cache(maxsize=256)
def _wigner_matrix(two_j: int, theta: float) -> np.ndarray:
    n = two_j + 1
    out = np.empty((n, n))
    for a in range(n):
        for b in range(n):
            out[a, b] = _entry(two_j, a, b, theta)
    out.setflags(write=False)
    return out


def beam_splitter_block(n_photons: int, theta: float = math.pi / 2) -> np.ndarray:
    """Action of a beam splitter on ``{|n-gamma, gamma>}``, indexed by gamma."""
    return _wigner_matrix(int(n_photons), float(theta))
