"""Phase configurations of an N->N GMZI and the signed permutations they realize.

Ports are 0-based in this module's API. String forms (``str(phi)``,
``str(perm)``) and anything that ends up in JSON are 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def log2(n: int) -> int:
    if not is_power_of_two(n):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


def layer_pairs(n: int, level: int) -> list[tuple[int, int]]:
    """Beam-splitter / transposition pairs of ``level`` (1 = innermost), 0-based.

    Level ``l`` splits contiguous blocks of length ``n / 2**(l-1)`` into halves
    and pairs position ``u`` of the first half with ``u + n / 2**l``.
    """
    lam = log2(n)
    if not 1 <= level <= lam:
        raise ValueError(f"level must be in [1, {lam}] for n={n}, got {level}")
    block = n >> (level - 1)
    half = block // 2
    return [
        (start + u, start + u + half)
        for start in range(0, n, block)
        for u in range(half)
    ]


class InvalidPhaseConfig(ValueError):
    """Raised when an operation needs a type-consistent phase configuration."""

    def __init__(self, phi: "PhaseConfig", failed_level: int):
        self.phi = phi
        self.failed_level = failed_level
        super().__init__(f"phase configuration {phi} is not type-consistent (fails at level {failed_level})")


@dataclass(frozen=True)
class PhaseConfig:
    """Control word of a GMZI: bit i set means phase pi on port i."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"phase bits must be 0 or 1, got {self.bits!r}")
        if not is_power_of_two(len(bits)):
            raise ValueError(f"number of ports must be a power of two, got {len(bits)}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "PhaseConfig":
        text = text.strip().replace(" ", "")
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"phase string must be over {{0,1}}, got {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_int(cls, value: int, n: int) -> "PhaseConfig":
        """Big-endian: port 1 is the most significant bit."""
        return cls(tuple((value >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "PhaseConfig":
        return cls((0,) * n)

    @property
    def n_ports(self) -> int:
        return len(self.bits)

    @property
    def last(self) -> int:
        return self.bits[-1]

    def as_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def angles(self) -> list[float]:
        import math

        return [math.pi * b for b in self.bits]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class TypeCheck:
    valid: bool
    failed_level: int | None = None
    level_types: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def is_type_consistent(phi: PhaseConfig) -> TypeCheck:
    """Check the (a|a) / (a|~a) split at every level; report the first failing level."""
    n = phi.n_ports
    bits = phi.bits
    types = []
    for level in range(1, log2(n) + 1):
        kinds = set()
        for a, b in layer_pairs(n, level):
            kinds.add("identity" if bits[a] == bits[b] else "swap")
        if len(kinds) != 1:
            return TypeCheck(False, level, tuple(types))
        types.append(kinds.pop())
    return TypeCheck(True, None, tuple(types))


def enumerate_valid(n: int) -> list[PhaseConfig]:
    """All type-consistent configurations, sorted by big-endian integer value."""
    lam = log2(n)
    configs = []
    for base in (0, 1):
        words = [(base,)]
        # Grow outward: the innermost split (level lam) first.
        for _ in range(lam):
            words = [w + w for w in words] + [w + tuple(1 - b for b in w) for w in words]
        configs.extend(PhaseConfig(w) for w in words)
    return sorted(configs, key=PhaseConfig.as_int)


@dataclass(frozen=True)
class TranspositionProduct:
    """Ordered product of 2-cycles, composed left to right: (ij)(ik) = (ijk)."""

    pairs: tuple[tuple[int, int], ...]
    level: int | None = None

    def __str__(self) -> str:
        return "".join(f"({a + 1},{b + 1})" for a, b in self.pairs)


def phi_to_layer_transpositions(phi: PhaseConfig) -> list[TranspositionProduct]:
    check = is_type_consistent(phi)
    if not check:
        raise InvalidPhaseConfig(phi, check.failed_level)
    return [
        TranspositionProduct(tuple(layer_pairs(phi.n_ports, level)), level)
        for level, kind in enumerate(check.level_types, start=1)
        if kind == "swap"
    ]


def _compose_direct(n: int, products: Sequence[TranspositionProduct]) -> tuple[int, ...]:
    image = list(range(n))
    for product in products:
        for a, b in product.pairs:
            swap = {a: b, b: a}
            image = [swap.get(x, x) for x in image]
    return tuple(image)


def _reduce_pairwise(n: int, products: Sequence[TranspositionProduct]) -> tuple[int, ...]:
    """Fold layer products with the four-transposition rule (ab)(cd)(ac)(bd) = (ad)(bc)."""
    current: dict[int, int] = {}
    for product in products:
        nxt = {}
        for a, b in product.pairs:
            nxt[a], nxt[b] = b, a
        if not current:
            current = nxt
            continue
        reduced: dict[int, int] = {}
        done: set[int] = set()
        for a in sorted(current):
            if a in done:
                continue
            b = current[a]
            c, d = nxt.get(a, a), nxt.get(b, b)
            if c == b:
                # (ab)(ab) cancels.
                done.update((a, b))
                continue
            if current.get(c) != d:
                raise AssertionError(f"no partner transposition ({c + 1},{d + 1}) for ({a + 1},{b + 1})")
            reduced[a], reduced[d] = d, a
            reduced[b], reduced[c] = c, b
            done.update((a, b, c, d))
        current = reduced
    image = list(range(n))
    for a, b in current.items():
        image[a] = b
    return tuple(image)


def reduce_transpositions(n: int, products: Sequence[TranspositionProduct]) -> tuple[int, ...]:
    """Compose layer products into one permutation (0-based image tuple).

    Both plain composition and the pairwise reduction are run; they must agree.
    """
    direct = _compose_direct(n, products)
    paired = _reduce_pairwise(n, products)
    if direct != paired:
        raise AssertionError(f"composition {direct} and pairwise reduction {paired} disagree")
    if any(direct[direct[i]] != i for i in range(n)):
        raise AssertionError(f"reduced permutation {direct} is not an involution")
    return direct


@dataclass(frozen=True)
class SignedPermutation:
    """Port permutation plus a sign applied as (-1)**(n_tot * sign_exponent).

    ``perm[i]`` is the output port reached from input port ``i``.
    """

    perm: tuple[int, ...]
    sign_exponent: int = 0

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a bijection: {self.perm!r}")
        if self.sign_exponent not in (0, 1):
            raise ValueError("sign_exponent must be 0 or 1")
        object.__setattr__(self, "perm", perm)

    @property
    def n_ports(self) -> int:
        return len(self.perm)

    def is_involution(self) -> bool:
        return all(self.perm[self.perm[i]] == i for i in range(self.n_ports))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 1-based, each starting at its smallest port."""
        seen = set()
        out = []
        for start in range(self.n_ports):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.perm[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.perm[nxt]
            if len(cyc) > 1:
                out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)

    def sign(self, n_tot: int) -> int:
        return -1 if (n_tot * self.sign_exponent) % 2 else 1

    def sign_symbol(self) -> str:
        return "-" if self.sign_exponent else "+"

    def apply_to_occupation(self, occupation: Sequence[int]) -> tuple[int, tuple[int, ...]]:
        """(sign, permuted occupation) for one Fock basis state."""
        out = [0] * self.n_ports
        for i, n_i in enumerate(occupation):
            out[self.perm[i]] = n_i
        return self.sign(sum(occupation)), tuple(out)

    def xor_mask(self) -> int | None:
        """Mask m with perm[i] == i ^ m for every port, if the map has that form."""
        m = self.perm[0]
        if all(self.perm[i] == i ^ m for i in range(self.n_ports)):
            return m
        return None

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Apply self first, then other."""
        return SignedPermutation(
            tuple(other.perm[self.perm[i]] for i in range(self.n_ports)),
            self.sign_exponent ^ other.sign_exponent,
        )

    def __str__(self) -> str:
        return f"{self.sign_symbol()}{self.cycle_string()}"


def compile_phi(phi: PhaseConfig) -> SignedPermutation:
    """Signed permutation of a type-consistent configuration."""
    products = phi_to_layer_transpositions(phi)
    perm = reduce_transpositions(phi.n_ports, products)
    return SignedPermutation(perm, phi.last)


# -- XOR-mask oracle ---------------------------------------------------------

_XOR_VERIFIED: dict[int, bool] = {}


@dataclass(frozen=True)
class XorMaskReport:
    n: int
    configs: int
    passed: bool
    masks: tuple[int, ...]
    failures: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "configs": self.configs,
            "passed": self.passed,
            "distinct_masks": len(set(self.masks)),
            "failures": list(self.failures),
        }


def xor_mask_report(n: int) -> XorMaskReport:
    """Check exhaustively that every compiled permutation at ``n`` is a port XOR mask."""
    masks = []
    failures = []
    for phi in enumerate_valid(n):
        sp = compile_phi(phi)
        m = sp.xor_mask()
        if m is None:
            failures.append(str(phi))
        else:
            masks.append(m)
    passed = not failures and len(set(masks)) == n
    _XOR_VERIFIED[n] = passed
    return XorMaskReport(n, 2 * n, passed, tuple(masks), tuple(failures))


def xor_fast_path_enabled(n: int) -> bool:
    if n not in _XOR_VERIFIED:
        xor_mask_report(n)
    return _XOR_VERIFIED[n]


def phi_from_mask(n: int, mask: int, sign_exponent: int) -> PhaseConfig:
    """Configuration whose permutation is ``i -> i ^ mask`` with the given sign.

    Phase bit at 0-based port x is ``c ^ parity(x & mask)``; the sign
    exponent is the bit at the last port, so ``c = sign ^ parity(mask)``.
    """
    if not 0 <= mask < n or sign_exponent not in (0, 1):
        raise ValueError(f"mask must lie in [0, {n}) and sign in {{0, 1}}")
    parity = bin(mask).count("1") & 1
    base = sign_exponent ^ parity
    return PhaseConfig(tuple(base ^ (bin(x & mask).count("1") & 1) for x in range(n)))


# -- routing -----------------------------------------------------------------


@dataclass(frozen=True)
class RouteRequest:
    """Demands ``input port -> output port`` on one GMZI (0-based)."""

    n_ports: int
    demands: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        demands = tuple(sorted((int(a), int(b)) for a, b in self.demands))
        ins = [a for a, _ in demands]
        outs = [b for _, b in demands]
        if len(set(ins)) != len(ins):
            raise ValueError(f"duplicate input port in request {demands}")
        if len(set(outs)) != len(outs):
            raise ValueError(f"duplicate output port in request {demands}")
        for p in ins + outs:
            if not 0 <= p < self.n_ports:
                raise ValueError(f"port {p + 1} out of range for {self.n_ports} ports")
        object.__setattr__(self, "demands", demands)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> "RouteRequest":
        return cls(n, tuple(mapping.items()))

    @classmethod
    def parse(cls, n: int, text: str) -> "RouteRequest":
        """Parse ``"1->3,2->4"`` (1-based)."""
        demands = []
        for item in filter(None, (t.strip() for t in text.split(","))):
            a, b = item.split("->")
            demands.append((int(a) - 1, int(b) - 1))
        return cls(n, tuple(demands))

    def satisfied_by(self, sp: SignedPermutation) -> bool:
        return all(sp.perm[a] == b for a, b in self.demands)

    def __str__(self) -> str:
        return ",".join(f"{a + 1}->{b + 1}" for a, b in self.demands)


def solve_route(
    n: int,
    request: RouteRequest,
    sign_preference: int | None = None,
    method: str = "auto",
) -> list[PhaseConfig]:
    """Every valid configuration whose permutation meets ``request``.

    ``method`` is ``"exhaustive"`` (check all 2n valid configs), ``"xor"``
    (mask fast path, only allowed once the XOR-mask report passed for ``n``),
    or ``"auto"`` (fast path when verified). Results are sorted by big-endian
    integer value of the phase bits.
    """
    if request.n_ports != n:
        raise ValueError(f"request is for {request.n_ports} ports, device has {n}")
    if sign_preference not in (None, 0, 1):
        raise ValueError("sign_preference must be None, 0 or 1")
    if method == "auto":
        method = "xor" if xor_fast_path_enabled(n) else "exhaustive"
    if method == "xor":
        if not xor_fast_path_enabled(n):
            raise RuntimeError(f"XOR-mask fast path not verified for n={n}")
        out = _solve_xor(n, request, sign_preference)
    elif method == "exhaustive":
        out = [
            phi
            for phi in enumerate_valid(n)
            if (sign_preference is None or phi.last == sign_preference)
            and request.satisfied_by(compile_phi(phi))
        ]
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(out, key=PhaseConfig.as_int)


def _solve_xor(n: int, request: RouteRequest, sign_preference: int | None) -> list[PhaseConfig]:
    masks = {a ^ b for a, b in request.demands}
    if len(masks) > 1:
        return []
    candidates = masks or set(range(n))
    signs = (0, 1) if sign_preference is None else (sign_preference,)
    return [phi_from_mask(n, m, s) for m in candidates for s in signs]


def all_phase_configs(n: int) -> Iterable[PhaseConfig]:
    for bits in itertools.product((0, 1), repeat=n):
        yield PhaseConfig(bits)
