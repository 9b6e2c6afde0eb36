"""Per-GMZI phase settings that realize a round of module connections.

The router picks one photon path (or pair of paths meeting at an entangler)
per coupling, never sharing a fiber, entangler or GMZI port, and keeps every
GMZI's accumulated ``input -> output`` demands solvable by a single valid
configuration. Ties go to fewer traversals, then to the preferred entangler
owner, then to the lexicographically first path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .fock import FockVector, simulate_gmzi
from .phases import PhaseConfig, RouteRequest, SignedPermutation, compile_phi, solve_route
from .planner import Connection, Port, SwitchScheme, connections


class UnsatisfiableRoute(RuntimeError):
    def __init__(self, message: str, gmzi: str | None = None, request: RouteRequest | None = None):
        super().__init__(message)
        self.gmzi = gmzi
        self.request = request


class DisjointnessViolation(ValueError):
    pass


@dataclass(frozen=True)
class GmziSetting:
    gmzi: str
    phi: PhaseConfig
    perm: SignedPermutation
    request: RouteRequest
    idle: bool

    def as_dict(self) -> dict:
        return {
            "gmzi": self.gmzi,
            "phi": str(self.phi),
            "sigma": self.perm.cycle_string(),
            "sign_exponent": self.perm.sign_exponent,
            "demands": str(self.request),
            "idle": self.idle,
        }


@dataclass(frozen=True)
class Coupling:
    a: str
    qa: int
    b: str
    qb: int
    prefer_entangler_at: str | None = None

    def label(self) -> str:
        return f"{self.a}.{self.qa + 1}-{self.b}.{self.qb + 1}"


@dataclass(frozen=True)
class Schedule:
    scheme: str
    settings: tuple[GmziSetting, ...]
    routes: tuple[tuple[Coupling, Connection], ...] = ()
    steps: tuple[tuple[GmziSetting, ...], ...] = ()
    meta: dict = field(default_factory=dict)

    def setting(self, gmzi: str) -> GmziSetting:
        for s in self.settings:
            if s.gmzi == gmzi:
                return s
        raise KeyError(gmzi)

    def active(self) -> list[GmziSetting]:
        return [s for s in self.settings if not s.idle]

    def as_dict(self) -> dict:
        doc = {
            "scheme": self.scheme,
            "request": self.meta,
            "gmzis": [s.as_dict() for s in self.settings],
            "routes": [
                {
                    "coupling": c.label(),
                    "depth": conn.depth,
                    "entangler": conn.entangler,
                    "paths": [[f"{h.gmzi}:{h.side}{h.enter + 1}->{h.leave + 1}" for h in p.hops] for p in conn.paths],
                }
                for c, conn in self.routes
            ],
        }
        if self.steps:
            doc["steps"] = [[s.as_dict() for s in step] for step in self.steps]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


# -- configuration choice -------------------------------------------------------------


def choose_config(n: int, request: RouteRequest) -> PhaseConfig | None:
    """Preferred solution: sign exponent 0 first, then the lowest bit-vector integer."""
    sols = solve_route(n, request)
    if not sols:
        return None
    return min(sols, key=lambda p: (p.last, p.as_int()))


def _setting(name: str, n: int, demands: dict[int, int]) -> GmziSetting:
    req = RouteRequest.from_mapping(n, demands)
    if not demands:
        phi = PhaseConfig.zeros(n)
        return GmziSetting(name, phi, compile_phi(phi), req, True)
    phi = choose_config(n, req)
    if phi is None:
        raise UnsatisfiableRoute(f"no valid configuration of {name} meets {req}", name, req)
    return GmziSetting(name, phi, compile_phi(phi), req, False)


def _solvable(n: int, demands: dict[int, int]) -> bool:
    return bool(solve_route(n, RouteRequest.from_mapping(n, demands)))


# -- generic router ---------------------------------------------------------------------


def route_couplings(
    scheme: SwitchScheme,
    couplings: Sequence[Coupling],
    max_gmzis: int | None = None,
    meta: dict | None = None,
) -> Schedule:
    """Route every coupling at once, or raise UnsatisfiableRoute."""
    if max_gmzis is None:
        max_gmzis = 6 if scheme.kind == "gmzi_mixed_graph" else 4
    table = scheme.wiring()
    sizes = {g.name: g.size for g in scheme.gmzis}
    options = []
    for c in couplings:
        found = connections(scheme, c.a, c.qa, c.b, c.qb, max_gmzis, c.prefer_entangler_at, table)
        if not found:
            raise UnsatisfiableRoute(f"no path couples {c.label()} in {scheme.name}")
        options.append(found)

    demand: dict[str, dict[int, int]] = {g: {} for g in sizes}
    used_out: dict[str, set[int]] = {g: set() for g in sizes}
    fibers: set[int] = set()
    ents: set[str] = set()
    chosen: list[Connection] = []
    deepest = [0]

    def place(conn: Connection) -> list | None:
        undo = []
        ok = True
        for p in conn.paths:
            if any(f in fibers for f in p.fibers):
                ok = False
                break
            for h in p.hops:
                i, o = h.demand()
                if i in demand[h.gmzi] or o in used_out[h.gmzi]:
                    ok = False
                    break
                demand[h.gmzi][i] = o
                used_out[h.gmzi].add(o)
                undo.append((h.gmzi, i, o))
            if not ok:
                break
            fibers.update(p.fibers)
            undo.append(("fibers", p.fibers))
        if ok and conn.entangler is not None:
            if conn.entangler in ents:
                ok = False
            else:
                ents.add(conn.entangler)
                undo.append(("ent", conn.entangler))
        if ok:
            touched = {h.gmzi for p in conn.paths for h in p.hops}
            ok = all(_solvable(sizes[g], demand[g]) for g in touched)
        if not ok:
            unplace(undo)
            return None
        return undo

    def unplace(undo):
        for item in reversed(undo):
            if item[0] == "fibers":
                fibers.difference_update(item[1])
            elif item[0] == "ent":
                ents.discard(item[1])
            else:
                g, i, o = item
                del demand[g][i]
                used_out[g].discard(o)

    def search(k: int) -> bool:
        deepest[0] = max(deepest[0], k)
        if k == len(options):
            return True
        for conn in options[k]:
            undo = place(conn)
            if undo is None:
                continue
            chosen.append(conn)
            if search(k + 1):
                return True
            chosen.pop()
            unplace(undo)
        return False

    if not search(0):
        stuck = couplings[min(deepest[0], len(couplings) - 1)]
        raise UnsatisfiableRoute(f"couplings cannot all be routed at once; blocked at {stuck.label()}")
    settings = tuple(_setting(g.name, g.size, demand[g.name]) for g in scheme.gmzis)
    return Schedule(scheme.name, settings, tuple(zip(couplings, chosen)), (), meta or {})


# -- request front ends ------------------------------------------------------------------


def _check_disjoint(scheme: SwitchScheme, pairs: Sequence[tuple[str, str]]) -> None:
    seen = set()
    names = {m.name for m in scheme.modules}
    for a, b in pairs:
        for x in (a, b):
            if x not in names:
                raise DisjointnessViolation(f"unknown module {x!r}")
        if a == b:
            raise DisjointnessViolation(f"module {a} paired with itself")
        for x in (a, b):
            if x in seen:
                raise DisjointnessViolation(f"module {x} appears in more than one pair")
            seen.add(x)


def _pair_key(a: str, b: str) -> str:
    return "-".join(sorted((a, b)))


def schedule_pairing(
    scheme: SwitchScheme,
    pairs: Sequence[tuple[str, str]],
    entangler_side: dict[str, str] | None = None,
    qubits: int | None = None,
) -> Schedule:
    """Connect qubit t of one module with qubit t of its partner, for every listed pair.

    In direct schemes the first module of each pair sends. In probabilistic
    schemes the entanglers of ``entangler_side[pair]`` are tried first; the
    default is the scheme's recorded choice, else the lexicographically first
    module.
    """
    pairs = [tuple(p) for p in pairs]
    _check_disjoint(scheme, pairs)
    preset_side = scheme.meta.get("entangler_side", {})
    couplings = []
    for a, b in pairs:
        key = _pair_key(a, b)
        side = None
        if scheme.probabilistic:
            side = (entangler_side or {}).get(key) or preset_side.get(key) or min(a, b)
            if side not in (a, b):
                raise DisjointnessViolation(f"entangler side {side} is not in pair {key}")
        q = qubits if qubits is not None else min(scheme.module(a).qubits, scheme.module(b).qubits)
        couplings += [Coupling(a, t, b, t, side) for t in range(q)]
    meta = {"pairs": [list(p) for p in pairs]}
    return route_couplings(scheme, couplings, meta=meta)


MERGE_PORTS = {"X": ((0, 1), (2, 3)), "Z": ((4, 5), (2, 3))}


def schedule_merge(scheme: SwitchScheme, pairs: Sequence[tuple[str, str]], stabilizer: str) -> Schedule:
    """Merge round: the first module's check qubits reach the second module's data qubits."""
    if scheme.kind != "gmzi_merge":
        raise ValueError("schedule_merge needs a gmzi_merge scheme")
    stabilizer = stabilizer.upper()
    if stabilizer not in MERGE_PORTS:
        raise ValueError("stabilizer must be X or Z")
    pairs = [tuple(p) for p in pairs]
    _check_disjoint(scheme, pairs)
    checks, data = MERGE_PORTS[stabilizer]
    couplings = [Coupling(a, c, b, d) for a, b in pairs for c, d in zip(checks, data)]
    return route_couplings(scheme, couplings, meta={"pairs": [list(p) for p in pairs], "stabilizer": stabilizer})


def schedule_stabilizer_readout(
    scheme: SwitchScheme,
    checks: Iterable[str],
    order: dict[str, Sequence[int]] | None = None,
) -> Schedule:
    """One readout round for the listed checks.

    Every data qubit of a listed check points its 1->M device at that check
    for the round; a data qubit claimed by two checks is an error. The
    check-side N->1 devices admit one photon per step, so ``steps`` lists
    their settings in the order given per check (1-based data indices,
    default ascending), which is how N- or Z-shaped orderings are expressed.
    """
    if scheme.kind != "stabilizer_readout":
        raise ValueError("schedule_stabilizer_readout needs a stabilizer_readout scheme")
    tanner = {c: [d - 1 for d in ds] for c, ds in scheme.meta["tanner"].items()}
    checks = list(checks)
    claimed: dict[int, str] = {}
    for c in checks:
        if c not in tanner:
            raise ValueError(f"unknown check {c!r}")
        for d in tanner[c]:
            if d in claimed:
                raise DisjointnessViolation(f"data qubit {d + 1} used by both {claimed[d]} and {c} in one round")
            claimed[d] = c
    table = scheme.wiring()
    demand: dict[str, dict[int, int]] = {g.name: {} for g in scheme.gmzis}
    for d, c in claimed.items():
        g = f"GD{d + 1}"
        j = next(
            j for j in range(scheme.gmzi(g).outputs) if table[Port(g, "out", j)][0] == Port(f"G{c}", "in", tanner[c].index(d))
        )
        demand[g][0] = j
    sizes = {g.name: g.size for g in scheme.gmzis}
    seqs = {}
    for c in checks:
        seq = [d - 1 for d in (order or {}).get(c, [d + 1 for d in tanner[c]])]
        if sorted(seq) != sorted(tanner[c]):
            raise ValueError(f"order for {c} must list each of its data qubits once")
        seqs[c] = seq
    steps = []
    for k in range(max((len(s) for s in seqs.values()), default=0)):
        step = []
        for c in checks:
            if k < len(seqs[c]):
                step.append(_setting(f"G{c}", sizes[f"G{c}"], {tanner[c].index(seqs[c][k]): 0}))
        steps.append(tuple(step))
    for c in checks:
        # The round's headline setting for a check device is its first step.
        demand[f"G{c}"] = {tanner[c].index(seqs[c][0]): 0}
    settings = tuple(_setting(g.name, g.size, demand[g.name]) for g in scheme.gmzis)
    return Schedule(scheme.name, settings, (), tuple(steps), {"checks": checks})


def schedule_msd_distribution(
    factory_outputs: int,
    destinations: int,
    assignment: dict[int, tuple[int, int]] | None = None,
) -> Schedule:
    """Route factory output i to (destination block, slot) on one N -> kN GMZI (0-based).

    The default assignment sends output i to slot i of block 0.
    """
    from .planner import build_scheme

    scheme = build_scheme("msd_distribution", 1, factory_outputs, destinations=destinations)
    n = factory_outputs
    if assignment is None:
        assignment = {i: (0, i) for i in range(n)}
    demands = {}
    for i, (blk, slot) in assignment.items():
        if not (0 <= i < n and 0 <= blk < destinations and 0 <= slot < n):
            raise ValueError(f"assignment {i + 1} -> block {blk + 1} slot {slot + 1} out of range")
        demands[i] = blk * n + slot
    g = scheme.gmzis[0]
    setting = _setting(g.name, g.size, demands)
    meta = {"assignment": {str(i + 1): [b + 1, s + 1] for i, (b, s) in sorted(assignment.items())}}
    return Schedule(scheme.name, (setting,), (), (), meta)


# -- verification -------------------------------------------------------------------------


def trace_photon(scheme: SwitchScheme, schedule: Schedule, start: Port, table=None) -> Port:
    """Follow a photon from a module port through the configured GMZIs to its terminal."""
    table = scheme.wiring() if table is None else table
    perms = {s.gmzi: s.perm.perm for s in schedule.settings}
    here = start
    for _ in range(4 * len(scheme.gmzis) + 2):
        nxt, _ = table[here]
        if nxt.side in ("module", "ent"):
            return nxt
        perm = perms[nxt.node]
        # sigma is an involution: the same map sends inputs to outputs and back.
        j = perm[nxt.index]
        side = "out" if nxt.side == "in" else "in"
        here = Port(nxt.node, side, j)
        if here not in table:
            raise UnsatisfiableRoute(f"photon from {start} leaves {nxt.node} on unwired port {here}")
    raise RuntimeError("photon trace did not terminate")


def verify_schedule(scheme: SwitchScheme, schedule: Schedule, fock_check: bool = False) -> bool:
    """Re-derive every routed coupling from the settings alone.

    Each photon is traced through the compiled permutations and must end where
    its planned path ends. With ``fock_check`` each hop is also pushed through
    the Fock-space simulator as a single photon.
    """
    table = scheme.wiring()
    settings = {s.gmzi: s for s in schedule.settings}
    for s in schedule.settings:
        if not s.request.satisfied_by(s.perm):
            return False
    for coupling, conn in schedule.routes:
        for p in conn.paths:
            if trace_photon(scheme, schedule, p.start, table) != p.end:
                return False
            if fock_check:
                for h in p.hops:
                    s = settings[h.gmzi]
                    g = scheme.gmzi(h.gmzi)
                    i, o = h.demand()
                    occ = [0] * g.size
                    occ[i] = 1
                    out = simulate_gmzi(g.spec, s.phi, FockVector.from_occupation(occ))
                    target = [0] * g.size
                    target[o] = 1
                    if not np.isclose(abs(out.amplitude(target)), 1.0, atol=1e-9):
                        return False
        if conn.entangler is not None and {p.end.node for p in conn.paths} != {conn.entangler}:
            return False
    return True
