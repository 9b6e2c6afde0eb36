"""Switching fabrics as data: modules, GMZIs, fibers and entanglers.

A scheme is a port graph. Every fiber (``Hardwire``) joins two endpoints and
can be traversed either way. A photon crossing a GMZI enters on one side and
leaves on the other; each crossing is one active layer and two fiber-to-chip
couplers. Module-to-first-fiber and entangler couplers are not counted; they
are the same in every scheme being compared.

Port indices are 0-based in memory and 1-based in scheme files.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .fock import GmziSpec
from .graph import MixedGraph, build_mixed_graph

SIDES = ("module", "in", "out", "ent")
KINDS = (
    "spanke_direct",
    "spanke_probabilistic",
    "gmzi_direct",
    "gmzi_equalized",
    "gmzi_mixed_graph",
    "gmzi_merge",
    "stabilizer_readout",
    "msd_distribution",
)


class SchemeError(ValueError):
    pass


def pow2_ceil(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def module_names(count: int) -> list[str]:
    if count <= 26:
        return [chr(ord("A") + i) for i in range(count)]
    return [f"M{i + 1}" for i in range(count)]


@dataclass(frozen=True, order=True)
class Port:
    node: str
    side: str
    index: int

    def __post_init__(self):
        if self.side not in SIDES:
            raise SchemeError(f"unknown port side {self.side!r}")
        if self.index < 0:
            raise SchemeError(f"negative port index on {self.node}")

    def to_dict(self) -> dict:
        return {"node": self.node, "side": self.side, "port": self.index + 1}

    @classmethod
    def from_dict(cls, d: dict) -> "Port":
        return cls(d["node"], d["side"], int(d["port"]) - 1)

    def __str__(self) -> str:
        return f"{self.node}.{self.side}{self.index + 1}"


@dataclass(frozen=True)
class ModuleRecord:
    """A module with ``qubits`` qubits; fiber port ``p`` belongs to qubit ``port_qubit[p]``."""

    name: str
    qubits: int
    port_qubit: tuple[int, ...]

    @property
    def ports(self) -> int:
        return len(self.port_qubit)

    def ports_of(self, qubit: int) -> list[int]:
        return [p for p, q in enumerate(self.port_qubit) if q == qubit]


@dataclass(frozen=True)
class GmziRecord:
    """Nominal N->M device; simulated and compiled as the padded square of side max(N, M)."""

    name: str
    inputs: int
    outputs: int
    owner: str | None = None

    @property
    def spec(self) -> GmziSpec:
        return GmziSpec(pow2_ceil(self.inputs), pow2_ceil(self.outputs))

    @property
    def size(self) -> int:
        return self.spec.size


@dataclass(frozen=True)
class Hardwire:
    a: Port
    b: Port


@dataclass(frozen=True)
class Entangler:
    name: str


@dataclass(frozen=True)
class SwitchScheme:
    name: str
    kind: str
    modules: tuple[ModuleRecord, ...]
    gmzis: tuple[GmziRecord, ...]
    hardwires: tuple[Hardwire, ...]
    entanglers: tuple[Entangler, ...] = ()
    meta: dict = field(default_factory=dict, compare=True)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemeError(f"unknown scheme kind {self.kind!r}")

    # -- lookup ------------------------------------------------------------------

    def module(self, name: str) -> ModuleRecord:
        for m in self.modules:
            if m.name == name:
                return m
        raise SchemeError(f"no module {name!r}")

    def gmzi(self, name: str) -> GmziRecord:
        for g in self.gmzis:
            if g.name == name:
                return g
        raise SchemeError(f"no GMZI {name!r}")

    @property
    def probabilistic(self) -> bool:
        return bool(self.entanglers)

    def wiring(self) -> dict[Port, tuple[Port, int]]:
        """Endpoint -> (other endpoint, fiber index)."""
        table: dict[Port, tuple[Port, int]] = {}
        for i, w in enumerate(self.hardwires):
            for x, y in ((w.a, w.b), (w.b, w.a)):
                if x in table:
                    raise SchemeError(f"endpoint {x} wired twice")
                table[x] = (y, i)
        return table

    # -- serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "modules": [
                {"name": m.name, "qubits": m.qubits, "port_qubit": [q + 1 for q in m.port_qubit]}
                for m in self.modules
            ],
            "gmzis": [
                {"name": g.name, "inputs": g.inputs, "outputs": g.outputs, "owner": g.owner}
                for g in self.gmzis
            ],
            "hardwires": [[w.a.to_dict(), w.b.to_dict()] for w in self.hardwires],
            "entanglers": [{"name": e.name} for e in self.entanglers],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "SwitchScheme":
        try:
            return cls(
                name=d["name"],
                kind=d["kind"],
                modules=tuple(
                    ModuleRecord(m["name"], int(m["qubits"]), tuple(int(q) - 1 for q in m["port_qubit"]))
                    for m in d["modules"]
                ),
                gmzis=tuple(GmziRecord(g["name"], int(g["inputs"]), int(g["outputs"]), g.get("owner")) for g in d["gmzis"]),
                hardwires=tuple(Hardwire(Port.from_dict(a), Port.from_dict(b)) for a, b in d["hardwires"]),
                entanglers=tuple(Entangler(e["name"]) for e in d.get("entanglers", [])),
                meta=d.get("meta", {}),
            )
        except (KeyError, TypeError) as exc:
            raise SchemeError(f"malformed scheme document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SwitchScheme":
        return cls.from_dict(json.loads(text))


# -- audit ------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def audit(scheme: SwitchScheme) -> AuditReport:
    problems = []
    try:
        table = scheme.wiring()
    except SchemeError as exc:
        return AuditReport((str(exc),))
    names = {m.name for m in scheme.modules} | {g.name for g in scheme.gmzis} | {e.name for e in scheme.entanglers}
    if len(names) != len(scheme.modules) + len(scheme.gmzis) + len(scheme.entanglers):
        problems.append("duplicate node names")
    mods = {m.name: m for m in scheme.modules}
    gm = {g.name: g for g in scheme.gmzis}
    ents = {e.name for e in scheme.entanglers}
    for p in table:
        if p.side == "module":
            if p.node not in mods or p.index >= mods[p.node].ports:
                problems.append(f"bad module port {p}")
        elif p.side in ("in", "out"):
            g = gm.get(p.node)
            limit = None if g is None else (g.inputs if p.side == "in" else g.outputs)
            if g is None or p.index >= limit:
                problems.append(f"bad GMZI port {p}")
        elif p.node not in ents or p.index > 1:
            problems.append(f"bad entangler port {p}")
    for e in scheme.entanglers:
        for i in (0, 1):
            if Port(e.name, "ent", i) not in table:
                problems.append(f"entangler {e.name} end {i + 1} unattached")
    unused = set(scheme.meta.get("unused_module_ports", []))
    for m in scheme.modules:
        for p in range(m.ports):
            if Port(m.name, "module", p) not in table and f"{m.name}.{p + 1}" not in unused:
                problems.append(f"module port {m.name}.{p + 1} unwired")
    return AuditReport(tuple(problems))


# -- photon paths -------------------------------------------------------------------


@dataclass(frozen=True)
class Hop:
    """One GMZI crossing: entered on ``side`` at ``enter``, left on the other side at ``leave``."""

    gmzi: str
    side: str
    enter: int
    leave: int

    def demand(self) -> tuple[int, int]:
        # Compiled maps are involutions, so the (input, output) pair is direction-free.
        return (self.enter, self.leave) if self.side == "in" else (self.leave, self.enter)

    def ports(self) -> tuple[Port, Port]:
        other = "out" if self.side == "in" else "in"
        return Port(self.gmzi, self.side, self.enter), Port(self.gmzi, other, self.leave)


@dataclass(frozen=True)
class PhotonPath:
    start: Port
    hops: tuple[Hop, ...]
    fibers: tuple[int, ...]
    end: Port

    @property
    def depth(self) -> int:
        return len(self.hops)


def photon_paths(scheme: SwitchScheme, start: Port, max_gmzis: int, table=None) -> list[PhotonPath]:
    """All simple photon paths from a module port to a terminal (module or entangler port)."""
    table = scheme.wiring() if table is None else table
    sizes = {g.name: (g.inputs, g.outputs) for g in scheme.gmzis}
    out: list[PhotonPath] = []
    if start not in table:
        return out

    def walk(here: Port, hops: tuple, fibers: tuple, seen: frozenset):
        nxt, wire = table[here]
        fibers = fibers + (wire,)
        if nxt.side in ("module", "ent"):
            out.append(PhotonPath(start, hops, fibers, nxt))
            return
        if len(hops) >= max_gmzis or nxt.node in seen:
            return
        other = "out" if nxt.side == "in" else "in"
        n_other = sizes[nxt.node][1 if other == "out" else 0]
        for j in range(n_other):
            p = Port(nxt.node, other, j)
            if p in table:
                walk(p, hops + (Hop(nxt.node, nxt.side, nxt.index, j),), fibers, seen | {nxt.node})

    walk(start, (), (), frozenset())
    return out


@dataclass(frozen=True)
class Connection:
    """Photon paths realizing one coupling; ``entangler`` is None for direct delivery."""

    paths: tuple[PhotonPath, ...]
    entangler: str | None = None

    @property
    def depth(self) -> int:
        return sum(p.depth for p in self.paths)

    def sort_key(self):
        return (self.depth, tuple((h.gmzi, h.side, h.enter, h.leave) for p in self.paths for h in p.hops), self.entangler or "")


def connections(
    scheme: SwitchScheme,
    a: str,
    qa: int,
    b: str,
    qb: int,
    max_gmzis: int = 4,
    prefer_entangler_at: str | None = None,
    table=None,
) -> list[Connection]:
    """Ways to couple qubit ``qa`` of ``a`` with qubit ``qb`` of ``b``, best first.

    Direct schemes deliver a's photon to a port of b's qubit. Probabilistic
    schemes bring one photon from each qubit to the two ends of one entangler;
    ``prefer_entangler_at`` puts connections using an entangler owned by that
    module first at equal depth.
    """
    table = scheme.wiring() if table is None else table
    ma, mb = scheme.module(a), scheme.module(b)
    paths_a = [p for s in ma.ports_of(qa) for p in photon_paths(scheme, Port(a, "module", s), max_gmzis, table)]
    if not scheme.probabilistic:
        found = [
            Connection((p,))
            for p in paths_a
            if p.end.side == "module" and p.end.node == b and mb.port_qubit[p.end.index] == qb
        ]
        return sorted(found, key=Connection.sort_key)
    paths_b = [p for s in mb.ports_of(qb) for p in photon_paths(scheme, Port(b, "module", s), max_gmzis, table)]
    by_end: dict[Port, list[PhotonPath]] = {}
    for p in paths_b:
        if p.end.side == "ent":
            by_end.setdefault(p.end, []).append(p)
    owners = scheme.meta.get("entangler_owner", {})
    found = []
    for p in paths_a:
        if p.end.side != "ent":
            continue
        other = Port(p.end.node, "ent", 1 - p.end.index)
        for q in by_end.get(other, ()):
            if p.depth + q.depth <= max_gmzis:
                found.append(Connection((p, q), p.end.node))

    def key(c: Connection):
        pref = 0 if prefer_entangler_at is None or owners.get(c.entangler) == prefer_entangler_at else 1
        return (c.depth, pref) + c.sort_key()[1:]

    return sorted(found, key=key)


# -- resource report ----------------------------------------------------------------


@dataclass(frozen=True)
class ResourceReport:
    gmzi_count: int
    gmzi_sizes: Counter
    active_depth: int | tuple[int, int]
    couplers: int | tuple[int, int]
    entangler_count: int

    def as_dict(self) -> dict:
        def fmt(v):
            return v if isinstance(v, int) else {"min": v[0], "max": v[1]}

        return {
            "gmzi_count": self.gmzi_count,
            "gmzi_sizes": [{"inputs": n, "outputs": m, "count": c} for (n, m), c in sorted(self.gmzi_sizes.items())],
            "active_depth": fmt(self.active_depth),
            "couplers": fmt(self.couplers),
            "entangler_count": self.entangler_count,
        }


def _span(values: Iterable[int]) -> int | tuple[int, int]:
    vals = list(values)
    lo, hi = min(vals), max(vals)
    return lo if lo == hi else (lo, hi)


def pair_depths(scheme: SwitchScheme, max_gmzis: int = 6) -> dict[tuple[str, str], int]:
    """Smallest active depth connecting each evaluated module pair (qubit 0 to qubit 0 unless listed)."""
    table = scheme.wiring()
    pairs = scheme.meta.get("report_pairs")
    if pairs is None:
        names = [m.name for m in scheme.modules]
        pairs = [(x, 0, y, 0) for i, x in enumerate(names) for y in names[i + 1:]]
    out = {}
    for a, qa, b, qb in pairs:
        found = connections(scheme, a, qa, b, qb, max_gmzis, table=table)
        if not found:
            raise SchemeError(f"modules {a} and {b} are not connected")
        out[(a, b)] = found[0].depth
    return out


def resource_report(scheme: SwitchScheme) -> ResourceReport:
    depths = pair_depths(scheme).values()
    sizes = Counter((g.inputs, g.outputs) for g in scheme.gmzis)
    return ResourceReport(
        gmzi_count=len(scheme.gmzis),
        gmzi_sizes=sizes,
        active_depth=_span(depths),
        couplers=_span(2 * d for d in depths),
        entangler_count=len(scheme.entanglers),
    )


# -- counting -----------------------------------------------------------------------


def count_permutations(n: int, m: int) -> int:
    """Injective routings of n inputs onto m outputs (falling factorial)."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return math.perm(m, min(n, m))


def count_perfect_matchings(n: int) -> int:
    """Pairings of n points: (n - 1)!! = n! / (2^(n/2) (n/2)!)."""
    if n < 2 or n % 2:
        raise ValueError(f"perfect matchings need an even count >= 2, got {n}")
    k = n // 2
    return math.factorial(n) // (2**k * math.factorial(k))


# -- builders ----------------------------------------------------------------------


def _allocation(names: Sequence[str], override: dict | None) -> dict[str, list[str]]:
    alloc = {x: [y for y in names if y != x] for x in names}
    if override:
        for x, order in override.items():
            if sorted(order) != sorted(alloc[x]):
                raise SchemeError(f"slot allocation for {x} must list every other module once")
            alloc[x] = list(order)
    return alloc


def _build_gmzi_direct(m: int, q: int, name: str) -> SwitchScheme:
    names = module_names(m)
    alloc = _allocation(names, None)
    modules = tuple(ModuleRecord(x, q, tuple(range(q))) for x in names)
    gmzis = tuple(GmziRecord(f"G{x}", q, q * (m - 1), x) for x in names)
    wires = [Hardwire(Port(x, "module", t), Port(f"G{x}", "in", t)) for x in names for t in range(q)]
    wires += _slot_wires(names, alloc, q)
    return SwitchScheme(name, "gmzi_direct", modules, gmzis, tuple(wires), (), {"slot_allocation": alloc, "qubits": q})


def _slot_wires(names, alloc, width: int) -> list[Hardwire]:
    wires = []
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            sx, sy = alloc[x].index(y), alloc[y].index(x)
            for t in range(width):
                wires.append(Hardwire(Port(f"G{x}", "out", sx * width + t), Port(f"G{y}", "out", sy * width + t)))
    return wires


def _build_spanke(m: int, q: int, probabilistic: bool, monolithic: bool, name: str) -> SwitchScheme:
    names = module_names(m)
    modules = tuple(ModuleRecord(x, q, tuple(range(q))) for x in names)
    gmzis, wires, ents = [], [], []
    owners = {}
    # Monolithic: one network over all m*q qubits. Split: one m-port network per qubit index.
    groups = [[(x, t) for x in names for t in range(q)]] if monolithic else [[(x, t) for x in names] for t in range(q)]
    for g, members in enumerate(groups):
        p = len(members)
        tag = "" if monolithic else f"_{g + 1}"
        for i, (x, t) in enumerate(members):
            gmzis.append(GmziRecord(f"F{i + 1}{tag}", 1, p, x))
            wires.append(Hardwire(Port(x, "module", t), Port(f"F{i + 1}{tag}", "in", 0)))
        for k in range(p):
            gmzis.append(GmziRecord(f"J{k + 1}{tag}", p, 1))
            for i in range(p):
                wires.append(Hardwire(Port(f"F{i + 1}{tag}", "out", k), Port(f"J{k + 1}{tag}", "in", i)))
        for k in range(0, p, 2):
            if probabilistic:
                e = f"E{k // 2 + 1}{tag}"
                ents.append(Entangler(e))
                wires.append(Hardwire(Port(f"J{k + 1}{tag}", "out", 0), Port(e, "ent", 0)))
                wires.append(Hardwire(Port(f"J{k + 2}{tag}", "out", 0), Port(e, "ent", 1)))
            else:
                wires.append(Hardwire(Port(f"J{k + 1}{tag}", "out", 0), Port(f"J{k + 2}{tag}", "out", 0)))
    kind = "spanke_probabilistic" if probabilistic else "spanke_direct"
    meta = {"monolithic": monolithic, "qubits": q, "entangler_owner": owners}
    return SwitchScheme(name, kind, modules, tuple(gmzis), tuple(wires), tuple(ents), meta)


def _build_equalized(m: int, q: int, name: str, allocation: dict | None = None, entangler_side: dict | None = None) -> SwitchScheme:
    names = module_names(m)
    alloc = _allocation(names, allocation)
    modules = tuple(ModuleRecord(x, q, tuple(range(q)) * 2) for x in names)
    gmzis = tuple(GmziRecord(f"G{x}", 2 * q, q * (m - 1), x) for x in names)
    wires, ents, owners = [], [], {}
    for x in names:
        for t in range(q):
            e = f"E{x}{t + 1}"
            ents.append(Entangler(e))
            owners[e] = x
            wires.append(Hardwire(Port(x, "module", t), Port(f"G{x}", "in", t)))
            wires.append(Hardwire(Port(x, "module", q + t), Port(e, "ent", 0)))
            wires.append(Hardwire(Port(e, "ent", 1), Port(f"G{x}", "in", q + t)))
    wires += _slot_wires(names, alloc, q)
    meta = {"slot_allocation": alloc, "qubits": q, "entangler_owner": owners}
    if entangler_side:
        meta["entangler_side"] = entangler_side
    return SwitchScheme(name, "gmzi_equalized", modules, gmzis, tuple(wires), tuple(ents), meta)


def _build_mixed(m: int, name: str) -> SwitchScheme:
    g: MixedGraph = build_mixed_graph(m)
    names = [f"V{v + 1}" for v in range(m)]
    modules = tuple(ModuleRecord(x, 1, (0,)) for x in names)
    gmzis = []
    wires, ents, owners = [], [], {}
    for v in range(m):
        ins, outs = g.gmzi_ports(v)
        gmzis.append(GmziRecord(f"G{names[v]}", ins, outs, names[v]))
        wires.append(Hardwire(Port(names[v], "module", 0), Port(f"G{names[v]}", "in", 0)))
    for u in range(m):
        for j, w in enumerate(g.out_neighbours(u)):
            i = g.in_neighbours(w).index(u)
            wires.append(Hardwire(Port(f"G{names[u]}", "out", j), Port(f"G{names[w]}", "in", 1 + i)))
    for a, b in sorted(g.undirected):
        e = f"E{a + 1}_{b + 1}"
        ents.append(Entangler(e))
        for end, v in enumerate((a, b)):
            wires.append(Hardwire(Port(f"G{names[v]}", "out", len(g.out_neighbours(v))), Port(e, "ent", end)))
    meta = {"graph": g.to_adjacency(), "entangler_owner": owners}
    return SwitchScheme(name, "gmzi_mixed_graph", modules, tuple(gmzis), tuple(wires), tuple(ents), meta)


def _build_merge(m: int, name: str) -> SwitchScheme:
    """8-input GMZIs: inputs 1-2 X-check qubits, 3-4 data, 5-6 Z-check qubits (6 redundant), 7-8 free."""
    names = module_names(m)
    if 2 * (m - 1) > 8:
        raise SchemeError("merge layout supports at most 5 modules (four 2-fiber slots)")
    alloc = _allocation(names, None)
    modules = tuple(ModuleRecord(x, 6, tuple(range(6))) for x in names)
    gmzis = tuple(GmziRecord(f"G{x}", 8, 8, x) for x in names)
    wires = [Hardwire(Port(x, "module", p), Port(f"G{x}", "in", p)) for x in names for p in range(6)]
    wires += _slot_wires(names, alloc, 2)
    meta = {
        "slot_allocation": alloc,
        "port_roles": {"x_check": [1, 2], "data": [3, 4], "z_check": [5, 6], "free": [7, 8]},
        "redundant_inputs": [6],
        "report_pairs": [[x, 0, y, 2] for i, x in enumerate(names) for y in names[i + 1:]],
    }
    return SwitchScheme(name, "gmzi_merge", modules, gmzis, tuple(wires), (), meta)


def rotated_surface_code_913() -> dict[str, tuple[int, ...]]:
    """Checks of the distance-3 rotated surface code on a 3x3 data grid (0-based data indices)."""
    return {
        "X1": (0, 1, 3, 4),
        "X2": (4, 5, 7, 8),
        "X3": (1, 2),
        "X4": (6, 7),
        "Z1": (1, 2, 4, 5),
        "Z2": (3, 4, 6, 7),
        "Z3": (0, 3),
        "Z4": (5, 8),
    }


def _build_stabilizer(tanner: dict[str, Sequence[int]], name: str) -> SwitchScheme:
    data = sorted({d for qs in tanner.values() for d in qs})
    checks = list(tanner)
    modules = tuple(ModuleRecord(f"D{d + 1}", 1, (0,)) for d in data) + tuple(ModuleRecord(c, 1, (0,)) for c in checks)
    incident = {d: [c for c in checks if d in tanner[c]] for d in data}
    gmzis = tuple(GmziRecord(f"GD{d + 1}", 1, len(incident[d])) for d in data) + tuple(
        GmziRecord(f"G{c}", len(tanner[c]), 1) for c in checks
    )
    wires = [Hardwire(Port(f"D{d + 1}", "module", 0), Port(f"GD{d + 1}", "in", 0)) for d in data]
    wires += [Hardwire(Port(c, "module", 0), Port(f"G{c}", "out", 0)) for c in checks]
    for d in data:
        for j, c in enumerate(incident[d]):
            i = list(tanner[c]).index(d)
            wires.append(Hardwire(Port(f"GD{d + 1}", "out", j), Port(f"G{c}", "in", i)))
    meta = {
        "tanner": {c: [d + 1 for d in qs] for c, qs in tanner.items()},
        "report_pairs": [[f"D{d + 1}", 0, c, 0] for c in checks for d in tanner[c]],
    }
    return SwitchScheme(name, "stabilizer_readout", modules, gmzis, tuple(wires), (), meta)


def _build_msd(n: int, k: int, name: str) -> SwitchScheme:
    modules = (ModuleRecord("F", n, tuple(range(n))),) + tuple(ModuleRecord(f"T{b + 1}", n, tuple(range(n))) for b in range(k))
    gmzis = (GmziRecord("M", n, k * n, "F"),)
    wires = [Hardwire(Port("F", "module", i), Port("M", "in", i)) for i in range(n)]
    wires += [Hardwire(Port("M", "out", b * n + i), Port(f"T{b + 1}", "module", i)) for b in range(k) for i in range(n)]
    meta = {"report_pairs": [["F", 0, f"T{b + 1}", 0] for b in range(k)], "factory_outputs": n, "destinations": k}
    return SwitchScheme(name, "msd_distribution", modules, gmzis, tuple(wires), (), meta)


def build_scheme(
    kind: str,
    module_count: int = 4,
    qubits_per_module: int = 1,
    entanglement: str | None = None,
    monolithic: bool = True,
    name: str | None = None,
    tanner: dict | None = None,
    destinations: int = 1,
) -> SwitchScheme:
    """Build a fully wired scheme of the given kind.

    ``entanglement`` may only select between the Spanke variants; the GMZI
    kinds fix it (direct / equalized are direct and probabilistic).
    """
    if kind not in KINDS:
        raise SchemeError(f"unknown scheme kind {kind!r}; choose from {', '.join(KINDS)}")
    m, q = int(module_count), int(qubits_per_module)
    if q < 1 or (m < 2 and kind not in ("stabilizer_readout", "msd_distribution")):
        raise SchemeError("need at least 2 modules and 1 qubit per module")
    name = name or f"{kind}-{m}x{q}"
    if kind in ("spanke_direct", "spanke_probabilistic"):
        prob = kind == "spanke_probabilistic" if entanglement is None else entanglement == "probabilistic"
        if (m * q) % 2:
            raise SchemeError("Spanke output pairing needs an even number of qubits per network")
        return _build_spanke(m, q, prob, monolithic, name)
    if kind == "gmzi_direct":
        return _build_gmzi_direct(m, q, name)
    if kind == "gmzi_equalized":
        return _build_equalized(m, q, name)
    if kind == "gmzi_mixed_graph":
        if m < 4 or m % 2:
            raise SchemeError("mixed-graph scheme needs an even module count >= 4")
        return _build_mixed(m, name)
    if kind == "gmzi_merge":
        return _build_merge(m, name)
    if kind == "stabilizer_readout":
        return _build_stabilizer(tanner or rotated_surface_code_913(), name)
    if kind == "msd_distribution":
        if destinations < 1:
            raise SchemeError("need at least one destination block")
        return _build_msd(q, int(destinations), name)
    raise AssertionError(kind)


# -- presets -----------------------------------------------------------------------

# Output-slot order per module and the entangler side per pair for the
# 5-module equalized fabric; together they reproduce the reference transversal
# CNOT phase table (slot masks searched exhaustively, see scripts/).
EQUALIZED_5_ALLOCATION = {
    "A": ["B", "C", "D", "E"],
    "B": ["A", "C", "D", "E"],
    "C": ["A", "B", "D", "E"],
    "D": ["A", "B", "C", "E"],
    "E": ["A", "B", "D", "C"],
}
EQUALIZED_5_ENTANGLER_SIDE = {
    "A-B": "B", "A-C": "C", "A-D": "D", "A-E": "E",
    "B-C": "C", "B-D": "D", "B-E": "E",
    "C-D": "D", "C-E": "C",
    "D-E": "E",
}


def preset(name: str) -> SwitchScheme:
    if name == "direct-4":
        return build_scheme("gmzi_direct", 4, 4, name=name)
    if name == "spanke-4":
        return build_scheme("spanke_direct", 4, 4, monolithic=True, name=name)
    if name == "spanke-4-split":
        return build_scheme("spanke_direct", 4, 4, monolithic=False, name=name)
    if name == "equalized-5":
        return _build_equalized(5, 4, name, EQUALIZED_5_ALLOCATION, EQUALIZED_5_ENTANGLER_SIDE)
    if name == "merge-5":
        return build_scheme("gmzi_merge", 5, name=name)
    if name == "mixed-8":
        return build_scheme("gmzi_mixed_graph", 8, name=name)
    if name == "stabilizer-913":
        return build_scheme("stabilizer_readout", name=name)
    if name == "msd-4x4":
        return build_scheme("msd_distribution", 1, 4, destinations=4, name=name)
    raise SchemeError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


PRESETS = ("direct-4", "spanke-4", "spanke-4-split", "equalized-5", "merge-5", "mixed-8", "stabilizer-913", "msd-4x4")
