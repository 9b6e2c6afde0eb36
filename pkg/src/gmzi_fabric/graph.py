"""Mixed-graph topology for the ring-style probabilistic entanglement scheme.

Vertices are modules (each with its own GMZI). An undirected edge is an
entangler linking two modules' GMZI outputs; a directed edge ``u -> v`` is a
fiber from an output of ``u``'s GMZI to an input of ``v``'s GMZI.

Vertices are 0-based here; the exported adjacency document is 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .phases import is_power_of_two


@dataclass(frozen=True)
class MixedGraph:
    n: int
    undirected: frozenset[tuple[int, int]]
    directed: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n: int, undirected, directed) -> "MixedGraph":
        und = frozenset(tuple(sorted((int(a), int(b)))) for a, b in undirected)
        return cls(int(n), und, frozenset((int(a), int(b)) for a, b in directed))

    def partner(self, v: int) -> int | None:
        for a, b in self.undirected:
            if v == a:
                return b
            if v == b:
                return a
        return None

    def out_neighbours(self, v: int) -> list[int]:
        return sorted(b for a, b in self.directed if a == v)

    def in_neighbours(self, v: int) -> list[int]:
        return sorted(a for a, b in self.directed if b == v)

    def without_directed(self, edge: tuple[int, int]) -> "MixedGraph":
        return MixedGraph(self.n, self.undirected, self.directed - {edge})

    def without_undirected(self, edge: tuple[int, int]) -> "MixedGraph":
        return MixedGraph(self.n, self.undirected - {tuple(sorted(edge))}, self.directed)

    def gmzi_ports(self, v: int) -> tuple[int, int]:
        """(inputs, outputs) of the GMZI at ``v``: own photon plus incoming fibers; outgoing fibers plus entangler."""
        ins = 1 + len(self.in_neighbours(v))
        outs = len(self.out_neighbours(v)) + (1 if self.partner(v) is not None else 0)
        return ins, outs

    def gmzi_size(self, v: int) -> tuple[int, int]:
        ins, outs = self.gmzi_ports(v)
        return _pow2_ceil(ins), _pow2_ceil(outs)

    # -- export ---------------------------------------------------------------

    def to_adjacency(self) -> dict:
        adjacency = {}
        for v in range(self.n):
            entries = []
            p = self.partner(v)
            if p is not None:
                entries.append({"to": p + 1, "kind": "undirected"})
            entries.extend({"to": w + 1, "kind": "directed"} for w in self.out_neighbours(v))
            adjacency[str(v + 1)] = entries
        return {"n": self.n, "adjacency": adjacency}

    def to_json(self) -> str:
        return json.dumps(self.to_adjacency(), indent=2)

    @classmethod
    def from_adjacency(cls, doc: dict) -> "MixedGraph":
        n = int(doc["n"])
        und, dirs = set(), set()
        for key, entries in doc["adjacency"].items():
            v = int(key) - 1
            for e in entries:
                w = int(e["to"]) - 1
                if e["kind"] == "undirected":
                    und.add(tuple(sorted((v, w))))
                elif e["kind"] == "directed":
                    dirs.add((v, w))
                else:
                    raise ValueError(f"unknown edge kind {e['kind']!r}")
        return cls.from_edges(n, und, dirs)


def _pow2_ceil(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def build_mixed_graph(n: int) -> MixedGraph:
    """Grow the graph two vertices at a time from the 4-vertex seed.

    A new pair ``(x, y)`` is joined to every old pair ``(u, w)``, ``u < w``,
    by ``x -> u``, ``w -> x``, ``u -> y`` and ``y -> w``: ``x`` sends to the
    lower old vertex and receives from the higher one, ``y`` the reverse, so
    in- and out-degrees stay equal.
    """
    if not isinstance(n, int) or n < 4 or n % 2:
        raise ValueError(f"mixed graph needs an even vertex count >= 4, got {n!r}")
    undirected = {(0, 1)}
    directed = set()
    for x in range(2, n, 2):
        y = x + 1
        undirected.add((x, y))
        for u in range(0, x, 2):
            w = u + 1
            directed |= {(x, u), (w, x), (u, y), (y, w)}
    return MixedGraph.from_edges(n, undirected, directed)


@dataclass(frozen=True)
class ValidationReport:
    degree_failures: tuple[int, ...] = ()
    matching_failures: tuple[int, ...] = ()
    cycle_failures: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.degree_failures or self.matching_failures or self.cycle_failures)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "degree_failures": [v + 1 for v in self.degree_failures],
            "matching_failures": [v + 1 for v in self.matching_failures],
            "cycle_failures": [v + 1 for v in self.cycle_failures],
        }


def validate(graph: MixedGraph) -> ValidationReport:
    n = graph.n
    out_deg = [0] * n
    in_deg = [0] * n
    for a, b in graph.directed:
        out_deg[a] += 1
        in_deg[b] += 1
    degree = tuple(v for v in range(n) if out_deg[v] != in_deg[v])

    cover = [0] * n
    for a, b in graph.undirected:
        cover[a] += 1
        cover[b] += 1
    matching = tuple(v for v in range(n) if cover[v] != 1)

    def on_cycle(v: int) -> bool:
        for a, b in graph.undirected:
            # The cycle must use one entangler edge, traversed either way.
            for p, q in ((a, b), (b, a)):
                if v == p:
                    if any((q, r) in graph.directed and (r, p) in graph.directed for r in range(n)):
                        return True
                elif v != q and (v, p) in graph.directed and (q, v) in graph.directed:
                    return True
        return False

    cycles = tuple(v for v in range(n) if not on_cycle(v))
    return ValidationReport(degree, matching, cycles)


# -- routing -----------------------------------------------------------------


class NoRoute(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class RoutePlan:
    """Photon of ``a`` follows ``path_a`` (GMZIs traversed), photon of ``b`` follows ``path_b``.

    The last vertices of the two paths are the two ends of ``entangler``.
    """

    traversals: int
    path_a: tuple[int, ...]
    path_b: tuple[int, ...]
    entangler: tuple[int, int] = field(compare=False)

    def fibers(self) -> set[tuple[int, int]]:
        out = set()
        for path in (self.path_a, self.path_b):
            out |= set(zip(path, path[1:]))
        return out

    def as_dict(self) -> dict:
        return {
            "entangler": [v + 1 for v in self.entangler],
            "path_a": [v + 1 for v in self.path_a],
            "path_b": [v + 1 for v in self.path_b],
            "traversals": self.traversals,
        }


def _paths_by_end(graph: MixedGraph, start: int, max_len: int) -> dict[int, list[tuple[int, ...]]]:
    out: dict[int, list[tuple[int, ...]]] = {}
    stack = [(start,)]
    while stack:
        path = stack.pop()
        out.setdefault(path[-1], []).append(path)
        if len(path) < max_len:
            for w in graph.out_neighbours(path[-1]):
                if w not in path:
                    stack.append(path + (w,))
    return out


def candidate_routes(graph: MixedGraph, a: int, b: int, max_traversals: int = 3) -> list[RoutePlan]:
    """Every route with at most ``max_traversals`` GMZIs in total, sorted by the tie-break."""
    if a == b:
        raise ValueError("route endpoints must differ")
    for v in (a, b):
        if not 0 <= v < graph.n:
            raise ValueError(f"vertex {v + 1} out of range")
    ends_a = _paths_by_end(graph, a, max_traversals - 1)
    ends_b = _paths_by_end(graph, b, max_traversals - 1)
    plans = []
    for p, q in graph.undirected:
        for x, y in ((p, q), (q, p)):
            for pa in ends_a.get(x, ()):
                for pb in ends_b.get(y, ()):
                    total = len(pa) + len(pb)
                    if total <= max_traversals:
                        plans.append(RoutePlan(total, pa, pb, (p, q)))
    return sorted(plans)


def route_pair(graph: MixedGraph, a: int, b: int) -> RoutePlan:
    plans = candidate_routes(graph, a, b)
    if not plans:
        raise NoRoute(f"no route between {a + 1} and {b + 1} within 3 GMZI traversals")
    return plans[0]


def perfect_matchings(vertices) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect matchings, each as pairs (low, high) listed by low vertex."""
    vs = list(vertices)
    if not vs:
        yield ()
        return
    first, rest = vs[0], vs[1:]
    for i, other in enumerate(rest):
        for tail in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield ((first, other),) + tail


def schedule_matching(graph: MixedGraph, matching, max_traversals: int = 3) -> list[RoutePlan] | None:
    """Routes for all pairs at once with no shared entangler or fiber, or None.

    Each route may use at most ``max_traversals`` GMZIs.
    """
    options = [candidate_routes(graph, a, b, max_traversals) for a, b in matching]
    order = sorted(range(len(options)), key=lambda i: len(options[i]))
    chosen: dict[int, RoutePlan] = {}

    def search(k: int, ents: frozenset, fibers: frozenset) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for plan in options[i]:
            if plan.entangler in ents:
                continue
            f = plan.fibers()
            if f & fibers:
                continue
            chosen[i] = plan
            if search(k + 1, ents | {plan.entangler}, fibers | f):
                return True
        return False

    if not search(0, frozenset(), frozenset()):
        return None
    return [chosen[i] for i in range(len(options))]


def shallowest_schedule(graph: MixedGraph, matching, limit: int = 6) -> tuple[int, list[RoutePlan]] | None:
    """Smallest per-route GMZI cap (from 2 up to ``limit``) admitting a conflict-free schedule."""
    for cap in range(2, limit + 1):
        routes = schedule_matching(graph, matching, cap)
        if routes is not None:
            return cap, routes
    return None


@dataclass(frozen=True)
class MatchingSweep:
    """Per-route depth needed to schedule every perfect matching simultaneously.

    ``depth_histogram`` maps the smallest per-route GMZI cap to the number of
    matchings needing it; ``unschedulable`` lists matchings with no schedule
    within ``limit``.
    """

    n: int
    matchings: int
    limit: int
    depth_histogram: dict[int, int]
    unschedulable: tuple[tuple[tuple[int, int], ...], ...]
    deep_examples: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def ok(self) -> bool:
        return not self.unschedulable

    @property
    def within_three(self) -> int:
        return sum(c for d, c in self.depth_histogram.items() if d <= 3)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "matchings": self.matchings,
            "limit": self.limit,
            "depth_histogram": {str(k): v for k, v in sorted(self.depth_histogram.items())},
            "within_three": self.within_three,
            "unschedulable": len(self.unschedulable),
            "deep_examples": [[[a + 1, b + 1] for a, b in m] for m in self.deep_examples],
        }


def sweep_matchings(graph: MixedGraph, limit: int = 6, examples: int = 3) -> MatchingSweep:
    hist: dict[int, int] = {}
    bad = []
    deep = []
    count = 0
    for m in perfect_matchings(range(graph.n)):
        count += 1
        found = shallowest_schedule(graph, m, limit)
        if found is None:
            bad.append(m)
            continue
        hist[found[0]] = hist.get(found[0], 0) + 1
        if found[0] > 3 and len(deep) < examples:
            deep.append(m)
    return MatchingSweep(graph.n, count, limit, hist, tuple(bad), tuple(deep))


def mixed_graph_gmzi_sizes(graph: MixedGraph) -> list[tuple[int, int]]:
    sizes = [graph.gmzi_size(v) for v in range(graph.n)]
    assert all(is_power_of_two(a) and is_power_of_two(b) for a, b in sizes)
    return sizes
