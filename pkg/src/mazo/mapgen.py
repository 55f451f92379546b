"""Seeded branching map generation and structural validation.

A map is a layered DAG per sector: `layers_per_sector` layers of 2 to
`map_width` rooms, every edge going one layer forward, a single Boss node
closing the sector, and the boss feeding the next sector's entry layer.
Edges follow nearest-position intervals, which guarantees full forward and
backward reachability by construction; the RNG only decides layer widths
and room kinds, so every generated graph is valid for every seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .rng import RngStream, StreamLabel, derive_stream


class RoomKind(Enum):
    COMBAT = "Combat"
    ELITE = "Elite"
    BOSS = "Boss"
    SHOP = "Shop"
    EVENT = "Event"
    REST = "Rest"
    TREASURE = "Treasure"


@dataclass(frozen=True)
class MapNode:
    id: str
    sector: int
    layer: int
    kind: RoomKind


@dataclass
class MapGraph:
    nodes: list[MapNode]
    edges: list[tuple[str, str]]
    sector_count: int
    layers_per_sector: int

    _by_id: dict = field(init=False, repr=False, compare=False)
    _successors: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._by_id = {n.id: n for n in self.nodes}
        self._successors = {n.id: [] for n in self.nodes}
        for src, dst in self.edges:
            self._successors[src].append(dst)

    def node(self, node_id: str) -> MapNode:
        return self._by_id[node_id]

    def successors(self, node_id: str) -> list[str]:
        return list(self._successors[node_id])

    def entries(self, sector: int) -> list[str]:
        return [n.id for n in self.nodes if n.sector == sector and n.layer == 0]

    def boss_id(self, sector: int) -> str:
        for n in self.nodes:
            if n.sector == sector and n.kind is RoomKind.BOSS:
                return n.id
        raise KeyError(f"sector {sector} has no boss")


def _node_id(sector: int, layer: int, pos: int) -> str:
    # zero-padded so lexicographic order equals generation order
    return f"s{sector:02d}l{layer:02d}n{pos:02d}"


def _interval_edges(a: int, b: int) -> list[tuple[int, int]]:
    """Non-crossing edges from a layer of `a` nodes to one of `b` nodes.

    Node i maps to positions floor(i*b/a) .. ceil((i+1)*b/a)-1.  Adjacent
    intervals overlap or touch, so both sides are fully covered.
    """
    out = []
    for i in range(a):
        start = (i * b) // a
        end = ((i + 1) * b + a - 1) // a - 1
        for j in range(start, max(start, end) + 1):
            out.append((i, j))
    return out


def _room_pool(stream: RngStream, size: int) -> list[RoomKind]:
    """Quota-first kind pool for one sector's assignable rooms.

    Hard quotas come first (1 Rest, 1 Shop), then 1-2 Elites and 0-1
    Treasures; whatever remains splits Combat:Event at 3:1.  Tiny sectors
    truncate the quota list rather than overflow.
    """
    quotas = [RoomKind.REST, RoomKind.SHOP]
    quotas += [RoomKind.ELITE] * (1 + stream.next_below(2))
    quotas += [RoomKind.TREASURE] * stream.next_below(2)
    pool = quotas[:size]
    while len(pool) < size:
        pool.append(RoomKind.COMBAT if stream.next_below(4) < 3 else RoomKind.EVENT)
    return stream.shuffle(pool)


def generate_map_with_stream(stream: RngStream, config) -> MapGraph:
    """Generation core; advances `stream` in place (the run keeps it)."""
    nodes: list[MapNode] = []
    edges: list[tuple[str, str]] = []
    previous_boss: str | None = None

    for sector in range(config.sector_count):
        sizes = [2 + stream.next_below(config.map_width - 1) for _ in range(config.layers_per_sector)]

        forced = sizes[0] if sector == 0 else 0
        assignable = sum(sizes) - forced
        pool = _room_pool(stream, assignable)

        pool_at = 0
        for layer, size in enumerate(sizes):
            for pos in range(size):
                if sector == 0 and layer == 0:
                    kind = RoomKind.COMBAT
                else:
                    kind = pool[pool_at]
                    pool_at += 1
                nodes.append(MapNode(_node_id(sector, layer, pos), sector, layer, kind))

        boss = _node_id(sector, config.layers_per_sector, 0)
        nodes.append(MapNode(boss, sector, config.layers_per_sector, RoomKind.BOSS))

        for layer in range(config.layers_per_sector - 1):
            for i, j in _interval_edges(sizes[layer], sizes[layer + 1]):
                edges.append((_node_id(sector, layer, i), _node_id(sector, layer + 1, j)))
        for i in range(sizes[-1]):
            edges.append((_node_id(sector, config.layers_per_sector - 1, i), boss))
        if previous_boss is not None:
            for pos in range(sizes[0]):
                edges.append((previous_boss, _node_id(sector, 0, pos)))
        previous_boss = boss

    return MapGraph(
        nodes=nodes,
        edges=edges,
        sector_count=config.sector_count,
        layers_per_sector=config.layers_per_sector,
    )


def generate_map(seed: int, config) -> MapGraph:
    return generate_map_with_stream(derive_stream(seed, StreamLabel.MAP_GEN), config)


def validate_map(graph: MapGraph, config) -> list[str]:
    """Structural oracle; checks use only the node and edge lists."""
    out: list[str] = []
    by_id = {n.id: n for n in graph.nodes}

    for sector in range(config.sector_count):
        sector_nodes = [n for n in graph.nodes if n.sector == sector]
        bosses = [n for n in sector_nodes if n.kind is RoomKind.BOSS]
        if len(bosses) != 1:
            out.append(f"sector {sector}: expected exactly 1 boss, found {len(bosses)}")
            continue
        boss = bosses[0]
        if boss.layer != config.layers_per_sector:
            out.append(f"sector {sector}: boss not on the terminal layer")

        for layer in range(config.layers_per_sector):
            width = sum(1 for n in sector_nodes if n.layer == layer)
            if not 2 <= width <= config.map_width:
                out.append(f"sector {sector} layer {layer}: width {width} outside [2, {config.map_width}]")

        counts: dict[RoomKind, int] = {kind: 0 for kind in RoomKind}
        for n in sector_nodes:
            counts[n.kind] += 1
        assignable = len(sector_nodes) - 1
        if sector == 0:
            assignable -= sum(1 for n in sector_nodes if n.layer == 0)
            for n in sector_nodes:
                if n.layer == 0 and n.kind is not RoomKind.COMBAT:
                    out.append(f"{n.id}: first layer of the first sector must be Combat")
        if counts[RoomKind.REST] < 1 and assignable >= 1:
            out.append(f"sector {sector}: no Rest room")
        if counts[RoomKind.SHOP] < 1 and assignable >= 2:
            out.append(f"sector {sector}: no Shop room")
        if not 1 <= counts[RoomKind.ELITE] <= 2 and assignable >= 3:
            out.append(f"sector {sector}: elite count {counts[RoomKind.ELITE]} outside [1, 2]")
        if counts[RoomKind.TREASURE] > 1:
            out.append(f"sector {sector}: more than one Treasure room")

        # forward reachability from entries, backward from the boss,
        # restricted to this sector's nodes
        ids = {n.id for n in sector_nodes}
        succ: dict[str, list[str]] = {i: [] for i in ids}
        pred: dict[str, list[str]] = {i: [] for i in ids}
        for src, dst in graph.edges:
            if src in ids and dst in ids:
                succ[src].append(dst)
                pred[dst].append(src)
        entries = [n.id for n in sector_nodes if n.layer == 0]
        seen = _closure(entries, succ)
        if seen != ids:
            out.append(f"sector {sector}: {len(ids - seen)} nodes unreachable from entries")
        back = _closure([boss.id], pred)
        if back != ids:
            out.append(f"sector {sector}: {len(ids - back)} nodes cannot reach the boss")

    for src, dst in graph.edges:
        a, b = by_id.get(src), by_id.get(dst)
        if a is None or b is None:
            out.append(f"edge ({src}, {dst}): unknown endpoint")
            continue
        if a.sector == b.sector:
            if b.layer != a.layer + 1:
                out.append(f"edge ({src}, {dst}): not layer-monotone")
        else:
            if not (a.kind is RoomKind.BOSS and b.sector == a.sector + 1 and b.layer == 0):
                out.append(f"edge ({src}, {dst}): illegal cross-sector edge")

    return out


def _closure(start: list[str], adjacency: dict[str, list[str]]) -> set[str]:
    seen = set(start)
    frontier = list(start)
    while frontier:
        for nxt in adjacency[frontier.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen
