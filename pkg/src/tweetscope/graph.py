"""Engagement graph and information cascades.

A cascade is one weakly connected component of the retweet/reply graph,
rooted at the source post (the unique node with no outgoing edge). Category
labels come from the ROOT tweet's urls only; responses never contribute.

Cascades are kept in a CSR-style CascadeSet (rows grouped by component)
rather than one object per cascade: corpora in the tens of millions produce
nearly as many components, and per-object storage would dwarf the data.
CascadeSet still acts as a sequence of Cascade views for callers that want
objects.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .catalog import CATEGORIES, SourceCatalog
from .errors import EmptyTrace
from .geo import GeoIndex, METHOD_NONE
from .store import CorpusStore

_CATEGORY_BIT = {name: 1 << i for i, name in enumerate(CATEGORIES)}


def categories_to_bits(categories: Iterable[str]) -> int:
    bits = 0
    for name in categories:
        bits |= _CATEGORY_BIT[name]
    return bits


def bits_to_categories(bits: int) -> frozenset[str]:
    return frozenset(name for name, bit in _CATEGORY_BIT.items() if bits & bit)


class DisjointSet:
    """Union-find over 0..n-1 with union by rank and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def components(self) -> dict[int, list[int]]:
        """Representative -> member list; members appear in index order."""
        comps: dict[int, list[int]] = {}
        find = self.find
        for i in range(len(self.parent)):
            comps.setdefault(find(i), []).append(i)
        return comps


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Weakly connected components of an edge list over nodes 0..n-1,
    ordered by smallest member."""
    ds = DisjointSet(n)
    for a, b in edges:
        ds.union(a, b)
    return sorted(ds.components().values(), key=lambda members: members[0])


@dataclass
class EngagementGraph:
    n_nodes: int
    child_rows: np.ndarray       # int64, one per kept edge
    parent_rows: np.ndarray      # int64, aligned
    kinds: np.ndarray            # uint8 store pkind codes, aligned
    dangling_count: int = 0      # parent referenced but absent from store
    self_edge_count: int = 0
    time_inverted_count: int = 0  # child timestamp before parent (kept)

    @property
    def edge_count(self) -> int:
        return len(self.child_rows)

    def stats(self) -> dict:
        return {
            "node_count": self.n_nodes,
            "edge_count": self.edge_count,
            "dangling_count": self.dangling_count,
            "self_edge_count": self.self_edge_count,
            "time_inverted_count": self.time_inverted_count,
        }


def build_engagement_graph(store: CorpusStore) -> EngagementGraph:
    """One node per stored tweet; one edge per tweet whose parent id exists
    in the store. Dangling references are dropped and counted."""
    n = len(store)
    parent_ids = store.column("parent")
    pkind = store.column("pkind")
    ts = store.column("ts")
    row_of = store.row_of()

    child_rows: list[int] = []
    parent_rows: list[int] = []
    kinds: list[int] = []
    dangling = 0
    self_edges = 0
    inverted = 0
    for child in np.nonzero(parent_ids != -1)[0].tolist():
        parent_row = row_of.get(int(parent_ids[child]))
        if parent_row is None:
            dangling += 1
            continue
        if parent_row == child:
            self_edges += 1
            continue
        child_rows.append(child)
        parent_rows.append(parent_row)
        kinds.append(int(pkind[child]))
        if ts[child] < ts[parent_row]:
            inverted += 1

    return EngagementGraph(
        n_nodes=n,
        child_rows=np.asarray(child_rows, dtype=np.int64),
        parent_rows=np.asarray(parent_rows, dtype=np.int64),
        kinds=np.asarray(kinds, dtype=np.uint8),
        dangling_count=dangling,
        self_edge_count=self_edges,
        time_inverted_count=inverted,
    )


@dataclass
class Cascade:
    """Materialized view of one cascade (see CascadeSet for bulk storage)."""

    root_row: int
    root_id: int
    member_rows: list[int]               # storage rows, root first
    member_parents: list[int]            # parent row per member, -1 for root
    depth: int
    categories: frozenset[str] = frozenset()
    matched_domains: tuple[str, ...] = ()
    source_urls: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.member_rows)

    @property
    def n_responses(self) -> int:
        return len(self.member_rows) - 1

    @property
    def is_misinfo(self) -> bool:
        return bool(self.categories)


class CascadeSet:
    """All cascades of one corpus, stored column-wise.

    Rows are grouped per cascade (CSR offsets); the chosen root leads each
    group. tree_parent holds the per-row parent after root selection and
    cycle breaking, so member edge count is always size - 1.
    """

    def __init__(self, store: CorpusStore, member_rows: np.ndarray,
                 offsets: np.ndarray, root_rows: np.ndarray,
                 depths: np.ndarray, tree_parent: np.ndarray):
        self.store = store
        self.member_rows = member_rows
        self.offsets = offsets
        self.root_rows = root_rows
        self.depths = depths
        self.tree_parent = tree_parent
        n = len(root_rows)
        self.category_bits = np.zeros(n, dtype=np.uint8)
        self.matched_domains: dict[int, tuple[str, ...]] = {}

    def __len__(self) -> int:
        return len(self.root_rows)

    def __iter__(self) -> Iterator[Cascade]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> Cascade:
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        rows = self.members(i).tolist()
        root = int(self.root_rows[i])
        ids = self.store.column("ids")
        cascade = Cascade(
            root_row=root,
            root_id=int(ids[root]),
            member_rows=rows,
            member_parents=[int(self.tree_parent[r]) for r in rows],
            depth=int(self.depths[i]),
            categories=bits_to_categories(int(self.category_bits[i])),
            matched_domains=self.matched_domains.get(i, ()),
            source_urls=tuple(self.store.urls_of(root)),
        )
        return cascade

    def members(self, i: int) -> np.ndarray:
        return self.member_rows[self.offsets[i]:self.offsets[i + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def categories_of(self, i: int) -> frozenset[str]:
        return bits_to_categories(int(self.category_bits[i]))

    def save(self, dir_path: str) -> None:
        os.makedirs(dir_path, exist_ok=True)
        for name in ("member_rows", "offsets", "root_rows", "depths",
                     "tree_parent", "category_bits"):
            np.save(os.path.join(dir_path, f"{name}.npy"), getattr(self, name))
        with open(os.path.join(dir_path, "matched_domains.json"), "wt",
                  encoding="utf-8") as fh:
            json.dump({str(i): list(d) for i, d in sorted(self.matched_domains.items())},
                      fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, dir_path: str, store: CorpusStore) -> "CascadeSet":
        arrays = {
            name: np.load(os.path.join(dir_path, f"{name}.npy"))
            for name in ("member_rows", "offsets", "root_rows", "depths",
                         "tree_parent", "category_bits")
        }
        out = cls(store, arrays["member_rows"], arrays["offsets"],
                  arrays["root_rows"], arrays["depths"], arrays["tree_parent"])
        out.category_bits = arrays["category_bits"]
        with open(os.path.join(dir_path, "matched_domains.json"), "rt",
                  encoding="utf-8") as fh:
            out.matched_domains = {int(k): tuple(v) for k, v in json.load(fh).items()}
        return out


def extract_cascades(graph: EngagementGraph, store: CorpusStore) -> CascadeSet:
    """Partition the graph into cascades via union-find.

    The root of a component is its node with no outgoing edge. Engagement
    graphs (out-degree <= 1) give each component exactly one such node or
    none (a cycle, possible only with corrupt parentage metadata); cycles
    are broken at their earliest-timestamp node (id as tiebreak). The
    multi-root branch is defensive: extra roots are attached under the
    chosen one so every cascade stays a single tree.
    """
    n = graph.n_nodes
    ids = store.column("ids")
    ts = store.column("ts")

    ds = DisjointSet(n)
    union = ds.union
    for child, parent in zip(graph.child_rows.tolist(), graph.parent_rows.tolist()):
        union(child, parent)

    tree_parent = np.full(n, -1, dtype=np.int64)
    tree_parent[graph.child_rows] = graph.parent_rows

    components = sorted(ds.components().values(), key=lambda m: m[0])

    member_rows = np.empty(n, dtype=np.int64)
    offsets = np.zeros(len(components) + 1, dtype=np.int64)
    root_rows = np.empty(len(components), dtype=np.int64)
    depths = np.zeros(len(components), dtype=np.int32)

    def ts_id_key(r: int) -> tuple[int, int]:
        return (int(ts[r]), int(ids[r]))

    pos = 0
    for i, members in enumerate(components):
        roots = [r for r in members if tree_parent[r] == -1]
        if len(roots) == 1:
            root = roots[0]
        elif roots:
            root = min(roots, key=ts_id_key)
            for r in roots:
                if r != root:
                    tree_parent[r] = root
        else:
            cycle = _terminal_cycle(members[0], tree_parent)
            root = min(cycle, key=ts_id_key)
            tree_parent[root] = -1
        root_rows[i] = root
        depths[i] = _max_depth(members, tree_parent, root)
        offsets[i] = pos
        member_rows[pos] = root
        pos += 1
        for r in members:
            if r != root:
                member_rows[pos] = r
                pos += 1
    offsets[len(components)] = pos

    return CascadeSet(store, member_rows, offsets, root_rows, depths, tree_parent)


def _terminal_cycle(start: int, tree_parent: np.ndarray) -> list[int]:
    """Nodes on the cycle reached by following parents from start."""
    order: dict[int, int] = {}
    cur = start
    while cur not in order:
        order[cur] = len(order)
        cur = int(tree_parent[cur])
    entry = order[cur]
    return [node for node, idx in order.items() if idx >= entry]


def _max_depth(members: list[int], tree_parent: np.ndarray, root: int) -> int:
    """Longest parent-chain length from any member up to the root."""
    depth = {root: 0}
    best = 0
    for row in members:
        if row in depth:
            continue
        chain = []
        cur = row
        while cur not in depth:
            chain.append(cur)
            cur = int(tree_parent[cur])
        base = depth[cur]
        for offset, node in enumerate(reversed(chain), start=1):
            depth[node] = base + offset
        if depth[chain[0]] > best:
            best = depth[chain[0]]
    return best


@dataclass
class MisinfoStats:
    n_source_tweets: int = 0
    n_source_with_urls: int = 0
    n_misinfo_source: int = 0
    fraction: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n_source_tweets": self.n_source_tweets,
            "n_source_with_urls": self.n_source_with_urls,
            "n_misinfo_source": self.n_misinfo_source,
            "fraction": self.fraction,
        }


def label_cascades(cascades: CascadeSet, catalog: SourceCatalog) -> MisinfoStats:
    """Label each cascade from its root tweet's urls (in place); an empty
    category set means the Others bucket."""
    store = cascades.store
    urls_lines = store.urls_lines()
    stats = MisinfoStats(n_source_tweets=len(cascades))
    for i in range(len(cascades)):
        cell = urls_lines[int(cascades.root_rows[i])]
        if not cell:
            continue
        stats.n_source_with_urls += 1
        categories: set[str] = set()
        domains: set[str] = set()
        for url in cell.split("\t"):
            entry_domain = catalog.match_domain(url)
            if entry_domain is not None:
                categories |= catalog.entries[entry_domain].categories
                domains.add(entry_domain)
        if categories:
            cascades.category_bits[i] = categories_to_bits(categories)
            cascades.matched_domains[i] = tuple(sorted(domains))
            stats.n_misinfo_source += 1
    if stats.n_source_with_urls:
        stats.fraction = stats.n_misinfo_source / stats.n_source_with_urls
    return stats


KIND_SOURCE = "source"
KIND_RESPONSE = "response"


@dataclass(frozen=True)
class TracePoint:
    t: int
    lat: float
    lon: float
    kind: str


@dataclass
class SpreadTrace:
    points: list[TracePoint] = field(default_factory=list)


def cascade_spread_trace(cascades: CascadeSet, i: int, geo: GeoIndex,
                         centroids: dict[tuple[str, Optional[str]], tuple[float, float]],
                         ) -> SpreadTrace:
    """Time-ordered geo points of one cascade's members.

    Raw tweet coordinates win; members without them fall back to the
    centroid of their resolved (country, state). Members with neither are
    omitted; raises EmptyTrace when nothing is resolvable.
    """
    store = cascades.store
    ts = store.column("ts")
    has_coords = store.column("has_coords")
    lons = store.column("lon")
    lats = store.column("lat")
    root = int(cascades.root_rows[i])
    points: list[TracePoint] = []
    for row in cascades.members(i).tolist():
        lat = lon = None
        if has_coords[row]:
            lat, lon = float(lats[row]), float(lons[row])
        elif geo.methods[row] != METHOD_NONE and geo.countries[row]:
            key = (geo.countries[row], geo.us_states[row])
            hit = centroids.get(key) or centroids.get((geo.countries[row], None))
            if hit is not None:
                lat, lon = hit
        if lat is None:
            continue
        kind = KIND_SOURCE if row == root else KIND_RESPONSE
        points.append(TracePoint(int(ts[row]), lat, lon, kind))
    if not points:
        raise EmptyTrace(f"cascade rooted at row {root} has no geo-resolved member")
    points.sort(key=lambda p: (p.t, 0 if p.kind == KIND_SOURCE else 1, p.lat, p.lon))
    return SpreadTrace(points)
