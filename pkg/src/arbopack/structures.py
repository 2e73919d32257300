"""Core data model for mixed hypergraphs.

A mixed hypergraph has vertices 0..n-1, undirected hyperedges (vertex sets
of size >= 2) and dyperedges (directed hyperedges: a nonempty tail set plus
a head outside it).  Digraphs, mixed graphs, graphs and dypergraphs are the
obvious restrictions.  Traversal semantics: a hyperedge can be walked
between any two of its vertices, a dyperedge only from a tail to its head.

Everything here is immutable and pure; derived data (reachability, strongly
connected components) is memoized on the instance.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

DEFAULT_CAP = 10_000_000


class CapExceededError(RuntimeError):
    """An enumeration hit its configured work cap before finishing."""


class PropertyViolationError(ValueError):
    """An input broke a property it was declared to satisfy."""


class Budget:
    """Mutable step counter shared by the enumerations of one operation."""

    __slots__ = ("cap", "remaining")

    def __init__(self, cap: int = DEFAULT_CAP):
        if cap < 1:
            raise ValueError("cap must be positive")
        self.cap = cap
        self.remaining = cap

    def spend(self, amount: int = 1) -> None:
        self.remaining -= amount
        if self.remaining < 0:
            raise CapExceededError(f"enumeration exceeded cap of {self.cap}")


def as_budget(cap: int | Budget | None) -> Budget:
    if isinstance(cap, Budget):
        return cap
    return Budget(DEFAULT_CAP if cap is None else cap)


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Witness:
    """Certificate for a failed check.

    kind says how to read payload:
      "subset"            payload = (frozenset X,)
      "subpartition"      payload = (parts tuple,)
      "component_family"  payload = (component, family tuple)
      "vertex"            payload = (v,)
      "global"            payload = () or scalars, see note
      "ground_subset"     payload = (tuple of ground elements,)
      "pair"              payload = (X, Y)
    lhs/rhs record the two sides of the violated inequality (lhs < rhs).
    """

    kind: str
    payload: tuple
    lhs: int | None = None
    rhs: int | None = None
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome plus certificate."""

    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


HOLDS = Verdict(True)


# ---------------------------------------------------------------------------
# the structure

Dyperedge = tuple[frozenset[int], int]


@dataclass(frozen=True)
class MixedHypergraph:
    """Immutable mixed hypergraph on vertices 0..n-1.

    hyperedges: tuple of frozensets, each of size >= 2
    dyperedges: tuple of (tails, head) with head not in tails, tails nonempty

    Parallel elements are allowed and keep distinct indices.
    """

    n: int
    hyperedges: tuple[frozenset[int], ...] = ()
    dyperedges: tuple[Dyperedge, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        hs = tuple(frozenset(e) for e in self.hyperedges)
        ds = tuple((frozenset(z), int(h)) for z, h in self.dyperedges)
        object.__setattr__(self, "hyperedges", hs)
        object.__setattr__(self, "dyperedges", ds)
        for e in hs:
            if len(e) < 2:
                raise ValueError(f"hyperedge {sorted(e)} has fewer than 2 vertices")
            if not all(0 <= v < self.n for v in e):
                raise ValueError(f"hyperedge {sorted(e)} out of range")
        for tails, head in ds:
            if not tails:
                raise ValueError("dyperedge with empty tail set")
            if head in tails:
                raise ValueError(f"dyperedge head {head} contained in its tails")
            if not all(0 <= v < self.n for v in tails) or not 0 <= head < self.n:
                raise ValueError("dyperedge out of range")

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def is_graph(self) -> bool:
        return not self.dyperedges and all(len(e) == 2 for e in self.hyperedges)

    def is_digraph(self) -> bool:
        return not self.hyperedges and all(len(z) == 1 for z, _ in self.dyperedges)

    def is_mixed_graph(self) -> bool:
        return all(len(e) == 2 for e in self.hyperedges) and all(
            len(z) == 1 for z, _ in self.dyperedges
        )

    def is_dypergraph(self) -> bool:
        return not self.hyperedges


def trim(dyperedge: Dyperedge, tail: int) -> Dyperedge:
    """Trim a dyperedge to the arc tail -> head."""
    tails, head = dyperedge
    if tail not in tails:
        raise ValueError(f"{tail} is not a tail of the dyperedge")
    return (frozenset((tail,)), head)


def orient(hyperedge: frozenset[int], head: int) -> Dyperedge:
    """Orient a hyperedge into the dyperedge (hyperedge - head, head)."""
    if head not in hyperedge:
        raise ValueError(f"{head} does not lie on the hyperedge")
    return (hyperedge - {head}, head)


def orient_all(f: MixedHypergraph, heads: Sequence[int]) -> MixedHypergraph:
    """Replace every hyperedge by its orientation with the given head.

    The result's dyperedges list the original dyperedges first, then the
    oriented hyperedges in hyperedge order (index offset len(f.dyperedges)).
    """
    if len(heads) != len(f.hyperedges):
        raise ValueError("need one head per hyperedge")
    oriented = tuple(orient(e, h) for e, h in zip(f.hyperedges, heads))
    return MixedHypergraph(f.n, (), f.dyperedges + oriented)


def induced_subgraph(
    f: MixedHypergraph, keep: frozenset[int]
) -> tuple[MixedHypergraph, list[int], list[int]]:
    """Subgraph induced by a vertex set, with vertices relabeled 0..|keep|-1.

    Returns (sub, hyperedge_map, dyperedge_map) where the maps send local
    element indices back to indices in f.
    """
    order = sorted(keep)
    relabel = {v: i for i, v in enumerate(order)}
    hmap, amap, hs, ds = [], [], [], []
    for i, e in enumerate(f.hyperedges):
        if e <= keep:
            hmap.append(i)
            hs.append(frozenset(relabel[v] for v in e))
    for j, (tails, head) in enumerate(f.dyperedges):
        if tails <= keep and head in keep:
            amap.append(j)
            ds.append((frozenset(relabel[v] for v in tails), relabel[head]))
    return MixedHypergraph(len(order), tuple(hs), tuple(ds)), hmap, amap


# ---------------------------------------------------------------------------
# reachability

def _reach_from_single(f: MixedHypergraph) -> tuple[frozenset[int], ...]:
    """Forward closure per vertex (includes the vertex itself), memoized."""
    cached = f._cache.get("reach1")
    if cached is not None:
        return cached
    succ: list[set[int]] = [set() for _ in range(f.n)]
    for e in f.hyperedges:
        for u in e:
            succ[u] |= e - {u}
    for tails, head in f.dyperedges:
        for y in tails:
            succ[y].add(head)
    out = []
    for s in range(f.n):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        out.append(frozenset(seen))
    result = tuple(out)
    f._cache["reach1"] = result
    return result


def reach_from(f: MixedHypergraph, x: Iterable[int]) -> frozenset[int]:
    """Vertices reachable from at least one vertex of x (x included)."""
    rf = _reach_from_single(f)
    out: frozenset[int] = frozenset()
    for v in x:
        out |= rf[v]
    return out


def reach_to(f: MixedHypergraph, x: Iterable[int]) -> frozenset[int]:
    """Vertices from which at least one vertex of x is reachable (x included)."""
    xs = frozenset(x)
    rf = _reach_from_single(f)
    return frozenset(u for u in range(f.n) if rf[u] & xs)


def scc_condense(f: MixedHypergraph) -> tuple[frozenset[int], ...]:
    """Strongly connected components, topologically ordered.

    Any dyperedge running from component i to component j satisfies i < j;
    hyperedges never cross components.  Ties between incomparable
    components break on smallest contained vertex, so the order is
    deterministic.
    """
    cached = f._cache.get("scc")
    if cached is not None:
        return cached
    rf = _reach_from_single(f)
    assigned = [False] * f.n
    comps = []
    for v in range(f.n):
        if assigned[v]:
            continue
        comp = frozenset(u for u in rf[v] if v in rf[u])
        for u in comp:
            assigned[u] = True
        comps.append(comp)
    # u reaches strictly more vertices than anything it reaches but is not
    # reached by, so sorting by closure size descending is a topological order
    comps.sort(key=lambda c: (-len(rf[min(c)]), min(c)))
    result = tuple(comps)
    f._cache["scc"] = result
    return result


# ---------------------------------------------------------------------------
# entering and counting

def hyperedge_enters(e: frozenset[int], y: frozenset[int]) -> bool:
    """A hyperedge enters y iff it meets both y and its own part outside y."""
    return bool(e & y) and bool(e - y)


def dyperedge_enters(d: Dyperedge, y: frozenset[int]) -> bool:
    """A dyperedge enters y iff its head is in y and some tail is outside."""
    tails, head = d
    return head in y and bool(tails - y)


def in_degree(f: MixedHypergraph, x: frozenset[int]) -> int:
    """Number of dyperedges entering x."""
    return sum(1 for d in f.dyperedges if dyperedge_enters(d, x))


def rho(f: MixedHypergraph, x: frozenset[int]) -> tuple[int, ...]:
    """Indices of the dyperedges entering x."""
    return tuple(j for j, d in enumerate(f.dyperedges) if dyperedge_enters(d, x))


def entering_count(f: MixedHypergraph, parts: Iterable[frozenset[int]]) -> int:
    """Number of elements (hyperedges or dyperedges) entering at least one
    of the given sets, each element counted once."""
    ps = list(parts)
    total = 0
    for e in f.hyperedges:
        if any(hyperedge_enters(e, y) for y in ps):
            total += 1
    for d in f.dyperedges:
        if any(dyperedge_enters(d, y) for y in ps):
            total += 1
    return total


# ---------------------------------------------------------------------------
# root multisets, bounds, subpartitions

@dataclass(frozen=True)
class RootMultiset:
    """Multiset of root vertices, stored as a count per vertex.

    Copies of a vertex are addressed as (vertex, copy_index); matroids on
    the multiset take these pairs as ground elements.
    """

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("root multiplicities must be nonnegative")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "RootMultiset":
        counts = [0] * n
        for v, c in pairs:
            counts[v] = c
        return cls(tuple(counts))

    @property
    def n(self) -> int:
        return len(self.counts)

    def size(self) -> int:
        return sum(self.counts)

    def count(self, v: int) -> int:
        return self.counts[v]

    def copies(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (v, i) for v in range(len(self.counts)) for i in range(self.counts[v])
        )

    def restrict(self, x: Iterable[int]) -> tuple[tuple[int, int], ...]:
        xs = set(x)
        return tuple(c for c in self.copies() if c[0] in xs)

    def size_of(self, x: Iterable[int]) -> int:
        return sum(self.counts[v] for v in x)

    def support(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.counts) if c)


@dataclass(frozen=True)
class Bounds:
    """Numeric packing bounds: per-vertex root bounds f <= g, member count k,
    and total member limits l <= lprime.  Fields not used by a check may be
    left None."""

    f: tuple[int, ...] | None = None
    g: tuple[int, ...] | None = None
    k: int | None = None
    l: int | None = None
    lprime: int | None = None

    def __post_init__(self):
        for name in ("f", "g"):
            val = getattr(self, name)
            if val is not None:
                val = tuple(int(x) for x in val)
                object.__setattr__(self, name, val)
                if any(x < 0 for x in val):
                    raise ValueError(f"{name} must be nonnegative")
        for name in ("k", "l", "lprime"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ValueError(f"{name} must be nonnegative")

    def g_k(self, v: int) -> int:
        return min(self.k, self.g[v])

    def g_k_sum(self, x: Iterable[int]) -> int:
        return sum(min(self.k, self.g[v]) for v in x)

    def f_sum(self, x: Iterable[int]) -> int:
        return sum(self.f[v] for v in x)


@dataclass(frozen=True)
class Subpartition:
    """Pairwise disjoint nonempty vertex subsets.  May be empty; it is a
    partition of V exactly when the parts cover V."""

    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        seen: set[int] = set()
        for p in parts:
            if not p:
                raise ValueError("subpartition parts must be nonempty")
            if p & seen:
                raise ValueError("subpartition parts must be disjoint")
            seen |= p

    def union(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for p in self.parts:
            out |= p
        return out

    def is_partition(self, n: int) -> bool:
        return len(self.union()) == n

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


# ---------------------------------------------------------------------------
# enumeration helpers (canonical orders)

def subsets(
    items: Iterable,
    include_empty: bool = True,
    budget: Budget | None = None,
) -> Iterator[frozenset]:
    """All subsets, by increasing size then lexicographic in item order."""
    pool = list(items)
    start = 0 if include_empty else 1
    for r in range(start, len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            if budget is not None:
                budget.spend()
            yield frozenset(combo)


def set_partitions(
    items: Iterable, budget: Budget | None = None
) -> Iterator[tuple[frozenset, ...]]:
    """All partitions of the items into nonempty blocks, in restricted
    growth string order.  Blocks are ordered by first appearance."""
    pool = list(items)
    if not pool:
        if budget is not None:
            budget.spend()
        yield ()
        return
    n = len(pool)
    rgs = [0] * n

    def emit():
        nblocks = max(rgs) + 1
        blocks = [[] for _ in range(nblocks)]
        for i, b in enumerate(rgs):
            blocks[b].append(pool[i])
        return tuple(frozenset(b) for b in blocks)

    while True:
        if budget is not None:
            budget.spend()
        yield emit()
        # advance the restricted growth string
        i = n - 1
        while i > 0:
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
            i -= 1
        else:
            return


def subpartitions(
    items: Iterable, budget: Budget | None = None
) -> Iterator[tuple[frozenset, ...]]:
    """All subpartitions: every partition of every subset, empty one first."""
    pool = list(items)
    for support in subsets(pool, include_empty=True):
        ordered = [x for x in pool if x in support]
        for part in set_partitions(ordered, budget=budget):
            yield part
