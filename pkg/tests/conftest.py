import itertools

import pytest

from arbopack import MixedHypergraph


def arc(u: int, v: int) -> tuple[frozenset[int], int]:
    return (frozenset({u}), v)


def dyp(tails, head) -> tuple[frozenset[int], int]:
    return (frozenset(tails), head)


def mh(n: int, hyperedges=(), dyperedges=()) -> MixedHypergraph:
    return MixedHypergraph(
        n,
        tuple(frozenset(e) for e in hyperedges),
        tuple((frozenset(t), h) for t, h in dyperedges),
    )


def all_digraphs(n_max: int, max_arcs: int):
    """Every digraph on at most n_max vertices with at most max_arcs arcs,
    parallel arcs included."""
    for n in range(1, n_max + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for m in range(max_arcs + 1):
            for combo in itertools.combinations_with_replacement(pairs, m):
                yield mh(n, (), [(frozenset({u}), v) for u, v in combo])


def all_root_multisets(n: int, max_total: int):
    from arbopack import RootMultiset

    for counts in itertools.product(range(max_total + 1), repeat=n):
        if sum(counts) <= max_total:
            yield RootMultiset(counts)


def all_mixed_graphs(n_max: int, max_elements: int):
    """Every mixed graph (size-2 edges and single-tail arcs) on at most n_max
    vertices with at most max_elements elements, parallels included."""
    for n in range(1, n_max + 1):
        kinds = [("E", frozenset(p)) for p in itertools.combinations(range(n), 2)]
        kinds += [("A", (u, v)) for u in range(n) for v in range(n) if u != v]
        for m in range(max_elements + 1):
            for combo in itertools.combinations_with_replacement(kinds, m):
                edges = [e for t, e in combo if t == "E"]
                arcs = [(frozenset({u}), v) for t, (u, v) in combo if t == "A"]
                yield mh(n, edges, arcs)


def all_mixed_hypergraphs(n_max: int, max_elements: int):
    """Every mixed hypergraph on at most n_max vertices with at most
    max_elements elements: hyperedges of size >= 2 and dyperedges with any
    nonempty tail set, parallels included."""
    for n in range(1, n_max + 1):
        kinds = []
        for size in range(2, n + 1):
            kinds += [("E", frozenset(e)) for e in itertools.combinations(range(n), size)]
        for z in range(n):
            rest = [v for v in range(n) if v != z]
            for tsize in range(1, n):
                kinds += [
                    ("A", (frozenset(t), z))
                    for t in itertools.combinations(rest, tsize)
                ]
        for m in range(max_elements + 1):
            for combo in itertools.combinations_with_replacement(kinds, m):
                edges = [e for t, e in combo if t == "E"]
                arcs = [a for t, a in combo if t == "A"]
                yield mh(n, edges, arcs)


def small_matroid_family(roots):
    """Free, uniform and per-vertex partition matroids on the root copies,
    deduplicated by their rank signature over all copy subsets."""
    from arbopack import FreeMatroid, PartitionMatroid, UniformMatroid

    ground = frozenset(roots.copies())
    cands = [FreeMatroid(ground)]
    cands += [UniformMatroid(ground, r) for r in range(min(len(ground), 2) + 1)]
    support = sorted(roots.support())
    if support:
        blocks = [
            frozenset((v, c) for c in range(roots.count(v))) for v in support
        ]
        for caps in itertools.product(*(range(len(b) + 1) for b in blocks)):
            cands.append(PartitionMatroid(ground, tuple(blocks), caps))
    elems = sorted(ground)
    seen = set()
    out = []
    for mat in cands:
        sig = tuple(
            mat.rank(frozenset(s))
            for m in range(len(elems) + 1)
            for s in itertools.combinations(elems, m)
        )
        if sig not in seen:
            seen.add(sig)
            out.append(mat)
    return out


@pytest.fixture
def triangle_digraph():
    return mh(3, (), [({0}, 1), ({1}, 2), ({2}, 0)])
