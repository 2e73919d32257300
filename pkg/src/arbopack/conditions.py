"""Checkable packing and orientation conditions.

Each condition id names one characterization: a quantified family of linear
inequalities over a structure, evaluated exhaustively in a deterministic
order.  evaluate() returns the first violated instance as a witness, so
repeated runs give identical certificates.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum

from .matroids import Matroid
from .setfuncs import SetFunctionOracle
from .structures import (
    HOLDS,
    Bounds,
    Budget,
    MixedHypergraph,
    RootMultiset,
    Verdict,
    Witness,
    as_budget,
    entering_count,
    in_degree,
    reach_to,
    scc_condense,
    subpartitions,
    subsets,
)


class ConditionId(Enum):
    EDMONDS = "edmonds"
    FRANK_MIXED = "frank_mixed"
    KKT = "kkt"
    MT = "mt"
    DGNS = "dgns"
    KIRALY = "kiraly"
    GY_DIGRAPH = "gy_digraph"
    GY_MIXED = "gy_mixed"
    FRANK_ORIENT = "frank_orient"
    NEW_ORIENT = "new_orient"
    FRANK_CAI = "frank_cai"
    BERCZI_FRANK = "berczi_frank"
    FKK = "fkk"
    COR1 = "cor1"
    GY_FG = "gy_fg"
    HSZ = "hsz"
    MAIN = "main"
    LEMMA1B = "lemma1b"


@dataclass(frozen=True)
class Instance:
    """Everything a condition may quantify over.  Conditions validate that
    the fields they need are present and of the right shape."""

    graph: MixedHypergraph
    roots: RootMultiset | None = None
    matroid: Matroid | None = None
    bounds: Bounds | None = None
    h: SetFunctionOracle | None = None


_KIND_TESTS = {
    "digraph": (MixedHypergraph.is_digraph, "a digraph (single-tail dyperedges only)"),
    "mixed_graph": (MixedHypergraph.is_mixed_graph, "a mixed graph (size-2 hyperedges, single-tail dyperedges)"),
    "dypergraph": (MixedHypergraph.is_dypergraph, "a dypergraph (no hyperedges)"),
    "graph": (lambda f: not f.dyperedges, "an undirected graph or hypergraph"),
    "mixed_hypergraph": (lambda f: True, ""),
}


def _need(
    inst: Instance,
    cond: ConditionId,
    kind: str,
    roots: bool = False,
    matroid: bool = False,
    h: bool = False,
    bounds: tuple[str, ...] = (),
) -> None:
    test, desc = _KIND_TESTS[kind]
    if not test(inst.graph):
        raise ValueError(f"{cond.value} needs {desc}")
    if roots and inst.roots is None:
        raise ValueError(f"{cond.value} needs a root multiset")
    if roots and inst.roots is not None and len(inst.roots.counts) != inst.graph.n:
        raise ValueError("root multiset does not match the vertex count")
    if matroid:
        if inst.matroid is None:
            raise ValueError(f"{cond.value} needs a matroid on the root multiset")
        if frozenset(inst.matroid.ground) != frozenset(inst.roots.copies()):
            raise ValueError("matroid ground must be exactly the root copies")
    if h and inst.h is None:
        raise ValueError(f"{cond.value} needs a set function h")
    for name in bounds:
        if inst.bounds is None or getattr(inst.bounds, name) is None:
            raise ValueError(f"{cond.value} needs bounds.{name}")
        val = getattr(inst.bounds, name)
        if name in ("f", "g") and len(val) != inst.graph.n:
            raise ValueError(f"bounds.{name} does not match the vertex count")


def _root_rank(inst: Instance, x) -> int:
    return inst.matroid.rank(inst.roots.restrict(x))


# ---------------------------------------------------------------------------
# quantifier helpers

def _subset_sweep(inst, budget, value, include_empty, note) -> Verdict:
    f = inst.graph
    for x in subsets(range(f.n), include_empty=include_empty, budget=budget):
        lhs, rhs = value(x)
        if lhs < rhs:
            return Verdict(False, Witness("subset", (x,), lhs, rhs, note))
    return HOLDS


def _subpartition_sweep(inst, budget, value, note) -> Verdict:
    f = inst.graph
    for parts in subpartitions(range(f.n), budget=budget):
        lhs, rhs = value(parts)
        if lhs < rhs:
            return Verdict(False, Witness("subpartition", (parts,), lhs, rhs, note))
    return HOLDS


def _iter_component_families(
    f: MixedHypergraph, budget: Budget
) -> Iterator[tuple[frozenset[int], frozenset[int], tuple[frozenset[int], ...]]]:
    """Per strongly connected component C with closure P: every family of
    subsets of P whose members meet C in pairwise disjoint nonempty traces
    and whose parts outside C have nothing entering them."""
    for c in scc_condense(f):
        p = reach_to(f, c)
        outside = sorted(p - c)
        cands: dict[frozenset[int], list[frozenset[int]]] = {}
        for trace in subsets(sorted(c), include_empty=False):
            found = []
            for extra in subsets(outside):
                budget.spend()
                if entering_count(f, (extra,)) == 0:
                    found.append(trace | extra)
            cands[trace] = found
        for traces in subpartitions(sorted(c), budget=budget):
            if not traces:
                continue
            for choice in itertools.product(*(cands[t] for t in traces)):
                budget.spend()
                yield c, p, choice


def _component_family_sweep(inst, budget, member_value, note) -> Verdict:
    f = inst.graph
    for c, p, family in _iter_component_families(f, budget):
        lhs = entering_count(f, family)
        rhs = sum(member_value(p, z) for z in family)
        if lhs < rhs:
            return Verdict(False, Witness("component_family", (c, family), lhs, rhs, note))
    return HOLDS


# ---------------------------------------------------------------------------
# the individual conditions

def _eval_edmonds(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.EDMONDS, "digraph", roots=True)
    s = inst.roots
    total = s.size()

    def value(x):
        return in_degree(inst.graph, x), total - s.size_of(x)

    return _subset_sweep(inst, budget, value, False, "arcs entering vs roots missing")


def _eval_frank_mixed(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.FRANK_MIXED, "mixed_graph", roots=True)
    s = inst.roots
    total = s.size()

    def value(parts):
        union = frozenset().union(*parts) if parts else frozenset()
        return entering_count(inst.graph, parts), total * len(parts) - s.size_of(union)

    return _subpartition_sweep(inst, budget, value, "elements entering vs roots missing")


def _eval_kkt(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.KKT, "digraph", roots=True)
    s = inst.roots

    def value(x):
        p = reach_to(inst.graph, x)
        return in_degree(inst.graph, x), s.size_of(p) - s.size_of(x)

    return _subset_sweep(inst, budget, value, True, "arcs entering vs reaching roots missing")


def _eval_mt(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.MT, "mixed_graph", roots=True)
    s = inst.roots

    def member_value(p, z):
        return s.size_of(p) - s.size_of(z)

    return _component_family_sweep(inst, budget, member_value,
                                   "elements entering vs reaching roots missing")


def _eval_dgns(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.DGNS, "digraph", roots=True, matroid=True)
    full = _root_rank(inst, range(inst.graph.n))

    def value(x):
        return in_degree(inst.graph, x), full - _root_rank(inst, x)

    return _subset_sweep(inst, budget, value, False, "arcs entering vs rank deficiency")


def _eval_kiraly(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.KIRALY, "digraph", roots=True, matroid=True)

    def value(x):
        p = reach_to(inst.graph, x)
        return in_degree(inst.graph, x), _root_rank(inst, p) - _root_rank(inst, x)

    return _subset_sweep(inst, budget, value, True, "arcs entering vs reaching rank deficiency")


def _eval_gy_digraph(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.GY_DIGRAPH, "digraph", roots=True, matroid=True)
    f = inst.graph
    for c in scc_condense(f):
        p = reach_to(f, c)
        rank_p = _root_rank(inst, p)
        for x in subsets(sorted(p), include_empty=False, budget=budget):
            if not x & c or in_degree(f, x - c) != 0:
                continue
            lhs = in_degree(f, x)
            rhs = rank_p - _root_rank(inst, x)
            if lhs < rhs:
                return Verdict(False, Witness("component_family", (c, (x,)), lhs, rhs,
                                              "arcs entering vs component rank deficiency"))
    return HOLDS


def _eval_gy_mixed(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.GY_MIXED, "mixed_graph", roots=True, matroid=True)

    def member_value(p, z):
        return _root_rank(inst, p) - _root_rank(inst, z)

    return _component_family_sweep(inst, budget, member_value,
                                   "elements entering vs component rank deficiency")


def _eval_frank_orient(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.FRANK_ORIENT, "graph", h=True)
    h = inst.h
    if h(range(inst.graph.n)) != 0:
        raise ValueError("frank_orient needs h(V) = 0")

    def value(parts):
        return entering_count(inst.graph, parts), sum(h(x) for x in parts)

    return _subpartition_sweep(inst, budget, value, "edges entering vs demanded in-degree")


def _eval_new_orient(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.NEW_ORIENT, "mixed_hypergraph", h=True)
    h = inst.h

    def member_value(p, z):
        return h(z) - h(p)

    return _component_family_sweep(inst, budget, member_value,
                                   "elements entering vs demanded in-degree")


def _bounded_subpartition_value(inst, cap_fn):
    """Shared inequality shape: entering >= k|P| - min(slack, cap_fn(union))."""
    b = inst.bounds
    f = inst.graph
    fv = b.f

    def value(parts):
        union = frozenset().union(*parts) if parts else frozenset()
        complement = frozenset(range(f.n)) - union
        slack, cap = cap_fn(union, complement)
        return entering_count(f, parts), b.k * len(parts) - min(slack, cap)

    return value


def _eval_fg_bounded(inst: Instance, budget: Budget, cond: ConditionId, kind: str) -> Verdict:
    _need(inst, cond, kind, bounds=("f", "g", "k"))
    b = inst.bounds
    for v in range(inst.graph.n):
        if b.g[v] < b.f[v]:
            return Verdict(False, Witness("vertex", (v,), b.g[v], b.f[v],
                                          "upper root bound below lower"))
    value = _bounded_subpartition_value(
        inst, lambda union, comp: (b.k - b.f_sum(comp), sum(b.g[v] for v in union))
    )
    return _subpartition_sweep(inst, budget, value, "elements entering vs forced roots")


def _eval_frank_cai(inst, budget):
    return _eval_fg_bounded(inst, budget, ConditionId.FRANK_CAI, "digraph")


def _eval_gy_fg(inst, budget):
    return _eval_fg_bounded(inst, budget, ConditionId.GY_FG, "mixed_graph")


def _eval_hsz(inst, budget):
    return _eval_fg_bounded(inst, budget, ConditionId.HSZ, "mixed_hypergraph")


def _eval_limited(inst: Instance, budget: Budget, cond: ConditionId, kind: str,
                  capped_union: bool) -> Verdict:
    _need(inst, cond, kind, bounds=("f", "g", "k", "l", "lprime"))
    b = inst.bounds
    if cond is ConditionId.MAIN and min(b.k, b.l, b.lprime) < 1:
        raise ValueError("main needs positive k, l and lprime")
    for v in range(inst.graph.n):
        if b.g_k(v) < b.f[v]:
            return Verdict(False, Witness("vertex", (v,), b.g_k(v), b.f[v],
                                          "capped upper root bound below lower"))
    gv = b.g_k_sum(range(inst.graph.n))
    if min(gv, b.lprime) < b.l:
        return Verdict(False, Witness("global", (), min(gv, b.lprime), b.l,
                                      "member minimum unreachable"))
    if capped_union:
        value = _bounded_subpartition_value(
            inst, lambda union, comp: (b.lprime - b.f_sum(comp), b.g_k_sum(union))
        )
    else:
        value = _bounded_subpartition_value(
            inst, lambda union, comp: (b.lprime - b.f_sum(comp), sum(b.g[v] for v in union))
        )
    return _subpartition_sweep(inst, budget, value, "elements entering vs forced roots")


def _eval_berczi_frank(inst, budget):
    return _eval_limited(inst, budget, ConditionId.BERCZI_FRANK, "digraph", capped_union=False)


def _eval_main(inst, budget):
    return _eval_limited(inst, budget, ConditionId.MAIN, "mixed_hypergraph", capped_union=True)


def _eval_fkk(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.FKK, "dypergraph", roots=True)
    support = inst.roots.support()
    if len(support) != 1:
        raise ValueError("fkk needs all roots on a single vertex")
    (s,) = support
    k = inst.roots.size()
    f = inst.graph
    others = sorted(set(range(f.n)) - {s})
    for x in subsets(others, include_empty=False, budget=budget):
        lhs = in_degree(f, x)
        if lhs < k:
            return Verdict(False, Witness("subset", (x,), lhs, k,
                                          "dyperedges entering vs required connectivity"))
    return HOLDS


def _eval_cor1(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.COR1, "dypergraph", roots=True, bounds=("k",))
    s, k = inst.roots, inst.bounds.k
    for v in range(inst.graph.n):
        if s.count(v) > k:
            return Verdict(False, Witness("vertex", (v,), k, s.count(v),
                                          "more roots at a vertex than members"))

    def value(x):
        return in_degree(inst.graph, x), k - s.size_of(x)

    return _subset_sweep(inst, budget, value, False, "dyperedges entering vs roots missing")


def _eval_lemma1b(inst: Instance, budget: Budget) -> Verdict:
    _need(inst, ConditionId.LEMMA1B, "mixed_hypergraph",
          bounds=("f", "g", "k", "l", "lprime"))
    b = inst.bounds
    if min(b.k, b.l, b.lprime) < 1:
        raise ValueError("lemma1b needs positive k, l and lprime")
    from .gpoly import build_t, feasible

    return feasible(build_t(inst.graph, b), budget)


_EVALUATORS = {
    ConditionId.EDMONDS: _eval_edmonds,
    ConditionId.FRANK_MIXED: _eval_frank_mixed,
    ConditionId.KKT: _eval_kkt,
    ConditionId.MT: _eval_mt,
    ConditionId.DGNS: _eval_dgns,
    ConditionId.KIRALY: _eval_kiraly,
    ConditionId.GY_DIGRAPH: _eval_gy_digraph,
    ConditionId.GY_MIXED: _eval_gy_mixed,
    ConditionId.FRANK_ORIENT: _eval_frank_orient,
    ConditionId.NEW_ORIENT: _eval_new_orient,
    ConditionId.FRANK_CAI: _eval_frank_cai,
    ConditionId.BERCZI_FRANK: _eval_berczi_frank,
    ConditionId.FKK: _eval_fkk,
    ConditionId.COR1: _eval_cor1,
    ConditionId.GY_FG: _eval_gy_fg,
    ConditionId.HSZ: _eval_hsz,
    ConditionId.MAIN: _eval_main,
    ConditionId.LEMMA1B: _eval_lemma1b,
}


def evaluate(cond: ConditionId | str, inst: Instance, cap: int | Budget | None = None) -> Verdict:
    """Evaluate one condition exhaustively; first violation becomes the witness."""
    if isinstance(cond, str):
        cond = ConditionId(cond)
    return _EVALUATORS[cond](inst, as_budget(cap))


# ---------------------------------------------------------------------------
# witness re-evaluation

def witness_violates(cond: ConditionId | str, inst: Instance, witness: Witness) -> bool:
    """Recompute the inequality named by a witness; True iff it is violated."""
    if isinstance(cond, str):
        cond = ConditionId(cond)
    f = inst.graph
    s, b = inst.roots, inst.bounds
    kind, payload = witness.kind, witness.payload
    if cond is ConditionId.EDMONDS and kind == "subset":
        (x,) = payload
        return in_degree(f, x) < s.size() - s.size_of(x)
    if cond is ConditionId.FRANK_MIXED and kind == "subpartition":
        (parts,) = payload
        union = frozenset().union(*parts) if parts else frozenset()
        return entering_count(f, parts) < s.size() * len(parts) - s.size_of(union)
    if cond is ConditionId.KKT and kind == "subset":
        (x,) = payload
        return in_degree(f, x) < s.size_of(reach_to(f, x)) - s.size_of(x)
    if cond is ConditionId.MT and kind == "component_family":
        c, family = payload
        p = reach_to(f, c)
        return entering_count(f, family) < sum(s.size_of(p) - s.size_of(z) for z in family)
    if cond is ConditionId.DGNS and kind == "subset":
        (x,) = payload
        return in_degree(f, x) < _root_rank(inst, range(f.n)) - _root_rank(inst, x)
    if cond is ConditionId.KIRALY and kind == "subset":
        (x,) = payload
        return in_degree(f, x) < _root_rank(inst, reach_to(f, x)) - _root_rank(inst, x)
    if cond in (ConditionId.GY_DIGRAPH, ConditionId.GY_MIXED) and kind == "component_family":
        c, family = payload
        p = reach_to(f, c)
        rank_p = _root_rank(inst, p)
        if cond is ConditionId.GY_DIGRAPH:
            (x,) = family
            return in_degree(f, x) < rank_p - _root_rank(inst, x)
        return entering_count(f, family) < sum(rank_p - _root_rank(inst, z) for z in family)
    if cond is ConditionId.FRANK_ORIENT and kind == "subpartition":
        (parts,) = payload
        return entering_count(f, parts) < sum(inst.h(x) for x in parts)
    if cond is ConditionId.NEW_ORIENT and kind == "component_family":
        c, family = payload
        p = reach_to(f, c)
        return entering_count(f, family) < sum(inst.h(z) - inst.h(p) for z in family)
    if cond in (ConditionId.FRANK_CAI, ConditionId.GY_FG, ConditionId.HSZ):
        if kind == "vertex":
            (v,) = payload
            return b.g[v] < b.f[v]
        (parts,) = payload
        union = frozenset().union(*parts) if parts else frozenset()
        comp = frozenset(range(f.n)) - union
        rhs = b.k * len(parts) - min(b.k - b.f_sum(comp), sum(b.g[v] for v in union))
        return entering_count(f, parts) < rhs
    if cond in (ConditionId.BERCZI_FRANK, ConditionId.MAIN):
        if kind == "vertex":
            (v,) = payload
            return b.g_k(v) < b.f[v]
        if kind == "global":
            return min(b.g_k_sum(range(f.n)), b.lprime) < b.l
        (parts,) = payload
        union = frozenset().union(*parts) if parts else frozenset()
        comp = frozenset(range(f.n)) - union
        cap = b.g_k_sum(union) if cond is ConditionId.MAIN else sum(b.g[v] for v in union)
        rhs = b.k * len(parts) - min(b.lprime - b.f_sum(comp), cap)
        return entering_count(f, parts) < rhs
    if cond is ConditionId.FKK and kind == "subset":
        (x,) = payload
        return in_degree(f, x) < s.size()
    if cond is ConditionId.COR1:
        if kind == "vertex":
            (v,) = payload
            return s.count(v) > b.k
        (x,) = payload
        return in_degree(f, x) < b.k - s.size_of(x)
    if cond is ConditionId.LEMMA1B:
        if kind == "vertex":
            (v,) = payload
            return b.g_k(v) < b.f[v]
        if kind == "global":
            return min(b.g_k_sum(range(f.n)), b.lprime) < b.l
        if kind == "ground_subset":
            from .gpoly import build_t, ground_subset_violates

            return ground_subset_violates(build_t(f, b), payload)
    raise ValueError(f"no inequality named {kind!r} for {cond.value}")


# ---------------------------------------------------------------------------
# component projection of a vertex set in a digraph

def scc_projection(
    f: MixedHypergraph, x: frozenset[int]
) -> tuple[tuple[frozenset[int], frozenset[int]], ...]:
    """Split a vertex set along strongly connected components.

    For every component C meeting x, the projected set keeps x's trace on C
    and absorbs the full closure of every other met component that reaches C.
    Each projected set lies in its component's closure, meets the component,
    and nothing enters the part outside the component.
    """
    comps = scc_condense(f)
    closures = [reach_to(f, c) for c in comps]
    met = [j for j, c in enumerate(comps) if x & c]
    out = []
    for j in met:
        xj = x & comps[j]
        for i in met:
            if i != j and comps[i] <= closures[j]:
                xj |= closures[i]
        if not (xj <= closures[j] and xj & comps[j] and in_degree(f, xj - comps[j]) == 0):
            raise AssertionError("projection postcondition failed")
        out.append((comps[j], xj))
    return tuple(out)
