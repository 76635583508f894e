"""Log-counts of hypergraphs compatible with a compression.

``ln_z`` evaluates the log of the number of hypergraphs that share a
state's cluster sizes and edge-type counts (plus the degree sequence for
the degree-corrected count).  ``delta_ln_z`` gives the change under a
single-vertex relabeling without mutating the state, touching only the
moved vertex's edges and the two affected clusters.

All values are natural logs.  ``-inf`` means no hypergraph is compatible.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

from .combinatorics import LN_EXACT_LIMIT, NEG_INF, ln_binomial, ln_binomial_real, ln_factorial
from .hypergraph import Hypergraph
from .state import CompressionState, LambdaType, shift_type

# Exact integer products stay well clear of 2**53.
_EXACT_LN_CUTOFF = LN_EXACT_LIMIT - 1.0


class ObjectiveKind(str, enum.Enum):
    SIMPLE = "simple"
    MULTI = "multi"
    DEGREE_CORRECTED = "degree-corrected"
    RB_GRAPH = "rb-graph"

    @classmethod
    def parse(cls, value: "str | ObjectiveKind") -> "ObjectiveKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("_", "-"))
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown objective {value!r}; expected one of {names}") from None


class WorkCounter:
    """Counts elementary steps inside :func:`delta_ln_z` (edges visited,
    histogram entries and edge-type terms priced)."""

    def __init__(self):
        self.ops = 0

    def reset(self) -> None:
        self.ops = 0


def check_objective(H: Hypergraph, kind: ObjectiveKind) -> None:
    if kind is ObjectiveKind.RB_GRAPH and not H.is_dyadic():
        raise ValueError("objective requires dyadic edges (rb-graph)")


_lb = lru_cache(maxsize=1 << 18)(ln_binomial)
_lf = ln_factorial


@lru_cache(maxsize=1 << 16)
def _type_weight(t: LambdaType) -> float:
    """sum_i ln(lambda_i!)"""
    return math.fsum(_lf(c) for _, c in t)


def _simple_term(sizes, t: LambdaType, e: int) -> float:
    """ln C(prod_i C(|C_i|, lambda_i), e)."""
    if e == 0:
        return 0.0
    ln_m = 0.0
    for lab, c in t:
        ln_m += _lb(sizes[lab], c)
    if ln_m == NEG_INF:
        return NEG_INF
    if ln_m <= _EXACT_LN_CUTOFF:
        big_m = 1
        for lab, c in t:
            big_m *= math.comb(sizes[lab], c)
        return _lb(big_m, e)
    return ln_binomial_real(ln_m, e)


def _safe_sum(terms) -> float:
    """fsum that propagates -inf instead of producing nan."""
    terms = list(terms)
    if any(x == NEG_INF for x in terms):
        return NEG_INF
    return math.fsum(terms)


def ln_z(state: CompressionState, kind: ObjectiveKind | str) -> float:
    """ln Z of the compression held by ``state``, evaluated from scratch."""
    kind = ObjectiveKind.parse(kind)
    check_objective(state.H, kind)
    if kind is ObjectiveKind.MULTI:
        terms = []
        for size, hist in zip(state.sizes, state.histograms):
            for s, cnt in hist.items():
                lb = _lb(size, s)
                terms.append(NEG_INF if lb == NEG_INF else cnt * lb)
        return _safe_sum(terms)
    if kind is ObjectiveKind.DEGREE_CORRECTED:
        return (
            math.fsum(_lf(e) for e in state.degree_sums)
            - math.fsum(_lf(c) for c in state.lambda_counts.values())
            - math.fsum(c * _type_weight(t) for t, c in state.lambda_counts.items())
        )
    if kind is ObjectiveKind.SIMPLE:
        return _safe_sum(_simple_term(state.sizes, t, c) for t, c in state.lambda_counts.items())
    return _rb_ln_z(state)


def _rb_ln_z(state: CompressionState) -> float:
    """Module-matrix count for simple graphs, built directly from the edges."""
    labels, sizes = state.labels, state.sizes
    module: dict[tuple[int, int], int] = {}
    for u, w in state.H.edges:
        i, j = labels[u], labels[w]
        key = (i, j) if i <= j else (j, i)
        module[key] = module.get(key, 0) + 1
    terms = []
    for (i, j), cnt in module.items():
        if i == j:
            terms.append(ln_binomial(sizes[i] * (sizes[i] - 1) // 2, cnt))
        else:
            terms.append(ln_binomial(sizes[i] * sizes[j], cnt))
    return _safe_sum(terms)


def _difference(new: float, old: float) -> float:
    if old == NEG_INF:
        return math.nan if new == NEG_INF else math.inf
    if new == NEG_INF:
        return NEG_INF
    return new - old


def delta_ln_z(
    state: CompressionState,
    v: int,
    new_label: int,
    kind: ObjectiveKind | str,
    counter: WorkCounter | None = None,
) -> float:
    """ln Z after relabeling ``v`` to ``new_label`` minus ln Z now.

    Returns ``-inf`` when the proposed state is incompatible and ``+inf``
    when only the current one is.  Only the terms touched by the move are
    priced, so from an already incompatible state the result reflects those
    terms alone (``nan`` when they are incompatible on both sides).  The
    state is not modified.
    """
    a = state.labels[v]
    b = new_label
    if a == b:
        return 0.0
    if not isinstance(kind, ObjectiveKind):
        kind = ObjectiveKind.parse(kind)
    if kind is ObjectiveKind.DEGREE_CORRECTED:
        return _delta_dc(state, v, a, b, counter)
    if kind is ObjectiveKind.MULTI:
        return _delta_multi(state, v, a, b, counter)
    if kind is ObjectiveKind.RB_GRAPH:
        check_objective(state.H, kind)
    return _delta_simple(state, v, a, b, counter)


def _type_changes(state: CompressionState, v: int, a: int, b: int) -> dict:
    changes: dict = {}
    edge_types = state.edge_types
    for e, mult in state.H.incident_edges(v):
        t = edge_types[e]
        t2 = shift_type(t, a, b, mult)[0]
        changes[t] = changes.get(t, 0) - 1
        changes[t2] = changes.get(t2, 0) + 1
    return changes


def _delta_dc(state, v, a, b, counter) -> float:
    d = state.H.degrees[v]
    if d == 0:
        return 0.0
    ea = state.degree_sums[a]
    eb = state.degree_sums[b]
    out = _lf(ea - d) - _lf(ea) + _lf(eb + d) - _lf(eb)
    counts = state.lambda_counts
    changes = _type_changes(state, v, a, b)
    for t, dt in changes.items():
        if dt:
            e = counts.get(t, 0)
            out -= _lf(e + dt) - _lf(e) + dt * _type_weight(t)
    if counter is not None:
        counter.ops += len(state.H.incident_edges(v)) + len(changes) + 2
    return out


def _delta_multi(state, v, a, b, counter) -> float:
    ha = state.histograms[a]
    hb = state.histograms[b]
    dha: dict[int, int] = {}
    dhb: dict[int, int] = {}
    edge_types = state.edge_types
    incident = state.H.incident_edges(v)
    for e, mult in incident:
        _, sa, sb = shift_type(edge_types[e], a, b, mult)
        dha[sa] = dha.get(sa, 0) - 1
        if sa > mult:
            dha[sa - mult] = dha.get(sa - mult, 0) + 1
        if sb:
            dhb[sb] = dhb.get(sb, 0) - 1
        dhb[sb + mult] = dhb.get(sb + mult, 0) + 1
    na = state.sizes[a]
    nb = state.sizes[b]
    old_terms = []
    new_terms = []
    for hist, dh, size, new_size in ((ha, dha, na, na - 1), (hb, dhb, nb, nb + 1)):
        for s, cnt in hist.items():
            lb = _lb(size, s)
            old_terms.append(NEG_INF if lb == NEG_INF else cnt * lb)
            cnt2 = cnt + dh.get(s, 0)
            if cnt2:
                lb2 = _lb(new_size, s)
                new_terms.append(NEG_INF if lb2 == NEG_INF else cnt2 * lb2)
        for s, dcnt in dh.items():
            if s not in hist and dcnt:
                lb2 = _lb(new_size, s)
                new_terms.append(NEG_INF if lb2 == NEG_INF else dcnt * lb2)
    if counter is not None:
        counter.ops += len(incident) + len(ha) + len(hb) + len(dha) + len(dhb)
    if NEG_INF in old_terms or NEG_INF in new_terms:
        return _difference(_safe_sum(new_terms), _safe_sum(old_terms))
    return math.fsum(new_terms + [-x for x in old_terms])


def _delta_simple(state, v, a, b, counter) -> float:
    changes = _type_changes(state, v, a, b)
    affected = set(changes)
    affected.update(state.types_by_label[a])
    affected.update(state.types_by_label[b])
    sizes = state.sizes
    new_sizes = _Override(sizes, a, sizes[a] - 1, b, sizes[b] + 1)
    counts = state.lambda_counts
    old_terms = []
    new_terms = []
    for t in affected:
        e = counts.get(t, 0)
        old_terms.append(_simple_term(sizes, t, e))
        new_terms.append(_simple_term(new_sizes, t, e + changes.get(t, 0)))
    if counter is not None:
        counter.ops += len(state.H.incident_edges(v)) + len(affected)
    if NEG_INF in old_terms or NEG_INF in new_terms:
        return _difference(_safe_sum(new_terms), _safe_sum(old_terms))
    return math.fsum(new_terms + [-x for x in old_terms])


class _Override:
    """Read-only view of a size list with two entries replaced."""

    __slots__ = ("base", "i", "vi", "j", "vj")

    def __init__(self, base, i, vi, j, vj):
        self.base, self.i, self.vi, self.j, self.vj = base, i, vi, j, vj

    def __getitem__(self, k):
        if k == self.i:
            return self.vi
        if k == self.j:
            return self.vj
        return self.base[k]
