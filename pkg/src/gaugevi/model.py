"""Forney-style graphical models over binary edge variables.

A model places a factor table on every node; variables live on edges and
each edge variable is shared by exactly its two endpoint nodes.  Tables are
stored as numpy arrays of shape (2,)*degree; the flat view uses a fixed
big-endian convention: for a local configuration (x_1, ..., x_d) read along
``local_order``, the flat index is sum_k x_k * 2**(d-k), i.e. the first
incident edge is the most significant bit.  This matches a C-order reshape,
so ``table.reshape(-1)`` and ``flat.reshape((2,)*d)`` convert between the
two views.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NegativeMass, TooManyFreeEdges

DEFAULT_ENUM_CAP = 25
_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# Conditioning masks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditioningMask:
    """Per-edge clamp states: edges absent from ``clamped`` are free."""

    clamped: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for e, v in self.clamped.items():
            if v not in (0, 1):
                raise ValueError(f"clamp value for edge {e} must be 0 or 1, got {v}")

    def is_free(self, edge: int) -> bool:
        return edge not in self.clamped

    def free_edges(self, n_edges: int) -> list[int]:
        return [e for e in range(n_edges) if e not in self.clamped]

    def value(self, edge: int) -> int | None:
        return self.clamped.get(edge)


# ---------------------------------------------------------------------------
# The model object
# ---------------------------------------------------------------------------

class ForneyGM:
    """Immutable Forney-style model.

    Parameters
    ----------
    edges:
        Sequence of (u, v) endpoint node-id pairs; edge ids are positions.
    local_order:
        Per node, the ordered list of incident edge ids (defines table axes).
    tables:
        Per node, an array of shape (2,)*degree or a flat array of length
        2**degree in the big-endian convention.
    log_scale:
        Additive log factor: the unnormalized mass of a configuration x is
        exp(log_scale) * prod_a table_a(x_a).
    transformed:
        Gauge-transformed models may carry negative table entries; input
        models must be non-negative with at least one positive entry per
        table.
    allow_zero_tables:
        Conditioning can zero out a table slice; only those internal paths
        set this.
    """

    def __init__(
        self,
        edges: Sequence[tuple[int, int]],
        local_order: Sequence[Sequence[int]],
        tables: Sequence[np.ndarray],
        log_scale: float = 0.0,
        transformed: bool = False,
        allow_zero_tables: bool = False,
    ):
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        self.local_order = tuple(tuple(int(e) for e in order) for order in local_order)
        self.log_scale = float(log_scale)
        self.transformed = bool(transformed)

        if len(self.local_order) != len(tables):
            raise ValueError("local_order and tables must have one entry per node")

        shaped = []
        for a, (order, tab) in enumerate(zip(self.local_order, tables)):
            arr = np.asarray(tab, dtype=float)
            d = len(order)
            if arr.size != 2 ** d:
                raise ValueError(
                    f"node {a}: table has {arr.size} entries, expected 2^{d}"
                )
            arr = arr.reshape((2,) * d).copy()
            arr.setflags(write=False)
            shaped.append(arr)
        self.tables = tuple(shaped)

        self._check_structure()
        if not allow_zero_tables:
            for a, tab in enumerate(self.tables):
                if not np.any(tab):
                    raise ValueError(f"node {a}: all-zero table makes Z identically 0")
        if not self.transformed:
            for a, tab in enumerate(self.tables):
                if np.any(tab < 0):
                    raise ValueError(
                        f"node {a}: negative entries require transformed=True"
                    )

    # -- structure ---------------------------------------------------------

    def _check_structure(self):
        n_nodes = len(self.local_order)
        seen: dict[int, list[int]] = {e: [] for e in range(len(self.edges))}
        for e, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"edge {e}: endpoints must be distinct")
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError(f"edge {e}: endpoint out of range")
        for a, order in enumerate(self.local_order):
            if len(set(order)) != len(order):
                raise ValueError(f"node {a}: repeated edge in local_order")
            for e in order:
                if not (0 <= e < len(self.edges)):
                    raise ValueError(f"node {a}: unknown edge id {e}")
                if a not in self.edges[e]:
                    raise ValueError(f"node {a}: lists edge {e} but is not an endpoint")
                seen[e].append(a)
        for e, nodes in seen.items():
            if sorted(nodes) != sorted(self.edges[e]):
                raise ValueError(
                    f"edge {e}: must appear in exactly its two endpoints' local_order"
                )

    @property
    def n_nodes(self) -> int:
        return len(self.local_order)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, node: int) -> int:
        return len(self.local_order[node])

    def flat_table(self, node: int) -> np.ndarray:
        return self.tables[node].reshape(-1)

    def with_log_scale(self, log_scale: float) -> "ForneyGM":
        return ForneyGM(self.edges, self.local_order, self.tables,
                        log_scale=log_scale, transformed=self.transformed,
                        allow_zero_tables=True)

    # -- JSON --------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "edges": [
                {"id": e, "endpoints": [u, v]} for e, (u, v) in enumerate(self.edges)
            ],
            "nodes": [
                {
                    "id": a,
                    "local_order": list(self.local_order[a]),
                    "table": [float(x) for x in self.flat_table(a)],
                }
                for a in range(self.n_nodes)
            ],
            "log_scale": self.log_scale,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ForneyGM":
        edges_raw = sorted(data["edges"], key=lambda d: d["id"])
        if [d["id"] for d in edges_raw] != list(range(len(edges_raw))):
            raise ValueError("edge ids must be contiguous from 0")
        nodes_raw = sorted(data["nodes"], key=lambda d: d["id"])
        if [d["id"] for d in nodes_raw] != list(range(len(nodes_raw))):
            raise ValueError("node ids must be contiguous from 0")
        edges = [tuple(d["endpoints"]) for d in edges_raw]
        local_order = [d["local_order"] for d in nodes_raw]
        tables = [np.asarray(d["table"], dtype=float) for d in nodes_raw]
        transformed = any(np.any(t < 0) for t in tables)
        return cls(edges, local_order, tables,
                   log_scale=float(data.get("log_scale", 0.0)),
                   transformed=transformed, allow_zero_tables=True)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)

    @classmethod
    def load(cls, path) -> "ForneyGM":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def validate(gm: ForneyGM) -> list[str]:
    """Report-only structural diagnostics; an empty list means valid."""
    problems: list[str] = []
    n_nodes = gm.n_nodes
    for e, (u, v) in enumerate(gm.edges):
        if u == v:
            problems.append(f"edge {e}: endpoints must be distinct")
        if not (0 <= u < n_nodes and 0 <= v < n_nodes):
            problems.append(f"edge {e}: endpoint out of range")
    counts = {e: 0 for e in range(gm.n_edges)}
    for a, order in enumerate(gm.local_order):
        if len(set(order)) != len(order):
            problems.append(f"node {a}: repeated edge in local_order")
        for e in order:
            if 0 <= e < gm.n_edges:
                counts[e] += 1
                if a not in gm.edges[e]:
                    problems.append(f"node {a}: lists edge {e} but is not an endpoint")
            else:
                problems.append(f"node {a}: unknown edge id {e}")
        if gm.tables[a].size != 2 ** len(order):
            problems.append(f"node {a}: table length != 2^degree")
        if not np.any(gm.tables[a]):
            problems.append(f"node {a}: all-zero table")
        if not gm.transformed and np.any(gm.tables[a] < 0):
            problems.append(f"node {a}: negative entry in untransformed model")
    for e, c in counts.items():
        if c != 2:
            problems.append(f"edge {e}: appears in {c} local_orders, expected 2")
    return problems


# ---------------------------------------------------------------------------
# Exact enumeration
# ---------------------------------------------------------------------------

def _enumeration_sum(gm: ForneyGM, mask: ConditioningMask | None,
                     max_free_edges: int, reject_negative: bool):
    """Signed configuration sum; returns (log|S| incl. log_scale, sign)."""
    mask = mask or ConditioningMask()
    free = mask.free_edges(gm.n_edges)
    m = len(free)
    if m > max_free_edges:
        raise TooManyFreeEdges(
            f"{m} free edges exceeds the enumeration cap of {max_free_edges}"
        )
    shift = {e: m - 1 - j for j, e in enumerate(free)}

    # Normalize each table by its max-abs entry so products of hundreds of
    # factors stay representable; the divisors are restored in log domain.
    log_norm = gm.log_scale
    flats = []
    for a in range(gm.n_nodes):
        flat = gm.flat_table(a)
        top = float(np.max(np.abs(flat)))
        if top == 0.0:
            return -np.inf, 0
        log_norm += np.log(top)
        flats.append(flat / top)

    total = 0.0
    n_cfg = 1 << m
    for start in range(0, n_cfg, _CHUNK):
        stop = min(start + _CHUNK, n_cfg)
        c = np.arange(start, stop, dtype=np.int64)
        mass = np.ones(stop - start)
        for a in range(gm.n_nodes):
            order = gm.local_order[a]
            d = len(order)
            idx = np.zeros(stop - start, dtype=np.int64)
            for pos, e in enumerate(order):
                w = 1 << (d - 1 - pos)
                if mask.is_free(e):
                    idx += ((c >> shift[e]) & 1) * w
                elif mask.value(e) == 1:
                    idx += w
            vals = flats[a][idx]
            if reject_negative and np.any(vals < 0):
                raise NegativeMass(
                    "negative configuration mass; use signed_log_partition "
                    "for gauge-transformed models"
                )
            mass *= vals
        total += float(np.sum(mass))
    if total == 0.0:
        return -np.inf, 0
    return float(np.log(abs(total)) + log_norm), (1 if total > 0 else -1)


def exact_log_partition(gm: ForneyGM, mask: ConditioningMask | None = None,
                        max_free_edges: int = DEFAULT_ENUM_CAP) -> float:
    """Brute-force log partition function over the mask's free edges.

    Raises NegativeMass if any enumerated configuration has negative mass
    (valid-probability models only; see signed_log_partition otherwise).
    """
    log_abs, _sign = _enumeration_sum(gm, mask, max_free_edges, True)
    return log_abs


def signed_log_partition(gm: ForneyGM, mask: ConditioningMask | None = None,
                         max_free_edges: int = DEFAULT_ENUM_CAP
                         ) -> tuple[float, int]:
    """Signed configuration sum as (log|S|, sign); sign 0 means S == 0."""
    return _enumeration_sum(gm, mask, max_free_edges, False)


# ---------------------------------------------------------------------------
# Conditioning
# ---------------------------------------------------------------------------

def condition(gm: ForneyGM, mask: ConditioningMask) -> ForneyGM:
    """Clamp edges per the mask and return the reduced model.

    Clamped edges are removed (remaining edges renumbered in ascending
    order of their old ids); node tables are sliced at the clamped values.
    Fully-clamped nodes survive as arity-0 scalar tables so that signs and
    zeros are represented faithfully.  The partition function of the result
    equals the masked configuration sum over the original model.
    """
    if not mask.clamped:
        raise ValueError("mask must clamp at least one edge")
    keep = mask.free_edges(gm.n_edges)
    new_id = {e: i for i, e in enumerate(keep)}

    new_orders: list[list[int]] = []
    new_tables: list[np.ndarray] = []
    for a in range(gm.n_nodes):
        order = list(gm.local_order[a])
        tab = gm.tables[a]
        for pos in reversed(range(len(order))):
            e = order[pos]
            if not mask.is_free(e):
                tab = np.take(tab, mask.value(e), axis=pos)
                order.pop(pos)
        new_orders.append([new_id[e] for e in order])
        new_tables.append(np.asarray(tab))

    new_edges = [gm.edges[e] for e in keep]
    return ForneyGM(new_edges, new_orders, new_tables,
                    log_scale=gm.log_scale, transformed=gm.transformed,
                    allow_zero_tables=True)


# ---------------------------------------------------------------------------
# Factor-graph conversion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorGraph:
    """Bipartite factor-graph model over binary variables.

    ``factors`` holds (variable ids, table) pairs; tables follow the same
    big-endian convention over the factor's variable order.
    """

    n_vars: int
    factors: tuple[tuple[tuple[int, ...], np.ndarray], ...]

    def __init__(self, n_vars: int, factors: Iterable[tuple[Sequence[int], np.ndarray]]):
        object.__setattr__(self, "n_vars", int(n_vars))
        norm = []
        for vs, tab in factors:
            vs = tuple(int(v) for v in vs)
            arr = np.asarray(tab, dtype=float).reshape((2,) * len(vs))
            norm.append((vs, arr))
        object.__setattr__(self, "factors", tuple(norm))
        degree = [0] * self.n_vars
        for vs, tab in self.factors:
            if len(set(vs)) != len(vs):
                raise ValueError("factor with repeated variable")
            if not vs:
                raise ValueError("factor must touch at least one variable")
            for v in vs:
                if not (0 <= v < self.n_vars):
                    raise ValueError(f"unknown variable id {v}")
                degree[v] += 1
        if any(d == 0 for d in degree):
            raise ValueError("every variable must appear in some factor")

    def to_json_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "factors": [
                {"vars": list(vs), "table": [float(x) for x in tab.reshape(-1)]}
                for vs, tab in self.factors
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FactorGraph":
        return cls(
            data["n_vars"],
            [(f["vars"], np.asarray(f["table"], dtype=float)) for f in data["factors"]],
        )


def factor_to_forney(fg: FactorGraph) -> ForneyGM:
    """Convert a factor graph to an equivalent Forney-style model.

    Forney nodes are the variables followed by the factors; every bipartite
    (variable, factor) incidence becomes one Forney edge.  A variable of
    degree d >= 2 becomes an equality factor (1 on the all-equal states);
    a degree-1 variable becomes the unconstrained table [1, 1].  The log
    partition function is preserved exactly.
    """
    n_vars = fg.n_vars
    edges: list[tuple[int, int]] = []
    var_edges: list[list[int]] = [[] for _ in range(n_vars)]
    factor_edges: list[list[int]] = []
    for f, (vs, _tab) in enumerate(fg.factors):
        f_node = n_vars + f
        mine = []
        for v in vs:
            e = len(edges)
            edges.append((v, f_node))
            var_edges[v].append(e)
            mine.append(e)
        factor_edges.append(mine)

    local_order: list[list[int]] = []
    tables: list[np.ndarray] = []
    for v in range(n_vars):
        d = len(var_edges[v])
        flat = np.zeros(2 ** d)
        flat[0] = 1.0
        flat[-1] = 1.0
        local_order.append(sorted(var_edges[v]))
        tables.append(flat)
    for f, (vs, tab) in enumerate(fg.factors):
        local_order.append(factor_edges[f])
        tables.append(np.asarray(tab))

    return ForneyGM(edges, local_order, tables)
