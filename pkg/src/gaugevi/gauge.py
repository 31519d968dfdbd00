"""Gauge transformations and the analytic single-cycle constructions.

A gauge assigns to every undirected edge {a, b} a conjugate pair of 2x2
matrices with G_ab^T G_ba = I.  Only the matrix of the primary direction
(lower node id -> higher node id) is stored; the conjugate is always
derived as (G_ab^T)^{-1}.  Contractions use the convention that the matrix
row indexes the new variable value and the column the old one.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEigenpair,
    Decomposable,
    MissingGauge,
    NonPositiveFactorAtWeightedEntry,
    NotAlternating,
)
from .model import ForneyGM

DET_FLOOR = 1e-8

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


# ---------------------------------------------------------------------------
# GaugeSet
# ---------------------------------------------------------------------------

class GaugeSet:
    """One free 2x2 matrix per edge, stored for the primary direction."""

    def __init__(self, primary: np.ndarray, det_floor: float = DET_FLOOR):
        arr = np.asarray(primary, dtype=float)
        if arr.ndim != 3 or arr.shape[1:] != (2, 2):
            raise ValueError("primary must have shape (n_edges, 2, 2)")
        dets = np.linalg.det(arr)
        if np.any(np.abs(dets) < det_floor):
            bad = int(np.argmin(np.abs(dets)))
            raise ValueError(
                f"edge {bad}: |det| = {abs(dets[bad]):.3e} below floor {det_floor:g}"
            )
        self.primary = arr.copy()
        self.primary.setflags(write=False)

    @property
    def n_edges(self) -> int:
        return self.primary.shape[0]

    @classmethod
    def identity(cls, n_edges: int) -> "GaugeSet":
        return cls(np.broadcast_to(np.eye(2), (n_edges, 2, 2)))

    @classmethod
    def random(cls, n_edges: int, rng: np.random.Generator,
               det_floor: float = 0.1) -> "GaugeSet":
        """Entries uniform on [-1, 1], resampled per edge until |det| >= floor."""
        mats = np.empty((n_edges, 2, 2))
        for e in range(n_edges):
            while True:
                m = rng.uniform(-1.0, 1.0, (2, 2))
                if abs(np.linalg.det(m)) >= det_floor:
                    mats[e] = m
                    break
        return cls(mats, det_floor=det_floor)

    @classmethod
    def from_params(cls, params: np.ndarray, **kw) -> "GaugeSet":
        params = np.asarray(params, dtype=float)
        if params.size % 4:
            raise ValueError("parameter vector length must be a multiple of 4")
        return cls(params.reshape(-1, 2, 2), **kw)

    def params(self) -> np.ndarray:
        """Row-major 4-per-edge parameter vector, edges ascending."""
        return self.primary.reshape(-1).copy()

    def matrix(self, edge: int) -> np.ndarray:
        return self.primary[edge]

    def conjugate(self, edge: int) -> np.ndarray:
        return np.linalg.inv(self.primary[edge].T)

    def compose(self, other: "GaugeSet") -> "GaugeSet":
        """Gauge equivalent to applying ``other`` first, then ``self``."""
        return GaugeSet(self.primary @ other.primary, det_floor=1e-300)

    def to_json_dict(self) -> dict:
        return {
            "gauges": [
                {"edge": e, "g": [float(x) for x in self.primary[e].reshape(-1)]}
                for e in range(self.n_edges)
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GaugeSet":
        entries = sorted(data["gauges"], key=lambda d: d["edge"])
        if [d["edge"] for d in entries] != list(range(len(entries))):
            raise ValueError("gauge edge ids must be contiguous from 0")
        return cls(np.array([np.asarray(d["g"], dtype=float).reshape(2, 2)
                             for d in entries]))


def conjugate_all(primary: np.ndarray) -> np.ndarray:
    """Batched (G^T)^{-1} for an (E, 2, 2) stack."""
    return np.linalg.inv(np.transpose(primary, (0, 2, 1)))


# ---------------------------------------------------------------------------
# Applying gauges
# ---------------------------------------------------------------------------

def _contract_mode(tensor: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    """new[.., i, ..] = sum_j mat[i, j] old[.., j, ..] along ``axis``."""
    t = np.moveaxis(tensor, axis, -1)
    t = t @ mat.T
    return np.moveaxis(t, -1, axis)


def side_matrix(primary: np.ndarray, edge: int, node: int,
                endpoints: tuple[int, int]) -> np.ndarray:
    """Matrix contracted into ``node``'s table for ``edge``."""
    u, v = endpoints
    if node == min(u, v):
        return primary[edge]
    return np.linalg.inv(primary[edge].T)


def apply_gauge(gm: ForneyGM, g: GaugeSet) -> ForneyGM:
    """Contract every node table with its side matrices; Z is invariant.

    The output is flagged transformed (entries may be negative) and carries
    log_scale through unchanged.
    """
    if g.n_edges != gm.n_edges:
        raise MissingGauge(
            f"gauge set covers {g.n_edges} edges, model has {gm.n_edges}"
        )
    new_tables = []
    for a in range(gm.n_nodes):
        t = np.asarray(gm.tables[a])
        for pos, e in enumerate(gm.local_order[a]):
            m = side_matrix(g.primary, e, a, gm.edges[e])
            t = _contract_mode(t, m, pos)
        new_tables.append(t)
    return ForneyGM(gm.edges, gm.local_order, new_tables,
                    log_scale=gm.log_scale, transformed=True,
                    allow_zero_tables=True)


def flip_gauge(gm: ForneyGM, edge: int) -> GaugeSet:
    """Identity everywhere except the swap matrix on ``edge``.

    The swap is self-conjugate (swap^T swap = I), so both directions carry
    it; applying it twice restores the model.
    """
    if not (0 <= edge < gm.n_edges):
        raise ValueError(f"edge {edge} out of range")
    primary = np.broadcast_to(np.eye(2), (gm.n_edges, 2, 2)).copy()
    primary[edge] = SWAP
    return GaugeSet(primary)


# ---------------------------------------------------------------------------
# Batched objective / gradient workspace
# ---------------------------------------------------------------------------

@dataclass
class _DegreeGroup:
    degree: int
    nodes: np.ndarray          # (m,) node ids
    tables: np.ndarray         # (m, 2, ..., 2)
    edge_ids: np.ndarray       # (m, degree)
    is_lower: np.ndarray       # (m, degree) bool


class GaugeWorkspace:
    """Precomputed batched layout for repeated objective evaluations.

    Nodes are grouped by degree so transforms and gradients run as a few
    einsum calls per (degree, mode) pair instead of per-node Python loops.
    """

    def __init__(self, gm: ForneyGM):
        self.gm = gm
        self.n_edges = gm.n_edges
        by_deg: dict[int, list[int]] = defaultdict(list)
        for a in range(gm.n_nodes):
            by_deg[gm.degree(a)].append(a)
        self.groups: list[_DegreeGroup] = []
        for d in sorted(by_deg):
            nodes = np.array(by_deg[d], dtype=int)
            tables = np.stack([np.asarray(gm.tables[a]) for a in nodes])
            edge_ids = np.array(
                [[gm.local_order[a][p] for p in range(d)] for a in nodes], dtype=int
            ).reshape(len(nodes), d)
            is_lower = np.zeros((len(nodes), d), dtype=bool)
            for i, a in enumerate(nodes):
                for p in range(d):
                    u, v = gm.edges[edge_ids[i, p]]
                    is_lower[i, p] = a == min(u, v)
            self.groups.append(_DegreeGroup(d, nodes, tables, edge_ids, is_lower))

    # -- plumbing ----------------------------------------------------------

    def conjugates(self, primary: np.ndarray, det_floor: float = DET_FLOOR):
        dets = primary[:, 0, 0] * primary[:, 1, 1] - primary[:, 0, 1] * primary[:, 1, 0]
        if np.any(np.abs(dets) < det_floor):
            return None, dets
        inv_t = np.empty_like(primary)
        inv_t[:, 0, 0] = primary[:, 1, 1]
        inv_t[:, 0, 1] = -primary[:, 1, 0]
        inv_t[:, 1, 0] = -primary[:, 0, 1]
        inv_t[:, 1, 1] = primary[:, 0, 0]
        return inv_t / dets[:, None, None], dets

    def _side_mats(self, group: _DegreeGroup, primary, conj) -> np.ndarray:
        mats = primary[group.edge_ids]                       # (m, d, 2, 2)
        if not group.is_lower.all():
            mats = np.where(group.is_lower[..., None, None], mats,
                            conj[group.edge_ids])
        return mats

    def transform(self, primary: np.ndarray, det_floor: float = DET_FLOOR):
        """Per-group transformed table stacks, or None if a det underflows."""
        conj, _ = self.conjugates(primary, det_floor)
        if conj is None:
            return None
        out = []
        for grp in self.groups:
            t = grp.tables
            if grp.degree:
                mats = self._side_mats(grp, primary, conj)
                for p in range(grp.degree):
                    t = np.moveaxis(t, 1 + p, -1)
                    t = np.einsum("mkj,m...j->m...k", mats[:, p], t)
                    t = np.moveaxis(t, -1, 1 + p)
            out.append(t)
        return out

    def min_entry(self, transformed) -> float:
        return min(float(t.min()) for t in transformed)

    def max_abs_entries(self, transformed) -> list[np.ndarray]:
        """Per-group (m,) max |entry| per node."""
        return [np.abs(t).reshape(t.shape[0], -1).max(axis=1) for t in transformed]

    def zero_config_log_mass(self, transformed) -> float:
        """log prod_a t_a(0,...,0) + log_scale; -inf if some entry <= 0."""
        total = self.gm.log_scale
        for t in transformed:
            z = t.reshape(t.shape[0], -1)[:, 0]
            if np.any(z <= 0):
                return -np.inf
            total += float(np.sum(np.log(z)))
        return total

    # -- weights -----------------------------------------------------------

    def point_mass_weights(self, scale: float = 1.0):
        """Weight ``scale`` on the all-zeros local configuration per node."""
        out = []
        for grp in self.groups:
            w = np.zeros_like(grp.tables)
            w.reshape(w.shape[0], -1)[:, 0] = scale
            out.append(w)
        return out

    def uniform_weights(self, scale: float):
        return [np.full_like(grp.tables, scale) for grp in self.groups]

    def product_weights(self, q1: np.ndarray):
        """Per-node product weights: w_a(x_a) = prod_e q_e(x_e)."""
        out = []
        for grp in self.groups:
            m = len(grp.nodes)
            w = np.ones((m,))
            for p in range(grp.degree):
                qe = q1[grp.edge_ids[:, p]]
                probs = np.stack([1.0 - qe, qe], axis=1)    # (m, 2)
                w = np.einsum("m...,mx->m...x", w, probs)
            out.append(w.reshape(grp.tables.shape))
        return out

    @staticmethod
    def add_weights(a, b):
        return [x + y for x, y in zip(a, b)]

    def weights_from_node_list(self, per_node):
        """Convert a per-node list of weight arrays into group layout."""
        out = []
        for grp in self.groups:
            ws = [np.asarray(per_node[a], dtype=float).reshape(grp.tables.shape[1:])
                  for a in grp.nodes]
            out.append(np.stack(ws) if ws else np.zeros_like(grp.tables))
        return out

    # -- objective ---------------------------------------------------------

    def objective(self, primary: np.ndarray, weights,
                  det_floor: float = DET_FLOOR) -> float:
        """sum_a sum_x w_a(x) log t_a(x); -inf when infeasible."""
        transformed = self.transform(primary, det_floor)
        if transformed is None:
            return -np.inf
        val = 0.0
        for t, w in zip(transformed, weights):
            mask = w > 0
            tv = t[mask]
            if np.any(tv <= 0):
                return -np.inf
            val += float(np.dot(w[mask], np.log(tv)))
        return val

    def objective_and_gradient(self, primary: np.ndarray, weights,
                               det_floor: float = DET_FLOOR):
        """Returns (value, grad (E,2,2)); (-inf, None) when infeasible.

        The gradient chains through the derived conjugate on the higher
        side via dG_ba = -G_ba dG_ab^T G_ba.
        """
        conj, _dets = self.conjugates(primary, det_floor)
        if conj is None:
            return -np.inf, None
        grad = np.zeros_like(primary)
        val = 0.0
        for grp, w in zip(self.groups, weights):
            if grp.degree == 0:
                tv = grp.tables[w > 0]
                if np.any(tv <= 0):
                    return -np.inf, None
                val += float(np.dot(w[w > 0], np.log(tv)))
                continue
            mats = self._side_mats(grp, primary, conj)
            t = grp.tables
            for p in range(grp.degree):
                t = np.moveaxis(t, 1 + p, -1)
                t = np.einsum("mkj,m...j->m...k", mats[:, p], t)
                t = np.moveaxis(t, -1, 1 + p)
            mask = w > 0
            tv = t[mask]
            if np.any(tv <= 0):
                return -np.inf, None
            val += float(np.dot(w[mask], np.log(tv)))
            r = np.where(mask, w / np.where(mask, t, 1.0), 0.0)
            m = t.shape[0]
            for p in range(grp.degree):
                rm = np.moveaxis(r, 1 + p, 1).reshape(m, 2, -1)
                tm = np.moveaxis(t, 1 + p, 1).reshape(m, 2, -1)
                s = np.einsum("mik,mjk->mij", rm, tm)
                minv = np.linalg.inv(mats[:, p])
                d_side = s @ np.transpose(minv, (0, 2, 1))
                lower = grp.is_lower[:, p]
                contrib = np.empty_like(d_side)
                if lower.any():
                    contrib[lower] = d_side[lower]
                if (~lower).any():
                    c = mats[:, p][~lower]
                    contrib[~lower] = -(c @ np.transpose(d_side[~lower], (0, 2, 1)) @ c)
                np.add.at(grad, grp.edge_ids[:, p], contrib)
        return val, grad


def gauge_objective_and_gradient(gm: ForneyGM, g: GaugeSet, weights):
    """Weighted log-factor objective and its gradient in the free parameters.

    ``weights`` is a per-node list of arrays over each node's local
    configurations (same indexing as the tables).  Raises
    NonPositiveFactorAtWeightedEntry when any positively weighted entry of
    the transformed model is <= 0 at this gauge point.
    """
    ws = GaugeWorkspace(gm)
    grouped = ws.weights_from_node_list(weights)
    val, grad = ws.objective_and_gradient(g.primary, grouped, det_floor=0.0)
    if grad is None or not np.isfinite(val):
        raise NonPositiveFactorAtWeightedEntry(
            "non-positive transformed factor entry carries positive weight"
        )
    return val, grad.reshape(-1)


def point_mass_weights(gm: ForneyGM) -> list[np.ndarray]:
    """Per-node indicator of the all-zeros local configuration."""
    out = []
    for a in range(gm.n_nodes):
        w = np.zeros_like(np.asarray(gm.tables[a]))
        w.reshape(-1)[0] = 1.0
        out.append(w)
    return out


def product_weights(gm: ForneyGM, q1: np.ndarray) -> list[np.ndarray]:
    """Per-node weights w_a(x_a) = prod_{e in a} q_e(x_e)."""
    out = []
    for a in range(gm.n_nodes):
        w = np.ones(())
        for e in gm.local_order[a]:
            w = np.multiply.outer(w, np.array([1.0 - q1[e], q1[e]]))
        out.append(w.reshape(np.asarray(gm.tables[a]).shape))
    return out


# ---------------------------------------------------------------------------
# Path / cycle structure helpers
# ---------------------------------------------------------------------------

def path_node_order(gm: ForneyGM) -> list[int] | None:
    """Node ids in path order if the model is a simple path, else None."""
    if gm.n_edges != gm.n_nodes - 1 or gm.n_nodes < 2:
        return None
    adj: dict[int, list[int]] = defaultdict(list)
    for u, v in gm.edges:
        adj[u].append(v)
        adj[v].append(u)
    degs = [len(adj[a]) for a in range(gm.n_nodes)]
    ends = [a for a in range(gm.n_nodes) if degs[a] == 1]
    if len(ends) != 2 or any(d > 2 or d == 0 for d in degs):
        return None
    order = [min(ends)]
    prev = None
    while len(order) < gm.n_nodes:
        nxt = [b for b in adj[order[-1]] if b != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def cycle_node_order(gm: ForneyGM) -> list[int] | None:
    """Node ids in cycle order if the model is one simple cycle, else None."""
    if gm.n_edges != gm.n_nodes or gm.n_nodes < 3:
        return None
    adj: dict[int, list[int]] = defaultdict(list)
    for u, v in gm.edges:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(adj[a]) != 2 for a in range(gm.n_nodes)):
        return None
    order = [0]
    prev = None
    while True:
        nxt = [b for b in adj[order[-1]] if b != prev]
        if not nxt:
            return None
        prev = order[-1]
        if nxt[0] == 0:
            break
        order.append(nxt[0])
        if len(order) > gm.n_nodes:
            return None
    return order if len(order) == gm.n_nodes else None


def _edge_between(gm: ForneyGM, a: int, b: int) -> int:
    for e, (u, v) in enumerate(gm.edges):
        if {u, v} == {a, b}:
            return e
    raise ValueError(f"no edge between nodes {a} and {b}")


def _oriented_matrix(gm: ForneyGM, node: int, prev_edge: int, next_edge: int
                     ) -> np.ndarray:
    """Degree-2 node table as a matrix indexed [x_prev, x_next]."""
    order = gm.local_order[node]
    t = np.asarray(gm.tables[node])
    if order == (prev_edge, next_edge):
        return t
    if order == (next_edge, prev_edge):
        return t.T
    raise ValueError(f"node {node} does not touch the expected edges")


# ---------------------------------------------------------------------------
# Analytic constructions
# ---------------------------------------------------------------------------

def _eigvec_2x2(mat: np.ndarray, lam: float) -> np.ndarray:
    a = mat - lam * np.eye(2)
    c1 = np.array([a[0, 1], -a[0, 0]])
    c2 = np.array([a[1, 1], -a[1, 0]])
    v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DegenerateEigenpair("eigenvector collapsed to zero")
    return v / n


def alternating_cycle_exact_gauge(gm: ForneyGM, tol: float = 1e-12) -> GaugeSet:
    """Closed-form gauge making a single alternating cycle concentrate all
    mass at the all-zeros configuration.

    Requires prod_i det(f_i) < 0 (NotAlternating otherwise), which gives the
    cycle product matrix real eigenvalues lam1 > 0 > lam2.  The transformed
    model has one factor equal to [[lam1+lam2, lam1], [-lam2, 0]] and the
    rest identity, so the zero-configuration mass is lam1 + lam2 = Z.
    """
    order = cycle_node_order(gm)
    if order is None:
        raise ValueError("model is not a single cycle of degree-2 factors")
    n = len(order)
    cyc_edges = [_edge_between(gm, order[i], order[(i + 1) % n]) for i in range(n)]
    mats = [
        _oriented_matrix(gm, order[i], cyc_edges[(i - 1) % n], cyc_edges[i])
        for i in range(n)
    ]
    dets = [float(np.linalg.det(m)) for m in mats]
    prod_det = float(np.prod(dets))
    if prod_det >= 0.0:
        raise NotAlternating(
            f"product of factor determinants is {prod_det:.3e} >= 0"
        )

    # Rotate so a (near-)singular factor, if any, sits at position 0; the
    # recursion below never inverts factor 0.
    k = int(np.argmin(np.abs(dets)))
    order = order[k:] + order[:k]
    cyc_edges = cyc_edges[k:] + cyc_edges[:k]
    mats = mats[k:] + mats[:k]

    m_prod = np.eye(2)
    for m in mats:
        m_prod = m_prod @ m
    tr = float(np.trace(m_prod))
    disc = tr * tr - 4.0 * float(np.linalg.det(m_prod))
    if disc <= 0.0:
        raise DegenerateEigenpair("cycle product matrix has no real eigenpair")
    root = float(np.sqrt(disc))
    lam1 = 0.5 * (tr + root)
    lam2 = 0.5 * (tr - root)
    if abs(lam1 - lam2) <= tol * max(1.0, abs(lam1) + abs(lam2)):
        raise DegenerateEigenpair(f"eigenvalues too close: {lam1} vs {lam2}")

    target = np.array([[lam1 + lam2, lam1], [-lam2, 0.0]])
    q1 = np.column_stack([_eigvec_2x2(m_prod, lam1), _eigvec_2x2(m_prod, lam2)])
    q2 = np.column_stack([_eigvec_2x2(target, lam1), _eigvec_2x2(target, lam2)])

    # h_t[i] is G_{a_i a_{i+1}}^T; recursion h_t[i-1] = f_i @ h_t[i].
    h_t: list[np.ndarray | None] = [None] * n
    h_t[n - 1] = q1 @ np.linalg.inv(q2)
    for i in range(n - 1, 0, -1):
        h_t[i - 1] = mats[i] @ h_t[i]

    primary = np.empty((gm.n_edges, 2, 2))
    primary[:] = np.eye(2)
    for i in range(n):
        e = cyc_edges[i]
        h = h_t[i].T                      # G at node order[i] toward order[i+1]
        u, v = gm.edges[e]
        if order[i] == min(u, v):
            primary[e] = h
        else:
            primary[e] = np.linalg.inv(h.T)
    return GaugeSet(primary, det_floor=0.0 + 1e-300)


@dataclass(frozen=True)
class LineJoin:
    """Result of joining a line's endpoints into a cycle.

    ``cycle`` is None on the degenerate path where every interior factor is
    non-invertible: the line factorizes and ``degenerate_log_z`` carries the
    directly computed log partition value instead.
    """

    cycle: ForneyGM | None
    degenerate_log_z: float | None
    flipped_edge: int | None


def line_to_alternating_cycle(gm: ForneyGM, det_tol: float = 1e-9) -> LineJoin:
    """Join a path model's endpoints into an alternating cycle with equal Z.

    A flip gauge is first applied on the earliest edge whose interior factor
    has a non-zero determinant whenever the count of negative-determinant
    interior factors is even.  The joined factor is the rank-one outer
    product of the two endpoint vectors.  Raises Decomposable when two or
    more (but not all) interior factors are non-invertible.
    """
    order = path_node_order(gm)
    if order is None:
        raise ValueError("model is not a simple path")
    n = len(order)
    interiors = order[1:-1]
    path_edges = [_edge_between(gm, order[i], order[i + 1]) for i in range(n - 1)]

    f_first = np.asarray(gm.tables[order[0]]).reshape(2).copy()
    f_last = np.asarray(gm.tables[order[-1]]).reshape(2).copy()
    mats = [
        _oriented_matrix(gm, order[i], path_edges[i - 1], path_edges[i]).copy()
        for i in range(1, n - 1)
    ]

    scales = [max(float(np.abs(m).max()), 1e-300) for m in mats]
    dets = [float(np.linalg.det(m)) for m in mats]
    singular = [abs(d) <= det_tol * s * s for d, s in zip(dets, scales)]

    if all(singular) or n == 2:
        chain = f_first.copy()
        log_acc = gm.log_scale
        for m in mats:
            chain = chain @ m
            top = float(np.abs(chain).max())
            if top == 0.0:
                return LineJoin(None, -np.inf, None)
            chain = chain / top
            log_acc += np.log(top)
        z = float(chain @ f_last)
        lz = log_acc + (np.log(z) if z > 0 else -np.inf)
        return LineJoin(None, lz, None)

    if sum(singular) >= 2:
        raise Decomposable(
            f"{sum(singular)} non-invertible interior factors; split the line"
        )

    flipped_edge = None
    if sum(1 for d, s in zip(dets, singular) if d < 0 and not s) % 2 == 0:
        # Flip on the edge before the first invertible interior factor; the
        # swap reverses that factor's determinant sign, making the negative
        # count odd.  Earlier factors are singular, so their sign is inert.
        j = singular.index(False)
        flipped_edge = path_edges[j]
        mats[j] = SWAP @ mats[j]
        if j == 0:
            f_first = f_first[::-1]
        else:
            mats[j - 1] = mats[j - 1] @ SWAP

    # Cycle layout: node 0 is the joined endpoint factor, nodes 1..m the
    # interiors in order; edge i connects nodes i and i+1, edge m closes the
    # cycle and carries the old last-endpoint variable.
    m = len(mats)
    cyc_edges = [(i, i + 1) for i in range(m)] + [(0, m)]
    joined_table = np.outer(f_last, f_first)     # [x_{edge m}, x_{edge 0}]
    local_order: list[list[int]] = [[m, 0]]
    tables: list[np.ndarray] = [joined_table]
    for i in range(m):
        local_order.append([i, i + 1])
        tables.append(mats[i])
    cycle = ForneyGM(cyc_edges, local_order, tables,
                     log_scale=gm.log_scale, transformed=gm.transformed,
                     allow_zero_tables=True)
    return LineJoin(cycle, None, flipped_edge)
