"""The big, little, and enhanced degree-ell^g isogeny graphs.

Vertices are the principally polarized classes for (p, g).  An isogeny
kernel from class i to class j is identified with the mod-ell column span
of a solution M of M^dagger H_i M = ell H_j (each kernel carries exactly
e_j solutions, one per automorphism of the target).  The three graphs:

* big: one directed edge per kernel; adjacency = Brandt matrix B_g(ell).
  Not a graph with opposites (the matrix is not symmetric in general).
* little: edges are kernel orbits under the source automorphism group,
  with weight the orbit stabilizer order and opposites via the dual
  isogeny M -> ell * M^{-1}; the weighted adjacency recovers B_g(ell).
* enhanced: the bipartite double cover of the little graph on 2h vertices
  with the type-exchanging fixed-point-free involution.

Edge weights follow the weighted-graph axioms: pairing respects weights,
and every edge weight divides the weight of its origin vertex.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .brandt import BrandtMatrix, brandt_matrix
from .hermitian import (
    PolarizedClassSet,
    QuatMatrix,
    automorphism_group,
    class_set,
    coords_to_matrix,
    congruence_blocks,
    quat_matrix_inverse,
    reduced_norm_mat,
)
from .ideals import colon_lattice
from .lattice import (
    GramForm,
    rref_mod,
    rref_mod_batch,
    short_vector_array,
    short_vectors,
)
from .quat import ConstructionError

__all__ = [
    "Edge",
    "WeightedGraph",
    "EnhancedGraph",
    "KernelLayer",
    "kernel_layer",
    "build_big",
    "build_little",
    "build_enhanced",
    "strip_half_edges",
    "is_connected",
    "validate_weight_axioms",
    "verify_enhanced",
    "to_dot",
    "graph_to_dict",
]


# ---------------------------------------------------------------------------
# graph data model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    origin: int
    target: int
    weight: int | None = None
    length: int | None = None
    opposite: int | None = None
    key: str = ""

    def is_half(self, index: int) -> bool:
        return self.opposite == index


@dataclass(frozen=True)
class WeightedGraph:
    kind: str
    p: int
    g: int
    ell: int
    vertex_weights: tuple[int, ...]
    edges: tuple[Edge, ...]
    has_opposites: bool
    allows_half_edges: bool

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_weights)

    def adjacency(self) -> list[list[int]]:
        n = self.n_vertices
        out = [[0] * n for _ in range(n)]
        for e in self.edges:
            out[e.origin][e.target] += 1
        return out

    def weighted_adjacency(self) -> list[list[Fraction]]:
        """Adw[i][j] = sum over edges i->j of w(v_i)/w(e)."""
        n = self.n_vertices
        out = [[Fraction(0)] * n for _ in range(n)]
        for e in self.edges:
            if e.weight is None:
                raise ValueError("graph has no weight function")
            out[e.origin][e.target] += Fraction(
                self.vertex_weights[e.origin], e.weight
            )
        return out

    def half_edge_indices(self) -> list[int]:
        return [t for t, e in enumerate(self.edges) if e.opposite == t]

    def __repr__(self) -> str:
        return (
            f"WeightedGraph({self.kind}, p={self.p}, g={self.g}, ell={self.ell}, "
            f"V={self.n_vertices}, E={len(self.edges)})"
        )


@dataclass(frozen=True)
class EnhancedGraph:
    """Bipartite double cover of the little graph with its involution."""

    graph: WeightedGraph
    little: WeightedGraph
    iota_vertices: tuple[int, ...]
    iota_edges: tuple[int, ...]

    @property
    def h(self) -> int:
        return self.graph.n_vertices // 2


def validate_weight_axioms(graph: WeightedGraph) -> None:
    """Opposite pairing and weight axioms; raises on violation."""
    if not graph.has_opposites:
        raise ValueError("graph has no opposite pairing to validate")
    for t, e in enumerate(graph.edges):
        if e.opposite is None:
            raise ConstructionError(f"edge {t} lacks an opposite")
        back = graph.edges[e.opposite]
        if back.opposite != t:
            raise ConstructionError(f"pairing of edge {t} is not an involution")
        if back.origin != e.target or back.target != e.origin:
            raise ConstructionError(f"opposite of edge {t} reverses wrongly")
        if e.weight is not None:
            if back.weight != e.weight:
                raise ConstructionError(f"edge {t} weight differs from its opposite")
            if graph.vertex_weights[e.origin] % e.weight != 0:
                raise ConstructionError(
                    f"edge {t} weight does not divide its origin weight"
                )
        if e.length is not None and back.length != e.length:
            raise ConstructionError(f"edge {t} length differs from its opposite")
        if e.opposite == t and not graph.allows_half_edges:
            raise ConstructionError(f"unexpected half-edge {t}")


# ---------------------------------------------------------------------------
# kernel layer: kernels, orbits, duals per ordered class pair
# ---------------------------------------------------------------------------


@dataclass
class KernelLayer:
    """All degree-ell^g kernels between class representatives.

    kernel ids are canonical mod-ell row-space fingerprints; ``gens`` holds
    the reduced generator rows acted on by the source automorphism group,
    and ``reps`` one underlying solution per kernel for dual computation.
    """

    classes: PolarizedClassSet
    ell: int
    counts: list[list[int]]
    kernels: dict[tuple[int, int], list[bytes]]
    gens: dict[tuple[int, int], dict[bytes, np.ndarray]]
    reps: dict[tuple[int, int], dict[bytes, object]]
    aut_mats: list[list[np.ndarray]]
    dual_fn: Callable

    def brandt(self) -> BrandtMatrix:
        return brandt_matrix(self.classes, self.ell)


def _generating_subset(mats: list[np.ndarray]) -> list[np.ndarray]:
    """Small generating set of a finite matrix group (greedy closure)."""
    order = len(mats)
    keys = sorted(range(order), key=lambda t: mats[t].tobytes())
    identity = None
    for m in mats:
        if np.array_equal(m, np.eye(m.shape[0], dtype=m.dtype)):
            identity = m
            break
    gens: list[np.ndarray] = []
    closure: dict[bytes, np.ndarray] = {}
    if identity is not None:
        closure[identity.tobytes()] = identity

    def close_over(gen_list):
        base = np.eye(mats[0].shape[0], dtype=np.int64)
        seen = {base.tobytes(): base}
        frontier = [base]
        while frontier:
            cur = frontier.pop()
            for gmat in gen_list:
                nxt = cur @ gmat
                kb = nxt.tobytes()
                if kb not in seen:
                    seen[kb] = nxt
                    frontier.append(nxt)
        return seen

    for t in keys:
        if mats[t].tobytes() in closure:
            continue
        gens.append(mats[t])
        closure = close_over(gens)
        if len(closure) == order:
            break
    if len(closure) != order:
        raise ConstructionError("failed to generate the automorphism group")
    return gens


def _kernel_scan(batch_iter, ell: int, e_target: int, pair_label: str):
    """Dedupe kernels from (generator-row batch, solution chunk) pairs.

    Returns (counts per kernel id, canonical generator rows, one underlying
    solution per kernel); asserts every kernel is hit exactly e_target
    times (the solutions over a kernel form one automorphism coset).
    """
    counts: dict[bytes, int] = {}
    gens: dict[bytes, np.ndarray] = {}
    reps: dict[bytes, np.ndarray] = {}
    for rows_batch, sol_chunk in batch_iter:
        reduced = rref_mod_batch(rows_batch, ell)
        for t in range(reduced.shape[0]):
            key = reduced[t].tobytes()
            counts[key] = counts.get(key, 0) + 1
            if key not in gens:
                gens[key] = reduced[t].copy()
                reps[key] = np.array(sol_chunk[t])
    for key, c in counts.items():
        if c != e_target:
            raise ConstructionError(
                f"kernel multiplicity {c} != e = {e_target} at {pair_label}"
            )
    return counts, gens, reps


def kernel_layer(classes: PolarizedClassSet, ell: int) -> KernelLayer:
    """Compute kernels, automorphism actions, and duals for (classes, ell)."""
    if classes.g == 1:
        return _layer_ideals(classes, ell)
    return _layer_forms(classes, ell)


# -- hermitian-form backend (g >= 2) ----------------------------------------


def _left_mul_matrix(order, mat: QuatMatrix) -> np.ndarray:
    """Integer matrix of x -> M x on O^g coordinates (columns)."""
    g = mat.g
    m = 4 * g
    out = np.zeros((m, m), dtype=np.int64)
    for t in range(g):
        for s in range(g):
            q = mat[t][s]
            if q.is_zero():
                continue
            for b in range(4):
                cs = order.coords(q * order.basis[b])
                for a in range(4):
                    if cs[a].denominator != 1:
                        raise ConstructionError("automorphism action not integral")
                    out[4 * t + a, 4 * s + b] = int(cs[a])
    return out


def _column_span_rows(order, sols: np.ndarray) -> np.ndarray:
    """Generator rows of the lattices M O^g for a batch of solutions.

    ``sols`` has shape (N, g, 4g); output (N, 4g, 4g): row u' = 4s+r of
    entry n holds the coordinates of (column s of M_n) * e_r.
    """
    g = sols.shape[1]
    m = 4 * g
    big = np.zeros((4, m, m), dtype=np.int64)
    rho = [np.array(order.right_mul_matrix(r), dtype=np.int64) for r in range(4)]
    for r in range(4):
        for t in range(g):
            big[r, 4 * t: 4 * t + 4, 4 * t: 4 * t + 4] = rho[r]
    # rows[n, s, r, :] = big[r] @ sols[n, s]
    tmp = np.einsum("rum,nsm->nsru", big, sols)
    return tmp.reshape(sols.shape[0], m, m)


def _layer_forms(classes: PolarizedClassSet, ell: int) -> KernelLayer:
    h = classes.h
    order = classes.classes[0].form.order
    forms = [c.form for c in classes.classes]
    es = classes.e_values

    aut_mats = []
    for hform in forms:
        mats = [_left_mul_matrix(order, u) for u in automorphism_group(hform)]
        aut_mats.append(_generating_subset(mats))

    counts = [[0] * h for _ in range(h)]
    kernels: dict[tuple[int, int], list[bytes]] = {}
    gens: dict[tuple[int, int], dict[bytes, np.ndarray]] = {}
    reps: dict[tuple[int, int], dict[bytes, object]] = {}
    for i in range(h):
        for j in range(h):
            def batches(hi=forms[i], hj=forms[j]):
                for block in congruence_blocks(hi, hj, ell):
                    for start in range(0, len(block), 65536):
                        chunk = block[start: start + 65536]
                        yield _column_span_rows(order, chunk), chunk

            cnts, gn, rp = _kernel_scan(batches(), ell, es[j], f"({i},{j})")
            counts[i][j] = sum(cnts.values()) // es[j] if cnts else 0
            kernels[(i, j)] = sorted(cnts)
            gens[(i, j)] = gn
            reps[(i, j)] = rp

    def dual_fn(i: int, j: int, sol) -> bytes:
        mat = coords_to_matrix(forms[i], np.asarray(sol))
        inv = quat_matrix_inverse(mat)
        dual = inv.scale(ell)
        if not dual.is_integral(order):
            raise ConstructionError("dual isogeny matrix is not integral")
        m = 4 * classes.g
        coords = np.zeros((classes.g, m), dtype=np.int64)
        for col in range(classes.g):
            for slot in range(classes.g):
                cs = order.coords(dual[slot][col])
                coords[col, 4 * slot: 4 * slot + 4] = [int(c) for c in cs]
        rows = _column_span_rows(order, coords[None, :, :])
        reduced = rref_mod_batch(rows, ell)
        return reduced[0].tobytes()

    return KernelLayer(
        classes=classes, ell=ell, counts=counts, kernels=kernels,
        gens=gens, reps=reps, aut_mats=aut_mats, dual_fn=dual_fn,
    )


# -- ideal backend (g = 1) ---------------------------------------------------


def _layer_ideals(classes: PolarizedClassSet, ell: int) -> KernelLayer:
    h = classes.h
    ideals = [c.ideal for c in classes.classes]
    es = classes.e_values
    order = ideals[0].order

    aut_mats = []
    for ideal in ideals:
        om = ideal.left_order()
        units = [
            om.from_coords(v)
            for v in short_vector_array(GramForm.from_doubled(om.gram), 1)
        ]
        mats = []
        for u in units:
            mat = np.zeros((4, 4), dtype=np.int64)
            for s, b in enumerate(ideal.basis):
                cs = ideal.coords(u * b)
                for a in range(4):
                    if cs[a].denominator != 1:
                        raise ConstructionError("unit action not integral on ideal")
                    mat[a, s] = int(cs[a])
            mats.append(mat)
        aut_mats.append(_generating_subset(mats))

    colon = {}
    tensors = {}
    for i in range(h):
        for j in range(h):
            cij = colon_lattice(ideals[i], ideals[j])
            colon[(i, j)] = cij
            T = np.zeros((4, 4, 4), dtype=np.int64)
            for u, cu in enumerate(cij.basis):
                for t, bt in enumerate(ideals[j].basis):
                    cs = ideals[i].coords(cu * bt)
                    for a in range(4):
                        if cs[a].denominator != 1:
                            raise ConstructionError("kernel generators not integral")
                        T[u, t, a] = int(cs[a])
            tensors[(i, j)] = T

    counts = [[0] * h for _ in range(h)]
    kernels: dict[tuple[int, int], list[bytes]] = {}
    gens: dict[tuple[int, int], dict[bytes, np.ndarray]] = {}
    reps: dict[tuple[int, int], dict[bytes, object]] = {}
    for i in range(h):
        for j in range(h):
            vecs = short_vectors(colon[(i, j)].norm_form(), ell)
            sols = np.array(vecs, dtype=np.int64).reshape(len(vecs), 4)
            rows = np.einsum("nu,uta->nta", sols, tensors[(i, j)])
            cnts, gn, rp = _kernel_scan([(rows, sols)], ell, es[j], f"({i},{j})")
            counts[i][j] = sum(cnts.values()) // es[j] if cnts else 0
            kernels[(i, j)] = sorted(cnts)
            gens[(i, j)] = gn
            reps[(i, j)] = rp

    def dual_fn(i: int, j: int, sol) -> bytes:
        cij = colon[(i, j)]
        lam = order.algebra.quaternion(0)
        for c, basis_elt in zip(sol, cij.basis):
            if c:
                lam = lam + basis_elt.scale(int(c))
        scale = ideals[j].norm / ideals[i].norm
        dual = lam.conjugate().scale(scale)
        cji = colon[(j, i)]
        cs = cji.coords(dual)
        if any(c.denominator != 1 for c in cs):
            raise ConstructionError("dual element is not integral in the colon lattice")
        dual_coords = np.array([[int(c) for c in cs]], dtype=np.int64)
        rows = np.einsum("nu,uta->nta", dual_coords, tensors[(j, i)])
        reduced = rref_mod_batch(rows, ell)
        return reduced[0].tobytes()

    return KernelLayer(
        classes=classes, ell=ell, counts=counts, kernels=kernels,
        gens=gens, reps=reps, aut_mats=aut_mats, dual_fn=dual_fn,
    )


# ---------------------------------------------------------------------------
# graph builders
# ---------------------------------------------------------------------------


def _check_prime_pair(classes: PolarizedClassSet, ell: int) -> None:
    from .quat import is_prime

    if not is_prime(ell) or ell == classes.p:
        raise ValueError("level must be a prime different from p")


_LAYER_CACHE: dict[tuple, KernelLayer] = {}


def _layer(classes: PolarizedClassSet, ell: int) -> KernelLayer:
    key = (classes.fingerprint(), ell)
    if key not in _LAYER_CACHE:
        _layer_cache_entry = kernel_layer(classes, ell)
        _LAYER_CACHE[key] = _layer_cache_entry
    return _LAYER_CACHE[key]


def build_big(classes: PolarizedClassSet, ell: int) -> WeightedGraph:
    """The multigraph with one directed edge per kernel; Ad = B_g(ell).

    Deliberately not a graph with opposites: its adjacency matrix is not
    symmetric in general, so no pairing is fabricated.
    """
    _check_prime_pair(classes, ell)
    layer = _layer(classes, ell)
    edges = []
    for i in range(classes.h):
        for j in range(classes.h):
            for kid in layer.kernels[(i, j)]:
                edges.append(Edge(
                    origin=i, target=j, weight=None, length=None,
                    opposite=None, key=_short_key(kid),
                ))
    return WeightedGraph(
        kind="big", p=classes.p, g=classes.g, ell=ell,
        vertex_weights=classes.e_values, edges=tuple(edges),
        has_opposites=False, allows_half_edges=False,
    )


def _orbit_partition(
    layer: KernelLayer, i: int, j: int
) -> list[list[bytes]]:
    """Orbits of the source automorphism group on kernels from i to j."""
    ell = layer.ell
    ids = layer.kernels[(i, j)]
    gens = layer.gens[(i, j)]
    id_set = set(ids)
    claimed: set[bytes] = set()
    orbits = []
    for kid in ids:
        if kid in claimed:
            continue
        orbit = {kid}
        frontier = [kid]
        while frontier:
            cur = frontier.pop()
            rows = gens[cur]
            for L in layer.aut_mats[i]:
                moved = (rows @ L.T) % ell
                new_id_rows = rref_mod([list(map(int, r)) for r in moved], ell)
                full = np.zeros_like(rows)
                for t, row in enumerate(new_id_rows):
                    full[t] = row
                new_id = full.tobytes()
                if new_id not in id_set:
                    raise ConstructionError("automorphism image left the kernel set")
                if new_id not in orbit:
                    orbit.add(new_id)
                    gens[new_id] = full
                    frontier.append(new_id)
        claimed |= orbit
        orbits.append(sorted(orbit))
    return orbits


def build_little(classes: PolarizedClassSet, ell: int) -> WeightedGraph:
    """Kernel orbits under source automorphisms, with dual-isogeny pairing.

    Edge weight = orbit stabilizer order (so weights divide vertex weights
    and the weighted adjacency recovers the Brandt matrix); length = weight.
    """
    _check_prime_pair(classes, ell)
    layer = _layer(classes, ell)
    h = classes.h
    es = classes.e_values

    edge_rows: list[dict] = []
    orbit_of_kernel: dict[tuple[int, int, bytes], int] = {}
    for i in range(h):
        for j in range(h):
            for orbit in _orbit_partition(layer, i, j):
                if es[i] % len(orbit) != 0:
                    raise ConstructionError("orbit size does not divide e(origin)")
                idx = len(edge_rows)
                edge_rows.append({
                    "origin": i, "target": j,
                    "weight": es[i] // len(orbit),
                    "kernels": orbit,
                })
                for kid in orbit:
                    orbit_of_kernel[(i, j, kid)] = idx

    opposite = [None] * len(edge_rows)
    for idx, row in enumerate(edge_rows):
        if opposite[idx] is not None:
            continue
        i, j = row["origin"], row["target"]
        kid = row["kernels"][0]
        dual_id = layer.dual_fn(i, j, layer.reps[(i, j)][kid])
        back = orbit_of_kernel.get((j, i, dual_id))
        if back is None:
            raise ConstructionError("dual kernel missing from the opposite pair")
        opposite[idx] = back
        if opposite[back] is None:
            opposite[back] = idx
        elif opposite[back] != idx:
            raise ConstructionError("dual pairing is not involutive")

    edges = []
    for idx, row in enumerate(edge_rows):
        edges.append(Edge(
            origin=row["origin"], target=row["target"],
            weight=row["weight"], length=row["weight"],
            opposite=opposite[idx], key=_short_key(row["kernels"][0]),
        ))
    graph = WeightedGraph(
        kind="little", p=classes.p, g=classes.g, ell=ell,
        vertex_weights=es, edges=tuple(edges),
        has_opposites=True, allows_half_edges=True,
    )
    validate_weight_axioms(graph)
    return graph


def build_enhanced(little: WeightedGraph) -> EnhancedGraph:
    """Double the little graph: types 0 and g, duals crossing the types.

    Each little edge e: i -> j appears as (h+i) -> j (same kernel class)
    and as i -> (h+j) (its image under the involution); opposites pair the
    two copies of e and its dual, so no edge is its own opposite even when
    e is a half-edge downstairs.
    """
    h = little.n_vertices
    T = len(little.edges)
    edges = []
    for t, e in enumerate(little.edges):
        edges.append(replace(
            e, origin=h + e.origin, target=e.target,
            opposite=T + little.edges[t].opposite, key=e.key + ":0",
        ))
    for t, e in enumerate(little.edges):
        edges.append(replace(
            e, origin=e.origin, target=h + e.target,
            opposite=little.edges[t].opposite, key=e.key + ":1",
        ))
    graph = WeightedGraph(
        kind="enhanced", p=little.p, g=little.g, ell=little.ell,
        vertex_weights=little.vertex_weights + little.vertex_weights,
        edges=tuple(edges),
        has_opposites=True, allows_half_edges=False,
    )
    validate_weight_axioms(graph)
    iota_vertices = tuple(
        (v + h) % (2 * h) for v in range(2 * h)
    )
    iota_edges = tuple(
        (t + T) % (2 * T) for t in range(2 * T)
    )
    enhanced = EnhancedGraph(
        graph=graph, little=little,
        iota_vertices=iota_vertices, iota_edges=iota_edges,
    )
    verify_enhanced(enhanced)
    return enhanced


def verify_enhanced(enh: EnhancedGraph) -> None:
    """Structural checks: bipartite, fixed-point-free involution, quotient."""
    g = enh.graph
    h = enh.h
    for t, e in enumerate(g.edges):
        side_o = e.origin // h
        side_t = e.target // h
        if side_o == side_t:
            raise ConstructionError("enhanced graph is not bipartite")
        if e.opposite == t:
            raise ConstructionError("enhanced graph has a half-edge")
    for v in range(2 * h):
        if enh.iota_vertices[v] == v:
            raise ConstructionError("involution fixes a vertex")
        if enh.iota_vertices[enh.iota_vertices[v]] != v:
            raise ConstructionError("vertex involution is not an involution")
    for t in range(len(g.edges)):
        it = enh.iota_edges[t]
        if it == t:
            raise ConstructionError("involution fixes an edge")
        if enh.iota_edges[it] != t:
            raise ConstructionError("edge involution is not an involution")
        e, ie = g.edges[t], g.edges[it]
        if (enh.iota_vertices[e.origin] != ie.origin
                or enh.iota_vertices[e.target] != ie.target):
            raise ConstructionError("involution is not a graph map")
        if ie.weight != e.weight:
            raise ConstructionError("involution changes weights")
        # involution commutes with the pairing
        if enh.iota_edges[e.opposite] != ie.opposite:
            raise ConstructionError("involution does not commute with opposites")
    # quotient by iota reproduces the little graph
    T = len(enh.little.edges)
    for t, le in enumerate(enh.little.edges):
        up = g.edges[t]
        if (up.origin % h, up.target % h) != (le.origin, le.target):
            raise ConstructionError("quotient misses a little edge")
        if up.weight != le.weight:
            raise ConstructionError("quotient changes weights")
        if g.edges[t].opposite % T != le.opposite:
            raise ConstructionError("quotient breaks the pairing")
    # covering map is a local bijection on outgoing edges
    out_up: dict[int, list] = {v: [] for v in range(2 * h)}
    for t, e in enumerate(g.edges):
        out_up[e.origin].append(t % T)
    out_down: dict[int, list] = {v: [] for v in range(h)}
    for t, le in enumerate(enh.little.edges):
        out_down[le.origin].append(t)
    for v in range(2 * h):
        if sorted(out_up[v]) != sorted(out_down[v % h]):
            raise ConstructionError("cover is not a local bijection at a vertex")


def strip_half_edges(graph: WeightedGraph) -> WeightedGraph:
    """Remove edges equal to their own opposite; weights/lengths inherited."""
    if not graph.has_opposites:
        raise ValueError("half-edges only make sense with an opposite pairing")
    keep = [t for t, e in enumerate(graph.edges) if e.opposite != t]
    renumber = {old: new for new, old in enumerate(keep)}
    edges = []
    for old in keep:
        e = graph.edges[old]
        edges.append(replace(e, opposite=renumber[e.opposite]))
    return WeightedGraph(
        kind=graph.kind + "*", p=graph.p, g=graph.g, ell=graph.ell,
        vertex_weights=graph.vertex_weights, edges=tuple(edges),
        has_opposites=True, allows_half_edges=False,
    )


def is_connected(graph: WeightedGraph) -> bool:
    """Reachability over the undirected support.

    For the strongly-regular big graph the directed and undirected notions
    agree because the weighted symmetry makes supports symmetric.
    """
    n = graph.n_vertices
    if n == 0:
        return True
    adj: list[set[int]] = [set() for _ in range(n)]
    for e in graph.edges:
        adj[e.origin].add(e.target)
        adj[e.target].add(e.origin)
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == n


def _short_key(kid: bytes) -> str:
    return hashlib.sha256(kid).hexdigest()[:12]


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def to_dot(graph: WeightedGraph) -> str:
    """Graphviz text: undirected for paired graphs, directed otherwise.

    Paired edges are drawn once per {e, opposite(e)} pair; half-edges are
    dashed self-loops (the self-paired mark).
    """
    lines = []
    name = f"{graph.kind}_p{graph.p}_g{graph.g}_l{graph.ell}".replace("*", "s")
    if graph.has_opposites:
        lines.append(f"graph {name} {{")
        connector = "--"
    else:
        lines.append(f"digraph {name} {{")
        connector = "->"
    for v, w in enumerate(graph.vertex_weights):
        lines.append(f'  v{v} [label="v{v} (e={w})"];')
    emitted = set()
    for t, e in enumerate(graph.edges):
        if graph.has_opposites:
            if t in emitted:
                continue
            emitted.add(t)
            emitted.add(e.opposite)
            label = f"w={e.weight}" if e.weight is not None else ""
            style = ' style=dashed' if e.opposite == t else ""
            lines.append(
                f'  v{e.origin} {connector} v{e.target} [label="{label}"{style}];'
            )
        else:
            lines.append(f"  v{e.origin} {connector} v{e.target};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: WeightedGraph) -> dict:
    """Full structure, including the opposite-pairing indices."""
    return {
        "kind": graph.kind,
        "p": graph.p,
        "g": graph.g,
        "ell": graph.ell,
        "has_opposites": graph.has_opposites,
        "allows_half_edges": graph.allows_half_edges,
        "vertices": [
            {"index": v, "weight": w}
            for v, w in enumerate(graph.vertex_weights)
        ],
        "edges": [
            {
                "index": t,
                "origin": e.origin,
                "target": e.target,
                "weight": e.weight,
                "length": e.length,
                "opposite": e.opposite,
                "half_edge": e.opposite == t,
                "key": e.key,
            }
            for t, e in enumerate(graph.edges)
        ],
    }
