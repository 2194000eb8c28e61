"""Dynkin catalog, recognition, and the bipartite belt.

The belt construction mutates all sources of a bipartite seed at once,
repeatedly, for h+2 steps (h the Coxeter number), registering every
distinct cluster variable it meets. Variables are deduplicated by their
componentwise minimum exponent vector in the initial frame: min exponents
are additive under multiplication over a domain and take componentwise
minima under sums with positive coefficients, so they can be propagated
through mutation as pure integer vectors. In finite type the mutable part
of that vector (the negated denominator vector) is a complete invariant,
which is what makes the tropical mode sound; symbolic mode additionally
carries the full Laurent expansions and cross-checks the dedup.

Tropical mode exists because the deepest variables of an E8-size belt have
Laurent expansions with too many terms to multiply comfortably in pure
Python, while everything downstream (ratio cones, identification at
totally positive points, weight tables) only needs matrices, id schedules
and numeric walks.
"""

from __future__ import annotations

import heapq
from collections import deque
from fractions import Fraction
from typing import NamedTuple, Sequence

from .laurent import LaurentPolynomial
from .seeds import ExchangeData, mutate_matrix

__all__ = [
    "DynkinType",
    "NotFiniteTypeError",
    "catalog_exchange",
    "recognize_dynkin",
    "sources_of",
    "is_bipartite_orientation",
    "find_bipartite_seed_path",
    "BipartiteBelt",
]


class NotFiniteTypeError(ValueError):
    """The given exchange data is not of finite cluster type (or not supported)."""


_COXETER = {"A": None, "B": None, "C": None, "D": None, "E": None, "F": 12, "G": 6}


class DynkinType(NamedTuple):
    family: str
    rank: int

    @classmethod
    def from_name(cls, name: str) -> "DynkinType":
        name = name.strip().upper()
        if len(name) < 2 or name[0] not in "ABCDEFG" or not name[1:].isdigit():
            raise ValueError(f"cannot parse Dynkin type {name!r}")
        family, rank = name[0], int(name[1:])
        t = cls(family, rank)
        t.validate()
        return t

    def validate(self) -> None:
        family, rank = self
        ok = (
            (family == "A" and rank >= 1)
            or (family in ("B", "C") and rank >= 2)
            or (family == "D" and rank >= 4)
            or (family == "E" and rank in (6, 7, 8))
            or (family == "F" and rank == 4)
            or (family == "G" and rank == 2)
        )
        if not ok:
            raise ValueError(f"no finite type {family}{rank}")

    @property
    def coxeter_number(self) -> int:
        family, n = self
        if family == "A":
            return n + 1
        if family in ("B", "C"):
            return 2 * n
        if family == "D":
            return 2 * n - 2
        if family == "E":
            return {6: 12, 7: 18, 8: 30}[n]
        if family == "F":
            return 12
        return 6  # G2

    @property
    def num_belt_variables(self) -> int:
        """Mutable cluster variables in finite type: n(h+2)/2."""
        return self.rank * (self.coxeter_number + 2) // 2

    def tree_edges(self) -> list[tuple[int, int]]:
        family, n = self
        if family in ("A", "B", "C", "F", "G"):
            return [(i, i + 1) for i in range(n - 1)]
        if family == "D":
            return [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
        # E types: path 0..n-2, extra node n-1 hanging off node 2
        return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]

    def node_weights(self) -> tuple[int, ...]:
        family, n = self
        if family == "B":
            return (1,) * (n - 1) + (2,)
        if family == "C":
            return (2,) * (n - 1) + (1,)
        if family == "F":
            return (1, 1, 2, 2)
        if family == "G":
            return (3, 1)
        return (1,) * n

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def catalog_exchange(dynkin: DynkinType, frozen_count: int = 0) -> ExchangeData:
    """Bipartite seed for a Dynkin type, optionally with frozen attachments.

    Nodes are 2-colored with node 0 a source; an edge (i, j) with source s
    and sink d gets B[s][d] = w_d/g and B[d][s] = -w_s/g, g = gcd(w_s, w_d).
    Each of the first frozen_count mutable nodes x_i gets one frozen
    neighbor f_i with an arrow f_i -> x_i of strength 1.
    """
    dynkin.validate()
    n = dynkin.rank
    if not 0 <= frozen_count <= n:
        raise ValueError("frozen_count must be between 0 and the rank")
    weights = dynkin.node_weights()
    edges = dynkin.tree_edges()
    color = [-1] * n
    color[0] = 0
    queue = deque([0])
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if color[j] == -1:
                color[j] = 1 - color[i]
                queue.append(j)
    size = n + frozen_count
    mat = [[0] * size for _ in range(size)]
    from math import gcd

    for i, j in edges:
        s, d = (i, j) if color[i] == 0 else (j, i)
        g = gcd(weights[s], weights[d])
        mat[s][d] = weights[d] // g
        mat[d][s] = -(weights[s] // g)
    full_weights = list(weights)
    names = [f"x{i + 1}" for i in range(n)]
    for t in range(frozen_count):
        f = n + t
        mat[f][t] = 1
        mat[t][f] = -1
        full_weights.append(weights[t])
        names.append(f"f{t + 1}")
    return ExchangeData(n, frozen_count, mat, full_weights, names)


def _arms_from(adj: dict[int, list[int]], start: int, branch: int) -> int:
    length = 0
    prev, cur = branch, start
    while True:
        length += 1
        nxt = [x for x in adj[cur] if x != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]


def recognize_dynkin(
    mutable_matrix: Sequence[Sequence[int]], weights: Sequence[int]
) -> DynkinType | None:
    """Classify the underlying weighted diagram, or None if not Dynkin.

    Only the undirected diagram matters, so this works on any orientation.
    The rank-2 double-edge type is reported as C2.
    """
    n = len(mutable_matrix)
    if n == 0:
        return None
    if n == 1:
        return DynkinType("A", 1)
    edges: list[tuple[int, int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            a, b = mutable_matrix[i][j], mutable_matrix[j][i]
            if (a == 0) != (b == 0):
                return None
            if a:
                if a * b >= 0:
                    return None
                m = -a * b
                if m not in (1, 2, 3):
                    return None
                edges.append((i, j, m))
    if len(edges) != n - 1:
        return None
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        return None
    mults = sorted(m for _, _, m in edges)
    degrees = [len(adj[i]) for i in range(n)]
    if mults and mults[-1] == 3:
        if n == 2 and mults == [3]:
            return DynkinType("G", 2)
        return None
    if mults and mults[-1] == 2:
        if mults.count(2) != 1 or max(degrees) > 2:
            return None
        if n == 2:
            return DynkinType("C", 2)
        wmin = min(weights[i] for i in range(n))
        heavy = sum(1 for i in range(n) if weights[i] > wmin)
        (di, dj, _) = next(e for e in edges if e[2] == 2)
        end_edge = min(degrees[di], degrees[dj]) == 1
        if n == 4 and not end_edge:
            return DynkinType("F", 4)
        if not end_edge:
            return None
        if heavy == 1:
            return DynkinType("B", n)
        if heavy == n - 1:
            return DynkinType("C", n)
        return None
    # simply laced
    branch_nodes = [i for i in range(n) if degrees[i] >= 3]
    if not branch_nodes:
        return DynkinType("A", n)
    if len(branch_nodes) > 1 or degrees[branch_nodes[0]] > 3:
        return None
    b = branch_nodes[0]
    arms = sorted(_arms_from(adj, x, b) for x in adj[b])
    if arms[0] == 1 and arms[1] == 1:
        return DynkinType("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return DynkinType("E", n) if n in (6, 7, 8) else None
    return None


def sources_of(matrix: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Mutable nodes with no incoming arrows from mutable nodes.

    Isolated mutable nodes qualify, every step; arrows to or from frozen
    nodes are ignored on purpose.
    """
    out = []
    for i in range(n):
        row = matrix[i]
        if all(row[j] >= 0 for j in range(n)):
            out.append(i)
    return tuple(out)


def is_bipartite_orientation(matrix: Sequence[Sequence[int]], n: int) -> bool:
    """Every mutable node is a source or a sink of the mutable subquiver."""
    for i in range(n):
        row = matrix[i]
        has_out = any(row[j] > 0 for j in range(n))
        has_in = any(row[j] < 0 for j in range(n))
        if has_out and has_in:
            return False
    return True


def find_bipartite_seed_path(
    exchange: ExchangeData, cap: int = 500_000
) -> tuple[int, ...]:
    """Mutation sequence from the given seed to a bipartite Dynkin seed.

    Best-first search on mutable exchange matrices, ordered by the number
    of nodes that are neither source nor sink; ties by path length, then
    discovery order, so the result is deterministic. Raises
    NotFiniteTypeError when the search space is exhausted or the cap is
    hit without finding one.
    """
    n = exchange.n
    weights = exchange.weights[:n]

    def defect(mat) -> int:
        bad = 0
        for i in range(n):
            row = mat[i]
            has_out = any(row[j] > 0 for j in range(n))
            has_in = any(row[j] < 0 for j in range(n))
            if has_out and has_in:
                bad += 1
        return bad

    start = exchange.mutable_matrix()
    visited = {start}
    counter = 0
    heap: list[tuple[int, int, int, tuple, tuple[int, ...]]] = [
        (defect(start), 0, counter, start, ())
    ]
    while heap:
        d, depth, _, mat, path = heapq.heappop(heap)
        if d == 0:
            if recognize_dynkin(mat, weights) is None:
                raise NotFiniteTypeError(
                    "reached a bipartite orientation that is not a Dynkin diagram"
                )
            return path
        for k in range(n):
            nxt = mutate_matrix(mat, k, n)
            if nxt in visited:
                continue
            visited.add(nxt)
            if len(visited) > cap:
                raise NotFiniteTypeError(
                    f"no bipartite seed within {cap} matrices; "
                    "the mutation class looks infinite"
                )
            counter += 1
            heapq.heappush(heap, (defect(nxt), depth + 1, counter, nxt, path + (k,)))
    raise NotFiniteTypeError("mutation class exhausted without a bipartite seed")


class BeltStep(NamedTuple):
    matrix: tuple[tuple[int, ...], ...]
    cluster_ids: tuple[int, ...]
    sources: tuple[int, ...]


class RegistryEntry:
    """One cluster variable met on the belt."""

    __slots__ = ("id", "poly", "minexp", "frozen", "first_pos", "source_pos", "partner")

    def __init__(self, id: int, poly: LaurentPolynomial | None, minexp: tuple[int, ...], frozen: bool, first_pos: tuple[int, int]):
        self.id = id
        self.poly = poly
        self.minexp = minexp
        self.frozen = frozen
        self.first_pos = first_pos
        self.source_pos: tuple[int, int] | None = None
        self.partner: int | None = None


class BeltError(RuntimeError):
    """The belt failed to close or revisited inconsistent state."""


class BipartiteBelt:
    """The source-mutation orbit of a bipartite finite-type seed.

    symbolic=None picks symbolic Laurent bookkeeping for small types
    (at most 50 belt variables) and tropical bookkeeping beyond that.
    """

    def __init__(self, exchange: ExchangeData, symbolic: bool | None = None):
        n, size = exchange.n, exchange.size
        mut = exchange.mutable_matrix()
        if not is_bipartite_orientation(mut, n):
            raise NotFiniteTypeError(
                "seed is not bipartite; mutate to a bipartite seed first"
            )
        dynkin = recognize_dynkin(mut, exchange.weights[:n])
        if dynkin is None:
            raise NotFiniteTypeError("bipartite seed is not a Dynkin orientation")
        self.exchange = exchange
        self.dynkin = dynkin
        self.h = dynkin.coxeter_number
        if symbolic is None:
            symbolic = dynkin.num_belt_variables <= 50
        self.symbolic = symbolic

        self.entries: list[RegistryEntry] = []
        self._by_minexp: dict[tuple[int, ...], int] = {}
        self.steps: list[BeltStep] = []
        self.period = 0

        cluster_polys: list[LaurentPolynomial] | None = None
        if symbolic:
            cluster_polys = [LaurentPolynomial.variable(size, i) for i in range(size)]
        minexps: list[tuple[int, ...]] = []
        ids: list[int] = []
        for i in range(size):
            unit = tuple(int(j == i) for j in range(size))
            minexps.append(unit)
            poly = cluster_polys[i] if symbolic else None
            ids.append(self._register(poly, unit, i >= n, (0, i)))

        # Types whose longest Weyl element is not -1 (A_n, D_odd, E6) come
        # back to the start seed after h+2 steps only up to the diagram
        # involution, so the strict labeled period can be 2(h+2).
        matrix = exchange.matrix
        state0 = (matrix, tuple(ids))
        steps: list[BeltStep] = []
        total = 2 * (self.h + 2)
        s = 0
        while True:
            state = (matrix, tuple(ids))
            if s > 0 and state == state0:
                self.period = s
                break
            if s >= total:
                raise BeltError(
                    f"belt did not close after {total} steps; "
                    "input is not finite type"
                )
            srcs = sources_of(matrix, n)
            steps.append(BeltStep(matrix, tuple(ids), srcs))
            for k in srcs:
                row = matrix[k]
                pos_me = [0] * size
                neg_me = [0] * size
                for j in range(size):
                    b = row[j]
                    if b > 0:
                        for c in range(size):
                            pos_me[c] += b * minexps[j][c]
                    elif b < 0:
                        for c in range(size):
                            neg_me[c] += (-b) * minexps[j][c]
                new_minexp = tuple(
                    min(p, q) - m for p, q, m in zip(pos_me, neg_me, minexps[k])
                )
                new_poly = None
                if symbolic:
                    pos = LaurentPolynomial.one(size)
                    neg = LaurentPolynomial.one(size)
                    for j in range(size):
                        b = row[j]
                        if b > 0:
                            pos = pos * cluster_polys[j] ** b
                        elif b < 0:
                            neg = neg * cluster_polys[j] ** (-b)
                    new_poly = (pos + neg).divide_exact(cluster_polys[k])
                    if new_poly.min_exponents() != new_minexp:
                        raise BeltError("tropical min-exponent bookkeeping diverged")
                gamma = ids[k]
                new_id = self._register(new_poly, new_minexp, False, (s + 1, k))
                entry = self.entries[gamma]
                if entry.source_pos is None:
                    entry.source_pos = (s, k)
                    entry.partner = new_id
                ids[k] = new_id
                minexps[k] = new_minexp
                if symbolic:
                    cluster_polys[k] = self.entries[new_id].poly
                matrix = mutate_matrix(matrix, k, n)
            s += 1
        if total % self.period != 0:
            raise BeltError(
                f"belt period {self.period} does not divide 2(h+2) = {total}"
            )
        self.steps = steps
        self.seed_count = len({frozenset(st.cluster_ids) for st in steps})

        self.mutable_ids = [e.id for e in self.entries if not e.frozen]
        self.frozen_ids = [e.id for e in self.entries if e.frozen]
        expected = dynkin.num_belt_variables
        if len(self.mutable_ids) != expected:
            raise BeltError(
                f"registry holds {len(self.mutable_ids)} mutable variables, "
                f"expected {expected} for type {dynkin}"
            )
        for mid in self.mutable_ids:
            if self.entries[mid].source_pos is None:
                raise BeltError(f"variable {mid} never sat at a source")
        self.display_names: dict[int, str] = {}
        for i in range(size):
            self.display_names[i] = exchange.names[i]
        self._frames: dict[int, dict[int, LaurentPolynomial]] = {}

    # registry helpers

    def _register(
        self,
        poly: LaurentPolynomial | None,
        minexp: tuple[int, ...],
        frozen: bool,
        pos: tuple[int, int],
    ) -> int:
        known = self._by_minexp.get(minexp)
        if known is not None:
            if poly is not None and self.entries[known].poly != poly:
                raise BeltError("two distinct variables share a denominator vector")
            return known
        new_id = len(self.entries)
        self.entries.append(RegistryEntry(new_id, poly, minexp, frozen, pos))
        self._by_minexp[minexp] = new_id
        return new_id

    @property
    def n(self) -> int:
        return self.exchange.n

    @property
    def m(self) -> int:
        return self.exchange.m

    @property
    def row_order(self) -> list[int]:
        """Registry ids in U-matrix row order: mutable first, then frozen."""
        return self.mutable_ids + self.frozen_ids

    def step(self, s: int) -> BeltStep:
        return self.steps[s % self.period]

    def poly(self, id: int) -> LaurentPolynomial:
        p = self.entries[id].poly
        if p is None:
            raise BeltError("symbolic expansions disabled for this belt")
        return p

    def dvector(self, id: int) -> tuple[int, ...]:
        """Negated min exponents over the initial mutable coordinates."""
        return tuple(-v for v in self.entries[id].minexp[: self.n])

    def root_label(self, id: int) -> str:
        return "x[" + ",".join(str(d) for d in self.dvector(id)) + "]"

    def name(self, id: int) -> str:
        got = self.display_names.get(id)
        if got is not None:
            return got
        return self.root_label(id)

    def id_by_name(self, name: str) -> int | None:
        for id, nm in self.display_names.items():
            if nm == name:
                return id
        for e in self.entries:
            if not e.frozen and self.root_label(e.id) == name:
                return e.id
        return None

    # walks

    def frame(self, s: int) -> dict[int, LaurentPolynomial]:
        """Registry polynomials re-expressed in the cluster of belt step s.

        The fresh frame's variable j is the cluster entry at node j of step
        s. Mutation schedules and matrices coincide with the stored belt,
        so new variables map to registry ids positionally.
        """
        if not self.symbolic:
            raise BeltError("frames need symbolic mode")
        s %= self.period
        cached = self._frames.get(s)
        if cached is not None:
            return cached
        size = self.exchange.size
        out: dict[int, LaurentPolynomial] = {}
        polys = [LaurentPolynomial.variable(size, j) for j in range(size)]
        for j, id in enumerate(self.step(s).cluster_ids):
            out[id] = polys[j]
        for r in range(self.period):
            st = self.step(s + r)
            nxt = self.step(s + r + 1)
            matrix = st.matrix
            for k in st.sources:
                row = matrix[k]
                pos = LaurentPolynomial.one(size)
                neg = LaurentPolynomial.one(size)
                for j in range(size):
                    b = row[j]
                    if b > 0:
                        pos = pos * polys[j] ** b
                    elif b < 0:
                        neg = neg * polys[j] ** (-b)
                new_poly = (pos + neg).divide_exact(polys[k])
                polys[k] = new_poly
                out[nxt.cluster_ids[k]] = new_poly
        self._frames[s] = out
        return out

    def value_walk(
        self, point: Sequence[Fraction | int], start_step: int = 0
    ) -> dict[int, Fraction]:
        """Exact values of every registry variable, given positive values
        for the cluster of belt step start_step (indexed by node)."""
        size = self.exchange.size
        if len(point) != size:
            raise ValueError("need one value per node")
        vals = [Fraction(v) for v in point]
        out: dict[int, Fraction] = {}
        for j, id in enumerate(self.step(start_step).cluster_ids):
            out[id] = vals[j]
        for r in range(self.period):
            st = self.step(start_step + r)
            nxt = self.step(start_step + r + 1)
            matrix = st.matrix
            for k in st.sources:
                row = matrix[k]
                pos = Fraction(1)
                neg = Fraction(1)
                for j in range(size):
                    b = row[j]
                    if b > 0:
                        pos *= vals[j] ** b
                    elif b < 0:
                        neg *= vals[j] ** (-b)
                newv = (pos + neg) / vals[k]
                vals[k] = newv
                out[nxt.cluster_ids[k]] = newv
        return out

    def weight_walk(self, alpha: Sequence[int | Fraction]) -> dict[int, Fraction]:
        """Torus weights of every registry variable for a kernel functional.

        alpha assigns weights to the initial cluster (by node). Raises
        ValueError if some exchange relation is not homogeneous, i.e. alpha
        is not in the kernel of the extended exchange matrix.
        """
        size = self.exchange.size
        if len(alpha) != size:
            raise ValueError("need one weight per node")
        wts = [Fraction(a) for a in alpha]
        out: dict[int, Fraction] = {}
        for j, id in enumerate(self.step(0).cluster_ids):
            out[id] = wts[j]
        for r in range(self.period):
            st = self.step(r)
            nxt = self.step(r + 1)
            matrix = st.matrix
            for k in st.sources:
                row = matrix[k]
                wpos = Fraction(0)
                wneg = Fraction(0)
                for j in range(size):
                    b = row[j]
                    if b > 0:
                        wpos += b * wts[j]
                    elif b < 0:
                        wneg += (-b) * wts[j]
                if wpos != wneg:
                    raise ValueError(
                        "weight functional is not in the exchange kernel "
                        f"(step {r}, node {k})"
                    )
                neww = wpos - wts[k]
                wts[k] = neww
                out[nxt.cluster_ids[k]] = neww
        return out

    # compatibility

    def compatibility_degree(self, gamma: int, omega: int) -> int:
        """Exponent of the gamma-variable in the denominator of omega,
        written in the cluster at gamma's source seed. Zero when the two
        share a cluster, and for omega == gamma."""
        entry = self.entries[gamma]
        if entry.frozen or self.entries[omega].frozen:
            raise ValueError("compatibility degrees are between mutable variables")
        assert entry.source_pos is not None
        s, node = entry.source_pos
        frame = self.frame(s)
        d = -frame[omega].min_exponents()[node]
        return max(d, 0)

    def __repr__(self) -> str:
        return (
            f"<BipartiteBelt {self.dynkin} h={self.h} period={self.period} "
            f"vars={len(self.mutable_ids)}+{len(self.frozen_ids)}>"
        )
