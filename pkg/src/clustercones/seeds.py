"""Seeds, exchange matrices, and mutation.

An ExchangeData holds the full (n+m) x (n+m) skew-symmetrizable exchange
matrix with the n mutable indices first, positive integer weights (the
symmetrizer diagonal), and display names. Entries between two frozen
indices are carried along untouched; mutation never reads them.

A Seed pairs an ExchangeData with a cluster of Laurent polynomials in the
initial variables. Mutation performs the exchange substitution with exact
Laurent division, which doubles as a proof that the new variable is again
a Laurent polynomial; a division failure here means the input matrix was
not what it claimed to be.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .laurent import LaurentPolynomial
from .linalg import rank, right_kernel_basis

__all__ = [
    "ExchangeData",
    "Seed",
    "YSeed",
    "mutate_matrix",
    "y_seed_from_cluster",
    "load_seed_file",
    "dump_seed_data",
]


def mutate_matrix(
    matrix: Sequence[Sequence[int]], k: int, n: int
) -> tuple[tuple[int, ...], ...]:
    """Matrix mutation at mutable index k (k < n). Frozen-frozen entries kept."""
    size = len(matrix)
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} is not mutable")
    out = []
    for i in range(size):
        row = list(matrix[i])
        if i == k:
            out.append(tuple(-x for x in row))
            continue
        bik = matrix[i][k]
        for j in range(size):
            if j == k:
                row[j] = -row[j]
            elif i >= n and j >= n:
                continue
            else:
                bkj = matrix[k][j]
                if bik > 0 and bkj > 0:
                    row[j] += bik * bkj
                elif bik < 0 and bkj < 0:
                    row[j] -= bik * bkj
        out.append(tuple(row))
    return tuple(out)


class ExchangeData:
    """Immutable exchange matrix with weights and names.

    matrix: full (n+m) x (n+m), mutable indices 0..n-1.
    weights: positive ints with w[i] * B[i][j] == -w[j] * B[j][i] whenever
    i or j is mutable.
    """

    __slots__ = ("n", "m", "matrix", "weights", "names")

    def __init__(
        self,
        n: int,
        m: int,
        matrix: Sequence[Sequence[int]],
        weights: Sequence[int] | None = None,
        names: Sequence[str] | None = None,
    ):
        size = n + m
        if len(matrix) != size or any(len(row) != size for row in matrix):
            raise ValueError("exchange matrix has wrong shape")
        self.n = n
        self.m = m
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self.weights = tuple(int(w) for w in (weights or [1] * size))
        if len(self.weights) != size or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per index")
        self.names = tuple(names) if names else tuple(
            [f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(m)]
        )
        if len(self.names) != size:
            raise ValueError("names length mismatch")
        for i in range(size):
            for j in range(size):
                if i >= n and j >= n:
                    continue
                if self.weights[i] * self.matrix[i][j] != -self.weights[j] * self.matrix[j][i]:
                    raise ValueError(
                        f"matrix is not skew-symmetrizable at ({i}, {j}) "
                        f"with the given weights"
                    )

    @property
    def size(self) -> int:
        return self.n + self.m

    def mutable_matrix(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return tuple(tuple(row[:n]) for row in self.matrix[:n])

    def extended_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Mutable rows, all columns: the part that drives the dynamics."""
        return self.matrix[: self.n]

    def mutate(self, k: int) -> "ExchangeData":
        return ExchangeData(
            self.n,
            self.m,
            mutate_matrix(self.matrix, k, self.n),
            self.weights,
            self.names,
        )

    def extended_rank(self) -> int:
        return rank(self.extended_matrix())

    def is_full_rank(self) -> bool:
        return self.extended_rank() == self.n

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Primitive integral basis of the right kernel of the extended matrix.

        Each kernel vector is a torus weight under which every exchange
        relation is homogeneous, so every cluster variable is homogeneous
        of some weight.
        """
        return right_kernel_basis(self.extended_matrix())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExchangeData):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.matrix))

    def __repr__(self) -> str:
        return f"<ExchangeData n={self.n} m={self.m}>"


class Seed:
    """Exchange data plus a cluster of Laurent polynomials."""

    __slots__ = ("exchange", "cluster", "history")

    def __init__(
        self,
        exchange: ExchangeData,
        cluster: Sequence[LaurentPolynomial],
        history: tuple[int, ...] = (),
    ):
        if len(cluster) != exchange.size:
            raise ValueError("cluster length mismatch")
        self.exchange = exchange
        self.cluster = tuple(cluster)
        self.history = history

    @classmethod
    def initial(cls, exchange: ExchangeData) -> "Seed":
        size = exchange.size
        cluster = [LaurentPolynomial.variable(size, i) for i in range(size)]
        return cls(exchange, cluster)

    def mutate(self, k: int) -> "Seed":
        """Exchange substitution at mutable index k."""
        ex = self.exchange
        if not 0 <= k < ex.n:
            raise IndexError(f"mutation index {k} is not mutable")
        size = ex.size
        pos = LaurentPolynomial.one(size)
        neg = LaurentPolynomial.one(size)
        row = ex.matrix[k]
        for j in range(size):
            b = row[j]
            if b > 0:
                pos = pos * self.cluster[j] ** b
            elif b < 0:
                neg = neg * self.cluster[j] ** (-b)
        new_var = (pos + neg).divide_exact(self.cluster[k])
        cluster = list(self.cluster)
        cluster[k] = new_var
        return Seed(ex.mutate(k), cluster, self.history + (k,))

    def mutate_sequence(self, ks: Sequence[int]) -> "Seed":
        seed = self
        for k in ks:
            seed = seed.mutate(k)
        return seed

    def __repr__(self) -> str:
        return f"<Seed n={self.exchange.n} m={self.exchange.m} depth={len(self.history)}>"


class YSeed:
    """Y-dynamics seed: one subtraction-free rational pair per mutable index.

    Values are (numerator, denominator) pairs of Laurent polynomials in
    whatever ambient variables the caller chose; equality of values is
    decided by cross-multiplication, so pairs need not be reduced.
    """

    __slots__ = ("exchange", "values", "history")

    def __init__(
        self,
        exchange: ExchangeData,
        values: Sequence[tuple[LaurentPolynomial, LaurentPolynomial]],
        history: tuple[int, ...] = (),
    ):
        if len(values) != exchange.n:
            raise ValueError("one y-value per mutable index required")
        self.exchange = exchange
        self.values = tuple(values)
        self.history = history

    def mutate(self, k: int) -> "YSeed":
        ex = self.exchange
        if not 0 <= k < ex.n:
            raise IndexError(f"mutation index {k} is not mutable")
        yk_num, yk_den = self.values[k]
        new_values = []
        for i in range(ex.n):
            if i == k:
                new_values.append((yk_den, yk_num))
                continue
            num, den = self.values[i]
            b = ex.matrix[i][k]
            if b > 0:
                # y_i * (1 + y_k^-1)^(-b) = y_i * (y_k / (1 + y_k))^b
                num = num * yk_num**b
                den = den * (yk_num + yk_den) ** b
            elif b < 0:
                # y_i * (1 + y_k)^(-b)
                num = num * (yk_num + yk_den) ** (-b)
                den = den * yk_den ** (-b)
            new_values.append((num, den))
        return YSeed(ex.mutate(k), new_values, self.history + (k,))

    def mutate_sequence(self, ks: Sequence[int]) -> "YSeed":
        y = self
        for k in ks:
            y = y.mutate(k)
        return y

    def value_equal(self, i: int, other: tuple[LaurentPolynomial, LaurentPolynomial]) -> bool:
        num, den = self.values[i]
        onum, oden = other
        return num * oden == onum * den


def y_seed_from_cluster(seed: Seed) -> YSeed:
    """The y-values attached to a seed: y_i = prod_j cluster_j ^ B[i][j]."""
    ex = seed.exchange
    size = ex.size
    values = []
    for i in range(ex.n):
        num = LaurentPolynomial.one(size)
        den = LaurentPolynomial.one(size)
        for j in range(size):
            b = ex.matrix[i][j]
            if b > 0:
                num = num * seed.cluster[j] ** b
            elif b < 0:
                den = den * seed.cluster[j] ** (-b)
        values.append((num, den))
    return YSeed(ex, values)


def load_seed_file(source: str | dict) -> ExchangeData:
    """Read exchange data from a JSON seed description.

    Format: {"nodes": [{"name": str, "frozen": bool, "weight": int}, ...],
    "arrows": [{"from": name, "to": name, "mult": int}, ...]}. Arrows point
    from i to j with B[i][j] = mult > 0; the opposite entry is filled in
    from the weights and must come out integral. Mutable nodes are
    reordered before frozen ones, preserving relative order.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = source
    nodes = data["nodes"]
    names_in = [nd["name"] for nd in nodes]
    if len(set(names_in)) != len(names_in):
        raise ValueError("duplicate node names in seed file")
    order = [i for i, nd in enumerate(nodes) if not nd.get("frozen")] + [
        i for i, nd in enumerate(nodes) if nd.get("frozen")
    ]
    n = sum(1 for nd in nodes if not nd.get("frozen"))
    m = len(nodes) - n
    index = {nodes[old]["name"]: new for new, old in enumerate(order)}
    weights = [int(nodes[old].get("weight", 1)) for old in order]
    names = [nodes[old]["name"] for old in order]
    size = n + m
    mat = [[0] * size for _ in range(size)]
    seen: set[tuple[int, int]] = set()
    for arrow in data.get("arrows", []):
        try:
            i, j = index[arrow["from"]], index[arrow["to"]]
        except KeyError as exc:
            raise ValueError(f"arrow references unknown node {exc}") from None
        mult = int(arrow.get("mult", 1))
        if mult <= 0:
            raise ValueError("arrow multiplicity must be positive")
        if i == j:
            raise ValueError("loops are not allowed")
        mat[i][j] += mult
        seen.add((i, j))
    for i, j in list(seen):
        if (j, i) in seen:
            raise ValueError(
                f"two-cycle between {names[i]} and {names[j]} in seed file"
            )
        if i >= n and j >= n:
            mat[j][i] = -mat[i][j]
            continue
        back = Fraction(mat[i][j] * weights[i], weights[j])
        if back.denominator != 1:
            raise ValueError(
                f"arrow {names[i]} -> {names[j]}: weights do not symmetrize"
            )
        mat[j][i] = -int(back)
    return ExchangeData(n, m, mat, weights, names)


def dump_seed_data(exchange: ExchangeData) -> dict:
    """Inverse of load_seed_file, for certificates and caching."""
    nodes = [
        {
            "name": exchange.names[i],
            "frozen": i >= exchange.n,
            "weight": exchange.weights[i],
        }
        for i in range(exchange.size)
    ]
    arrows = []
    for i in range(exchange.size):
        for j in range(exchange.size):
            if exchange.matrix[i][j] > 0:
                arrows.append(
                    {"from": exchange.names[i], "to": exchange.names[j],
                     "mult": exchange.matrix[i][j]}
                )
    return {"nodes": nodes, "arrows": arrows}
