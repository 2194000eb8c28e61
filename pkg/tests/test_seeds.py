"""Exchange data, cluster mutation, y-dynamics, seed files."""

import random

import pytest

from conftest import GR26_SEED

from clustercones.laurent import LaurentPolynomial
from clustercones.seeds import (
    ExchangeData,
    Seed,
    YSeed,
    dump_seed_data,
    load_seed_file,
    mutate_matrix,
    y_seed_from_cluster,
)


def P(nvars, text):
    return LaurentPolynomial.parse(nvars, text)


C2 = ExchangeData(2, 0, [[0, 1], [-2, 0]], weights=[2, 1])
A3_BIP = ExchangeData(3, 0, [[0, 1, 0], [-1, 0, -1], [0, 1, 0]])


def test_matrix_mutation_involution_and_known_values():
    assert mutate_matrix(C2.matrix, 0, 2) == ((0, -1), (2, 0))
    # path orientation 1 -> 2 -> 3 mutated in the middle closes a 3-cycle
    path = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))
    assert mutate_matrix(path, 1, 3) == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))
    rng = random.Random(3)
    for _ in range(50):
        mat = _random_exchange(rng)
        n = len(mat)
        k = rng.randrange(n)
        assert mutate_matrix(mutate_matrix(mat, k, n), k, n) == tuple(
            tuple(row) for row in mat
        )


def _random_exchange(rng, n=None):
    """Random skew-symmetric integer matrix (unit weights)."""
    n = n or rng.randint(2, 4)
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            b = rng.randint(-2, 2)
            mat[i][j] = b
            mat[j][i] = -b
    return tuple(tuple(row) for row in mat)


def test_exchange_data_validates_skew_symmetrizability():
    with pytest.raises(ValueError):
        ExchangeData(2, 0, [[0, 1], [-2, 0]])  # needs weights (2, 1)
    ok = ExchangeData(2, 0, [[0, 1], [-2, 0]], weights=[2, 1])
    assert ok.mutate(0).matrix == ((0, -1), (2, 0))


def test_frozen_frozen_entries_survive_mutation_untouched():
    ex = ExchangeData(1, 2, [[0, 1, -1], [-1, 0, 7], [1, 0, 0]])
    mut = ex.mutate(0)
    assert mut.matrix[1][2] == 7
    assert mut.matrix[1][0] == 1 and mut.matrix[0][1] == -1


def test_c2_cluster_variable_sequence():
    # alternating source mutations of the C2 bipartite seed
    seed = Seed.initial(C2)
    seed = seed.mutate(0)
    assert seed.cluster[0] == P(2, "x1^-1*x2 + x1^-1")
    seed = seed.mutate(1)
    assert seed.cluster[1] == P(2, "x1^-2*x2^-1 + 2*x1^-2 + x1^-2*x2 + x2^-1")
    seed = seed.mutate(0)
    assert seed.cluster[0] == P(2, "x1^-1*x2^-1 + x1^-1 + x1*x2^-1")
    seed = seed.mutate(1)
    assert seed.cluster[1] == P(2, "x2^-1 + x1^2*x2^-1")
    seed = seed.mutate(0)
    assert seed.cluster[0] == LaurentPolynomial.variable(2, 0)
    seed = seed.mutate(1)
    assert seed.cluster[1] == LaurentPolynomial.variable(2, 1)
    assert seed.exchange.matrix == C2.matrix


def test_exchange_relation_with_frozen_coefficients():
    # one mutable node with one frozen in-arrow: x * x' = 1 + f
    ex = ExchangeData(1, 1, [[0, -1], [1, 0]], names=["x1", "f1"])
    seed = Seed.initial(ex).mutate(0)
    assert seed.cluster[0] == P(2, "x1^-1*x2 + x1^-1")


def test_laurent_phenomenon_random_walks():
    # mutation in random directions always divides exactly
    rng = random.Random(17)
    for _ in range(25):
        mat = _random_exchange(rng, 3)
        ex = ExchangeData(3, 0, mat)
        seed = Seed.initial(ex)
        for _ in range(6):
            k = rng.randrange(3)
            seed = seed.mutate(k)  # raises NotDivisible on any failure
        assert all(not c.is_zero() for c in seed.cluster)


def test_extended_rank_and_kernel():
    ex = ExchangeData(1, 1, [[0, -1], [1, 0]], names=["x1", "f1"])
    assert ex.is_full_rank()
    basis = ex.kernel_basis()
    assert basis == [(-1, 0)] or basis == [(1, 0)]
    no_frozen = ExchangeData(2, 0, [[0, 1], [-1, 0]])
    assert no_frozen.is_full_rank()
    assert no_frozen.kernel_basis() == []


def test_y_mutation_is_an_involution():
    rng = random.Random(29)
    for _ in range(30):
        mat = _random_exchange(rng)
        n = len(mat)
        ex = ExchangeData(n, 0, mat)
        seed = Seed.initial(ex)
        y = y_seed_from_cluster(seed)
        k = rng.randrange(n)
        back = y.mutate(k).mutate(k)
        assert back.exchange.matrix == ex.matrix
        for i in range(n):
            assert y.value_equal(i, back.values[i])


def test_y_dynamics_intertwines_cluster_mutation():
    # y-values of a mutated seed = y-mutation of the seed's y-values
    rng = random.Random(31)
    cases = [C2, A3_BIP]
    for _ in range(10):
        cases.append(ExchangeData(3, 0, _random_exchange(rng, 3)))
    for ex in cases:
        seed = Seed.initial(ex)
        for depth in range(4):
            k = rng.randrange(ex.n)
            mutated = seed.mutate(k)
            lhs = y_seed_from_cluster(mutated)
            rhs = y_seed_from_cluster(seed).mutate(k)
            assert lhs.exchange.matrix == rhs.exchange.matrix
            for i in range(ex.n):
                assert lhs.value_equal(i, rhs.values[i])
            seed = mutated




def test_seed_file_round_trip_and_y_values():
    ex = load_seed_file(GR26_SEED)
    assert ex.n == 3 and ex.m == 6
    assert ex.names[:3] == ("P15", "P14", "P24")
    assert ex.is_full_rank()
    again = load_seed_file(dump_seed_data(ex))
    assert again.matrix == ex.matrix and again.names == ex.names

    y = y_seed_from_cluster(Seed.initial(ex))
    idx = {name: i for i, name in enumerate(ex.names)}
    # y at the P24 node multiplies the targets of its out-arrows over the
    # sources of its in-arrows
    num, den = y.values[idx["P24"]]
    size = ex.size
    p = {name: LaurentPolynomial.variable(size, i) for i, name in enumerate(ex.names)}
    assert num == p["P14"] * p["P23"]
    assert den == p["P12"] * p["P34"]


def test_seed_file_rejects_bad_input():
    with pytest.raises(ValueError):
        load_seed_file(
            {"nodes": [{"name": "a"}, {"name": "a"}], "arrows": []}
        )
    with pytest.raises(ValueError):
        load_seed_file(
            {
                "nodes": [{"name": "a"}, {"name": "b"}],
                "arrows": [
                    {"from": "a", "to": "b"},
                    {"from": "b", "to": "a"},
                ],
            }
        )
    with pytest.raises(ValueError):
        load_seed_file(
            {
                "nodes": [{"name": "a"}, {"name": "b", "weight": 3}],
                "arrows": [{"from": "a", "to": "b", "mult": 2}],
            }
        )
