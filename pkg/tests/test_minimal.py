import itertools
import random

import pytest

from chanmetric.embedding import induced_distance, verify_embedding
from chanmetric.errors import GuardExceeded, ValidationError
from chanmetric.minimal import (
    OrderCone,
    branch_and_bound,
    build_ilp,
    build_points_ilp,
    cone_of,
    dimension_feasible,
    exhaustive_minimum,
    heuristic_minimize,
    inverse_sym_matrix,
    minimize_dimension,
    minimize_dimension_points,
    sym_matrix,
)
from chanmetric.orders import DistanceMatrix, decoding_equivalent
from chanmetric.patterns import SubsetVector, sym_transform
from chanmetric.simplex import Row

OMEGA = SubsetVector.from_graded(3, [3, 2, 1, 3, 3, 2, 3])


def test_sym_matrix_matches_transform():
    matrix = sym_matrix(3)
    x = SubsetVector.of(3, [1, 2, 3, 4, 5, 6, 7])
    image = [sum(a * v for a, v in zip(row, x.values)) for row in matrix]
    assert tuple(image) == sym_transform(x).values


def test_inverse_sym_matrix():
    for n in (1, 2, 3):
        matrix, inverse = sym_matrix(n), inverse_sym_matrix(n)
        size = len(matrix)
        for i, j in itertools.product(range(size), repeat=2):
            entry = sum(matrix[i][k] * inverse[k][j] for k in range(size))
            assert entry == (1 if i == j else 0)


def test_cone_of_example():
    cone = cone_of(OMEGA)
    assert cone.labels() == [["3"], ["2", "23"], ["1", "12", "13", "123"]]
    assert cone.contains(OMEGA.scale(5).shift(1))
    assert not cone.contains(SubsetVector.ones(3))
    assert len(cone_of(SubsetVector.ones(3)).classes) == 1
    chain = cone_of(SubsetVector.of(2, [1, 2, 3]))
    assert chain.classes == ((1,), (2,), (3,))
    with pytest.raises(ValidationError):
        cone_of(SubsetVector.of(2, [0, 1, 1]))


def test_minimize_dimension_f23_weight():
    result = minimize_dimension(OMEGA)
    assert result.n_star == 11
    assert result.x_star == SubsetVector.of(3, [3, 2, 2, 1, 1, 1, 1])
    assert result.incumbent_n == 17
    assert result.optimal
    assert result.embedding.length == 11
    assert cone_of(OMEGA).contains(result.embedding.weights())
    assert build_ilp(cone_of(OMEGA)).feasible(result.x_star)


def test_exhaustive_search_confirms_optimum():
    feasible = dimension_feasible(OMEGA)
    assert exhaustive_minimum(feasible, 3, 10) is None
    assert exhaustive_minimum(feasible, 3, 11) == SubsetVector.of(3, [3, 2, 2, 1, 1, 1, 1])


def test_minimize_small_weights():
    hamming = minimize_dimension(SubsetVector.of(2, [1, 1, 2]))
    assert hamming.n_star == 2
    assert hamming.x_star == SubsetVector.of(2, [1, 1, 0])
    single = minimize_dimension(SubsetVector.of(1, [7]))
    assert single.n_star == 1
    assert [word.to_string() for word in single.embedding.generators] == ["1"]


def test_minimize_agrees_with_exhaustive_on_two_bits():
    for values in itertools.product(range(1, 4), repeat=3):
        weight = SubsetVector.of(2, values)
        result = minimize_dimension(weight)
        assert exhaustive_minimum(dimension_feasible(weight), 2, result.n_star) == result.x_star


def test_heuristic_is_never_better():
    exact = minimize_dimension(OMEGA)
    heuristic = heuristic_minimize(OMEGA)
    assert heuristic.method == "heuristic"
    assert not heuristic.optimal
    assert heuristic.n_star >= exact.n_star
    assert dimension_feasible(OMEGA)(heuristic.x_star)


def test_heuristic_against_exact_on_random_weights():
    rng = random.Random(4)
    for _ in range(4):
        weight = SubsetVector.of(3, [rng.randint(1, 3) for _ in range(7)])
        exact = minimize_dimension(weight)
        heuristic = heuristic_minimize(weight)
        assert heuristic.n_star >= exact.n_star
        assert exact.n_star <= exact.incumbent_n
        assert cone_of(weight).contains(exact.embedding.weights())


def test_minimize_guards():
    with pytest.raises(GuardExceeded):
        minimize_dimension(SubsetVector.ones(5))
    with pytest.raises(ValidationError):
        minimize_dimension(SubsetVector.of(2, [1, 0, 1]))


def test_branch_and_bound_prefers_lexicographic_minimum():
    result = branch_and_bound([Row.of([2, 2], ">=", 3)], 2, [2, 0])
    assert result.x == (0, 2)
    assert result.nodes_explored >= 1


def test_order_cone_rejects_wrong_size():
    cone = OrderCone(2, ((1, 2), (3,)))
    assert not cone.contains(OMEGA)


def test_points_two_points():
    result = minimize_dimension_points(DistanceMatrix.from_rows([[0, 1], [1, 0]]))
    assert result.n_star == 1
    assert result.x_star == SubsetVector.of(2, [0, 1, 0])
    assert [word.to_string() for word in result.embedding.images] == ["0", "1"]


def test_points_equilateral_and_metric():
    equilateral = DistanceMatrix.from_rows([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    metric = DistanceMatrix.from_rows([[0, "3/2", 2], ["3/2", 0, "5/4"], [2, "5/4", 0]])
    for distance in (equilateral, metric):
        result = minimize_dimension_points(distance)
        assert result.n_star == 3
        induced = induced_distance(result.embedding.images)
        assert decoding_equivalent(induced, distance)
        assert build_points_ilp(distance).feasible(result.x_star)
        assert result.n_star <= result.incumbent_n


def test_points_single_point_and_guards():
    single = minimize_dimension_points(DistanceMatrix.from_rows([[0]]))
    assert single.n_star == 0
    with pytest.raises(ValidationError):
        minimize_dimension_points(DistanceMatrix.from_rows([[0, 0], [0, 0]]))
    five = [[0 if i == j else 1 for j in range(5)] for i in range(5)]
    with pytest.raises(GuardExceeded):
        minimize_dimension_points(DistanceMatrix.from_rows(five))


def test_verify_accepts_minimal_embedding_order():
    result = minimize_dimension(OMEGA)
    report = verify_embedding(result.embedding, OMEGA)
    assert report.order_preserved
