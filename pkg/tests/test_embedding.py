import itertools
from fractions import Fraction

import pytest

from chanmetric.embedding import (
    CubeWord,
    LinearEmbedding,
    PointEmbedding,
    brute_force_exact_embed,
    embed_points,
    embed_weight,
    exact_embed,
    induced_distance,
    padded_weight,
    pullback_distance,
    verify_embedding,
)
from chanmetric.errors import DimensionError, GuardExceeded, NotRealizableError, ValidationError
from chanmetric.orders import (
    Channel,
    DistanceMatrix,
    decoding_equivalent,
    matched,
    weight_to_distance,
)
from chanmetric.patterns import SubsetVector
from chanmetric.utils import popcount

OMEGA = SubsetVector.from_graded(3, [3, 2, 1, 3, 3, 2, 3])
H12 = ("111111110000", "000001111110", "000011000011")


def words(*texts):
    return tuple(CubeWord.from_string(text) for text in texts)


def test_cube_word_basics():
    word = CubeWord.from_string("110")
    assert word.bits == 0b011
    assert word.weight == 2
    assert word.support() == {1, 2}
    assert word.to_string() == "110"
    assert word.flip(3).to_string() == "111"
    assert CubeWord.from_positions(4, [1, 4]).to_string() == "1001"
    assert word.hamming(CubeWord.from_string("011")) == 2
    with pytest.raises(ValidationError):
        CubeWord.from_string("102")
    with pytest.raises(DimensionError):
        word ^ CubeWord.from_string("1")


def test_linear_embedding_requires_matching_lengths():
    with pytest.raises(DimensionError):
        LinearEmbedding(2, 3, words("110", "01"))
    with pytest.raises(DimensionError):
        LinearEmbedding(2, 2, words("11"))


def test_embed_weight_with_explicit_scaling():
    embedding = embed_weight(OMEGA, m=2, r="1/2")
    assert embedding.length == 12
    assert (embedding.m, embedding.k) == (2, 2)
    assert [word.weight for word in embedding.generators] == [8, 6, 4]
    assert embedding.weights() == OMEGA.scale(2).shift(2)
    pairwise = embedding.generators[0].hamming(embedding.generators[1])
    assert pairwise == 2 * OMEGA[0b011] + 2


def test_embed_weight_canonical_scaling():
    embedding = embed_weight(OMEGA)
    assert embedding.length == 17
    assert (embedding.m, embedding.k) == (4, 0)
    assert embedding.weights() == OMEGA.scale(4)
    assert verify_embedding(embedding, OMEGA)


def test_embed_weight_affine_law_holds_everywhere():
    for n in range(1, 5):
        omega = SubsetVector.of(n, [1 + (mask * 7) % 5 for mask in range(1, 1 << n)])
        embedding = embed_weight(omega)
        for mask in range(1, 1 << n):
            assert embedding.image(mask).weight == embedding.m * omega[mask] + embedding.k


def test_embed_weight_hamming_weight_is_identity():
    hamming = SubsetVector.of(3, [popcount(mask) for mask in range(1, 8)])
    embedding = embed_weight(hamming)
    assert embedding.length == 3
    assert (embedding.m, embedding.k) == (1, 0)
    assert [word.to_string() for word in embedding.generators] == ["100", "010", "001"]
    report = verify_embedding(embedding, hamming)
    assert report and (report.m, report.k) == (1, 0)


def test_embed_weight_rejects_bad_input():
    with pytest.raises(ValidationError):
        embed_weight(SubsetVector.of(2, [1, 0, 1]))
    with pytest.raises(NotRealizableError):
        embed_weight(OMEGA, m=1, r=0)


def test_verify_twelve_bit_witness():
    embedding = LinearEmbedding(3, 12, words(*H12))
    report = verify_embedding(embedding, OMEGA)
    assert report.ok
    assert (report.m, report.k) == (2, 2)
    assert report.order_preserved
    assert report.matches_declared


def test_verify_flipped_bit_reports_violation():
    generators = words(*H12)
    broken = LinearEmbedding(3, 12, (generators[0].flip(1), *generators[1:]))
    report = verify_embedding(broken, OMEGA)
    assert not report
    assert report.violations
    assert report.violations[0].label


def test_verify_detects_declared_mismatch():
    embedding = LinearEmbedding(3, 12, words(*H12), Fraction(3), Fraction(0))
    report = verify_embedding(embedding, OMEGA)
    assert report.ok
    assert not report.matches_declared
    assert report.notes


def test_verify_rejects_mismatched_target():
    embedding = LinearEmbedding(3, 12, words(*H12))
    with pytest.raises(DimensionError):
        verify_embedding(embedding, DistanceMatrix.from_rows([[0, 1], [1, 0]]))


def test_padded_weight():
    distance = DistanceMatrix.from_rows([[0, 2, 3], [2, 0, 5], [3, 5, 0]])
    padded = padded_weight(distance)
    assert padded.to_graded() == (1, 1, 1, 2, 3, 5, 1)


def test_embed_points_two_points():
    distance = DistanceMatrix.from_rows([[0, 1], [1, 0]])
    embedding = embed_points(distance)
    assert embedding.images[0].hamming(embedding.images[1]) == embedding.m + embedding.k
    assert verify_embedding(embedding, distance)


def test_embed_points_equilateral():
    distance = DistanceMatrix.from_rows([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    embedding = embed_points(distance)
    seen = {a.hamming(b) for a, b in itertools.combinations(embedding.images, 2)}
    assert len(seen) == 1


def test_embed_points_preserves_matchedness():
    channel = Channel.from_rows([["5/8", "3/16", "3/16"], ["1/4", "1/2", "1/4"], ["1/8", "2/8", "5/8"]])
    metric = DistanceMatrix.from_rows([[0, "3/2", 2], ["3/2", 0, "5/4"], [2, "5/4", 0]])
    embedding = embed_points(metric)
    induced = induced_distance(embedding.images)
    assert induced.entries[1][2] < induced.entries[0][1] < induced.entries[0][2]
    assert matched(channel, induced)
    assert verify_embedding(embedding, metric)


def test_embed_points_requires_semimetric():
    with pytest.raises(ValidationError):
        embed_points(DistanceMatrix.from_rows([[0, 0], [0, 0]]))


def test_pullback_is_decoding_equivalent():
    embedding = embed_weight(OMEGA, m=2, r="1/2")
    pulled = pullback_distance(embedding)
    target = weight_to_distance(OMEGA)
    assert decoding_equivalent(pulled, target)
    assert pulled.entries[0b011][0b010] == 2 * 3 + 2


def test_exact_embed_examples():
    path = exact_embed(DistanceMatrix.from_rows([[0, 1, 2], [1, 0, 1], [2, 1, 0]]))
    assert [word.to_string() for word in path.images] == ["11", "01", "00"]
    wide = exact_embed(DistanceMatrix.from_rows([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))
    assert [word.to_string() for word in wide.images] == ["101", "011", "000"]
    assert exact_embed(DistanceMatrix.from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])) is None
    assert exact_embed(DistanceMatrix.from_rows([[0, "1/2"], ["1/2", 0]])) is None
    single = exact_embed(DistanceMatrix.from_rows([[0]]))
    assert single.length == 0


def test_exact_embed_agrees_with_brute_force():
    for a, b, c in itertools.product(range(1, 4), repeat=3):
        distance = DistanceMatrix.from_rows([[0, a, b], [a, 0, c], [b, c, 0]])
        found = exact_embed(distance)
        assert (found is None) == (brute_force_exact_embed(distance) is None)
        if found is not None:
            assert induced_distance(found.images) == distance


def test_exact_embed_guard(monkeypatch):
    import chanmetric.embedding as embedding

    monkeypatch.setattr(embedding, "EXACT_MAX_N", 2)
    with pytest.raises(GuardExceeded):
        exact_embed(DistanceMatrix.from_rows([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))


def test_point_embedding_injectivity_note():
    embedding = PointEmbedding(2, 2, words("10", "10"))
    report = verify_embedding(embedding, DistanceMatrix.from_rows([[0, 1], [1, 0]]))
    assert not report.injective
    assert not report


def test_exact_embed_agrees_with_brute_force_on_four_points():
    pairs = list(itertools.combinations(range(4), 2))
    for values in itertools.product(range(1, 3), repeat=len(pairs)):
        rows = [[0] * 4 for _ in range(4)]
        for (i, j), value in zip(pairs, values):
            rows[i][j] = rows[j][i] = value
        distance = DistanceMatrix.from_rows(rows)
        found = exact_embed(distance)
        assert (found is None) == (brute_force_exact_embed(distance, max_length=4) is None)
        if found is not None:
            assert induced_distance(found.images) == distance


def test_exact_embed_requires_semimetric():
    with pytest.raises(ValidationError):
        exact_embed(DistanceMatrix.from_rows([[0, 0, 1], [0, 0, 1], [1, 1, 0]]))


def test_pullback_is_translation_invariant():
    for n in range(1, 5):
        weight = SubsetVector.of(n, [1 + (mask * 7) % 5 for mask in range(1, 1 << n)])
        pulled = pullback_distance(embed_weight(weight))
        size = 1 << n
        for u, v, w in itertools.product(range(size), repeat=3):
            assert pulled.entries[u][v] == pulled.entries[u ^ w][v ^ w]
        assert weight_to_distance(weight).entries[0][size - 1] == weight[size - 1]
