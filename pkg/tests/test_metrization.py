import random
from fractions import Fraction

import pytest

from chanmetric.errors import MalformedCertificate, ValidationError
from chanmetric.metrization import (
    ZERO,
    Certificate,
    PairVar,
    Step,
    UnionFind,
    brute_force_metrizable,
    check_certificate,
    cycle_pairs,
    describe_certificate,
    extract_constraints,
    metrize,
)
from chanmetric.orders import (
    Channel,
    DistanceMatrix,
    bsc_channel,
    channel_equivalent,
    channel_from_distance,
    decoder_agreement_oracle,
    decoding_equivalent,
    hamming_distance,
    matched,
    to_metric,
)

CYCLIC = Channel.from_rows([["5/8", "1/8", "2/8"], ["2/8", "5/8", "1/8"], ["1/8", "2/8", "5/8"]])
METRIZABLE = Channel.from_rows([["5/8", "3/16", "3/16"], ["1/4", "1/2", "1/4"], ["1/8", "2/8", "5/8"]])
IDENTITY = Channel.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def _labels(steps):
    return {(step.source.label(), step.target.label()) for step in steps}


def test_pair_var_ordering():
    assert PairVar.of(2, 0) == PairVar(0, 2)
    assert PairVar(0, 1) < PairVar(0, 2) < PairVar(1, 2)
    assert PairVar(1, 2).label() == "{2,3}"
    with pytest.raises(ValueError):
        PairVar.of(1, 1)


def test_union_find():
    uf = UnionFind("abcd")
    uf.union("a", "b")
    uf.union("c", "d")
    assert uf.find("a") == uf.find("b")
    assert uf.find("a") != uf.find("c")
    uf.union("b", "d")
    assert len({uf.find(x) for x in "abcd"}) == 1


def test_extract_constraints_examples():
    cyclic = extract_constraints(CYCLIC)
    assert not cyclic.equalities
    assert _labels(cyclic.stricts) == {("{1,2}", "{1,3}"), ("{2,3}", "{1,2}"), ("{1,3}", "{2,3}")}

    graph = extract_constraints(METRIZABLE)
    assert _labels(graph.stricts) == {("{1,2}", "{1,3}"), ("{2,3}", "{1,2}"), ("{2,3}", "{1,3}")}

    identity = extract_constraints(IDENTITY)
    assert not identity.stricts
    assert len(identity.equalities) == 3
    assert identity.diagonal_strict


def test_extract_constraints_rejects_mode():
    with pytest.raises(ValidationError):
        extract_constraints(METRIZABLE, "ultrametric")


def test_metrize_cyclic_channel():
    for mode in ("distance", "semimetric", "metric"):
        result = metrize(CYCLIC, mode)
        assert not result.feasible
        certificate = result.certificate
        assert certificate.kind == "cycle"
        assert describe_certificate(certificate) == "{1,2} < {1,3} < {2,3} < {1,2}"
        assert cycle_pairs(certificate) == [PairVar(0, 1), PairVar(0, 2), PairVar(1, 2)]
        assert check_certificate(CYCLIC, certificate)


def test_metrize_metrizable_channel():
    result = metrize(METRIZABLE)
    assert result.feasible
    assert result.distance == DistanceMatrix.from_rows([[0, 2, 3], [2, 0, 1], [3, 1, 0]])
    assert result.class_values == {
        frozenset({PairVar(1, 2)}): 1,
        frozenset({PairVar(0, 1)}): 2,
        frozenset({PairVar(0, 2)}): 3,
    }
    assert matched(METRIZABLE, result.distance)
    assert decoder_agreement_oracle(METRIZABLE, result.distance).codes_checked == 7


def test_metrize_metric_mode():
    result = metrize(METRIZABLE, "metric")
    assert result.distance == DistanceMatrix.from_rows([[0, "5/3", 2], ["5/3", 0, "4/3"], [2, "4/3", 0]])
    assert matched(METRIZABLE, result.distance)

    identity = metrize(IDENTITY, "metric")
    assert set(identity.canonical.off_diagonal()) == {1}
    assert set(identity.distance.off_diagonal()) == {2}


def test_metrize_recovers_hamming_from_bsc():
    for bits in (2, 3):
        for p in ("1/8", "1/4"):
            result = metrize(bsc_channel(bits, p))
            assert result.feasible
            assert decoding_equivalent(result.distance, hamming_distance(bits))
    assert metrize(bsc_channel(2, "1/4")).canonical == hamming_distance(2)


def test_diagonal_certificates():
    skewed = Channel.from_rows([["1/4", "3/4"], ["1/2", "1/2"]])
    result = metrize(skewed)
    assert result.certificate.kind == "diagonal"
    assert result.certificate.index == 0
    assert check_certificate(skewed, result.certificate)

    flat = Channel.from_rows([["1/2", "1/2"], ["1/2", "1/2"]])
    relaxed = metrize(flat, "distance")
    assert relaxed.feasible
    assert relaxed.distance.entries[0][1] == 0
    strict = metrize(flat, "semimetric")
    assert strict.certificate.kind == "diagonal"
    assert strict.certificate.witness == (1, 0)
    assert check_certificate(flat, strict.certificate)
    assert "would be 0" in describe_certificate(strict.certificate)


def test_flipped_step_is_rejected():
    certificate = metrize(CYCLIC).certificate
    first = certificate.steps[0]
    flipped = Step(first.target, first.rel, first.source, first.column, (first.rows[1], first.rows[0]))
    broken = Certificate("cycle", (flipped, *certificate.steps[1:]))
    assert not check_certificate(CYCLIC, broken)


def test_equality_cycle_is_not_contradictory():
    a, b = PairVar(0, 1), PairVar(0, 2)
    steps = (Step(a, "=", b, 0, (1, 2)), Step(b, "=", a, 0, (2, 1)))
    assert not check_certificate(IDENTITY, Certificate("cycle", steps))


def test_malformed_certificates():
    with pytest.raises(MalformedCertificate):
        check_certificate(CYCLIC, Certificate("diagonal"))
    with pytest.raises(MalformedCertificate):
        check_certificate(CYCLIC, Certificate("cycle"))
    bad = Step(PairVar(0, 1), "<", PairVar(0, 2), 5, (1, 2))
    with pytest.raises(MalformedCertificate):
        check_certificate(CYCLIC, Certificate("cycle", (bad,)))


def _random_channel(rng, n):
    rows = []
    for _ in range(n):
        weights = [rng.randint(1, 3) for _ in range(n)]
        rows.append([Fraction(w, sum(weights)) for w in weights])
    return Channel.from_rows(rows)


def test_metrize_agrees_with_brute_force():
    rng = random.Random(2)
    for _ in range(300):
        channel = _random_channel(rng, rng.randint(1, 3))
        for mode in ("distance", "semimetric"):
            result = metrize(channel, mode)
            assert result.feasible == (brute_force_metrizable(channel, mode) is not None)
            if result.feasible:
                assert matched(channel, result.distance)
            else:
                assert check_certificate(channel, result.certificate)


def test_zero_node_label_in_description():
    step = Step(ZERO, "<", PairVar(0, 1), 0, (0, 1))
    assert describe_certificate(Certificate("cycle", (step,))).startswith("0 <")


def _random_semimetric(rng, n):
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            grid[i][j] = grid[j][i] = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    return DistanceMatrix.from_rows(grid)


def test_metrize_round_trips_through_constructed_channels():
    rng = random.Random(37)
    for _ in range(200):
        distance = _random_semimetric(rng, rng.randint(2, 6))
        for mode in ("distance", "semimetric", "metric"):
            result = metrize(channel_from_distance(distance), mode)
            assert result.feasible
            assert decoding_equivalent(result.distance, distance)


def test_canonical_distance_depends_only_on_channel_order():
    rng = random.Random(41)
    for _ in range(100):
        distance = _random_semimetric(rng, rng.randint(2, 6))
        first = channel_from_distance(distance)
        second = channel_from_distance(to_metric(distance))
        assert channel_equivalent(first, second)
        assert metrize(first).canonical == metrize(second).canonical


def test_certificates_are_confirmed_by_the_decoder_oracle():
    rng = random.Random(43)
    infeasible = 0
    for _ in range(120):
        n = rng.randint(2, 6)
        channel = _random_channel(rng, n)
        result = metrize(channel, "semimetric")
        if result.feasible:
            assert decoder_agreement_oracle(channel, result.distance)
            continue
        infeasible += 1
        assert check_certificate(channel, result.certificate)
        for _ in range(3):
            assert not decoder_agreement_oracle(channel, _random_semimetric(rng, n))
    assert infeasible > 0


def test_metrize_agrees_with_brute_force_on_four_symbols():
    rng = random.Random(47)
    for _ in range(8):
        channel = _random_channel(rng, 4)
        for mode in ("distance", "semimetric"):
            result = metrize(channel, mode)
            found = brute_force_metrizable(channel, mode)
            assert result.feasible == (found is not None)
            if found is not None:
                assert matched(channel, found)
