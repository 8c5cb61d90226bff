from fractions import Fraction

import numpy as np
import pytest

from conftest import random_complex
from l2limits.complexes import RootedComplex, SimplicialComplex, closure, rooted_at
from l2limits.encoding import canonical_code
from l2limits.errors import ValidationError
from l2limits.generators import fixtures, torus_tower
from l2limits.measures import (BallDistribution, RandomRootedComplex,
                               SupportPoint, ball_distribution, degree_truncate,
                               expected_p_degree, mass_transport_check,
                               measure_distance, non_unimodular_example,
                               standard_battery, total_variation,
                               uniform_rooting)


def weight_of(mu, predicate):
    return sum((pt.weight for pt in mu if predicate(pt)), Fraction(0))


def test_uniform_rooting_path3():
    mu = uniform_rooting(fixtures()["path3"])
    assert len(mu) == 2
    assert weight_of(mu, lambda pt: pt.rooted.p_degree(1) == 1) == Fraction(2, 3)
    assert weight_of(mu, lambda pt: pt.rooted.p_degree(1) == 2) == Fraction(1, 3)
    mu.validate()


def test_uniform_rooting_star():
    mu = uniform_rooting(fixtures()["star5"])
    assert sorted(pt.weight for pt in mu) == [Fraction(1, 6), Fraction(5, 6)]


def test_uniform_rooting_transitive_complexes():
    for cx in (fixtures()["cycle5"], fixtures()["torus4"], torus_tower(2, 6)):
        mu = uniform_rooting(cx)
        assert len(mu) == 1
        assert mu.points[0].weight == 1


def test_uniform_rooting_lands_in_components():
    mu = uniform_rooting(fixtures()["two_triangles"])
    assert len(mu) == 1
    assert len(mu.points[0].rooted.complex.vertices) == 3
    mixed = closure([(0, 1, 2), (5,)])
    mu = uniform_rooting(mixed)
    assert weight_of(mu, lambda pt: pt.rooted.p_degree(1) == 0) == Fraction(1, 4)
    assert weight_of(mu, lambda pt: pt.rooted.p_degree(1) == 2) == Fraction(3, 4)


def test_uniform_rooting_weights_are_vertex_counts():
    rng = np.random.default_rng(43)
    for _ in range(25):
        cx = random_complex(rng, 9)
        mu = uniform_rooting(cx)
        n = len(cx.vertices)
        assert sum(pt.weight for pt in mu) == 1
        for pt in mu:
            assert (pt.weight * n).denominator == 1
        mu.validate()


def test_support_point_and_law_validation():
    edge = closure([(0, 1)])
    with pytest.raises(ValidationError):
        SupportPoint(rooted_at(edge, 0), 0)
    with pytest.raises(ValidationError):
        RandomRootedComplex(())
    with pytest.raises(ValidationError):
        RandomRootedComplex((SupportPoint(rooted_at(edge, 0), Fraction(1, 2)),))
    mu = RandomRootedComplex.point_mass(rooted_at(edge, 0))
    mu.validate()
    assert mu.expect(lambda pt: pt.rooted.p_degree(1)) == 1
    # both roots of an edge are the same class: distinctness must fail
    twin = RandomRootedComplex((
        SupportPoint(rooted_at(edge, 0), Fraction(1, 2)),
        SupportPoint(rooted_at(edge, 1), Fraction(1, 2)),
    ))
    with pytest.raises(ValidationError):
        twin.validate()


def test_ball_distribution_cycles():
    mu6 = uniform_rooting(fixtures()["cycle6"])
    dist = ball_distribution(mu6, 1)
    assert dist.radius == 1
    assert len(dist) == 1
    assert next(iter(dist.values())) == 1
    dist.validate()
    mu5 = uniform_rooting(fixtures()["cycle5"])
    assert ball_distribution(mu5, 1) == dist  # same centered path
    assert ball_distribution(mu5, 2) != ball_distribution(mu6, 2)


def test_ball_distribution_path4():
    mu = uniform_rooting(fixtures()["path4"])
    dist = ball_distribution(mu, 1)
    assert sorted(dist.values()) == [Fraction(1, 2), Fraction(1, 2)]
    with pytest.raises(ValidationError):
        ball_distribution(mu, -1)


def test_ball_distribution_validate_rejects_non_balls():
    center = rooted_at(fixtures()["path3"], 1)
    bad = BallDistribution(0, {canonical_code(center): Fraction(1)})
    with pytest.raises(ValidationError):
        bad.validate()
    short = BallDistribution(0, {canonical_code(center.ball(0)): Fraction(1, 2)})
    with pytest.raises(ValidationError):
        short.validate()


def test_total_variation():
    a = {"x": Fraction(1, 2), "y": Fraction(1, 2)}
    b = {"y": Fraction(1, 2), "z": Fraction(1, 2)}
    assert total_variation(a, a) == 0
    assert total_variation(a, b) == Fraction(1, 2)
    assert total_variation(a, {"z": Fraction(1)}) == 1


def test_measure_distance_cycle_example():
    mu5 = uniform_rooting(fixtures()["cycle5"])
    mu6 = uniform_rooting(fixtures()["cycle6"])
    # balls agree through radius 1 and split at radius 2
    assert measure_distance(mu5, mu6, 1) == 0
    assert measure_distance(mu5, mu6, 2) == Fraction(1, 4)
    assert measure_distance(mu5, mu6, 3) == Fraction(1, 4) + Fraction(1, 8)
    assert measure_distance(mu5, mu5, 5) == 0
    assert measure_distance(mu6, mu5, 2) == Fraction(1, 4)


def test_measure_distance_hollow_vs_filled():
    hollow = uniform_rooting(fixtures()["hollow_triangle"])
    filled = uniform_rooting(fixtures()["filled_triangle"])
    assert measure_distance(hollow, filled, 0) == 0
    assert measure_distance(hollow, filled, 1) == Fraction(1, 2)
    with pytest.raises(ValidationError):
        measure_distance(hollow, filled, -1)


def test_measure_distance_triangle_inequality():
    rng = np.random.default_rng(47)
    laws = [uniform_rooting(random_complex(rng, 8)) for _ in range(6)]
    for a in laws[:4]:
        for b in laws[:4]:
            assert measure_distance(a, b, 2) == measure_distance(b, a, 2)
            for c in laws[:4]:
                assert (measure_distance(a, c, 2)
                        <= measure_distance(a, b, 2) + measure_distance(b, c, 2))


def test_battery_shape():
    battery = standard_battery()
    assert len(battery) == 12
    assert len({name for name, _ in battery}) == 12


def test_mass_transport_exact_on_fixtures():
    for name, cx in fixtures().items():
        mu = uniform_rooting(cx)
        for fn_name, fn in standard_battery():
            lhs, rhs, passed = mass_transport_check(mu, fn, tolerance=0)
            assert passed and lhs == rhs, (name, fn_name)


def test_mass_transport_exact_on_random_complexes():
    rng = np.random.default_rng(53)
    for _ in range(15):
        mu = uniform_rooting(random_complex(rng, 9))
        for fn_name, fn in standard_battery():
            result = mass_transport_check(mu, fn, tolerance=0)
            assert result.passed, fn_name


def test_mass_transport_known_values():
    mu = uniform_rooting(fixtures()["path3"])
    battery = dict(standard_battery())
    result = mass_transport_check(mu, battery["degree_at_self"])
    assert result.lhs == Fraction(4, 3)
    result = mass_transport_check(mu, battery["adjacency"])
    assert result.lhs == Fraction(4, 3)


def test_non_unimodular_example_fails_transport():
    mu, fn = non_unimodular_example()
    lhs, rhs, passed = mass_transport_check(mu, fn)
    assert not passed
    assert lhs == 1
    assert rhs == 0
    # the same function passes under honest uniform rooting
    fixed = mass_transport_check(uniform_rooting(mu.points[0].rooted.complex), fn)
    assert fixed.passed


def test_degree_truncate_star():
    out = degree_truncate(fixtures()["star5"], 3)
    assert out.max_degree() == 3
    assert sorted(out.vertices) == [0, 1, 2, 3, 4, 5]
    assert out.faces(1) == ((0, 3), (0, 4), (0, 5))


def test_degree_truncate_filled_triangle():
    out = degree_truncate(fixtures()["filled_triangle"], 1)
    assert sorted(out.vertices) == [0, 1, 2]
    assert out.faces(1) == ((1, 2),)
    assert out.faces(2) == ()


def test_degree_truncate_edge_cases():
    cx = fixtures()["path3"]
    assert degree_truncate(cx, 2) is cx  # already under the cap
    out = degree_truncate(cx, 0)
    assert out.faces(1) == ()
    assert sorted(out.vertices) == [0, 1, 2]
    with pytest.raises(ValidationError):
        degree_truncate(cx, -1)


def test_degree_truncate_properties():
    rng = np.random.default_rng(59)
    for _ in range(40):
        cx = random_complex(rng, 10)
        cap = int(rng.integers(0, 5))
        out = degree_truncate(cx, cap)
        assert out.max_degree() <= cap
        assert sorted(out.vertices) == sorted(cx.vertices)
        assert set(out.simplices) <= set(cx.simplices)
        # result is downward closed and truncation is idempotent
        assert SimplicialComplex(out.simplices).simplices == out.simplices
        assert degree_truncate(out, cap) is out


def test_expected_p_degree():
    assert expected_p_degree(uniform_rooting(fixtures()["cycle5"]), 1) == 2
    filled = uniform_rooting(fixtures()["filled_triangle"])
    assert expected_p_degree(filled, 1) == 2
    assert expected_p_degree(filled, 2) == 1
    assert expected_p_degree(uniform_rooting(fixtures()["path3"]), 1) == Fraction(4, 3)
    torus = uniform_rooting(fixtures()["torus4"])
    assert expected_p_degree(torus, 1) == 6
    assert expected_p_degree(torus, 2) == 6
