from fell_metrics.basis import AmbientSpace
from fell_metrics.metric import in_compact_open, separation_radius
from fell_metrics.partial_map import invert
from fell_metrics.sampling import (
    make_rng,
    random_closed,
    random_compact_in,
    random_gamma,
    random_map,
    random_neighbourhood,
)

SPACES = (AmbientSpace.REALS, AmbientSpace.UNIT_INTERVAL)


def test_same_seed_same_maps():
    a = [random_map(make_rng(42, 0), space) for space in SPACES]
    b = [random_map(make_rng(42, 0), space) for space in SPACES]
    assert a == b


def test_streams_differ():
    a = [random_map(make_rng(42, 0), AmbientSpace.REALS) for _ in range(5)]
    rng = make_rng(42, 1)
    b = [random_map(rng, AmbientSpace.REALS) for _ in range(5)]
    assert a != b


def test_random_gamma_is_invertible():
    rng = make_rng(1, 0)
    for i in range(20):
        f = random_gamma(rng, SPACES[i % 2])
        x = f.domain.sample_point()
        assert invert(f)(f(x)) == x


def test_random_maps_respect_codomain():
    rng = make_rng(2, 0)
    for _ in range(20):
        f = random_map(rng, AmbientSpace.UNIT_INTERVAL)
        assert f.codomain is AmbientSpace.UNIT_INTERVAL


def test_neighbourhood_contains_image():
    rng = make_rng(3, 0)
    for i in range(20):
        f = random_map(rng, SPACES[i % 2])
        if f.is_empty:
            continue
        k = random_compact_in(rng, f.domain)
        v = random_neighbourhood(rng, f, k)
        assert in_compact_open(f, k, v)
        assert separation_radius(f, k, v) > 0


def test_random_closed_spaces():
    rng = make_rng(4, 0)
    for space in SPACES:
        assert random_closed(rng, space).space is space
