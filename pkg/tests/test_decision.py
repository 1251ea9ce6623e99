import random

import pytest

from mlcmp.decision import (
    K4,
    SimpleGraph,
    build_cic,
    build_planarity_instance,
    decide_zero_crossing,
    is_planar,
)
from mlcmp.exact import fix_left_end
from mlcmp.model import Instance, InstanceError

from graphs import (
    complete,
    k33,
    nonplanar_with_planar_noise,
    planar_sample,
    relabel,
    stacked_triangulation,
    subdivide,
    triangulation_plus_edge,
)
from suites import I_A, I_TRI, random_instances


def test_build_cic_examples():
    assert build_cic(I_A).graph.sorted_edges() == [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]
    assert build_cic(Instance(2)).graph.sorted_edges() == [(1, 2)]
    assert build_cic(Instance.from_intervals(3, [(1, 2)])).graph.sorted_edges() == [(1, 2), (2, 3)]
    assert build_cic(I_A).order == (1, 2, 3, 4)


def test_padding_sizes():
    g = build_planarity_instance(build_cic(I_A))
    assert (g.vertex_count, len(g.edges)) == (16, 26)
    g = build_planarity_instance(build_cic(Instance(2)))
    assert (g.vertex_count, len(g.edges)) == (8, 10)
    assert all(frozenset((a, b)) in g.edges for a in range(1, 5) for b in range(a + 1, 5))


@pytest.mark.parametrize("inst", random_instances(51, 100, 12, 12))
def test_padding_size_formula(inst):
    cic = build_cic(inst)
    g = build_planarity_instance(cic)
    assert g.vertex_count == 4 + 4 * (inst.n - 1)
    assert len(g.edges) == 6 + 4 * len(cic.graph.edges)


def test_padding_rejects_empty():
    from mlcmp.decision import CicInstance

    with pytest.raises(InstanceError):
        build_planarity_instance(CicInstance(SimpleGraph(1), (1,)))


def test_simple_graph_rejects_loops():
    with pytest.raises(InstanceError):
        SimpleGraph.from_pairs(3, [(2, 2)])


def test_classics():
    assert is_planar(K4)
    assert not is_planar(complete(5))
    assert not is_planar(k33())


def test_kuratowski_families():
    rng = random.Random(52)
    for _ in range(25):
        assert not is_planar(relabel(subdivide(complete(5), rng, rng.randint(1, 10)), rng))
        assert not is_planar(relabel(subdivide(k33(), rng, rng.randint(1, 10)), rng))
        assert not is_planar(nonplanar_with_planar_noise(rng))
        assert not is_planar(triangulation_plus_edge(rng))
        assert is_planar(planar_sample(rng))
        assert is_planar(stacked_triangulation(rng.randint(4, 40), rng)[0])


def test_euler_bound_and_relabeling():
    rng = random.Random(53)
    for _ in range(100):
        g = planar_sample(rng) if rng.random() < 0.5 else nonplanar_with_planar_noise(rng)
        planar = is_planar(g)
        if planar and g.vertex_count >= 3:
            assert len(g.edges) <= 3 * g.vertex_count - 6
        assert is_planar(relabel(g, rng)) == planar


def test_decide_examples():
    assert decide_zero_crossing(I_A)
    assert decide_zero_crossing(Instance(2))
    assert decide_zero_crossing(I_TRI)


def test_decide_no_instance():
    # an optimum above zero must be reported as "no"
    for inst in random_instances(54, 400, 7, 10, min_n=5):
        if fix_left_end(inst).crossings > 0:
            assert not decide_zero_crossing(inst)
            return
    pytest.fail("no instance with forced crossings drawn")


@pytest.mark.parametrize("inst", random_instances(55, 200, 9, 10))
def test_decide_matches_exact(inst):
    assert decide_zero_crossing(inst) == (fix_left_end(inst).crossings == 0)
