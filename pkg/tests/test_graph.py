import pytest

from commgraph.catalog import heisenberg_set
from commgraph.certify import thompson_generators
from commgraph.engine import commutator, power
from commgraph.graph import (
    CommGraph,
    EdgeWitness,
    GeneratorSet,
    build,
    components,
    edge_witness,
    graph_summary,
    remove_vertices,
    to_dot,
)
from commgraph.matrix import IntMatrix, elementary, heisenberg_generators
from commgraph.thompson import generator_x, x0_x1inv


def edge_set(g):
    return {frozenset((u, v)) for u, v, _ in g.edge_list()}


def test_edge_witness_examples():
    a, b, c = heisenberg_generators()
    assert edge_witness(a, c, 1) == EdgeWitness(1, 1)
    assert edge_witness(a, b, 5) is None
    assert edge_witness(x0_x1inv(), generator_x(2), 1) == EdgeWitness(1, 1)


def test_edge_witness_is_least():
    # The swap does not commute with I+e12, but its square is the identity.
    a = elementary(2, 1, 2)
    assert edge_witness(a, IntMatrix([[-1, 0], [0, -1]]), 3) == EdgeWitness(1, 1)
    swap = IntMatrix([[0, 1], [1, 0]])
    assert edge_witness(a, swap, 3) == EdgeWitness(1, 2)


def test_edge_witness_needs_distinct():
    a, _, _ = heisenberg_generators()
    with pytest.raises(ValueError):
        edge_witness(a, a, 1)


def test_generator_set_validation():
    a, b, _ = heisenberg_generators()
    with pytest.raises(ValueError):
        GeneratorSet("matrix", (("a", a), ("a", b)))
    with pytest.raises(ValueError):
        GeneratorSet("matrix", (("a", a), ("b", a)))
    with pytest.raises(ValueError):
        GeneratorSet("matrix", (("a", a),), 0)
    with pytest.raises(ValueError):
        GeneratorSet("thompson", (("a", a),))


def test_heisenberg_graph():
    g = build(heisenberg_set())
    assert edge_set(g) == {frozenset("ac"), frozenset("bc")}
    parts, forest = components(g)
    assert parts == [["a", "b", "c"]]
    assert forest == [[("a", "c"), ("b", "c")]]


def test_thompson_components():
    g = build(thompson_generators(10))
    parts, _ = components(g)
    assert parts[:2] == [["x0"], ["x1"]]
    assert len(parts) == 3 and len(parts[2]) == 10


def test_no_edges():
    g = CommGraph(["p", "q", "r"])
    assert components(g)[0] == [["p"], ["q"], ["r"]]


def test_remove_vertices():
    g = build(heisenberg_set())
    rest = remove_vertices(g, {"a"})
    assert rest.vertices == ["b", "c"] and rest.is_connected()
    assert remove_vertices(g, {"a", "b", "c"}).vertices == []
    with pytest.raises(KeyError):
        remove_vertices(g, {"z"})
    t = build(thompson_generators(10))
    assert remove_vertices(t, {"x0", "x1"}).is_connected()


@pytest.mark.parametrize("make", [heisenberg_set, lambda p: thompson_generators(5, p)], ids=["heisenberg", "thompson"])
def test_witness_soundness_and_monotonicity(make):
    previous = set()
    for p in range(1, 6):
        gens = make(p)
        g = build(gens)
        for u, v, w in g.edge_list():
            s, t = gens.element(u), gens.element(v)
            assert commutator(power(s, w.n_s), power(t, w.n_t)).is_identity()
        current = edge_set(g)
        assert previous <= current
        previous = current


def test_build_is_deterministic():
    gens = thompson_generators(6)
    assert graph_summary(build(gens)) == graph_summary(build(gens))


def test_loops_rejected():
    with pytest.raises(ValueError):
        CommGraph(["a"], {("a", "a"): EdgeWitness(1, 1)})


def test_dot():
    text = to_dot(build(heisenberg_set()), "H")
    assert text.count("--") == 2
    assert text.count('[label="1,1"]') == 2
    assert '"a";' in text and '"b";' in text and '"c";' in text
