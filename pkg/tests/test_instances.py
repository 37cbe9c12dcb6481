import pytest

from twoecss.errors import BadSpec
from twoecss.graph_core import Graph, is_two_edge_connected
from twoecss.instances import (
    FIGURES, figure_graph, figure_instance, generate, parse, parse_solution, parse_spec,
    random_2ec, read_graph, serialize, to_dot, triangle_rich, write_graph,
)


def edge_set(g):
    return sorted(g.ends(e) for e in g.edge_ids())


@pytest.mark.parametrize("text,n,m", [
    ("cycle:7", 7, 7), ("complete:5", 5, 10), ("prism:4", 8, 12), ("petersen", 10, 15),
    ("random_2ec:10,3,seed=7", 10, None), ("triangle_rich:3,8,seed=1", 17, None),
    ("figure:5b", 16, None),
])
def test_generate_families(text, n, m):
    g = generate(parse_spec(text))
    assert g.n == n and (m is None or g.m == m)
    assert g.is_simple() and is_two_edge_connected(g)


def test_generation_is_deterministic_per_seed():
    a = generate(parse_spec("random_2ec:12,5,seed=3"))
    b = generate(parse_spec("random_2ec:12,5,seed=3"))
    c = generate(parse_spec("random_2ec:12,5,seed=4"))
    assert edge_set(a) == edge_set(b) != edge_set(c)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("TWOEC_SEED", "11")
    assert edge_set(random_2ec(9, 4)) == edge_set(random_2ec(9, 4, seed=11))
    monkeypatch.setenv("TWOEC_SEED", "eleven")
    with pytest.raises(BadSpec):
        random_2ec(9, 4)


@pytest.mark.parametrize("text", ["hexagon:6", "cycle:x", "random_2ec:8,2,seed=z",
                                  "petersen:3", "figure:12", "cycle:1,2,3"])
def test_bad_specs(text):
    with pytest.raises(BadSpec):
        generate(parse_spec(text))


def test_triangle_rich_shape():
    g = triangle_rich(3, 8, seed=1)
    tri = [set(range(8 + 3 * i, 11 + 3 * i)) for i in range(3)]
    for i, a in enumerate(tri):
        inside = [e for e in g.edge_ids() if set(g.ends(e)) <= a]
        assert len(inside) == 3
        for b in tri[i + 1:]:
            assert not any({*g.ends(e)} & a and {*g.ends(e)} & b for e in g.edge_ids())


def test_every_figure_builds():
    for fid in FIGURES:
        fig = figure_instance(fid)
        assert is_two_edge_connected(fig.graph)
        assert len(fig.labels) == fig.graph.n
        assert fig.solid <= set(fig.graph.edge_ids())
    assert edge_set(figure_graph("5")) == edge_set(figure_graph("5b"))


def test_round_trip(tmp_path):
    g = random_2ec(11, 6, seed=2)
    assert edge_set(parse(serialize(g))) == edge_set(g)
    path = tmp_path / "g.txt"
    write_graph(str(path), g)
    assert edge_set(read_graph(str(path))) == edge_set(g)


def test_comments_and_blank_lines():
    g = parse("# a triangle\n3 3\n\n0 1\n# middle\n1 2\n2 0\n")
    assert edge_set(g) == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "3 2\n0 1\n", "3 1\n0 x\n", "3 1\n0 1 2\n",
                                  "3 1\n0 5\n", "3 2\n0 1\n0 1\n"])
def test_malformed_files(text):
    with pytest.raises(BadSpec):
        parse(text)


def test_parse_solution():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert parse_solution(g, "4 2\n1 0\n2 3\n") == {0, 2}
    with pytest.raises(BadSpec):
        parse_solution(g, "4 1\n1 3\n")
    with pytest.raises(BadSpec):
        parse_solution(g, "5 0\n")


def test_dot_marks_highlighted_edges():
    g = Graph(3, [(0, 1), (1, 2), (2, 0)])
    text = to_dot(g, [0], ["a", "b", "c"])
    assert text.count("style=bold") == 1 and text.count("style=dashed") == 2
    assert 'label="b"' in text
