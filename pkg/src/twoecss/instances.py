"""Instance families, figure fixtures, the edge-list file format and DOT output.

Edge-list files hold a header line ``n m`` followed by ``m`` lines ``u v``
with 0-based vertex ids.  Lines starting with ``#`` and blank lines are
ignored.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import BadSpec
from .graph_core import Graph, bridges, components, is_two_edge_connected

DEFAULT_SEED = 0


def default_seed() -> int:
    raw = os.environ.get("TWOEC_SEED")
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise BadSpec(f"TWOEC_SEED must be an integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# deterministic families


def cycle(n: int) -> Graph:
    if n < 3:
        raise BadSpec("a simple cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 3:
        raise BadSpec("a 2EC complete graph needs at least 3 vertices")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def prism(k: int = 3) -> Graph:
    """Two k-cycles joined by a perfect matching (2k vertices)."""
    if k < 3:
        raise BadSpec("a prism needs k >= 3")
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_2ec(n: int, extra_edges: int = 0, seed: Optional[int] = None) -> Graph:
    """Random simple 2EC graph grown from a cycle by open ears, plus random chords."""
    if n < 3:
        raise BadSpec("random_2ec needs n >= 3")
    if extra_edges < 0:
        raise BadSpec("extra_edges must be non-negative")
    rng = random.Random(default_seed() if seed is None else seed)
    first = rng.randint(3, n)
    edges = {(i, (i + 1) % first) if i < (i + 1) % first else ((i + 1) % first, i)
             for i in range(first)}
    size = first
    while size < n:
        inner = rng.randint(1, min(4, n - size))
        a, b = rng.sample(range(size), 2)
        path = [a] + list(range(size, size + inner)) + [b]
        for x, y in zip(path, path[1:]):
            edges.add((min(x, y), max(x, y)))
        size += inner
    free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(free)
    edges.update(free[:extra_edges])
    return Graph(n, sorted(edges))


def triangle_rich(k: int, core_n: int, seed: Optional[int] = None) -> Graph:
    """A random 2EC core plus ``k`` triangles, each joined to the core at two or three nodes.

    Triangles are never adjacent to each other.
    """
    if k < 0 or core_n < 3:
        raise BadSpec("triangle_rich needs k >= 0 and core_n >= 3")
    rng = random.Random(default_seed() if seed is None else seed)
    core = random_2ec(core_n, max(1, core_n // 3), rng.randrange(1 << 30))
    edges = [core.ends(e) for e in core.edge_ids()]
    n = core_n
    for _ in range(k):
        x, y, z = n, n + 1, n + 2
        edges += [(x, y), (y, z), (x, z)]
        a, b = rng.sample(range(core_n), 2)
        edges += [(a, x), (b, y)]
        if rng.random() < 0.5:
            edges.append((rng.randrange(core_n), z))
        n += 3
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# figure fixtures
#
# Each fixture lists vertex labels as drawn, the solid (solution) edges and
# the remaining drawn edges.  Vertex i of the fixture graph is the i-th
# label.  Drawings are partial, so the drawn graph is completed by adding,
# while some bridge remains, the lexicographically first missing edge
# across the lowest-id bridge (after first chaining components).  Added
# edges come after the drawn ones.


@dataclass(frozen=True)
class Figure:
    labels: tuple[str, ...]
    solid: tuple[tuple[str, str], ...]
    dashed: tuple[tuple[str, str], ...]


def _fig(labels: str, solid: str, dashed: str) -> Figure:
    def pairs(text: str) -> tuple[tuple[str, str], ...]:
        return tuple(tuple(p.split("-")) for p in text.split())  # type: ignore[misc]
    return Figure(tuple(labels.split()), pairs(solid), pairs(dashed))


FIGURES: dict[str, Figure] = {
    # a 5-cycle that is contractible, an isolating and a non-isolating cut
    "1": _fig(
        "1 2 3 4 5 6 7 8 9 10 11",
        "3-4 4-6 6-7 7-5 5-3",
        "3-7 7-4 5-2 5-1 7-2 4-1 6-5 2-1 10-9 9-8 8-1 1-11 11-10 10-2 2-8 8-11"),
    # the two sides of a 2-vertex cut {u, v} and subgraphs of types A, B, C
    "2": _fig(
        "1 2 3 6 7 u v 5 8",
        "",
        "u-2 v-5 v-3 u-3 5-1 1-2 1-3 2-3 u-8 6-7 8-6 7-v 8-7 8-v"),
    # a canonical cover: cycles, a large component, blocks joined by bridges
    "3": _fig(
        "1 2 3 a5 a4 a6 4 5 7 8 9 10 11 16 12 13 14 15 lonely1 lonely2 lonely3 "
        "18 19 20 lb1 lb3 lb5 lb2 lb6 lb4 c1 c2 c5 c4 c3",
        "3-a4 a4-a5 a5-a6 a6-3 c1-c2 c2-c3 c3-c4 c4-c5 c5-c1 lb1-lb2 lb2-lb3 lb3-lb4 "
        "lb4-lb5 lb5-lb6 lb6-lb1 lb1-4 8-lonely3 lonely3-lonely2 lonely2-lonely1 "
        "lonely1-9 9-10 10-12 12-16 16-11 11-9 11-13 13-14 14-15 15-12 2-1 1-3 3-2 "
        "5-4 4-7 7-8 8-5 18-19 19-20 20-18",
        "a5-lonely3 lb6-2"),
    # a gluing path through five components
    "4": _fig(
        "a1 a2 a3 b1 b2 b3 b4 b5 c1 c2 c3 d1 d2 d3 d4 e1 e2 e3 e4",
        "a1-a2 a2-a3 a3-a1 b1-b2 b2-b3 b3-b4 b4-b5 b5-b1 c1-c2 c2-c3 c3-c1 d1-d2 "
        "d2-d3 d3-d4 d4-d1 e1-e2 e2-e3 e3-e4 e4-e1",
        "a3-b1 b3-c1 c3-d1 d4-e1 e4-a2 e1-a3 e4-a3"),
    # a merging cycle through three components; u = "3", v = "2"
    "5a": _fig(
        "1 2 3 4 5 7 8 9 10 11 16 12 13 14 15 17 18 19 20 21",
        "9-10 10-12 12-16 16-11 11-9 11-13 13-14 14-15 15-12 2-1 1-3 3-2 5-4 4-7 "
        "7-8 8-5 18-19 19-20 20-18",
        "3-17 17-14 11-8 4-2"),
    # a core-triangle cover: core on a0,a2..a7, triangles on a14-a16, a8/a11/a12, a9/a10/a13
    "5b": _fig(
        "a15 a16 a14 a5 a4 a0 a7 a6 a2 a3 a12 a8 a11 a10 a13 a9",
        "a15-a14 a16-a15 a16-a14 a11-a8 a8-a12 a11-a12 a9-a10 a10-a13 a9-a13 a0-a4 "
        "a4-a5 a5-a6 a6-a7 a7-a0 a0-a3 a3-a2 a2-a0",
        "a16-a5 a5-a14 a14-a4 a4-a6 a6-a9 a13-a5 a5-a7 a7-a8 a8-a0 a15-a3 a11-a2 "
        "a10-a7 a3-a12"),
    # a bowtie and a K_{2,3} component next to other components
    "6": _fig(
        "1a 2a 3a 1b 2b 3b 4b 5b 1c 3c 2c 4c 1da 2da 3da 1db 2db",
        "1a-2a 2a-3a 3a-1a 3b-1b 1b-2b 2b-3b 3b-4b 4b-5b 5b-3b 1c-2c 2c-3c 3c-4c "
        "4c-1c 1db-1da 1da-2db 2db-2da 2da-1db 1db-3da 3da-2db",
        "1a-1b 1b-4b 4c-1da 1da-2da"),
    # five trees of an auxiliary forest and a nice cycle between them
    "7": _fig(
        "u v 1 2 3 4 5 6 7 11 12 13 14 8 9 10 20 21 22 23 24",
        "1-2 2-v v-1 3-4 4-5 5-6 6-7 7-3 11-12 12-13 13-14 14-11 8-9 9-10 10-8 "
        "20-21 21-22 22-23 23-20",
        "u-v u-2 2-6 1-3 1-24 24-10 8-14 12-u"),
    # small leaf blocks hanging off one node
    "8": _fig(
        "1a 2a 3a l 1b 2b 3b 4b 1c 2c 3c 4c 5c 1d 2d 3d",
        "1a-2a 2a-3a 3a-1a 1b-2b 2b-3b 3b-4b 4b-1b 1a-l l-1b 1c-2c 2c-3c 3c-4c 4c-5c "
        "5c-1c 1d-2d 2d-3d 3d-1d 2d-1c",
        "2a-1b 2c-5c 3c-1d"),
    # an almost-nice cycle being extended; u0 = "e1"
    "9": _fig(
        "a1 b1 b2 b3 c1 c2 d1 e1 e2 e3 e4 f0 f1 f3 f2 f4 f5",
        "d1-b2 b1-a1 a1-c1 f3-e4 f4-d1",
        "c2-e1 e1-d1 d1-c1"),
}

FIGURE_ALIASES = {"5": "5b"}


def _complete_to_2ec(g: Graph) -> list[int]:
    added = []
    comps = components(g)
    for a, b in zip(comps, comps[1:]):
        added.append(g.add_edge(a[0], b[0]))
    while True:
        br = bridges(g)
        if not br:
            return added
        u, v = g.ends(br[0])
        side = set(next(c for c in components(g, set(g.edge_ids()) - {br[0]}) if u in c))
        pair = None
        for x in sorted(side):
            for y in range(g.n):
                if y not in side and not g.has_edge(x, y) and {x, y} != {u, v}:
                    pair = (x, y)
                    break
            if pair:
                break
        if pair is None:
            raise BadSpec("figure cannot be completed to a simple 2EC graph")
        added.append(g.add_edge(*pair))


@dataclass
class FigureInstance:
    graph: Graph
    labels: list[str]
    solid: frozenset[int]     # edge ids drawn as solution edges
    completion: list[int]     # edge ids added to reach 2EC


def figure_instance(fid: str) -> FigureInstance:
    key = FIGURE_ALIASES.get(str(fid), str(fid))
    if key not in FIGURES:
        raise BadSpec(f"unknown figure {fid!r}; known: {sorted(FIGURES)}")
    fig = FIGURES[key]
    index = {x: i for i, x in enumerate(fig.labels)}
    g = Graph(len(fig.labels))
    solid = set()
    for a, b in fig.solid:
        solid.add(g.add_edge(index[a], index[b]))
    for a, b in fig.dashed:
        g.add_edge(index[a], index[b])
    extra = _complete_to_2ec(g)
    return FigureInstance(g, list(fig.labels), frozenset(solid), extra)


def figure_graph(fid: str) -> Graph:
    return figure_instance(fid).graph


# ---------------------------------------------------------------------------
# specs


FAMILIES = ("cycle", "complete", "prism", "petersen", "random_2ec", "triangle_rich", "figure")


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    args: tuple = ()
    seed: Optional[int] = None

    def label(self) -> str:
        parts = [str(a) for a in self.args]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return self.family + (":" + ",".join(parts) if parts else "")


def parse_spec(text: str) -> InstanceSpec:
    """Parse ``family[:a,b,...][,seed=s]``, e.g. ``random_2ec:10,3,seed=7`` or ``figure:5b``."""
    text = text.strip()
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        raise BadSpec(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    args = []
    seed = None
    for tok in filter(None, (t.strip() for t in rest.split(","))):
        if tok.startswith("seed="):
            try:
                seed = int(tok[5:])
            except ValueError as exc:
                raise BadSpec(f"bad seed in {text!r}") from exc
            continue
        if family == "figure":
            args.append(tok)
            continue
        try:
            args.append(int(tok))
        except ValueError as exc:
            raise BadSpec(f"non-integer argument {tok!r} in {text!r}") from exc
    return InstanceSpec(family, tuple(args), seed)


def generate(spec: InstanceSpec) -> Graph:
    f, a = spec.family, spec.args
    try:
        if f == "cycle":
            g = cycle(*a)
        elif f == "complete":
            g = complete(*a)
        elif f == "prism":
            g = prism(*a)
        elif f == "petersen":
            if a:
                raise BadSpec("petersen takes no arguments")
            g = petersen()
        elif f == "random_2ec":
            if len(a) == 3 and spec.seed is None:
                g = random_2ec(a[0], a[1], a[2])
            else:
                g = random_2ec(*a, seed=spec.seed)
        elif f == "triangle_rich":
            if len(a) == 3 and spec.seed is None:
                g = triangle_rich(a[0], a[1], a[2])
            else:
                g = triangle_rich(*a, seed=spec.seed)
        elif f == "figure":
            if len(a) != 1:
                raise BadSpec("figure takes one id")
            g = figure_graph(a[0])
        else:
            raise BadSpec(f"unknown family {f!r}")
    except TypeError as exc:
        raise BadSpec(f"wrong arguments for {f}: {a}") from exc
    if not g.is_simple() or not is_two_edge_connected(g):
        raise BadSpec(f"{spec.label()} did not produce a simple 2EC graph")
    return g


# ---------------------------------------------------------------------------
# files


def serialize(g: Graph, eids: Optional[Iterable[int]] = None) -> str:
    """Edge-list text of ``g`` (or of the edges ``eids`` of it)."""
    el = g.edge_ids() if eids is None else sorted(eids)
    lines = [f"{g.n} {len(el)}"]
    lines += [f"{u} {v}" for u, v in (g.ends(e) for e in el)]
    return "\n".join(lines) + "\n"


def _data_lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line.split())
    return out


def parse(text: str, simple: bool = True) -> Graph:
    rows = _data_lines(text)
    if not rows or len(rows[0]) != 2:
        raise BadSpec("missing 'n m' header")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        pairs = [(int(r[0]), int(r[1])) for r in rows[1:] if len(r) == 2]
    except ValueError as exc:
        raise BadSpec("non-integer token in edge list") from exc
    if len(pairs) != len(rows) - 1:
        raise BadSpec("every edge line needs exactly two vertex ids")
    if len(pairs) != m:
        raise BadSpec(f"header says {m} edges, found {len(pairs)}")
    try:
        return Graph(n, pairs, simple_mode=simple)
    except ValueError as exc:
        raise BadSpec(str(exc)) from exc


def parse_solution(g: Graph, text: str) -> frozenset[int]:
    """Map an edge-list file onto edge ids of ``g``."""
    sol = parse(text, simple=False)
    if sol.n != g.n:
        raise BadSpec(f"solution has {sol.n} vertices, graph has {g.n}")
    out = set()
    for e in sol.edge_ids():
        u, v = sol.ends(e)
        ids = [x for x in g.edges_between(u, v) if x not in out]
        if not ids:
            raise BadSpec(f"solution edge {u} {v} is not an edge of the graph")
        out.add(ids[0])
    return frozenset(out)


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_graph(path: str, g: Graph, eids: Optional[Iterable[int]] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(g, eids))


def to_dot(g: Graph, highlight: Iterable[int] = (), labels: Optional[Sequence[str]] = None) -> str:
    """Graphviz text; highlighted edges are bold, the rest dashed."""
    hl = set(highlight)
    out = ["graph G {"]
    for v in range(g.n):
        name = labels[v] if labels else str(v)
        out.append(f'  {v} [label="{name}"];')
    for e in g.edge_ids():
        u, v = g.ends(e)
        style = "bold" if e in hl else "dashed"
        out.append(f"  {u} -- {v} [style={style}];")
    out.append("}")
    return "\n".join(out) + "\n"
