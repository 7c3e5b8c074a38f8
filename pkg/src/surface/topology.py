"""Vertex classes, boundary structure and Euler characteristic of a pattern."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from src.surface.pattern import GluingPattern
from src.surface.words import Letter

Corner = Tuple[int, int]  # (polygon, corner); side k runs from corner k+1 to corner k


class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict = {}

    def add(self, item) -> None:
        self.parent.setdefault(item, item)

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class BoundaryEdge:
    letter: Letter
    polygon: int
    side: int
    source: int
    target: int


@dataclass(frozen=True)
class SurfaceInfo:
    euler_characteristic: int
    num_vertices: int
    num_edges: int
    num_polygons: int
    boundary_edges: Tuple[BoundaryEdge, ...]
    num_boundary_components: int
    vertex_location: Tuple[str, ...]  # "boundary" | "interior"
    vertex_of_corner: Dict[Corner, int]
    letter_endpoints: Dict[str, Tuple[int, int]]  # canonical letter -> (source, target)
    has_free_edge_per_component: bool
    vertices_meet_boundary_components: bool
    all_vertices_on_boundary: bool

    @property
    def is_closed(self) -> bool:
        return not self.boundary_edges

    @property
    def graph_edge_count(self) -> int:
        """Free generators of the fundamental groupoid of (surface, vertices)."""
        return self.num_vertices - self.euler_characteristic

    @property
    def conditions(self) -> Dict[str, bool]:
        """A1: every component has boundary. A2: every boundary circle carries a vertex.
        A3: every vertex lies on the boundary."""
        return {
            "A1": self.has_free_edge_per_component,
            "A2": self.vertices_meet_boundary_components,
            "A3": self.all_vertices_on_boundary,
        }

    def edges_at(self, vertex: int) -> List[int]:
        return [i for i, e in enumerate(self.boundary_edges) if vertex in (e.source, e.target)]


def side_endpoints(polygon_size: int, side: int, exponent: int) -> Tuple[Corner, Corner]:
    """Corners (source, target) of the edge letter written on a side, whatever its exponent."""
    start, end = (side + 1) % polygon_size, side
    return (start, end) if exponent > 0 else (end, start)


def analyze(pattern: GluingPattern) -> SurfaceInfo:
    corners = _UnionFind()
    for p, polygon in enumerate(pattern.polygons):
        for k in range(len(polygon)):
            corners.add((p, k))

    def ends(occ):
        size = len(pattern.polygons[occ.polygon])
        s, t = side_endpoints(size, occ.side, occ.letter.exponent)
        return (occ.polygon, s), (occ.polygon, t)

    for first, second in pattern.glued_occurrences():
        s1, t1 = ends(first)
        s2, t2 = ends(second)
        corners.union(s1, s2)
        corners.union(t1, t2)

    vertex_of_root: Dict = {}
    vertex_of_corner: Dict[Corner, int] = {}
    for p, polygon in enumerate(pattern.polygons):
        for k in range(len(polygon)):
            root = corners.find((p, k))
            vertex_of_corner[(p, k)] = vertex_of_root.setdefault(root, len(vertex_of_root))
    num_vertices = len(vertex_of_root)

    letter_endpoints: Dict[str, Tuple[int, int]] = {}
    boundary: List[BoundaryEdge] = []
    for occ in pattern.occurrences():
        s, t = ends(occ)
        name = pattern.canonical(occ.letter.name)
        letter_endpoints.setdefault(name, (vertex_of_corner[s], vertex_of_corner[t]))
        if pattern.is_free(occ.letter.name):
            size = len(pattern.polygons[occ.polygon])
            boundary.append(
                BoundaryEdge(
                    letter=occ.letter,
                    polygon=occ.polygon,
                    side=occ.side,
                    source=vertex_of_corner[(occ.polygon, (occ.side + 1) % size)],
                    target=vertex_of_corner[(occ.polygon, occ.side)],
                )
            )

    components = _UnionFind()
    for edge in boundary:
        components.add(edge.source)
        components.add(edge.target)
        components.union(edge.source, edge.target)
    num_components = len({components.find(v) for v in components.parent})

    on_boundary = {v for e in boundary for v in (e.source, e.target)}
    location = tuple("boundary" if v in on_boundary else "interior" for v in range(num_vertices))

    polygons_linked = _UnionFind()
    for p in range(len(pattern.polygons)):
        polygons_linked.add(p)
    for first, second in pattern.glued_occurrences():
        polygons_linked.union(first.polygon, second.polygon)
    with_free = {polygons_linked.find(e.polygon) for e in boundary}
    every_component_free = all(polygons_linked.find(p) in with_free for p in polygons_linked.parent)

    num_edges = len(pattern.edge_names)
    num_polygons = len(pattern.polygons)
    return SurfaceInfo(
        euler_characteristic=num_polygons - num_edges + num_vertices,
        num_vertices=num_vertices,
        num_edges=num_edges,
        num_polygons=num_polygons,
        boundary_edges=tuple(boundary),
        num_boundary_components=num_components,
        vertex_location=location,
        vertex_of_corner=vertex_of_corner,
        letter_endpoints=letter_endpoints,
        has_free_edge_per_component=every_component_free,
        vertices_meet_boundary_components=boundary_circles_close(boundary),
        all_vertices_on_boundary=all(loc == "boundary" for loc in location),
    )


def boundary_circles_close(edges: Sequence[BoundaryEdge]) -> bool:
    """Boundary edges chain head to tail into closed circles through vertices.

    Holds when every vertex is left by as many boundary edges as enter it.
    """
    return Counter(e.source for e in edges) == Counter(e.target for e in edges)


def boundary_vertex_count(info: SurfaceInfo) -> int:
    """Vertices reached by walking the boundary edges."""
    return len({v for e in info.boundary_edges for v in (e.source, e.target)})
