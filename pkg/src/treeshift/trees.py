"""Finite rooted directed trees and generators for the studied families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

__all__ = [
    "DirectedTree",
    "TreeValidation",
    "generate_path",
    "generate_two_branch",
    "generate_binary",
    "generate_broom",
    "generate_two_level_broom",
    "tree_to_doc",
    "tree_from_doc",
    "validate_tree",
    "validate_tree_data",
]


def _label_key(label: str):
    # numeric labels ("-2", "1,3") sort by their coordinates, others lexically
    try:
        return (0, tuple(int(part) for part in label.split(",")))
    except ValueError:
        return (1, tuple(label.split(",")))


@dataclass(frozen=True)
class DirectedTree:
    """A finite rooted directed tree with a fixed vertex order.

    ``vertices`` fixes the deterministic ordering used as the basis order by
    every matrix builder downstream.  Children lists are sorted by label.
    The constructor is tolerant of malformed data; use :func:`validate_tree`
    to obtain a violation report before trusting a tree from the outside.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    root: str
    _parent: dict = field(init=False, repr=False, compare=False)
    _children: dict = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)
    _depth: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((p, c) for p, c in self.edges))
        parent: dict[str, str] = {}
        children: dict[str, list[str]] = {v: [] for v in self.vertices}
        for p, c in self.edges:
            children.setdefault(p, []).append(c)
            parent.setdefault(c, p)
        sorted_children = {
            v: tuple(sorted(kids, key=_label_key)) for v, kids in children.items()
        }
        index = {v: i for i, v in enumerate(self.vertices)}
        depth: dict[str, int] = {}
        if self.root in index:
            depth[self.root] = 0
            frontier = [self.root]
            while frontier:
                nxt = []
                for v in frontier:
                    for c in sorted_children.get(v, ()):
                        if c not in depth:
                            depth[c] = depth[v] + 1
                            nxt.append(c)
                frontier = nxt
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "_children", sorted_children)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_depth", depth)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        root: Optional[str] = None,
        vertices: Optional[Iterable[str]] = None,
    ) -> "DirectedTree":
        edges = tuple((p, c) for p, c in edges)
        if vertices is None:
            seen: list[str] = []
            for p, c in edges:
                if p not in seen:
                    seen.append(p)
                if c not in seen:
                    seen.append(c)
            vertices = seen
        vertices = tuple(vertices)
        if root is None:
            has_parent = {c for _, c in edges}
            candidates = [v for v in vertices if v not in has_parent]
            if len(candidates) != 1:
                raise ValueError(
                    f"cannot infer root: {len(candidates)} parentless vertices"
                )
            root = candidates[0]
        return cls(vertices=vertices, edges=edges, root=root)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def depth(self) -> int:
        return max(self._depth.values(), default=0)

    def index_of(self, v: str) -> int:
        return self._index[v]

    def parent_of(self, v: str) -> Optional[str]:
        return self._parent.get(v)

    def children_of(self, v: str) -> tuple[str, ...]:
        return self._children.get(v, ())

    def depth_of(self, v: str) -> int:
        return self._depth[v]

    def nonroot_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if v != self.root)

    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.children_of(v))

    def branching_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if len(self.children_of(v)) >= 2)

    def at_depth(self, d: int) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self._depth.get(v) == d)

    def path_from_root(self, v: str) -> tuple[str, ...]:
        path = [v]
        while path[-1] != self.root:
            p = self.parent_of(path[-1])
            if p is None:
                break
            path.append(p)
        return tuple(reversed(path))


@dataclass(frozen=True)
class TreeValidation:
    ok: bool
    violations: tuple[str, ...]


def validate_tree_data(
    vertices: Iterable[str], edges: Iterable[tuple[str, str]], root: str
) -> TreeValidation:
    """Check the rooted-tree axioms on raw data and report every violation."""
    vertices = list(vertices)
    edges = [(p, c) for p, c in edges]
    violations: list[str] = []
    vset = set(vertices)
    if len(vset) != len(vertices):
        dupes = sorted({v for v in vertices if vertices.count(v) > 1})
        violations.append(f"duplicate vertex labels: {', '.join(dupes)}")
    if root not in vset:
        violations.append(f"root {root!r} is not a vertex")
    seen_edges = set()
    for p, c in edges:
        if p not in vset:
            violations.append(f"edge ({p!r}, {c!r}) references unknown vertex {p!r}")
        if c not in vset:
            violations.append(f"edge ({p!r}, {c!r}) references unknown vertex {c!r}")
        if (p, c) in seen_edges:
            violations.append(f"duplicate edge ({p!r}, {c!r})")
        seen_edges.add((p, c))
    parents: dict[str, list[str]] = {}
    for p, c in edges:
        parents.setdefault(c, [])
        if p not in parents[c]:
            parents[c].append(p)
    for c, ps in sorted(parents.items()):
        if len(ps) == 2:
            violations.append(f"vertex {c} has two parents")
        elif len(ps) > 2:
            violations.append(f"vertex {c} has {len(ps)} parents")
    if root in parents:
        violations.append(f"root {root} has a parent")
    # reachability catches cycles and disconnected pieces in one sweep
    if root in vset:
        children: dict[str, list[str]] = {}
        for p, c in edges:
            children.setdefault(p, []).append(c)
        reached = {root}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for c in children.get(v, ()):
                    if c in vset and c not in reached:
                        reached.add(c)
                        nxt.append(c)
            frontier = nxt
        for v in vertices:
            if v not in reached:
                violations.append(f"vertex {v} not reachable from root")
    return TreeValidation(ok=not violations, violations=tuple(violations))


def validate_tree(tree: DirectedTree) -> TreeValidation:
    return validate_tree_data(tree.vertices, tree.edges, tree.root)


def generate_path(n: int) -> DirectedTree:
    """Chain on ``n`` vertices labelled "0".."n-1", rooted at "0"."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    vertices = tuple(str(i) for i in range(n))
    edges = tuple((str(i), str(i + 1)) for i in range(n - 1))
    return DirectedTree(vertices=vertices, edges=edges, root="0")


def generate_two_branch(kappa: int, theta: int) -> DirectedTree:
    """Trunk of length ``kappa`` into a branching vertex "0" with two equal
    branches of length ``theta``.

    Trunk vertices are "-kappa".."-1", branch vertices "i,j" for i in {1,2}
    and j in 1..theta.  Vertex order: trunk from the root down, "0", branch 1,
    branch 2.
    """
    if kappa < 0 or theta < 1:
        raise ValueError("two-branch tree needs kappa >= 0 and theta >= 1")
    trunk = [str(-k) for k in range(kappa, 0, -1)]
    vertices = trunk + ["0"]
    for i in (1, 2):
        vertices += [f"{i},{j}" for j in range(1, theta + 1)]
    edges = [(trunk[i], trunk[i + 1]) for i in range(len(trunk) - 1)]
    if trunk:
        edges.append((trunk[-1], "0"))
    for i in (1, 2):
        edges.append(("0", f"{i},1"))
        edges += [(f"{i},{j}", f"{i},{j + 1}") for j in range(1, theta)]
    root = trunk[0] if trunk else "0"
    return DirectedTree(vertices=tuple(vertices), edges=tuple(edges), root=root)


def generate_binary(kappa: int) -> DirectedTree:
    """Full binary tree of depth ``kappa`` >= 2, vertices "k,l" with
    l in 1..2^k, children of "k,l" being "k+1,2l-1" and "k+1,2l"."""
    if kappa < 2:
        raise ValueError("binary tree needs kappa >= 2")
    vertices = []
    edges = []
    for k in range(kappa + 1):
        for l in range(1, 2**k + 1):
            vertices.append(f"{k},{l}")
            if k < kappa:
                edges.append((f"{k},{l}", f"{k + 1},{2 * l - 1}"))
                edges.append((f"{k},{l}", f"{k + 1},{2 * l}"))
    return DirectedTree(vertices=tuple(vertices), edges=tuple(edges), root="0,1")


def generate_broom(n_teeth: int) -> DirectedTree:
    """Star: root "0" with teeth "1".."n_teeth"."""
    if n_teeth < 1:
        raise ValueError("broom needs at least one tooth")
    vertices = ("0",) + tuple(str(i) for i in range(1, n_teeth + 1))
    edges = tuple(("0", str(i)) for i in range(1, n_teeth + 1))
    return DirectedTree(vertices=vertices, edges=edges, root="0")


def generate_two_level_broom(n_teeth: int) -> DirectedTree:
    """Root "0", children "1,j", one grandchild "2,j" under each, level-major
    vertex order."""
    if n_teeth < 1:
        raise ValueError("two-level broom needs at least one tooth")
    vertices = ["0"]
    vertices += [f"1,{j}" for j in range(1, n_teeth + 1)]
    vertices += [f"2,{j}" for j in range(1, n_teeth + 1)]
    edges = [("0", f"1,{j}") for j in range(1, n_teeth + 1)]
    edges += [(f"1,{j}", f"2,{j}") for j in range(1, n_teeth + 1)]
    return DirectedTree(vertices=tuple(vertices), edges=tuple(edges), root="0")


def tree_to_doc(tree: DirectedTree) -> dict:
    return {
        "vertices": list(tree.vertices),
        "root": tree.root,
        "edges": [[p, c] for p, c in tree.edges],
    }


def tree_from_doc(doc: dict) -> DirectedTree:
    """Build a tree from its JSON document, raising ``ValueError`` with the
    offending field or violation message on malformed input."""
    for key in ("vertices", "root", "edges"):
        if key not in doc:
            raise ValueError(f"tree document missing field {key!r}")
    vertices = doc["vertices"]
    edges = doc["edges"]
    root = doc["root"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ValueError("tree document field 'vertices' must be a list of strings")
    if not isinstance(root, str):
        raise ValueError("tree document field 'root' must be a string")
    try:
        edge_pairs = [(str(p), str(c)) for p, c in edges]
    except (TypeError, ValueError) as exc:
        raise ValueError("tree document field 'edges' must be a list of pairs") from exc
    report = validate_tree_data(vertices, edge_pairs, root)
    if not report.ok:
        raise ValueError("invalid tree document: " + "; ".join(report.violations))
    return DirectedTree(vertices=tuple(vertices), edges=tuple(edge_pairs), root=root)
