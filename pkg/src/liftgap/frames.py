"""Per-edge frames on the looped recursive family.

A frame for edge (u, v) is an edge-simple u->v path avoiding the edge itself,
plus zero or more edge-simple cycles, all pairwise edge-disjoint.  The path
follows the construction topology: descend through the copy hanging under the
tail, travel the introducing copy's opposite route to a terminal, hop through
the neighboring sibling copy (or around the parent's terminal when the copy
sits at the end of the visiting order), come back, and ascend to the head.
Top-level edges ride the other closing cycle instead and carry no cycles.

Direct routes are confined to their copy on purpose: the globally hop-shortest
detour can shortcut through parent terminals once three levels nest, and the
frames built from those shortcuts lose membership symmetry.  For every
sibling copy the path does not touch, the frame adds the directed cycle
formed by that copy's own source and sink routes; the family-wide symmetry
check (e2 in e1's frame iff e1 in e2's) is enforced, not assumed, because it
is exactly what makes the frame-derived certificate matrix symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import GraphError, LabeledGraph
from .instances import cgk_level_of


class FrameError(GraphError):
    """A constructed frame failed validation."""

    def __init__(self, edge: int, violations: list[str]):
        super().__init__(f"frame for edge {edge} invalid: {'; '.join(violations)}")
        self.edge = edge
        self.violations = violations


class FrameSymmetryError(GraphError):
    """Membership symmetry failed for a pair of edges."""

    def __init__(self, first: int, second: int):
        super().__init__(
            f"frame symmetry broken: edge {second} in frame of {first}, not conversely"
        )
        self.pair = (first, second)


@dataclass(frozen=True)
class Frame:
    owner: int
    path: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]

    def members(self) -> frozenset[int]:
        edges = set(self.path)
        for cycle in self.cycles:
            edges.update(cycle)
        return frozenset(edges)

    def to_json_obj(self) -> dict:
        return {
            "owner": self.owner,
            "path": list(self.path),
            "cycles": [list(c) for c in self.cycles],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Frame":
        return cls(
            owner=int(obj["owner"]),
            path=tuple(int(e) for e in obj["path"]),
            cycles=tuple(tuple(int(e) for e in c) for c in obj["cycles"]),
        )


@dataclass(frozen=True)
class FrameFamily:
    """One frame per edge plus the membership sets used for symmetry."""

    frames: tuple[Frame, ...]
    membership: tuple[frozenset[int], ...]


class _CopyIndex:
    """Construction structure of a generated looped graph, rebuilt from labels."""

    def __init__(self, g: LabeledGraph):
        if not g.directed:
            raise GraphError("frames are defined on directed graphs")
        self.g = g
        self.k = cgk_level_of(g)
        if not any(lbl and lbl.get("replacement") for lbl in g.labels):
            raise GraphError("frames need the looped family (closing edges present)")

        routes: dict[tuple, dict[str, list[tuple[int, int]]]] = {}
        for i, lbl in enumerate(g.labels):
            if not lbl or "copy" not in lbl:
                raise GraphError(f"edge {i} carries no construction labels")
            addr = tuple(lbl["copy"])
            routes.setdefault(addr, {"source": [], "sink": []})
            routes[addr][lbl["side"]].append((lbl["pos"], i))
        self.routes: dict[tuple, dict[str, tuple[int, ...]]] = {
            addr: {
                side: tuple(edge for _, edge in sorted(pairs))
                for side, pairs in sides.items()
            }
            for addr, sides in routes.items()
        }

        kids: dict[tuple, list[tuple]] = {}
        for addr in self.routes:
            if addr:
                kids.setdefault(addr[:-1], []).append(addr)
        self.children = {parent: tuple(sorted(c)) for parent, c in kids.items()}

        # Terminals of every real copy; the top-level rings have none.
        self.src_of: dict[tuple, int] = {}
        self.snk_of: dict[tuple, int] = {}
        self.copy_by_src: dict[int, tuple] = {}
        self.copy_by_snk: dict[int, tuple] = {}
        for addr, sides in self.routes.items():
            if not addr:
                continue
            first = g.edges[sides["source"][0]]
            last = g.edges[sides["source"][-1]]
            self.src_of[addr] = first.tail
            self.snk_of[addr] = last.head
            self.copy_by_src[first.tail] = addr
            self.copy_by_snk[last.head] = addr

        self.by_tail: dict[tuple, dict[str, dict[int, int]]] = {
            addr: {
                side: {g.edges[e].tail: e for e in edge_list}
                for side, edge_list in sides.items()
            }
            for addr, sides in self.routes.items()
        }

    def walk(self, addr: tuple, side: str, start: int, goal: int) -> list[int]:
        """Edges along one route from node `start` to node `goal`."""
        step = self.by_tail[addr][side]
        out: list[int] = []
        node = start
        while node != goal:
            edge = step[node]
            out.append(edge)
            node = self.g.edges[edge].head
        return out

    def cycle_of(self, addr: tuple) -> tuple[int, ...]:
        """The closed walk through all route edges of one copy."""
        sides = self.routes[addr]
        return sides["source"] + sides["sink"]

    def descend(self, station: int, orientation: str) -> tuple[list[int], int]:
        """Route through the copy whose terminal is `station`, if one hangs there.

        orientation "source": enter at the copy's source, leave at its sink;
        "sink": the reverse.  Returns (edges, exit node); stations of the
        lowest level have nothing below them and pass through unchanged.
        """
        lookup = self.copy_by_src if orientation == "source" else self.copy_by_snk
        addr = lookup.get(station)
        if addr is None:
            return [], station
        route = self.routes[addr][orientation]
        exit_node = self.snk_of[addr] if orientation == "source" else self.src_of[addr]
        return list(route), exit_node


def _hop_through_neighbor(
    index: _CopyIndex, parent: tuple, addr: tuple, side: str
) -> tuple[list[int], Optional[tuple]]:
    """From one terminal of `addr` around to its other terminal via the parent.

    Follows the parent's `side` route one step; if that lands on a sibling's
    terminal, crosses that sibling; if it lands on the parent's own terminal
    (the copy is last in the visiting order), steps straight back.  Either way
    the hop ends at the opposite-side terminal of `addr`.
    """
    g = index.g
    other = "sink" if side == "source" else "source"
    start = index.src_of[addr] if side == "source" else index.snk_of[addr]
    first = index.by_tail[parent][side][start]
    hop = [first]
    node = g.edges[first].head
    lookup = index.copy_by_src if side == "source" else index.copy_by_snk
    crossed = lookup.get(node)
    if crossed is not None and crossed[:-1] == parent:
        hop.extend(index.routes[crossed][side])
        node = index.snk_of[crossed] if side == "source" else index.src_of[crossed]
    else:
        crossed = None
    back = index.by_tail[parent][other][node]
    hop.append(back)
    return hop, crossed


def _route_frame_path(index: _CopyIndex, edge: int) -> tuple[list[int], Optional[tuple]]:
    """Path for an edge below the top level; returns (path, crossed sibling)."""
    g = index.g
    lbl = g.labels[edge]
    addr = tuple(lbl["copy"])
    side = lbl["side"]
    other = "sink" if side == "source" else "source"
    tail, head = g.edges[edge]
    near = index.src_of[addr] if side == "source" else index.snk_of[addr]
    far = index.snk_of[addr] if side == "source" else index.src_of[addr]

    path: list[int] = []
    if tail != near:
        connector, node = index.descend(tail, side)
        path.extend(connector)
        path.extend(index.walk(addr, other, node, near))
    hop, crossed = _hop_through_neighbor(index, addr[:-1], addr, side)
    path.extend(hop)
    if head != far:
        lookup = index.copy_by_src if side == "source" else index.copy_by_snk
        child = lookup.get(head)
        twin = head
        if child is not None and child[:-1] == addr:
            twin = index.snk_of[child] if side == "source" else index.src_of[child]
        path.extend(index.walk(addr, other, far, twin))
        if twin != head:
            path.extend(index.routes[child][other])
    return path, crossed


def _ring_frame_path(index: _CopyIndex, edge: int) -> list[int]:
    """Path for a top-level edge: descend, ride the other ring, ascend."""
    g = index.g
    side = g.labels[edge]["side"]
    other = "sink" if side == "source" else "source"
    tail, head = g.edges[edge]

    path, node = index.descend(tail, side)
    lookup = index.copy_by_src if side == "source" else index.copy_by_snk
    child = lookup.get(head)
    if child is not None:
        twin = index.snk_of[child] if side == "source" else index.src_of[child]
    else:
        twin = head
    path.extend(index.walk((), other, node, twin))
    if child is not None:
        path.extend(index.routes[child][other])
    return path


def build_frame(g: LabeledGraph, edge: int, _index: Optional[_CopyIndex] = None) -> Frame:
    """Frame for one edge: detour path plus untouched-sibling cycles."""
    index = _index or _CopyIndex(g)
    lbl = g.labels[edge]
    if not lbl or "level" not in lbl:
        raise GraphError(f"edge {edge} carries no construction labels")
    if lbl["level"] == index.k:
        return Frame(owner=edge, path=tuple(_ring_frame_path(index, edge)), cycles=())
    path, crossed = _route_frame_path(index, edge)
    addr = tuple(lbl["copy"])
    siblings = index.children.get(addr[:-1], ())
    cycles = tuple(
        index.cycle_of(sib) for sib in siblings if sib != addr and sib != crossed
    )
    return Frame(owner=edge, path=tuple(path), cycles=cycles)


def validate_frame(g: LabeledGraph, frame: Frame) -> list[str]:
    """Independent re-check of every frame invariant; [] means valid."""
    violations: list[str] = []
    if not g.directed:
        return ["frames require a directed graph"]
    owner = g.edges[frame.owner]

    if frame.owner in frame.path or any(frame.owner in c for c in frame.cycles):
        violations.append("owner edge present")

    if not frame.path:
        violations.append("path empty")
    else:
        if g.edges[frame.path[0]].tail != owner.tail:
            violations.append("path does not start at owner tail")
        if g.edges[frame.path[-1]].head != owner.head:
            violations.append("path does not end at owner head")
        for a, b in zip(frame.path, frame.path[1:]):
            if g.edges[a].head != g.edges[b].tail:
                violations.append("path not consecutive")
                break
        if len(set(frame.path)) != len(frame.path):
            violations.append("path repeats an edge")

    for ci, cycle in enumerate(frame.cycles):
        if not cycle:
            violations.append(f"cycle {ci} empty")
            continue
        for a, b in zip(cycle, cycle[1:]):
            if g.edges[a].head != g.edges[b].tail:
                violations.append(f"cycle {ci} not consecutive")
                break
        if g.edges[cycle[-1]].head != g.edges[cycle[0]].tail:
            violations.append(f"cycle {ci} not closed")
        if len(set(cycle)) != len(cycle):
            violations.append(f"cycle {ci} repeats an edge")

    pieces = [set(frame.path)] + [set(c) for c in frame.cycles]
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if pieces[i] & pieces[j]:
                violations.append("not edge-disjoint")
                break
        else:
            continue
        break
    return violations


def build_frame_family(g: LabeledGraph) -> FrameFamily:
    """Frames for every edge, validated, with the symmetry check enforced."""
    index = _CopyIndex(g)
    frames = []
    for edge in range(g.m):
        frame = build_frame(g, edge, _index=index)
        violations = validate_frame(g, frame)
        if violations:
            raise FrameError(edge, violations)
        frames.append(frame)
    membership = tuple(frame.members() for frame in frames)
    for e1 in range(g.m):
        for e2 in membership[e1]:
            if e1 not in membership[e2]:
                raise FrameSymmetryError(e1, e2)
    return FrameFamily(frames=tuple(frames), membership=membership)
