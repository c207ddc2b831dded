"""Marked-vertex link diagrams (ch-diagrams) as combinatorial plane graphs.

A diagram is a list of 4-valent nodes, each carrying the labels of the four
semi-arcs (edges) around it in counterclockwise order, plus a count of
crossing-free circles.  Two node kinds exist:

* ``X a b c d`` -- a crossing; slots a,c are the under-strand pass and slots
  b,d the over-strand pass.
* ``V a b c d`` -- a marked vertex; the strands pass straight through (a-c
  and b-d) and the marker sits in the two corner regions between slots a,b
  and between slots c,d.

Every edge label must occur exactly twice.  The counterclockwise slot
orders define a rotation system, so faces are combinatorial orbits and
planarity is exactly the per-component Euler check V - E + F = 2.

The reference orientation of an edge runs from its first occurrence (in
node-list order, slots scanned counterclockwise) to its second; the edge's
normal is the reference direction rotated +90 degrees counterclockwise.
"""

from dataclasses import dataclass, field, replace


class ChdError(ValueError):
    """Base class for diagram format and validation errors."""


class ChdParseError(ChdError):
    """Unreadable statement, bad slot count or bad edge label."""


class UnpairedEdgeError(ChdError):
    """Some edge label does not occur exactly twice."""


class PlanarityError(ChdError):
    """The rotation system violates Euler's formula on some component."""


@dataclass(frozen=True)
class Crossing:
    slots: tuple  # 4 edge labels, counterclockwise; (slots[0], slots[2]) under

    kind = "X"

    def __post_init__(self):
        if len(self.slots) != 4:
            raise ChdParseError(f"crossing needs 4 slots, got {self.slots!r}")


@dataclass(frozen=True)
class MarkedVertex:
    slots: tuple  # 4 edge labels, counterclockwise; marker corners (0,1) and (2,3)

    kind = "V"

    def __post_init__(self):
        if len(self.slots) != 4:
            raise ChdParseError(f"vertex needs 4 slots, got {self.slots!r}")


@dataclass(frozen=True)
class ChDiagram:
    """Immutable ch-diagram.  ``flips`` records reference-orientation
    overrides: labels in it have tail and head swapped."""

    nodes: tuple = ()
    circles: int = 0
    name: str = ""
    flips: frozenset = field(default_factory=frozenset)

    @property
    def crossings(self):
        return tuple(n for n in self.nodes if n.kind == "X")

    @property
    def vertices(self):
        return tuple(n for n in self.nodes if n.kind == "V")

    @property
    def edge_labels(self):
        labels = set()
        for node in self.nodes:
            labels.update(node.slots)
        return labels

    def edge_ends(self):
        """Map each label to its two (node_index, slot) occurrences in
        textual order (before any flip)."""
        ends = {}
        for i, node in enumerate(self.nodes):
            for s, label in enumerate(node.slots):
                ends.setdefault(label, []).append((i, s))
        return ends

    def oriented_ends(self):
        """Map label -> (tail_end, head_end) honouring ``flips``."""
        out = {}
        for label, occ in self.edge_ends().items():
            if len(occ) == 2:
                tail, head = occ
                if label in self.flips:
                    tail, head = head, tail
                out[label] = (tail, head)
        return out

    def is_link_diagram(self):
        return not self.vertices


# The spec-level LinkDiagram is a ChDiagram without marked vertices.
LinkDiagram = ChDiagram


def ensure_link_diagram(d: ChDiagram, what="operation"):
    if d.vertices:
        raise ChdError(f"{what} needs a marker-free diagram, found {len(d.vertices)} vertices")
    return d


# --- parsing and serialization ---------------------------------------------

def parse_chd(text: str, name="") -> ChDiagram:
    """Parse .chd text.  One statement per line; '#' starts a comment.

    Statements: ``circle``, ``X a b c d``, ``V a b c d``,
    ``name <string>``.  Labels are positive integers.
    """
    nodes = []
    circles = 0
    declared_name = name
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head, args = parts[0], parts[1:]
        if head == "name":
            declared_name = " ".join(args)
            continue
        if head == "circle":
            if args:
                raise ChdParseError(f"line {lineno}: 'circle' takes no arguments")
            circles += 1
            continue
        if head in ("X", "V"):
            if len(args) != 4:
                raise ChdParseError(f"line {lineno}: '{head}' needs 4 edge labels")
            try:
                slots = tuple(int(a) for a in args)
            except ValueError:
                raise ChdParseError(f"line {lineno}: non-integer edge label") from None
            if any(s < 1 for s in slots):
                raise ChdParseError(f"line {lineno}: edge labels must be positive")
            nodes.append(Crossing(slots) if head == "X" else MarkedVertex(slots))
            continue
        raise ChdParseError(f"line {lineno}: unknown statement {head!r}")
    d = ChDiagram(nodes=tuple(nodes), circles=circles, name=declared_name)
    validate(d)
    return d


def to_chd(d: ChDiagram) -> str:
    lines = []
    if d.name:
        lines.append(f"name {d.name}")
    lines.extend("circle" for _ in range(d.circles))
    for node in d.nodes:
        lines.append(node.kind + " " + " ".join(str(s) for s in node.slots))
    return "\n".join(lines) + "\n"


def validate(d: ChDiagram):
    """Check edge pairing and the per-component Euler formula."""
    ends = d.edge_ends()
    for label, occ in ends.items():
        if len(occ) != 2:
            raise UnpairedEdgeError(f"edge {label} occurs {len(occ)} time(s), expected 2")
    _trace_faces(d, check=True)
    return d


# --- faces ------------------------------------------------------------------

@dataclass(frozen=True)
class FaceMap:
    """Faces of the diagram's rotation system.

    ``edge_sides[label] = (left, right)`` names the faces on either side of
    the edge relative to its reference orientation.  ``marker_faces`` maps a
    vertex's node index to the face ids of its two marker corners.  On
    disconnected diagrams faces are traced per component and outer faces
    are NOT merged; ``note`` carries the disclaimer.
    """

    face_ids: tuple
    edge_sides: dict
    marker_faces: dict
    components: tuple  # per node-component: (n_nodes, n_edges, n_faces)
    note: str = ""

    @property
    def count(self):
        return len(self.face_ids)


def _next_dart(d, ends, dart):
    """Faces keep the region on the left: arrive at slot j, leave at slot j-1."""
    label, arr = dart
    node, slot = ends[label][arr]
    s2 = (slot - 1) % 4
    label2 = d.nodes[node].slots[s2]
    (n0, s0), _ = ends[label2]
    depart = 0 if (n0, s0) == (node, s2) else 1
    return (label2, 1 - depart)


def _trace_faces(d: ChDiagram, check=False):
    ends = d.edge_ends()
    darts = [(label, k) for label in sorted(ends) for k in (0, 1)]
    orbit_of = {}
    orbits = []
    for start in darts:
        if start in orbit_of:
            continue
        orbit = []
        cur = start
        while cur not in orbit_of:
            orbit_of[cur] = len(orbits)
            orbit.append(cur)
            cur = _next_dart(d, ends, cur)
        orbits.append(tuple(orbit))

    # node components via shared edges
    parent = list(range(len(d.nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for occ in ends.values():
        a, b = find(occ[0][0]), find(occ[1][0])
        if a != b:
            parent[a] = b
    comp_of_node = {i: find(i) for i in range(len(d.nodes))}
    comp_ids = sorted(set(comp_of_node.values()))
    components = []
    for comp in comp_ids:
        comp_nodes = [i for i in range(len(d.nodes)) if comp_of_node[i] == comp]
        comp_edges = {label for label, occ in ends.items() if comp_of_node[occ[0][0]] == comp}
        comp_faces = {orbit_of[(label, 0)] for label in comp_edges} | {
            orbit_of[(label, 1)] for label in comp_edges
        }
        v, e, f = len(comp_nodes), len(comp_edges), len(comp_faces)
        if check and v - e + f != 2:
            raise PlanarityError(
                f"component with nodes {comp_nodes}: V-E+F = {v}-{e}+{f} != 2; "
                "rotation system is not planar"
            )
        components.append((v, e, f))
    return orbits, orbit_of, components, comp_ids


def faces(d: ChDiagram) -> FaceMap:
    orbits, orbit_of, components, comp_ids = _trace_faces(d, check=True)
    face_ids = tuple(f"f{i}" for i in range(len(orbits)))
    oriented = d.oriented_ends()
    ends = d.edge_ends()
    edge_sides = {}
    for label in sorted(oriented):
        tail, head = oriented[label]
        occ = ends[label]
        head_idx = occ.index(head)
        tail_idx = occ.index(tail)
        # left face of tail->head travel is the face traced by the dart
        # arriving at the head end
        edge_sides[label] = (f"f{orbit_of[(label, head_idx)]}", f"f{orbit_of[(label, tail_idx)]}")
    marker_faces = {}
    for i, node in enumerate(d.nodes):
        if node.kind != "V":
            continue
        corners = []
        for later_slot in (1, 3):  # corners (0,1) and (2,3)
            label = node.slots[later_slot]
            occ = ends[label]
            arr = occ.index((i, later_slot))
            corners.append(f"f{orbit_of[(label, arr)]}")
        marker_faces[i] = tuple(corners)
    note = ""
    extra = []
    if len(comp_ids) > 1 or (d.circles and d.nodes):
        note = "disconnected diagram: faces traced per component, outer faces not merged"
    for k in range(d.circles):
        extra.extend([f"circle{k}.in", f"circle{k}.out"])
    return FaceMap(
        face_ids=face_ids + tuple(extra),
        edge_sides=edge_sides,
        marker_faces=marker_faces,
        components=tuple(components),
        note=note,
    )


# --- strand tracing, smoothing, Euler characteristic ------------------------

def _curve_cycles(d: ChDiagram):
    """Closed strands of the underlying singular curve.  Both crossings and
    vertices connect opposite slots.  Returns cycles as tuples of
    (node_index, slot) entries, one per pass endpoint."""
    ends = d.edge_ends()
    seen = set()
    cycles = []
    for start_label in sorted(ends):
        for start_arr in (0, 1):
            if (start_label, start_arr) in seen:
                continue
            cycle = []
            label, arr = start_label, start_arr
            while (label, arr) not in seen:
                seen.add((label, arr))
                node, slot = ends[label][arr]
                cycle.append((node, slot))
                out_slot = (slot + 2) % 4
                label = d.nodes[node].slots[out_slot]
                occ = ends[label]
                depart = occ.index((node, out_slot))
                arr = 1 - depart
                seen.add((label, depart))
            cycles.append(tuple(cycle))
    return cycles


def count_components(d: ChDiagram) -> int:
    """Closed strands of the diagram's curve, plus bare circles."""
    return len(_curve_cycles(d)) + d.circles


SMOOTH_JOINS = {"minus": ((0, 1), (2, 3)), "plus": ((1, 2), (3, 0))}


def smooth(d: ChDiagram, sign: str) -> LinkDiagram:
    """Resolve every marked vertex.

    ``minus`` joins each vertex's slots a-b and c-d (keeping the marker's
    two regions separate); ``plus`` joins b-c and d-a (merging them).
    Crossings are untouched.  Edges are renumbered 1..E deterministically.
    """
    if sign not in SMOOTH_JOINS:
        raise ValueError(f"sign must be 'minus' or 'plus', got {sign!r}")
    joins = SMOOTH_JOINS[sign]
    ends = d.edge_ends()
    weld = {}
    crossing_index = {}
    new_nodes = []
    for i, node in enumerate(d.nodes):
        if node.kind == "V":
            for a, b in joins:
                weld[(i, a)] = (i, b)
                weld[(i, b)] = (i, a)
        else:
            crossing_index[i] = len(new_nodes)
            new_nodes.append(node)

    def other_end(label, here):
        occ = ends[label]
        return occ[1] if occ[0] == here else occ[0]

    consumed = set()
    chains = []  # (start_port, end_port, labels)
    for i, node in enumerate(d.nodes):
        if node.kind != "X":
            continue
        for s in range(4):
            if (i, s) in consumed:
                continue
            labels = []
            port = (i, s)
            label = node.slots[s]
            here = port
            while True:
                labels.append(label)
                far = other_end(label, here)
                if far not in weld:
                    break
                here = weld[far]
                label = d.nodes[here[0]].slots[here[1]]
            consumed.add(port)
            consumed.add(far)
            chains.append((port, far, tuple(labels)))

    # chains that never touch a crossing close up into circles
    chained = {lab for _, _, labels in chains for lab in labels}
    leftover = set(ends) - chained
    new_circles = d.circles
    while leftover:
        label = min(leftover)
        here = ends[label][0]
        while True:
            leftover.discard(label)
            far = other_end(label, here)
            here = weld[far]
            label = d.nodes[here[0]].slots[here[1]]
            if label not in leftover:
                break
        new_circles += 1

    chains.sort(key=lambda c: min(c[2]))
    slot_label = {}
    for new_label, (start, end, labels) in enumerate(chains, start=1):
        slot_label[start] = new_label
        slot_label[end] = new_label
    renumbered = tuple(
        Crossing(tuple(slot_label[(i, s)] for s in range(4)))
        for i, node in enumerate(d.nodes)
        if node.kind == "X"
    )
    return ChDiagram(nodes=renumbered, circles=new_circles, name=d.name)


def euler_characteristic(d: ChDiagram) -> int:
    """mu(L-) + mu(L+) - (number of marked vertices)."""
    mu_minus = count_components(smooth(d, "minus"))
    mu_plus = count_components(smooth(d, "plus"))
    return mu_minus + mu_plus - len(d.vertices)


def ch_index(d: ChDiagram) -> int:
    return len(d.nodes)


# --- surface components and orientability -----------------------------------

@dataclass(frozen=True)
class SurfaceComponent:
    euler: int
    orientable: bool
    curve_circles: int
    vertices: int


def surface_components(d: ChDiagram):
    """Connected components of the surface the diagram presents.

    Curve circles sharing a marked vertex belong to one component
    (crossings do not join components; they are projection artifacts).
    Orientability is a parity constraint system on edge orientations:
    each crossing pass wants head-to-tail coherence, each vertex wants
    its two strands coherently opposed.
    """
    cycles = _curve_cycles(d)
    ends = d.edge_ends()
    cycle_of_edge = {}
    for ci, cycle in enumerate(cycles):
        for node, slot in cycle:
            cycle_of_edge[d.nodes[node].slots[slot]] = ci
    parent = list(range(len(cycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, node in enumerate(d.nodes):
        if node.kind != "V":
            continue
        a = cycle_of_edge[node.slots[0]]
        b = cycle_of_edge[node.slots[1]]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    groups = {}
    for ci in range(len(cycles)):
        groups.setdefault(find(ci), []).append(ci)

    # count smoothed circles per group by re-walking the weld structure
    def group_mu(sign):
        joins = SMOOTH_JOINS[sign]
        weld = {}
        for i, node in enumerate(d.nodes):
            if node.kind == "V":
                for a, b in joins:
                    weld[(i, a)] = (i, b)
                    weld[(i, b)] = (i, a)
        seen = set()
        mu = {}
        for label in sorted(ends):
            for arr in (0, 1):
                if (label, arr) in seen:
                    continue
                group = find(cycle_of_edge[label])
                start = (label, arr)
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    lab, a = cur
                    node, slot = ends[lab][a]
                    if (node, slot) in weld:
                        nxt_node, nxt_slot = weld[(node, slot)]
                    else:
                        nxt_node, nxt_slot = node, (slot + 2) % 4
                    lab2 = d.nodes[nxt_node].slots[nxt_slot]
                    occ = ends[lab2]
                    depart = occ.index((nxt_node, nxt_slot))
                    seen.add((lab2, depart))
                    cur = (lab2, 1 - depart)
                mu[group] = mu.get(group, 0) + 1
        return mu

    mu_minus = group_mu("minus")
    mu_plus = group_mu("plus")

    # orientability: parity union-find over edges
    eparent = {}
    eparity = {}

    def efind(x):
        if eparent.setdefault(x, x) == x:
            eparity.setdefault(x, 0)
            return x, 0
        root, par = efind(eparent[x])
        eparent[x] = root
        eparity[x] = (eparity[x] + par) % 2
        return root, eparity[x]

    def eunion(x, y, rel):
        rx, px = efind(x)
        ry, py = efind(y)
        if rx == ry:
            return (px + py) % 2 == rel
        eparent[ry] = rx
        eparity[ry] = (px + rel + py) % 2
        return True

    def points_in_flag(label, node, slot):
        occ = ends[label]
        return 1 if occ.index((node, slot)) == 1 else 0  # head points in

    consistent = {g: True for g in groups}
    for i, node in enumerate(d.nodes):
        s = node.slots
        flags = [points_in_flag(s[k], i, k) for k in range(4)]
        g = find(cycle_of_edge[s[0]])
        if node.kind == "X":
            # each pass: one end in, one out
            ok = eunion((s[0]), (s[2]), (flags[0] + flags[2] + 1) % 2)
            g2 = find(cycle_of_edge[s[1]])
            ok2 = eunion((s[1]), (s[3]), (flags[1] + flags[3] + 1) % 2)
            if not ok:
                consistent[g] = False
            if not ok2:
                consistent[g2] = False
        else:
            # strands a-c and b-d each coherent as rays (both in or both out),
            # and the two strands opposed
            for (u, v, rel) in (
                (s[0], s[2], (flags[0] + flags[2]) % 2),
                (s[1], s[3], (flags[1] + flags[3]) % 2),
                (s[0], s[1], (flags[0] + flags[1] + 1) % 2),
            ):
                if not eunion(u, v, rel):
                    consistent[g] = False

    out = []
    for g, cycle_list in sorted(groups.items()):
        n_vertices = sum(
            1
            for i, node in enumerate(d.nodes)
            if node.kind == "V" and find(cycle_of_edge[node.slots[0]]) == g
        )
        chi = mu_minus.get(g, 0) + mu_plus.get(g, 0) - n_vertices
        out.append(
            SurfaceComponent(
                euler=chi,
                orientable=consistent[g],
                curve_circles=len(cycle_list),
                vertices=n_vertices,
            )
        )
    for _ in range(d.circles):
        out.append(SurfaceComponent(euler=2, orientable=True, curve_circles=1, vertices=0))
    return out


# --- transformations ---------------------------------------------------------

def flip_edge(d: ChDiagram, label: int) -> ChDiagram:
    """Reverse one edge's reference orientation (colors transform by rho)."""
    if label not in d.edge_labels:
        raise ChdError(f"no edge {label} in diagram")
    return replace(d, flips=d.flips ^ {label})


def mirror(d: ChDiagram) -> ChDiagram:
    """Switch every crossing (under pass becomes over pass)."""
    nodes = tuple(
        Crossing(node.slots[1:] + node.slots[:1]) if node.kind == "X" else node
        for node in d.nodes
    )
    return replace(d, nodes=nodes, flips=frozenset())


def relabel(d: ChDiagram, mapping: dict) -> ChDiagram:
    """Apply a permutation of edge labels."""
    nodes = tuple(
        type(node)(tuple(mapping.get(s, s) for s in node.slots)) for node in d.nodes
    )
    flips = frozenset(mapping.get(s, s) for s in d.flips)
    return replace(d, nodes=nodes, flips=flips)


def normalized(d: ChDiagram) -> ChDiagram:
    """Deterministic node rotations and 1..E edge labels (stable dedup key)."""
    nodes = []
    for node in d.nodes:
        s = node.slots
        rot = s[2:] + s[:2]
        nodes.append(type(node)(min(s, rot)))
    order = {}
    for node in nodes:
        for s in node.slots:
            if s not in order:
                order[s] = len(order) + 1
    out = tuple(type(node)(tuple(order[s] for s in node.slots)) for node in nodes)
    return ChDiagram(nodes=out, circles=d.circles, name=d.name)


def diagram_key(d: ChDiagram):
    n = normalized(d)
    return (tuple((node.kind, node.slots) for node in n.nodes), n.circles)
