"""Reidemeister simplification and three-valued unlink detection.

Moves are local rewrites of the crossing rotation system, applied through a
port-surgery helper so every move keeps the diagram structurally valid.
``is_unlink`` is sound in both directions and explicitly three-valued:

* ``unlink`` only when recorded moves reach a crossing-free diagram (the
  trace replays);
* ``not_unlink`` only with a certificate (Fox 3-coloring count differs
  from 3^components);
* ``unknown`` when the bounded search gives out.
"""

from dataclasses import dataclass

from .algebra import SymmetricQuandle, involution_from_spec, make_dihedral
from .coloring import count_colorings
from .diagram import (
    ChDiagram,
    Crossing,
    _trace_faces,
    count_components,
    diagram_key,
    ensure_link_diagram,
    normalized,
    smooth,
)

_FOX3 = SymmetricQuandle(make_dihedral(3), involution_from_spec("identity", 3))


@dataclass(frozen=True)
class SimplificationResult:
    verdict: str  # "unlink" | "not_unlink" | "unknown"
    trace: tuple
    budget_used: int
    components: int
    certificate: dict | None = None


@dataclass(frozen=True)
class AdmissibilityReport:
    minus: SimplificationResult
    plus: SimplificationResult
    admissible: str  # "yes" | "no" | "unknown"


# --- port surgery -------------------------------------------------------------

def _surgery(d: ChDiagram, removed, new_nodes, connections, allow_drop=False):
    """Rebuild a diagram after deleting ``removed`` node indices, adding
    ``new_nodes`` (list of ("X", names) with ports counterclockwise) and
    re-wiring.

    Connection endpoints: ("old", i, s) for a surviving port whose original
    edge is replaced, ("new", k, s) for slot s of new node k, or
    ("stub", i, s) for "whatever removed port (i, s) was attached to".
    Chains of removed ports that close up become circles.  Chains that
    dead-end are dropped, which only ``allow_drop`` callers may rely on.
    """
    ends = d.edge_ends()
    partner = {}
    for occ in ends.values():
        a, b = occ
        partner[a] = b
        partner[b] = a

    conn = {}
    overridden = set()
    for x, y in connections:
        for p in (x, y):
            if p[0] == "old":
                if p[1] in removed:
                    raise ValueError(f"direct reference to removed port {p}")
                overridden.add((p[1], p[2]))
            elif p[0] == "stub" and p[1] not in removed:
                raise ValueError(f"stub on surviving node {p}")
        for p, q in ((x, y), (y, x)):
            if p in conn:
                raise ValueError(f"port {p} connected twice")
            conn[p] = q
    for (i, s) in overridden:
        j, t = partner[(i, s)]
        if j not in removed and (j, t) not in overridden:
            raise ValueError(f"edge at {(i, s)} replaced on one end only")

    kept = [i for i in range(len(d.nodes)) if i not in removed]

    def conn_of(raw):
        i, s = raw
        key = ("stub", i, s) if i in removed else ("old", i, s)
        return conn.get(key)

    def is_terminal(ep):
        return ep[0] == "new" or (ep[0] == "old" and ep[1] not in removed)

    terminals = [("old", i, s) for i in kept for s in range(4)]
    terminals += [("new", k, s) for k in range(len(new_nodes)) for s in range(4)]

    edge_of = {}
    visited_removed = set()
    guard_max = 16 * (len(d.nodes) + len(new_nodes)) + 16
    next_label = 1

    for start in terminals:
        if start in edge_of:
            continue
        if start[0] == "new" or (start[1], start[2]) in overridden:
            cur = conn.get(start)
            by_conn = True
            if cur is None:
                raise ValueError(f"unconnected port {start}")
        else:
            raw = partner[(start[1], start[2])]
            cur, by_conn = ("old", raw[0], raw[1]), False
        guard = 0
        while True:
            guard += 1
            if guard > guard_max:
                raise RuntimeError("surgery walk did not terminate")
            if cur[0] == "stub":
                cur = ("old", cur[1], cur[2])
            if is_terminal(cur):
                break
            # removed port: alternate link type
            raw = (cur[1], cur[2])
            visited_removed.add(raw)
            if by_conn:
                nxt = partner[raw]
                cur, by_conn = ("old", nxt[0], nxt[1]), False
            else:
                cur = conn_of(raw)
                by_conn = True
                if cur is None:
                    raise ValueError(f"chain from {start} dead-ends at {raw}")
        edge_of[start] = next_label
        edge_of[cur] = next_label
        next_label += 1

    # leftover removed ports: every one still has its old edge link (to
    # another leftover port) and possibly a conn link.  Components where
    # every port carries a conn link are closed chains: circles.  Others
    # are deliberately dropped strands.
    extra_circles = 0
    leftover = sorted(
        (i, s) for i in removed for s in range(4) if (i, s) not in visited_removed
    )
    seen = set()
    for raw0 in leftover:
        if raw0 in seen:
            continue
        component = set()
        stack = [raw0]
        while stack:
            raw = stack.pop()
            if raw in component:
                continue
            component.add(raw)
            stack.append(partner[raw])
            nxt = conn_of(raw)
            if nxt is not None:
                stack.append((nxt[1], nxt[2]))
        seen.update(component)
        if all(conn_of(raw) is not None for raw in component):
            extra_circles += 1
        elif not allow_drop:
            raise ValueError(f"unexpected dropped strand at {raw0}")

    nodes = []
    for i in kept:
        node = d.nodes[i]
        slots = tuple(edge_of[("old", i, s)] for s in range(4))
        nodes.append(type(node)(slots))
    for k, (kind, _) in enumerate(new_nodes):
        if kind != "X":
            raise ValueError("surgery only creates crossings")
        slots = tuple(edge_of[("new", k, s)] for s in range(4))
        nodes.append(Crossing(slots))
    return ChDiagram(nodes=tuple(nodes), circles=d.circles + extra_circles, name=d.name)


def _remove_straight(d: ChDiagram, nodes):
    """Delete crossings, letting both strands run straight through."""
    connections = []
    for i in nodes:
        connections.append((("stub", i, 0), ("stub", i, 2)))
        connections.append((("stub", i, 1), ("stub", i, 3)))
    return _surgery(d, set(nodes), [], connections)


# --- move catalog --------------------------------------------------------------

def find_r1(d: ChDiagram):
    """Crossings carrying a kink: an edge occupying two adjacent slots."""
    out = []
    for i, node in enumerate(d.nodes):
        if node.kind != "X":
            continue
        for s in range(4):
            if node.slots[s] == node.slots[(s + 1) % 4]:
                out.append(("r1", i))
                break
    return out


def find_r2(d: ChDiagram):
    """Bigon faces whose strands allow a type-2 reduction."""
    orbits, _, _, _ = _trace_faces(d)
    ends = d.edge_ends()
    out = []
    for orbit in orbits:
        if len(orbit) != 2:
            continue
        (e, ae), (f, af) = orbit
        if e == f:
            continue
        p = ends[e][ae][0]
        q = ends[f][af][0]
        if p == q:
            continue
        (_, s0), (_, s1) = ends[e]
        if s0 % 2 == s1 % 2:
            out.append(("r2", tuple(sorted((p, q)))))
    seen, uniq = set(), []
    for mv in out:
        if mv not in seen:
            seen.add(mv)
            uniq.append(mv)
    return uniq


def _r3_pattern(d, ends, orbit):
    """Classify a triangular face for a type-3 slide.

    Returns ("std"|"mir", rotated_darts) where the first dart's edge is
    over at both its crossings.  In the "std" pattern the under-under side
    follows two steps later (cyclic order top, mixed, bottom); "mir" is the
    mirror arrangement (top, bottom, mixed).  Cyclic triangles with no
    all-over strand give None.
    """
    for r in range(3):
        rot = orbit[r:] + orbit[:r]
        (t, at), (x1, a1), (x2, a2) = rot
        if len({t, x1, x2}) != 3:
            continue
        nodes_hit = {ends[t][at][0], ends[x1][a1][0], ends[x2][a2][0]}
        if len(nodes_hit) != 3:
            continue
        if not all(s % 2 == 1 for (_, s) in ends[t]):
            continue
        if all(s % 2 == 0 for (_, s) in ends[x2]):
            return ("std", rot)
        if all(s % 2 == 0 for (_, s) in ends[x1]):
            return ("mir", rot)
    return None


def find_r3(d: ChDiagram):
    orbits, _, _, _ = _trace_faces(d)
    ends = d.edge_ends()
    out = []
    for orbit in orbits:
        if len(orbit) != 3:
            continue
        pat = _r3_pattern(d, ends, orbit)
        if pat is not None:
            out.append(("r3", pat))
    return out


def find_r2plus(d: ChDiagram):
    """Ordered (dart_e, dart_g, over) choices pushing edge e across a face
    over (or under) edge g."""
    orbits, _, _, _ = _trace_faces(d)
    out = []
    for orbit in orbits:
        for de in orbit:
            for dg in orbit:
                if de[0] == dg[0]:
                    continue
                for over in (True, False):
                    out.append(("r2p", (de, dg, over)))
    return out


def _apply_r3(d, ends, pattern):
    case, darts = pattern
    if case == "std":
        # darts: t->A, m->C, u->B; sides t=AB over-over, m=AC mixed, u=CB under-under
        (t, at), (m, am), (u, au) = darts
        A, a_t = ends[t][at]
        C, c_m = ends[m][am]
        B, b_u = ends[u][au]
        a_m = (a_t - 1) % 4
        c_u = (c_m - 1) % 4
        b_t = (b_u - 1) % 4
        new_nodes = [
            ("X", ("u*", "T_west", "U_far", "t*")),  # 0: t x u
            ("X", ("m*", "t*", "M_far", "T_east")),  # 1: t x m
            ("X", ("u*", "m*", "U_up", "M_up")),     # 2: m x u
        ]
        connections = [
            (("new", 0, 1), ("stub", A, (a_t + 2) % 4)),
            (("new", 1, 3), ("stub", B, (b_t + 2) % 4)),
            (("new", 2, 3), ("stub", A, (a_m + 2) % 4)),
            (("new", 1, 2), ("stub", C, (c_m + 2) % 4)),
            (("new", 2, 2), ("stub", B, (b_u + 2) % 4)),
            (("new", 0, 2), ("stub", C, (c_u + 2) % 4)),
            (("new", 0, 3), ("new", 1, 1)),
            (("new", 1, 0), ("new", 2, 1)),
            (("new", 0, 0), ("new", 2, 0)),
        ]
        return _surgery(d, {A, B, C}, new_nodes, connections, allow_drop=True)
    # mirror: darts t->B', u->C', m->A'
    (t, at), (u, au), (m, am) = darts
    B_, b_t = ends[t][at]
    C_, c_u = ends[u][au]
    A_, a_m = ends[m][am]
    u_at_B = (b_t - 1) % 4
    m_at_C = (c_u - 1) % 4
    t_at_A = (a_m - 1) % 4
    new_nodes = [
        ("X", ("m*", "T_west", "M_far", "t*")),   # 0: t x m
        ("X", ("u*", "t*", "U_far", "T_east")),   # 1: t x u
        ("X", ("U_up", "m*", "u*", "M_up")),      # 2: m x u
    ]
    connections = [
        (("new", 0, 0), ("new", 2, 1)),
        (("new", 0, 1), ("stub", B_, (b_t + 2) % 4)),
        (("new", 0, 2), ("stub", C_, (m_at_C + 2) % 4)),
        (("new", 0, 3), ("new", 1, 1)),
        (("new", 1, 0), ("new", 2, 2)),
        (("new", 1, 2), ("stub", C_, (c_u + 2) % 4)),
        (("new", 1, 3), ("stub", A_, (t_at_A + 2) % 4)),
        (("new", 2, 0), ("stub", B_, (u_at_B + 2) % 4)),
        (("new", 2, 3), ("stub", A_, (a_m + 2) % 4)),
    ]
    return _surgery(d, {A_, B_, C_}, new_nodes, connections, allow_drop=True)


def apply_move(d: ChDiagram, move) -> ChDiagram:
    kind, params = move
    ends = d.edge_ends()
    if kind == "r1":
        return normalized(_remove_straight(d, [params]))
    if kind == "r2":
        return normalized(_remove_straight(d, list(params)))
    if kind == "r3":
        return normalized(_apply_r3(d, ends, params))
    if kind == "r2p":
        (e, ae), (g, ag), over = params
        e_arr = ends[e][ae]
        e_dep = ends[e][1 - ae]
        g_arr = ends[g][ag]
        g_dep = ends[g][1 - ag]
        if over:
            p_slots = ("g_mid", "tip", "g_west", "e_w")
            q_slots = ("g_east", "tip", "g_mid", "e_e")
            pm = {"g_mid": 0, "tip": 1, "g_west": 2, "e_w": 3}
            qm = {"g_east": 0, "tip": 1, "g_mid": 2, "e_e": 3}
        else:
            p_slots = ("tip", "g_west", "e_w", "g_mid")
            q_slots = ("tip", "g_mid", "e_e", "g_east")
            pm = {"tip": 0, "g_west": 1, "e_w": 2, "g_mid": 3}
            qm = {"tip": 0, "g_mid": 1, "e_e": 2, "g_east": 3}
        new_nodes = [("X", p_slots), ("X", q_slots)]
        connections = [
            (("new", 0, pm["e_w"]), ("old",) + e_dep),
            (("new", 1, qm["e_e"]), ("old",) + e_arr),
            (("new", 0, pm["tip"]), ("new", 1, qm["tip"])),
            (("new", 1, qm["g_east"]), ("old",) + g_dep),
            (("new", 0, pm["g_west"]), ("old",) + g_arr),
            (("new", 0, pm["g_mid"]), ("new", 1, qm["g_mid"])),
        ]
        return normalized(_surgery(d, set(), new_nodes, connections))
    raise ValueError(f"unknown move {kind!r}")


# --- searches -------------------------------------------------------------------

def greedy_reduce(d: ChDiagram):
    """Apply decreasing moves until none fire.  Returns (diagram, trace)."""
    trace = []
    current = normalized(d)
    while True:
        moves = find_r1(current) or find_r2(current)
        if not moves:
            return current, trace
        move = moves[0]
        current = apply_move(current, move)
        trace.append((move[0], move[1], diagram_key(current)))


def is_unlink(l: ChDiagram, budget: int = 2000) -> SimplificationResult:
    """Three-valued unlink detection within a move budget.

    Greedy R1/R2 reduction first; then a Fox-3 certificate can rule the
    unlink out; then breadth-first search over R1, R2, R3 and +2-crossing
    R2 moves hunts for a crossing-free diagram.  ``budget`` counts move
    applications.
    """
    ensure_link_diagram(l, "is_unlink")
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    mu = count_components(l)
    start = normalized(l)
    reduced, trace = greedy_reduce(start)
    used = len(trace)
    if not reduced.nodes:
        return SimplificationResult("unlink", tuple(trace), used, mu)

    fox = count_colorings(reduced, _FOX3)
    expected = 3 ** mu
    if fox != expected:
        certificate = {"method": "fox3", "count": fox, "expected": expected}
        return SimplificationResult("not_unlink", (), used, mu, certificate)

    max_crossings = len(reduced.nodes) + 2
    frontier = [(reduced, tuple(trace))]
    seen = {diagram_key(reduced)}
    while frontier and used < budget:
        next_frontier = []
        for current, path in frontier:
            moves = find_r1(current) + find_r2(current) + find_r3(current)
            if len(current.nodes) + 2 <= max_crossings:
                moves += find_r2plus(current)
            for move in moves:
                if used >= budget:
                    break
                used += 1
                nxt = apply_move(current, move)
                key = diagram_key(nxt)
                if key in seen:
                    continue
                seen.add(key)
                nxt_red, extra = greedy_reduce(nxt)
                new_path = path + ((move[0], move[1], diagram_key(nxt)),) + tuple(extra)
                if not nxt_red.nodes:
                    return SimplificationResult("unlink", new_path, used, mu)
                if len(nxt_red.nodes) <= max_crossings:
                    next_frontier.append((nxt_red, new_path))
        frontier = next_frontier
    return SimplificationResult("unknown", (), used, mu)


def replay_trace(l: ChDiagram, trace) -> ChDiagram:
    """Re-apply a recorded trace, checking each step's diagram key."""
    current = normalized(l)
    for kind, params, key_after in trace:
        current = apply_move(current, (kind, params))
        if diagram_key(current) != key_after:
            raise ValueError(f"trace replay diverged at {kind} {params}")
    return current


def is_admissible(d: ChDiagram, budget: int = 2000) -> AdmissibilityReport:
    """Both smoothings must be unlinks for the diagram to present a surface."""
    minus = is_unlink(smooth(d, "minus"), budget)
    plus = is_unlink(smooth(d, "plus"), budget)
    if minus.verdict == "unlink" and plus.verdict == "unlink":
        verdict = "yes"
    elif "not_unlink" in (minus.verdict, plus.verdict):
        verdict = "no"
    else:
        verdict = "unknown"
    return AdmissibilityReport(minus=minus, plus=plus, admissible=verdict)
