"""Symmetric-quandle colorings of ch-diagrams.

Colors live on edges (semi-arcs) and are stored relative to each edge's
reference orientation; reading an edge against its reference applies rho
(a basic inversion).  Writing In(s) for the color of the edge at slot s
read in the direction pointing into the node, the local rules are:

* crossing, counterclockwise slots (s0,s1,s2,s3), under pass s0-s2, over
  pass s1-s3:
    - over continuity:  In(s1) = rho(In(s3))
    - under rule:       rho(In(s2)) = In(s0) > In(s3)
  The over color In(s3) is the one whose travel direction has its normal
  (+90 degrees counterclockwise) aligned with the s0 -> s2 under travel.
* marked vertex (s0,s1,s2,s3): all four semi-arcs carry the color of the
  saddle sheet in the sheet-induced orientations, which reads as
    In(s0) = In(s2),  In(s1) = In(s3),  In(s1) = rho(In(s0)).
* region colors (optional, for a nontrivial action set Y): crossing an
  edge from its right side to its left side applies the action of the
  stored edge color:  y_left = y_right . x.

Monochromatic colorings by a fixed point of rho always exist on marker-free
diagrams; marked vertices are what make colorability a real constraint.
"""

from dataclasses import dataclass
from itertools import product

from .algebra import QuandleAction, SymmetricQuandle, make_trivial_action
from .diagram import ChDiagram, ChdError, faces as trace_faces


class CapExceededError(RuntimeError):
    """Brute-force state space exceeds the configured cap."""


class EnumerationBudgetError(RuntimeError):
    """Pruned enumeration visited more nodes than allowed."""


@dataclass(frozen=True)
class Coloring:
    edge_colors: dict
    circle_colors: dict
    region_colors: dict | None = None

    def values(self):
        out = list(self.edge_colors.values()) + list(self.circle_colors.values())
        return out


@dataclass(frozen=True)
class ConstraintSystem:
    """Variables and normalized relations extracted from a diagram.

    Relations are tuples:
      ("eq", t, s, flag)                      x_t = rho^flag(x_s)
      ("under", c, cf, a, af, y, yf)          rho^cf(x_c) = rho^af(x_a) > rho^yf(x_y)
      ("region", left, right, e)              y_left = y_right . x_e
    Variable names are edge labels (ints), "circleK" strings and face ids.
    """

    edge_vars: tuple
    circle_vars: tuple
    face_vars: tuple
    relations: tuple
    relation_sources: tuple  # node index per relation, None for region rules
    diagram: ChDiagram

    @property
    def variables(self):
        return self.edge_vars + self.circle_vars + self.face_vars


def build_constraints(
    d: ChDiagram,
    sq: SymmetricQuandle,
    action: QuandleAction | None = None,
    over_convention: str = "aligned",
) -> ConstraintSystem:
    """Emit the coloring constraints of a diagram.

    ``over_convention`` picks which over semi-arc reading enters the under
    rule: "aligned" (normal agrees with under travel; the default) or
    "flipped" (the rho-conjugate reading).  For involutory quandles the two
    conventions give identical coloring sets.
    """
    if over_convention not in ("aligned", "flipped"):
        raise ValueError(f"unknown over_convention {over_convention!r}")
    if action is None:
        action = make_trivial_action(sq)
    ends = d.edge_ends()
    oriented = d.oriented_ends()

    def in_flag(slot_label, node, slot):
        # 0 when the reference head is here (reads as stored), else 1
        tail, head = oriented[slot_label]
        return 0 if head == (node, slot) else 1

    relations = []
    for i, node in enumerate(d.nodes):
        s = node.slots
        f = [in_flag(s[k], i, k) for k in range(4)]
        if node.kind == "X":
            relations.append(("eq", s[1], s[3], (f[1] + f[3] + 1) % 2))
            if over_convention == "aligned":
                y, yf = s[3], f[3]
            else:
                y, yf = s[1], f[1]
            relations.append(("under", s[2], (f[2] + 1) % 2, s[0], f[0], y, yf))
        else:
            relations.append(("eq", s[0], s[2], (f[0] + f[2]) % 2))
            relations.append(("eq", s[1], s[3], (f[1] + f[3]) % 2))
            relations.append(("eq", s[1], s[0], (f[1] + f[0] + 1) % 2))

    face_vars = ()
    if action.m > 1:
        if d.circles:
            raise ChdError("region colorings with a nontrivial Y need an edge-labelled diagram")
        fm = trace_faces(d)
        if len(fm.components) > 1:
            raise ChdError("region colorings with a nontrivial Y need a connected diagram")
        face_vars = fm.face_ids
        for label in sorted(fm.edge_sides):
            left, right = fm.edge_sides[label]
            relations.append(("region", left, right, label))

    return ConstraintSystem(
        edge_vars=tuple(sorted(ends)),
        circle_vars=tuple(f"circle{k}" for k in range(d.circles)),
        face_vars=face_vars,
        relations=tuple(relations),
        diagram=d,
    )


# --- evaluation --------------------------------------------------------------

def _relation_env(sq: SymmetricQuandle, action: QuandleAction):
    rho = sq.involution.rho
    op = sq.quandle.op
    op_inv = sq.quandle.op_inv
    act = action.act
    act_inv = action.act_inv

    def norm(value, flag):
        return rho[value] if flag else value

    return rho, op, op_inv, act, act_inv, norm


def relation_holds(rel, values, sq, action):
    """Check one relation against a full assignment dict."""
    rho, op, op_inv, act, act_inv, norm = _relation_env(sq, action)
    kind = rel[0]
    if kind == "eq":
        _, t, s, flag = rel
        return values[t] == norm(values[s], flag)
    if kind == "under":
        _, c, cf, a, af, y, yf = rel
        return norm(values[c], cf) == op[norm(values[a], af)][norm(values[y], yf)]
    if kind == "region":
        _, left, right, e = rel
        return values[left] == act[values[right]][values[e]]
    raise ValueError(f"unknown relation {rel!r}")


def _coloring_from(cs: ConstraintSystem, values: dict) -> Coloring:
    edge_colors = {e: values[e] for e in cs.edge_vars}
    circle_colors = {k: values[v] for k, v in enumerate(cs.circle_vars)}
    region_colors = None
    if cs.face_vars:
        region_colors = {fv: values[fv] for fv in cs.face_vars}
    return Coloring(edge_colors=edge_colors, circle_colors=circle_colors, region_colors=region_colors)


def iter_solutions(cs: ConstraintSystem, sq: SymmetricQuandle, action: QuandleAction | None = None):
    """Backtracking search with unit propagation, yielding assignments in
    lexicographic order of the variable tuple."""
    if action is None:
        action = make_trivial_action(sq)
    rho, op, op_inv, act, act_inv, norm = _relation_env(sq, action)
    variables = list(cs.variables)
    index = {v: i for i, v in enumerate(variables)}
    nvars = len(variables)
    domain_size = [
        sq.n if (v in cs.edge_vars or str(v).startswith("circle")) else action.m
        for v in variables
    ]
    touching = [[] for _ in range(nvars)]
    rels = []
    for rel in cs.relations:
        if rel[0] == "eq":
            vars_in = (index[rel[1]], index[rel[2]])
        elif rel[0] == "under":
            vars_in = (index[rel[1]], index[rel[3]], index[rel[5]])
        else:
            vars_in = (index[rel[1]], index[rel[2]], index[rel[3]])
        rels.append((rel, vars_in))
        for vi in set(vars_in):
            touching[vi].append(len(rels) - 1)

    values = [None] * nvars

    def try_determine(ri):
        """Return (conflict, newly_assigned_var) for relation ri."""
        rel, vars_in = rels[ri]
        unassigned = [vi for vi in set(vars_in) if values[vi] is None]
        if not unassigned:
            env = {variables[vi]: values[vi] for vi in set(vars_in)}
            ok = relation_holds(rel, env, sq, action)
            return (not ok), None
        if len(unassigned) > 1:
            return False, None
        target = unassigned[0]
        kind = rel[0]
        if kind == "eq":
            _, t, s, flag = rel
            ti, si = index[t], index[s]
            if ti == si:
                return False, None  # self-relation checked when assigned
            if target == ti:
                values[ti] = norm(values[si], flag)
            else:
                values[si] = norm(values[ti], flag)
            return False, target
        if kind == "under":
            _, c, cf, a, af, y, yf = rel
            ci, ai, yi = index[c], index[a], index[y]
            if target == ci and ci not in (ai, yi):
                values[ci] = norm(op[norm(values[ai], af)][norm(values[yi], yf)], cf)
                return False, target
            if target == ai and ai not in (ci, yi):
                values[ai] = norm(op_inv[norm(values[ci], cf)][norm(values[yi], yf)], af)
                return False, target
            return False, None  # over color not functionally determined
        if kind == "region":
            _, left, right, e = rel
            li, ri_, ei = index[left], index[right], index[e]
            if target == li and li != ri_:
                values[li] = act[values[ri_]][values[ei]]
                return False, target
            if target == ri_ and li != ri_:
                values[ri_] = act_inv[values[li]][values[ei]]
                return False, target
            return False, None
        raise ValueError(rel)

    def propagate(start_vi, trail):
        queue = [start_vi]
        while queue:
            vi = queue.pop()
            for ri in touching[vi]:
                conflict, newly = try_determine(ri)
                if conflict:
                    return False
                if newly is not None:
                    if values[newly] >= domain_size[newly]:
                        return False
                    trail.append(newly)
                    queue.append(newly)
        return True

    def search(pos):
        while pos < nvars and values[pos] is not None:
            pos += 1
        if pos == nvars:
            yield {variables[i]: values[i] for i in range(nvars)}
            return
        for value in range(domain_size[pos]):
            values[pos] = value
            trail = []
            if propagate(pos, trail):
                yield from search(pos + 1)
            for vi in trail:
                values[vi] = None
            values[pos] = None

    # check self-relations like x = rho(x) on loops up front is handled by
    # full checks during propagation once the variable is assigned
    yield from search(0)


def solve_all(cs: ConstraintSystem, sq: SymmetricQuandle, action: QuandleAction | None = None):
    """All colorings, deterministically ordered."""
    return [_coloring_from(cs, values) for values in iter_solutions(cs, sq, action)]


def brute_force_all(
    cs: ConstraintSystem,
    sq: SymmetricQuandle,
    action: QuandleAction | None = None,
    cap: int = 10**7,
    prune: bool = True,
    node_budget: int = 10**8,
):
    """Exhaustive oracle: lexicographic enumeration filtered by the
    constraint check.

    With ``prune`` set (the default) the enumeration skips extensions of
    prefixes that already violate a fully-assigned relation; the visited
    node count is charged against ``node_budget``.  With ``prune=False``
    every assignment is generated, and ``cap`` limits the state space.
    Both modes produce the same list in the same order.
    """
    if action is None:
        action = make_trivial_action(sq)
    variables = list(cs.variables)
    nvars = len(variables)
    domain_size = [
        sq.n if (v in cs.edge_vars or str(v).startswith("circle")) else action.m
        for v in variables
    ]
    index = {v: i for i, v in enumerate(variables)}

    def rel_vars(rel):
        if rel[0] == "eq":
            return (index[rel[1]], index[rel[2]])
        if rel[0] == "under":
            return (index[rel[1]], index[rel[3]], index[rel[5]])
        return (index[rel[1]], index[rel[2]], index[rel[3]])

    by_depth = [[] for _ in range(nvars + 1)]
    for rel in cs.relations:
        depth = max(rel_vars(rel)) + 1
        by_depth[depth].append(rel)

    out = []
    if not prune:
        total = 1
        for size in domain_size:
            total *= size
        if total > cap:
            raise CapExceededError(f"state space {total} exceeds cap {cap}")
        for combo in product(*(range(size) for size in domain_size)):
            env = {variables[i]: combo[i] for i in range(nvars)}
            if all(relation_holds(rel, env, sq, action) for rel in cs.relations):
                out.append(_coloring_from(cs, env))
        return out

    env = {}
    visited = 0

    def walk(pos):
        nonlocal visited
        visited += 1
        if visited > node_budget:
            raise EnumerationBudgetError(f"enumeration exceeded {node_budget} nodes")
        if pos == nvars:
            out.append(_coloring_from(cs, dict(env)))
            return
        var = variables[pos]
        for value in range(domain_size[pos]):
            env[var] = value
            if all(relation_holds(rel, env, sq, action) for rel in by_depth[pos + 1]):
                walk(pos + 1)
        del env[var]

    walk(0)
    return out


def count_colorings(
    d: ChDiagram,
    sq: SymmetricQuandle,
    action: QuandleAction | None = None,
    over_convention: str = "aligned",
) -> int:
    """Number of colorings, without materializing the list."""
    cs = build_constraints(d, sq, action, over_convention=over_convention)
    return sum(1 for _ in iter_solutions(cs, sq, action))


def is_monochromatic_fixed_point(coloring: Coloring, sq: SymmetricQuandle) -> bool:
    """True when every semi-arc carries one color a with rho(a) = a."""
    values = set(coloring.values())
    if len(values) != 1:
        return False
    a = next(iter(values))
    return sq.involution.rho[a] == a
