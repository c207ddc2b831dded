"""Finite quandles, good involutions and quandle-set actions as operation tables.

Elements are always 0..n-1.  Tables are tuples of tuples so every value in
this module is immutable and hashable.
"""

from dataclasses import dataclass
from itertools import product


class MalformedTableError(ValueError):
    """Table has the wrong shape or an out-of-range entry."""


def _check_square(table, n, what):
    if len(table) != n:
        raise MalformedTableError(f"{what}: expected {n} rows, got {len(table)}")
    for i, row in enumerate(table):
        if len(row) != n:
            raise MalformedTableError(f"{what}: row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise MalformedTableError(f"{what}: entry {v!r} in row {i} out of range 0..{n - 1}")


def _freeze(table):
    return tuple(tuple(row) for row in table)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of an axiom check: empty violation list means pass.

    Each violation is (axiom_name, witness_tuple).
    """

    subject: str
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.passed:
            return f"{self.subject}: pass"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for axiom, witness in self.violations:
            lines.append(f"  {axiom} at {witness}")
        return "\n".join(lines)


@dataclass(frozen=True)
class FiniteQuandle:
    """Quandle operation table.  op[a][b] = a ▷ b, op_inv its right inverse."""

    n: int
    op: tuple
    op_inv: tuple

    def __post_init__(self):
        _check_square(self.op, self.n, "op")
        _check_square(self.op_inv, self.n, "op_inv")

    def apply(self, a: int, b: int) -> int:
        return self.op[a][b]

    def apply_inv(self, a: int, b: int) -> int:
        return self.op_inv[a][b]


@dataclass(frozen=True)
class GoodInvolution:
    """Involution table rho, intended to satisfy the good-involution axioms."""

    rho: tuple

    def __post_init__(self):
        n = len(self.rho)
        seen = set(self.rho)
        if seen != set(range(n)):
            raise MalformedTableError(f"rho is not a permutation of 0..{n - 1}: {self.rho}")

    def __call__(self, a: int) -> int:
        return self.rho[a]


@dataclass(frozen=True)
class SymmetricQuandle:
    quandle: FiniteQuandle
    involution: GoodInvolution

    def __post_init__(self):
        if len(self.involution.rho) != self.quandle.n:
            raise MalformedTableError("involution size does not match quandle size")

    @property
    def n(self) -> int:
        return self.quandle.n

    def op(self, a, b):
        return self.quandle.op[a][b]

    def rho(self, a):
        return self.involution.rho[a]


@dataclass(frozen=True)
class QuandleAction:
    """Right action of a symmetric quandle on a set Y of size m.

    act[y][x] = y . x must be a bijection of Y for each fixed x, with
    act_inv its inverse, compatible with the quandle operation and rho.
    """

    m: int
    act: tuple
    act_inv: tuple

    def __post_init__(self):
        for name, table in (("act", self.act), ("act_inv", self.act_inv)):
            if len(table) != self.m:
                raise MalformedTableError(f"{name}: expected {self.m} rows, got {len(table)}")
            for i, row in enumerate(table):
                for v in row:
                    if not isinstance(v, int) or not 0 <= v < self.m:
                        raise MalformedTableError(f"{name}: entry {v!r} in row {i} out of range")

    @property
    def n(self) -> int:
        return len(self.act[0]) if self.m else 0

    def apply(self, y, x):
        return self.act[y][x]

    def apply_inv(self, y, x):
        return self.act_inv[y][x]


def make_dihedral(n: int) -> FiniteQuandle:
    """Dihedral quandle R_n: a ▷ b = 2b - a mod n.  Involutory, so op_inv = op."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"dihedral quandle needs n >= 1, got {n}")
    op = _freeze([[(2 * b - a) % n for b in range(n)] for a in range(n)])
    return FiniteQuandle(n=n, op=op, op_inv=op)


def make_trivial_quandle(n: int) -> FiniteQuandle:
    """Trivial quandle: a ▷ b = a."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"trivial quandle needs n >= 1, got {n}")
    op = _freeze([[a for _ in range(n)] for a in range(n)])
    return FiniteQuandle(n=n, op=op, op_inv=op)


def verify_quandle(q: FiniteQuandle) -> VerificationReport:
    """Check the three quandle axioms, collecting every violated instance."""
    n = q.n
    violations = []
    for a in range(n):
        if q.op[a][a] != a:
            violations.append(("idempotency", (a,)))
    for b in range(n):
        column = [q.op[a][b] for a in range(n)]
        if sorted(column) != list(range(n)):
            violations.append(("right-invertibility", (b,)))
        else:
            for a in range(n):
                if q.op_inv[column[a]][b] != a:
                    violations.append(("inverse-table", (a, b)))
    for a, b, c in product(range(n), repeat=3):
        if q.op[q.op[a][b]][c] != q.op[q.op[a][c]][q.op[b][c]]:
            violations.append(("self-distributivity", (a, b, c)))
    return VerificationReport(subject=f"quandle(n={n})", violations=tuple(violations))


def verify_good_involution(sq: SymmetricQuandle) -> VerificationReport:
    """Check involution, equivariance and inversion-compatibility with witnesses."""
    q, rho = sq.quandle, sq.involution.rho
    n = q.n
    violations = []
    for a in range(n):
        if rho[rho[a]] != a:
            violations.append(("involution", (a,)))
    for a in range(n):
        for b in range(n):
            if rho[q.op[a][b]] != q.op[rho[a]][b]:
                violations.append(("equivariance", (a, b)))
            if q.op[a][rho[b]] != q.op_inv[a][b]:
                violations.append(("inversion-compatibility", (a, b)))
    return VerificationReport(subject=f"good involution(n={n})", violations=tuple(violations))


def verify_action(sq: SymmetricQuandle, action: QuandleAction) -> VerificationReport:
    """Check the action axioms of Y against the symmetric quandle."""
    q, rho = sq.quandle, sq.involution.rho
    n, m = q.n, action.m
    violations = []
    if action.m and action.n != n:
        raise MalformedTableError("action column count does not match quandle size")
    for x in range(n):
        column = [action.act[y][x] for y in range(m)]
        if sorted(column) != list(range(m)):
            violations.append(("bijectivity", (x,)))
        else:
            for y in range(m):
                if action.act_inv[column[y]][x] != y:
                    violations.append(("inverse-table", (y, x)))
    for y, a, b in product(range(m), range(n), range(n)):
        if action.act[action.act[y][a]][b] != action.act[action.act[y][b]][q.op[a][b]]:
            violations.append(("compatibility", (y, a, b)))
    for y, a in product(range(m), range(n)):
        if action.act[y][rho[a]] != action.act_inv[y][a]:
            violations.append(("involution-compatibility", (y, a)))
    return VerificationReport(subject=f"action(m={m})", violations=tuple(violations))


def _involutions_lex(n):
    """All involutive permutations of 0..n-1, in lexicographic table order."""

    def extend(partial):
        # partial: dict a -> rho(a) for decided points
        free = [a for a in range(n) if a not in partial]
        if not free:
            yield tuple(partial[a] for a in range(n))
            return
        a = free[0]
        # candidates in increasing order keeps output lexicographic
        for b in sorted(free):
            new = dict(partial)
            new[a] = b
            new[b] = a
            yield from extend(new)

    yield from extend({})


def enumerate_good_involutions(q: FiniteQuandle) -> list:
    """Every good involution of q, lexicographically ordered by table."""
    report = verify_quandle(q)
    if not report.passed:
        raise ValueError("not a quandle:\n" + report.summary())
    found = []
    for rho in _involutions_lex(q.n):
        sq = SymmetricQuandle(q, GoodInvolution(rho))
        if verify_good_involution(sq).passed:
            found.append(GoodInvolution(rho))
    return found


def fixed_points(rho: GoodInvolution) -> set:
    return {a for a, b in enumerate(rho.rho) if a == b}


def make_trivial_action(sq: SymmetricQuandle) -> QuandleAction:
    """Singleton Y with the only possible action; satisfies all axioms vacuously."""
    n = sq.n
    row = tuple(0 for _ in range(n))
    return QuandleAction(m=1, act=(row,), act_inv=(row,))


def make_regular_action(sq: SymmetricQuandle) -> QuandleAction:
    """Y = X acting on itself by the quandle operation."""
    q = sq.quandle
    return QuandleAction(m=q.n, act=q.op, act_inv=q.op_inv)


# --- spec-string and file parsing -----------------------------------------

def quandle_from_spec(spec: str) -> FiniteQuandle:
    """Parse a quandle spec string: 'dihedral:<n>' or 'trivial:<n>'."""
    kind, _, arg = spec.partition(":")
    if kind == "dihedral":
        return make_dihedral(_positive_int(arg, spec))
    if kind == "trivial":
        return make_trivial_quandle(_positive_int(arg, spec))
    raise ValueError(f"unknown quandle spec {spec!r} (expected dihedral:<n> or trivial:<n>)")


def _positive_int(text, context):
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"bad integer in {context!r}") from None
    if value < 1:
        raise ValueError(f"size must be positive in {context!r}")
    return value


def involution_from_spec(spec: str, n: int) -> GoodInvolution:
    """Parse an involution spec: 'identity', 'antipodal' or 'table:p0,p1,...'."""
    if spec == "identity":
        return GoodInvolution(tuple(range(n)))
    if spec == "antipodal":
        if n % 2 != 0:
            raise ValueError(f"antipodal involution needs even size, got {n}")
        return GoodInvolution(tuple((a + n // 2) % n for a in range(n)))
    if spec.startswith("table:"):
        entries = tuple(int(s) for s in spec[len("table:"):].split(","))
        if len(entries) != n:
            raise ValueError(f"involution table has {len(entries)} entries, expected {n}")
        return GoodInvolution(entries)
    raise ValueError(f"unknown involution spec {spec!r}")


def quandle_from_table_text(text: str) -> FiniteQuandle:
    """Build a quandle from a whitespace table (line k = row k of op).

    The inverse table is derived column by column; the result is verified.
    """
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    n = len(rows)
    try:
        op = _freeze([[int(v) for v in row] for row in rows])
    except ValueError:
        raise MalformedTableError("non-integer entry in quandle table") from None
    _check_square(op, n, "op")
    op_inv = [[0] * n for _ in range(n)]
    for b in range(n):
        column = [op[a][b] for a in range(n)]
        if sorted(column) != list(range(n)):
            raise MalformedTableError(f"column {b} of op is not a bijection; no inverse table")
        for a in range(n):
            op_inv[column[a]][b] = a
    q = FiniteQuandle(n=n, op=op, op_inv=_freeze(op_inv))
    report = verify_quandle(q)
    if not report.passed:
        raise ValueError("table is not a quandle:\n" + report.summary())
    return q
