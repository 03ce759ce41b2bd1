"""Boolean engine over Left/Right variables.

Constraint generators in this package only ever emit equalities,
inequalities and unit fixes, but the solver core is an ordinary 2-SAT
implication graph, so arbitrary two-literal clauses work too.  Model
enumeration exploits the restricted form: variables fall into parity groups
connected by Eq/Neq edges, one free bit per unfixed group.
"""

from __future__ import annotations

from .errors import CapExceeded, InternalInvariant
from .graphs import Side

Literal = tuple[object, Side]


class ConstraintSet:
    def __init__(self):
        self._index: dict[object, int] = {}
        self.variables: list[object] = []
        self.eqs: list[tuple[object, object]] = []
        self.neqs: list[tuple[object, object]] = []
        self.fixes: list[tuple[object, Side]] = []
        self.clauses: list[tuple[Literal, Literal]] = []

    def add_variable(self, x) -> None:
        if x not in self._index:
            self._index[x] = len(self.variables)
            self.variables.append(x)

    def eq(self, x, y) -> None:
        self.add_variable(x)
        self.add_variable(y)
        self.eqs.append((x, y))

    def neq(self, x, y) -> None:
        self.add_variable(x)
        self.add_variable(y)
        self.neqs.append((x, y))

    def fix(self, x, side: Side) -> None:
        self.add_variable(x)
        self.fixes.append((x, side))

    def add_clause(self, a: Literal, b: Literal) -> None:
        """(a or b) with literals (variable, required side)."""
        self.add_variable(a[0])
        self.add_variable(b[0])
        self.clauses.append((a, b))

    def only_structured(self) -> bool:
        return not self.clauses

    # literal encoding: 2i = (var i is Left), 2i+1 = (var i is Right)
    def _lit(self, x, side: Side) -> int:
        return 2 * self._index[x] + (0 if side is Side.LEFT else 1)

    def implications(self) -> list[tuple[int, int]]:
        out = []
        for x, y in self.eqs:
            for s in (Side.LEFT, Side.RIGHT):
                out.append((self._lit(x, s), self._lit(y, s)))
                out.append((self._lit(y, s), self._lit(x, s)))
        for x, y in self.neqs:
            for s in (Side.LEFT, Side.RIGHT):
                out.append((self._lit(x, s), self._lit(y, s.opposite)))
                out.append((self._lit(y, s), self._lit(x, s.opposite)))
        for x, s in self.fixes:
            out.append((self._lit(x, s.opposite), self._lit(x, s)))
        for (x, sx), (y, sy) in self.clauses:
            out.append((self._lit(x, sx.opposite), self._lit(y, sy)))
            out.append((self._lit(y, sy.opposite), self._lit(x, sx)))
        return out


def _scc(n: int, edges: list[tuple[int, int]]) -> list[int]:
    """Tarjan, iterative; component ids in reverse topological order (sinks
    get the small ids)."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
    index = [-1] * n
    low = [0] * n
    onstk = [False] * n
    comp = [-1] * n
    stk: list[int] = []
    counter = [0]
    ncomp = [0]

    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stk.append(v)
                onstk[v] = True
            advanced = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if index[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    advanced = True
                    break
                if onstk[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stk.pop()
                    onstk[w] = False
                    comp[w] = ncomp[0]
                    low[w] = low[v]
                    if w == v:
                        break
                ncomp[0] += 1
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
    return comp


def solve(cs: ConstraintSet) -> dict | None:
    """Total satisfying assignment, or None when unsatisfiable.

    Deterministic: ties are broken by variable registration order through the
    SCC numbering."""
    n = len(cs.variables)
    comp = _scc(2 * n, cs.implications())
    out = {}
    for i, x in enumerate(cs.variables):
        cl, cr = comp[2 * i], comp[2 * i + 1]
        if cl == cr:
            return None
        # the sink-ward literal (smaller component id) is safe to satisfy
        out[x] = Side.LEFT if cl < cr else Side.RIGHT
    return out


def satisfiable(cs: ConstraintSet) -> bool:
    return solve(cs) is not None


class _ParityGroups:
    """Union-find over variables where each edge carries "same" or
    "different"; the cross-check fast path for Eq/Neq-only systems."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n  # relative to parent

    def find(self, x: int) -> tuple[int, int]:
        if self.parent[x] == x:
            return x, 0
        root, par = self.find(self.parent[x])
        self.parent[x] = root
        self.parity[x] ^= par
        return root, self.parity[x]

    def union(self, x: int, y: int, differ: int) -> bool:
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == differ
        # keep the smaller root so group leaders are first occurrences
        if ry < rx:
            rx, ry = ry, rx
            px, py = py, px
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ differ
        return True


def _grouped(cs: ConstraintSet) -> tuple[_ParityGroups, dict[int, Side]] | None:
    n = len(cs.variables)
    uf = _ParityGroups(n)
    ix = cs._index
    for x, y in cs.eqs:
        if not uf.union(ix[x], ix[y], 0):
            return None
    for x, y in cs.neqs:
        if not uf.union(ix[x], ix[y], 1):
            return None
    forced: dict[int, Side] = {}
    for x, s in cs.fixes:
        root, par = uf.find(ix[x])
        want = s if par == 0 else s.opposite
        if forced.setdefault(root, want) != want:
            return None
    return uf, forced


def enumerate_models(cs: ConstraintSet, cap: int) -> list[dict]:
    """All satisfying assignments in lexicographic order (variables in
    registration order, Left before Right)."""
    n = len(cs.variables)
    if cs.only_structured():
        grouped = _grouped(cs)
        if grouped is None:
            return []
        uf, forced = grouped
        roots = sorted({uf.find(i)[0] for i in range(n)})
        free = [r for r in roots if r not in forced]
        if 2 ** len(free) > cap:
            raise CapExceeded(f"{2 ** len(free)} models exceed cap {cap}")
        models = []
        choice = dict(forced)
        def rec(i: int):
            if i == len(free):
                m = {}
                for j, x in enumerate(cs.variables):
                    root, par = uf.find(j)
                    s = choice[root]
                    m[x] = s if par == 0 else s.opposite
                models.append(m)
                return
            for s in (Side.LEFT, Side.RIGHT):
                choice[free[i]] = s
                rec(i + 1)
            del choice[free[i]]
        rec(0)
        return models
    # general clauses: filtered exhaustive walk
    if 2 ** n > cap:
        raise CapExceeded(f"2^{n} assignments exceed cap {cap}")
    return enumerate_models_reference(cs)


def brute_force_satisfiable(cs: ConstraintSet) -> bool:
    """Reference decision by exhaustive walk; small systems only."""
    n = len(cs.variables)
    if n > 22:
        raise InternalInvariant("brute force limited to 22 variables")
    return bool(enumerate_models_reference(cs))


def enumerate_models_reference(cs: ConstraintSet) -> list[dict]:
    n = len(cs.variables)
    impls = cs.implications()
    out = []
    for mask in range(2 ** n):
        vals = [Side.LEFT if not (mask >> (n - 1 - i)) & 1 else Side.RIGHT
                for i in range(n)]
        lit_true = [False] * (2 * n)
        for i, s in enumerate(vals):
            lit_true[2 * i + (0 if s is Side.LEFT else 1)] = True
        if all((not lit_true[a]) or lit_true[b] for a, b in impls):
            out.append({x: vals[i] for i, x in enumerate(cs.variables)})
    return out


def merge(*sets: ConstraintSet) -> ConstraintSet:
    """Conjunction of constraint systems; variables are identified by key.

    Registration order is first-seen across the inputs, which keeps solve
    and enumerate_models deterministic for a fixed argument order.
    """
    out = ConstraintSet()
    for cs in sets:
        for x in cs.variables:
            out.add_variable(x)
        out.eqs.extend(cs.eqs)
        out.neqs.extend(cs.neqs)
        out.fixes.extend(cs.fixes)
        out.clauses.extend(cs.clauses)
    return out


def satisfied_by(cs: ConstraintSet, assignment: dict) -> bool:
    """Whether a total assignment satisfies every constraint in the set."""
    for x, y in cs.eqs:
        if assignment[x] is not assignment[y]:
            return False
    for x, y in cs.neqs:
        if assignment[x] is assignment[y]:
            return False
    for x, s in cs.fixes:
        if assignment[x] is not s:
            return False
    for (x, sx), (y, sy) in cs.clauses:
        if assignment[x] is not sx and assignment[y] is not sy:
            return False
    return True
