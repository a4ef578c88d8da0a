"""Exact max-flow/min-cut, minimum-weight closure and 2-SAT.

Capacities and weights are ``Fraction`` (ints are accepted); nothing here
uses floating point.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UNSATISFIABLE, CyclicPrecedence, Unsatisfiable

Node = Hashable


@dataclass(frozen=True)
class FlowNetwork:
    nodes: tuple[Node, ...]
    arcs: tuple[tuple[Node, Node, Fraction], ...]
    source: Node
    sink: Node

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        known = set(self.nodes)
        for u, v, c in self.arcs:
            if u not in known or v not in known:
                raise ValueError(f"arc {u}->{v} uses an undeclared node")
            if c < 0:
                raise ValueError(f"negative capacity on {u}->{v}")
        if self.source not in known or self.sink not in known:
            raise ValueError("source and sink must be declared nodes")

    @classmethod
    def build(cls, arcs: Iterable[tuple[Node, Node, object]], source: Node, sink: Node) -> FlowNetwork:
        arcs = tuple((u, v, Fraction(c)) for u, v, c in arcs)
        nodes: dict[Node, None] = {source: None, sink: None}
        for u, v, _ in arcs:
            nodes.setdefault(u)
            nodes.setdefault(v)
        return cls(tuple(nodes), arcs, source, sink)


@dataclass(frozen=True)
class FlowResult:
    value: Fraction
    cut: frozenset  # source side of a minimum cut
    cut_capacity: Fraction
    flow: Mapping[int, Fraction] = field(repr=False)  # per arc index


def max_flow_min_cut(N: FlowNetwork) -> FlowResult:
    """Shortest augmenting paths (Edmonds-Karp) over exact rationals.

    Arcs are scanned in declaration order, so the cut is reproducible.  The
    returned cut is the set of nodes reachable from the source in the final
    residual graph.
    """
    index = {x: i for i, x in enumerate(N.nodes)}
    n = len(N.nodes)
    head: list[int] = []
    cap: list[Fraction] = []
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v, c in N.arcs:
        a, b = index[u], index[v]
        out[a].append(len(head))
        head.append(b)
        cap.append(Fraction(c))
        out[b].append(len(head))
        head.append(a)
        cap.append(Fraction(0))
    s, t = index[N.source], index[N.sink]
    value = Fraction(0)
    while True:
        via = [-1] * n
        via[s] = -2
        queue = deque([s])
        while queue and via[t] == -1:
            a = queue.popleft()
            for k in out[a]:
                b = head[k]
                if via[b] == -1 and cap[k] > 0:
                    via[b] = k
                    queue.append(b)
        if via[t] == -1:
            break
        path = []
        b = t
        while b != s:
            k = via[b]
            path.append(k)
            b = head[k ^ 1]
        push = min(cap[k] for k in path)
        for k in path:
            cap[k] -= push
            cap[k ^ 1] += push
        value += push
    reach = {i for i, k in enumerate(via) if k != -1}
    cut = frozenset(N.nodes[i] for i in reach)
    cut_cap = sum(
        (c for u, v, c in N.arcs if index[u] in reach and index[v] not in reach), Fraction(0)
    )
    if cut_cap != value:
        raise RuntimeError(f"flow {value} does not match cut capacity {cut_cap}")
    flow = {i: cap[2 * i + 1] for i in range(len(N.arcs))}
    return FlowResult(value, cut, cut_cap, flow)


@dataclass(frozen=True)
class ClosureInstance:
    """``requires`` holds pairs ``(b, a)``: choosing ``b`` forces ``a``."""

    weights: Mapping[Node, Fraction]
    requires: tuple[tuple[Node, Node], ...] = ()

    def __post_init__(self):
        for b, a in self.requires:
            if b not in self.weights or a not in self.weights:
                raise ValueError(f"precedence {b} -> {a} mentions an unknown element")


def _check_acyclic(elements: Iterable[Node], requires: Sequence[tuple[Node, Node]]) -> None:
    succ: dict[Node, list[Node]] = {x: [] for x in elements}
    indeg = dict.fromkeys(succ, 0)
    for b, a in requires:
        succ[b].append(a)
        indeg[a] += 1
    queue = deque(x for x, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        x = queue.popleft()
        seen += 1
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if seen != len(succ):
        raise CyclicPrecedence("precedence relation has a cycle")


def is_closed(C: ClosureInstance, subset: Iterable[Node]) -> bool:
    chosen = set(subset)
    return all(a in chosen for b, a in C.requires if b in chosen)


def min_weight_closure(C: ClosureInstance) -> tuple[frozenset, Fraction]:
    """Closed subset of least total weight (possibly empty).

    Standard project-selection cut: negative elements hang off the source,
    positive ones feed the sink, precedences get capacity larger than any cut.
    """
    _check_acyclic(C.weights, C.requires)
    src, snk = ("closure", "source"), ("closure", "sink")
    big = sum((abs(Fraction(w)) for w in C.weights.values()), Fraction(1))
    arcs: list[tuple[Node, Node, Fraction]] = []
    for x, w in C.weights.items():
        w = Fraction(w)
        if w < 0:
            arcs.append((src, ("e", x), -w))
        elif w > 0:
            arcs.append((("e", x), snk, w))
    for b, a in C.requires:
        arcs.append((("e", b), ("e", a), big))
    nodes = (src, snk, *(("e", x) for x in C.weights))
    res = max_flow_min_cut(FlowNetwork(nodes, tuple(arcs), src, snk))
    chosen = frozenset(x for x in C.weights if ("e", x) in res.cut)
    total = sum((Fraction(C.weights[x]) for x in chosen), Fraction(0))
    negatives = sum((Fraction(w) for w in C.weights.values() if w < 0), Fraction(0))
    if total != negatives + res.value:
        raise RuntimeError("closure weight disagrees with the cut value")
    return chosen, total


def min_weight_closure_condensed(C: ClosureInstance) -> tuple[frozenset, Fraction]:
    """As :func:`min_weight_closure`, but a cyclic precedence is allowed:
    each strongly connected group is chosen or dropped as a whole."""
    elems = list(C.weights)
    idx = {x: i for i, x in enumerate(elems)}
    graph: list[list[int]] = [[] for _ in elems]
    for b, a in C.requires:
        graph[idx[b]].append(idx[a])
    comp = _tarjan(graph)
    weights: dict[int, Fraction] = {}
    for x, c in zip(elems, comp):
        weights[c] = weights.get(c, Fraction(0)) + Fraction(C.weights[x])
    reqs = {(comp[idx[b]], comp[idx[a]]) for b, a in C.requires if comp[idx[b]] != comp[idx[a]]}
    chosen, total = min_weight_closure(ClosureInstance(weights, tuple(sorted(reqs))))
    return frozenset(x for x, c in zip(elems, comp) if c in chosen), total


# -- 2-SAT -----------------------------------------------------------------------

Literal = tuple[Hashable, bool]  # (variable, polarity)


@dataclass(frozen=True)
class TwoLitSystem:
    variables: tuple[Hashable, ...]
    clauses: tuple[tuple[Literal, Literal], ...] = ()
    forced: Mapping[Hashable, bool] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.variables)
        for clause in self.clauses:
            for var, _ in clause:
                if var not in known:
                    raise ValueError(f"clause mentions undeclared variable {var!r}")
        for var in self.forced:
            if var not in known:
                raise ValueError(f"forced value for undeclared variable {var!r}")

    def satisfied_by(self, assignment: Mapping[Hashable, bool]) -> bool:
        if any(assignment[v] != val for v, val in self.forced.items()):
            return False
        return all(assignment[a] == pa or assignment[b] == pb for (a, pa), (b, pb) in self.clauses)


def two_sat(S: TwoLitSystem) -> dict[Hashable, bool] | Unsatisfiable:
    """Implication graph plus Tarjan SCC.  A variable is true when its
    positive literal's component is finished first, i.e. lies later in
    topological order."""
    idx = {v: i for i, v in enumerate(S.variables)}
    n = len(idx)

    def lit(var: Hashable, pol: bool) -> int:
        return 2 * idx[var] + (0 if pol else 1)

    graph: list[list[int]] = [[] for _ in range(2 * n)]
    for (a, pa), (b, pb) in S.clauses:
        x, y = lit(a, pa), lit(b, pb)
        graph[x ^ 1].append(y)
        graph[y ^ 1].append(x)
    for var, val in S.forced.items():
        x = lit(var, val)
        graph[x ^ 1].append(x)

    comp = _tarjan(graph)
    out: dict[Hashable, bool] = {}
    for var, i in idx.items():
        if comp[2 * i] == comp[2 * i + 1]:
            return UNSATISFIABLE
        # Tarjan numbers components in reverse topological order
        out[var] = comp[2 * i] < comp[2 * i + 1]
    return out


def _tarjan(graph: list[list[int]]) -> list[int]:
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(graph[v])):
                w = graph[v][j]
                if index[w] == -1:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp
