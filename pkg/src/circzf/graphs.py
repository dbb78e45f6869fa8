"""Circulant graphs, graph products, and the structural predicates used to
decide which closed-form results apply to a given circulant.

Graphs are stored as one integer bitmask of neighbours per vertex; bit ``j``
of ``adj[i]`` is set when ``i`` and ``j`` are adjacent.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from math import gcd, inf
from typing import Iterable, Sequence


class SpecParseError(ValueError):
    """Malformed graph description; carries a 1-based line and column."""

    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.column = col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class CirculantSpec:
    """The circulant ``C_n(s_1, ..., s_t)``.

    ``S`` is stored sorted; duplicates and elements outside ``[1, n//2]``
    are rejected.
    """

    n: int
    S: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"order must be a positive integer, got {self.n!r}")
        S = tuple(self.S)
        if not S:
            raise ValueError("connection set must be nonempty")
        if len(set(S)) != len(S):
            raise ValueError(f"duplicate elements in connection set {S}")
        half = self.n // 2
        for s in S:
            if not isinstance(s, int) or not 1 <= s <= half:
                raise ValueError(f"connection element {s!r} outside [1, {half}] for n = {self.n}")
        object.__setattr__(self, "S", tuple(sorted(S)))

    @property
    def t(self) -> int:
        return len(self.S)

    @property
    def degree(self) -> int:
        return 2 * self.t - (1 if 2 * self.S[-1] == self.n else 0)

    def __str__(self):
        return f"C{self.n}({','.join(map(str, self.S))})"


@dataclass(frozen=True)
class Graph:
    order: int
    adj: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        adj = tuple(self.adj)
        if len(adj) != self.order:
            raise ValueError(f"adjacency has {len(adj)} rows for order {self.order}")
        full = (1 << self.order) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour outside the graph")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            w = row
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if not adj[u] >> v & 1:
                    raise ValueError(f"edge {v}-{u} is not symmetric")
                w ^= low
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        adj = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{order - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(order, tuple(adj), name)

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def components(self) -> list[int]:
        """Vertex masks of the connected components, ordered by least vertex."""
        seen = 0
        comps = []
        for v in range(self.order):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= self.adj[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.order > 0 and len(self.components()) == 1

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``mask`` plus the list mapping new -> old labels."""
        verts = bits(mask)
        index = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            row = 0
            for u in bits(self.adj[v] & mask):
                row |= 1 << index[u]
            adj.append(row)
        return Graph(len(verts), tuple(adj)), verts

    def to_edgelist(self) -> str:
        lines = [f"# order {self.order}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        title = self.name or "G"
        lines = [f'graph "{title}" {{']
        lines += [f"  {v};" for v in range(self.order) if not self.adj[v]]
        lines += [f"  {u} -- {v};" for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str, order: int | None = None) -> "Graph":
        """Parse the output of :meth:`to_edgelist`.

        The ``# order N`` header fixes the vertex count; without it (and without
        ``order``) the count is one more than the largest label seen.
        """
        edges = []
        header_order = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = re.fullmatch(r"#\s*order\s+(\d+)", line)
                if m:
                    header_order = int(m.group(1))
                continue
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if order is None:
            order = header_order
        if order is None:
            order = 1 + max((max(e) for e in edges), default=-1)
        return cls.from_edges(order, edges)


@dataclass(frozen=True)
class ComponentDecomposition:
    copies: int
    reduced: CirculantSpec


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# --- constructions -----------------------------------------------------------

def build_circulant(spec: CirculantSpec) -> Graph:
    n = spec.n
    adj = [0] * n
    for i in range(n):
        for s in spec.S:
            adj[i] |= (1 << ((i + s) % n)) | (1 << ((i - s) % n))
    return Graph(n, tuple(adj), str(spec))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)), f"K{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    g = build_circulant(CirculantSpec(n, (1,)))
    return Graph(n, g.adj, f"C{n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def cartesian_product(G: Graph, H: Graph) -> Graph:
    """``G □ H`` with vertex ``(x_i, y_j)`` stored at index ``i * |H| + j``."""
    if G.order == 0 or H.order == 0:
        raise ValueError("Cartesian product of an empty graph")
    h = H.order
    adj = []
    for i in range(G.order):
        for j in range(h):
            row = H.adj[j] << (i * h)
            for k in bits(G.adj[i]):
                row |= 1 << (k * h + j)
            adj.append(row)
    return Graph(G.order * h, tuple(adj), f"{G.name} box {H.name}".strip())


def torus_index(n: int, k: int, i: int) -> int:
    """Index of ``x_{k,i}`` (row ``k``, copy ``i``, both 0-based) in a torus
    product over an ``n``-vertex graph: copies are stored one after another."""
    return i * n + k


def torus_product(G: Graph, m: int) -> Graph:
    """``G ⊠ C_m``: ``m`` copies of ``G`` joined row-wise in sequence, with the
    wrap-around edges ``x_{k,m} ~ x_{k+1,1}`` (row index taken mod ``|G|``)."""
    if m < 3:
        raise ValueError(f"torus product needs m >= 3, got {m}")
    n = G.order
    edges = []
    for i in range(m):
        for u, v in G.edges():
            edges.append((torus_index(n, u, i), torus_index(n, v, i)))
    for i in range(m - 1):
        for k in range(n):
            edges.append((torus_index(n, k, i), torus_index(n, k, i + 1)))
    for k in range(n):
        edges.append((torus_index(n, k, m - 1), torus_index(n, (k + 1) % n, 0)))
    return Graph.from_edges(n * m, edges, f"{G.name} torus C{m}".strip())


def torus_to_circulant_map(n: int, m: int, twist: int = 1) -> list[int]:
    """Relabeling of ``G ⊠ C_m`` (``|G| = n``) onto ``C_{nm}``: ``x_{k,i}`` goes
    to ``v_{i + twist*m*k}``.

    ``twist=+1`` matches :func:`torus_product`; ``twist=-1`` matches the mirror
    orientation ``x_{k,m} ~ x_{k-1,1}``.
    """
    N = n * m
    perm = [0] * N
    for i in range(m):
        for k in range(n):
            perm[torus_index(n, k, i)] = (i + twist * m * k) % N
    return perm


def reflect_rows_map(n: int, m: int) -> list[int]:
    """Relabeling ``x_{k,i} -> x_{-k mod n, i}``; swaps the two wrap orientations."""
    perm = [0] * (n * m)
    for i in range(m):
        for k in range(n):
            perm[torus_index(n, k, i)] = torus_index(n, (-k) % n, i)
    return perm


def relabel(G: Graph, perm: Sequence[int]) -> Graph:
    """Graph whose vertex ``perm[v]`` plays the role of ``G``'s vertex ``v``."""
    if sorted(perm) != list(range(G.order)):
        raise ValueError("relabeling is not a permutation of the vertex set")
    return Graph.from_edges(G.order, [(perm[u], perm[v]) for u, v in G.edges()], G.name)


def complement(G: Graph) -> Graph:
    full = G.full_mask
    return Graph(G.order, tuple(full & ~row & ~(1 << v) for v, row in enumerate(G.adj)),
                 f"co-{G.name}" if G.name else "")


def disjoint_union(G: Graph, H: Graph) -> Graph:
    shift = G.order
    adj = G.adj + tuple(row << shift for row in H.adj)
    return Graph(G.order + H.order, adj, f"{G.name} + {H.name}".strip(" +"))


# --- circulant structure -----------------------------------------------------

def decompose(spec: CirculantSpec) -> ComponentDecomposition:
    g = reduce(gcd, spec.S, spec.n)
    reduced = CirculantSpec(spec.n // g, tuple(s // g for s in spec.S))
    return ComponentDecomposition(g, reduced)


def component_map(spec: CirculantSpec) -> list[int]:
    """Vertex map from ``C_n(S)`` onto ``g`` disjoint copies of the reduced
    circulant: ``v_i`` lands in copy ``i mod g`` at position ``i // g``."""
    g = decompose(spec).copies
    size = spec.n // g
    return [(i % g) * size + i // g for i in range(spec.n)]


def units(n: int) -> list[int]:
    return [k for k in range(1, max(n, 2)) if gcd(k, n) == 1]


def multiply(spec: CirculantSpec, k: int) -> CirculantSpec:
    """Canonical rewrite of ``C_n(kS)`` into ``{1, ..., n//2}``."""
    n = spec.n
    return CirculantSpec(n, tuple(sorted({min(k * s % n, -k * s % n) for s in spec.S})))


def multiplier_isomorphic(a: CirculantSpec, b: CirculantSpec) -> int | None:
    """Least unit ``k`` mod ``n`` with ``k * a.S == b.S`` up to sign, else None.

    ``None`` does not prove the two circulants non-isomorphic: only multiplier
    maps are tried.
    """
    if a.n != b.n:
        raise ValueError(f"orders differ: {a.n} != {b.n}")
    for k in units(a.n):
        if multiply(a, k).S == b.S:
            return k
    return None


def canonical_form(spec: CirculantSpec) -> CirculantSpec:
    """Lexicographically least multiplier rewrite; equal canonical forms imply
    isomorphic circulants."""
    return min((multiply(spec, k) for k in units(spec.n)), key=lambda c: c.S)


def two_coloring(G: Graph) -> list[int] | None:
    color = [-1] * G.order
    for root in range(G.order):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in bits(G.adj[v]):
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    return color


def is_bipartite(spec: CirculantSpec) -> bool:
    """Parity test on the connected reduction: ``n`` even and every element odd."""
    red = decompose(spec).reduced
    return red.n % 2 == 0 and all(s % 2 == 1 for s in red.S)


def girth(G: Graph) -> float:
    """Length of a shortest cycle (``math.inf`` for forests).

    BFS from every root; a non-tree edge ``(u, w)`` closes a closed walk of
    length ``d(u) + d(w) + 1`` through the root, and the minimum over all roots
    is attained by an actual shortest cycle.
    """
    best = inf
    for root in range(G.order):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in bits(G.adj[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[v] + dist[u] + 1)
    return best


# --- text forms ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<word>[A-Za-z]+)|(?P<punct>[(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise SpecParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, msg, pos=None):
        if pos is None:
            tok = self.peek()
            pos = tok[2] if tok else len(self.text.rstrip())
        raise SpecParseError(msg, self.text, pos)

    def expect(self, kind, value=None):
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            self.fail(f"expected {want!r}" + (f", found {tok[1]!r}" if tok else ", found end of input"))
        self.i += 1
        return tok

    def factor(self):
        """Returns ('K', n) | ('C', n, S or None)."""
        tok = self.peek()
        if tok is None:
            self.fail("expected a graph, found end of input")
        kind, val, pos = tok
        if kind == "word" and val in ("K", "k", "C", "c"):
            self.i += 1
            n = int(self.expect("num")[1])
        else:
            self.fail(f"expected 'K<n>' or 'C<n>(...)', found {val!r}")
        letter = val.upper()
        if letter == "K":
            return ("K", n, pos)
        S = None
        nxt = self.peek()
        if nxt and nxt[1] == "(":
            self.i += 1
            S = [int(self.expect("num")[1])]
            while self.peek() and self.peek()[1] == ",":
                self.i += 1
                S.append(int(self.expect("num")[1]))
            self.expect("punct", ")")
        return ("C", n, pos, S)

    def done(self):
        if self.peek() is not None:
            self.fail(f"unexpected trailing {self.peek()[1]!r}")


def _spec_from_factor(text, f) -> CirculantSpec:
    _, n, pos, S = f
    if S is None:
        S = [1]
    try:
        return CirculantSpec(n, tuple(S))
    except ValueError as e:
        raise SpecParseError(str(e), text, pos) from None


def parse_spec(text: str) -> CirculantSpec:
    """Parse ``"C12(1,6)"`` (whitespace-insensitive) into a spec."""
    p = _Parser(text)
    f = p.factor()
    if f[0] != "C" or f[3] is None:
        p.fail("expected a circulant of the form C<n>(s1,...)", f[2])
    p.done()
    return _spec_from_factor(text, f)


def parse_graph(text: str) -> Graph:
    """Parse ``C<n>(...)``, ``K<n>``, ``C<n>``, ``<G> box <H>`` or ``<G> torus C<m>``."""
    p = _Parser(text)

    def realize(f):
        if f[0] == "K":
            if f[1] < 1:
                p.fail("K<n> needs n >= 1", f[2])
            return complete_graph(f[1])
        if f[3] is None:
            if f[1] < 3:
                p.fail("a cycle needs n >= 3", f[2])
            return cycle_graph(f[1])
        return build_circulant(_spec_from_factor(text, f))

    left = p.factor()
    op = p.peek()
    if op is None:
        return realize(left)
    if op[0] != "word" or op[1].lower() not in ("box", "torus"):
        p.fail(f"expected 'box' or 'torus', found {op[1]!r}")
    p.i += 1
    right = p.factor()
    p.done()
    if op[1].lower() == "box":
        return cartesian_product(realize(left), realize(right))
    if right[0] != "C" or right[3] is not None:
        p.fail("torus product needs a plain cycle C<m> on the right", right[2])
    if right[1] < 3:
        p.fail("torus product needs m >= 3", right[2])
    return torus_product(realize(left), right[1])
