"""Zero forcing: closure under the filling rule, forcing certificates, lower
bounds on Z(G), exact Z(G) by exhaustive search, and the constructive forcing
sets for the torus-product families.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from math import inf
from typing import Iterable, Iterator

from .graphs import (
    CirculantSpec,
    Graph,
    bits,
    build_circulant,
    complete_graph,
    cycle_graph,
    girth,
    mask_of,
    torus_index,
    torus_product,
    torus_to_circulant_map,
)

DEFAULT_CEILING = 24


class SearchCeilingExceeded(RuntimeError):
    """Exact search refused: a component is larger than the configured ceiling."""


class BudgetExhausted(RuntimeError):
    pass


class InternalInconsistency(AssertionError):
    """A construction that should be a zero forcing set failed to force."""


@dataclass(frozen=True)
class FillState:
    filled: int
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("negative order")
        if self.filled < 0 or self.filled >> self.order:
            raise ValueError(f"mask {self.filled:#x} is wider than {self.order} vertices")

    @classmethod
    def of(cls, order: int, vertices: Iterable[int]) -> "FillState":
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < order:
                raise ValueError(f"vertex {v} outside 0..{order - 1}")
        return cls(mask_of(vertices), order)

    @property
    def vertices(self) -> list[int]:
        return bits(self.filled)

    @property
    def complete(self) -> bool:
        return self.filled == (1 << self.order) - 1

    def __len__(self):
        return self.filled.bit_count()

    def __contains__(self, v):
        return bool(self.filled >> v & 1)

    def __le__(self, other):
        return self.filled & ~other.filled == 0


@dataclass(frozen=True)
class ForcingCertificate:
    initial: FillState
    chronology: tuple[tuple[int, int], ...]

    def replay(self, G: Graph) -> bool:
        """Re-check every force; raises ``InternalInconsistency`` on a bad step."""
        filled = self.initial.filled
        for step, (v, w) in enumerate(self.chronology):
            if not filled >> v & 1:
                raise InternalInconsistency(f"step {step}: forcing vertex {v} is not filled")
            unfilled = G.adj[v] & ~filled
            if unfilled != 1 << w:
                raise InternalInconsistency(
                    f"step {step}: vertex {v} has unfilled neighbours {bits(unfilled)}, not exactly [{w}]")
            filled |= 1 << w
        if filled != G.full_mask:
            raise InternalInconsistency("chronology ends with unfilled vertices")
        return True


def _check(G: Graph, F: FillState):
    if F.order != G.order:
        raise ValueError(f"fill state has order {F.order}, graph has {G.order}")


def closure_with_chronology(G: Graph, F: FillState, order: Iterable[int] | None = None
                            ) -> tuple[FillState, list[tuple[int, int]]]:
    """Final filling plus the forces that produced it.

    Works off a queue of candidate forcers and per-vertex unfilled-neighbour
    counters. ``order`` optionally seeds the queue in a given vertex order (the
    final filling does not depend on it).
    """
    _check(G, F)
    adj = G.adj
    filled = F.filled
    unfilled_count = [(row & ~filled).bit_count() for row in adj]
    seeds = bits(filled) if order is None else [v for v in order if filled >> v & 1]
    queue = deque(v for v in seeds if unfilled_count[v] == 1)
    chronology = []
    while queue:
        v = queue.popleft()
        if unfilled_count[v] != 1:
            continue
        w = (adj[v] & ~filled).bit_length() - 1
        filled |= 1 << w
        chronology.append((v, w))
        for u in bits(adj[w]):
            unfilled_count[u] -= 1
            if unfilled_count[u] == 1 and filled >> u & 1:
                queue.append(u)
        if unfilled_count[w] == 1:
            queue.append(w)
    return FillState(filled, G.order), chronology


def closure(G: Graph, F: FillState) -> FillState:
    return closure_with_chronology(G, F)[0]


def is_forcing_set(G: Graph, F: FillState) -> ForcingCertificate | None:
    final, chronology = closure_with_chronology(G, F)
    if not final.complete:
        return None
    return ForcingCertificate(F, tuple(chronology))


def close_mask(adj: tuple[int, ...], filled: int) -> int:
    """Bitmask closure used inside the search loop.

    ``active`` holds filled vertices that still have an unfilled neighbour.
    """
    active = filled
    while True:
        progressed = False
        a = active
        while a:
            low = a & -a
            a ^= low
            un = adj[low.bit_length() - 1] & ~filled
            if not un:
                active ^= low
            elif not un & (un - 1):
                filled |= un
                active = (active ^ low) | un
                progressed = True
        if not progressed:
            return filled


# --- lower bounds --------------------------------------------------------------

def lower_bound_terms(G: Graph) -> dict[str, int]:
    """Every applicable lower bound for a connected graph, keyed by name."""
    if G.order == 0:
        return {"empty": 0}
    terms = {"trivial": 1}
    degs = G.degrees()
    delta = min(degs)
    if G.is_regular():
        terms["regular"] = delta
    if delta >= 2:
        g = girth(G)
        if g != inf:
            terms["girth"] = (g - 3) * (delta - 2) + delta
    return terms


def zf_lower_bounds(G: Graph) -> int:
    """Best lower bound on Z(G); summed over components when disconnected."""
    total = 0
    for comp in G.components():
        H, _ = G.induced(comp)
        total += max(lower_bound_terms(H).values())
    return total


# --- exact search ----------------------------------------------------------------

def subsets_colex(n: int, k: int) -> Iterator[int]:
    """All ``k``-subsets of ``range(n)`` as masks, in increasing numeric order."""
    if k == 0:
        yield 0
        return
    if k > n:
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def _candidates(n: int, k: int, transitive: bool) -> Iterator[int]:
    if transitive:
        for x in subsets_colex(n - 1, k - 1):
            yield (x << 1) | 1
    else:
        yield from subsets_colex(n, k)


def _search_connected(G: Graph, start: int, upper: int | None, transitive: bool,
                      aggressive: bool, deadline: float | None) -> tuple[int, int]:
    adj = G.adj
    n = G.order
    full = G.full_mask
    forts: list[int] = []
    counter = 0
    for k in range(max(start, 1), n + 1):
        if upper is not None and k > upper:
            raise ValueError(f"no forcing set of size <= {upper}: upper hint is wrong")
        for F in _candidates(n, k, transitive):
            counter += 1
            if deadline is not None and not counter & 0xFFF and time.monotonic() > deadline:
                raise BudgetExhausted(f"search budget exhausted at size {k}")
            if aggressive and any(not F & fort for fort in forts):
                continue
            closed = close_mask(adj, F)
            if closed == full:
                return k, F
            if aggressive:
                fort = full & ~closed
                if len(forts) < 64:
                    forts.append(fort)
                else:
                    worst = max(range(len(forts)), key=lambda i: forts[i].bit_count())
                    if fort.bit_count() < forts[worst].bit_count():
                        forts[worst] = fort
    raise InternalInconsistency("the full vertex set failed to force")  # unreachable


def zf_exact(G: Graph, hints: tuple[int, int | None] | None = None, *,
             transitive: bool = False, ceiling: int = DEFAULT_CEILING,
             aggressive: bool = False, budget_seconds: float | None = None
             ) -> tuple[int, FillState]:
    """Exact zero forcing number and a minimum witness.

    Components are solved separately and the results summed. Each component
    is searched by size, starting at ``hints[0]`` (taken on trust) or the best
    proven lower bound, over subsets in increasing mask order; the returned
    witness is the first forcing set met. With ``transitive=True`` (any
    vertex-transitive graph, so every circulant) the least vertex of each
    component is fixed into the set.

    ``aggressive`` skips candidates that miss a known fort (the unfilled part
    of a stalled closure); it never changes Z and only rarely the witness.

    Raises ``SearchCeilingExceeded`` instead of guessing when a component has
    more than ``ceiling`` vertices.
    """
    comps = G.components()
    for comp in comps:
        if comp.bit_count() > ceiling:
            raise SearchCeilingExceeded(
                f"component with {comp.bit_count()} vertices exceeds the search ceiling of {ceiling}")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    if len(comps) > 1 and hints is not None:
        raise ValueError("hints apply to connected graphs only")
    total = 0
    witness = 0
    for comp in comps:
        H, labels = G.induced(comp)
        if hints is not None:
            start, upper = hints
        else:
            start, upper = zf_lower_bounds(H), None
        z, F = _search_connected(H, start, upper, transitive, aggressive, deadline)
        total += z
        witness |= mask_of(labels[v] for v in bits(F))
    return total, FillState(witness, G.order)


def zf_circulant(spec: CirculantSpec, **kw) -> tuple[int, FillState]:
    return zf_exact(build_circulant(spec), transitive=True, **kw)


# --- constructive forcing sets ---------------------------------------------------

WITNESS_FAMILIES = ("torus-two-columns", "torus-m3", "closed-neighborhood", "torus-cc")


def witness_graph(family: str, n: int, m: int | None = None, circulant: bool = False) -> Graph:
    """The graph a constructive witness lives on.

    Torus families use :func:`torus_product` labels, or circulant labels when
    ``circulant`` is set. ``closed-neighborhood`` is always the circulant
    ``C_{2n}(1, 2, 4, ..., 2*(n//2))``.
    """
    if family == "closed-neighborhood":
        return build_circulant(CirculantSpec(2 * n, (1,) + tuple(2 * j for j in range(1, n // 2 + 1))))
    if family in ("torus-two-columns", "torus-m3"):
        m = 3 if family == "torus-m3" else m
        if circulant:
            b = n // 2
            return build_circulant(CirculantSpec(n * m, (1,) + tuple(m * j for j in range(1, b + 1))))
        return torus_product(complete_graph(n), m)
    if family == "torus-cc":
        if circulant:
            return build_circulant(CirculantSpec(n * m, (1, m)))
        return torus_product(cycle_graph(n), m)
    raise ValueError(f"unknown witness family {family!r}")


def _raw_witness(family: str, n: int, m: int | None) -> tuple[list[int], int]:
    """(vertices in torus labels or circulant labels, closed-form upper bound)."""
    x = lambda k, i: torus_index(n, k, i)
    if family == "torus-two-columns":
        if n < 2 or m is None or m < 4:
            raise ValueError("torus-two-columns needs n >= 2 and m >= 4")
        return [x(k, i) for i in (0, 1) for k in range(n)], 2 * n
    if family == "torus-m3":
        if n < 3:
            raise ValueError("torus-m3 needs n >= 3")
        return [x(k, 0) for k in range(n - 1)] + [x(k, 1) for k in range(n - 1)] + [x(0, 2)], 2 * n - 1
    if family == "closed-neighborhood":
        if n < 3:
            raise ValueError("closed-neighborhood needs n >= 3")
        G = witness_graph(family, n)
        nbrs = G.neighbors(0)
        # leave out v_1: v_0 forces it, then the even neighbours force onward
        return [0] + [v for v in nbrs if v != 1], n + 1
    if family == "torus-cc":
        if n < 3 or m is None or m < 3:
            raise ValueError("torus-cc needs n, m >= 3")
        if n == m:
            c = (m + 1) // 2 - 1  # column ceil(m/2), 0-based
            return [x(k, c) for k in range(n)] + [x(k, c + 1) for k in range(1, n)], 2 * m - 1
        if n <= m:
            return [x(k, i) for i in (0, 1) for k in range(n)], 2 * n
        return [x(k, i) for k in (0, 1) for i in range(m)], 2 * m
    raise ValueError(f"unknown witness family {family!r}")


def witness_set(family: str, n: int, m: int | None = None, circulant: bool = False) -> FillState:
    """Forcing set from the proof of the family's upper bound, checked by closure.

    Its size equals the family's closed-form upper bound; a failed check raises
    ``InternalInconsistency``.
    """
    verts, bound = _raw_witness(family, n, m)
    G = witness_graph(family, n, m, circulant)
    if circulant and family != "closed-neighborhood":
        mm = 3 if family == "torus-m3" else m
        perm = torus_to_circulant_map(n, mm)
        verts = [perm[v] for v in verts]
    F = FillState.of(G.order, verts)
    if len(F) != bound:
        raise InternalInconsistency(f"{family}: built {len(F)} vertices, expected {bound}")
    if not closure(G, F).complete:
        raise InternalInconsistency(f"{family} (n={n}, m={m}) is not a zero forcing set")
    return F
