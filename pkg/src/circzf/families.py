"""Closed-form values of Z and M for circulant families, and a pipeline that
checks them against exact search and exact witness matrices.

``predict`` matches a spec against every known family, after trying all
multiplier rewrites ``C_n(S) -> C_n(kS)`` and after splitting a disconnected
circulant into its identical components. ``verify`` runs the search and the
matrix builders and gives each claim a verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Callable, Iterator

from . import exactla
from .forcing import (
    BudgetExhausted,
    DEFAULT_CEILING,
    FillState,
    InternalInconsistency,
    SearchCeilingExceeded,
    closure,
    is_forcing_set,
    lower_bound_terms,
    witness_set,
    zf_exact,
    zf_lower_bounds,
)
from .graphs import (
    CirculantSpec,
    build_circulant,
    canonical_form,
    decompose,
    is_bipartite,
    multiplier_isomorphic,
    multiply,
    relabel,
    torus_to_circulant_map,
    units,
)

PROVED_EQUAL = "proved-equal"
LOWER_BOUND = "lower-bound"
UNKNOWN = "unknown"

CONFIRMED = "confirmed"
BOUND_CONSISTENT = "bound-consistent"
CONTRADICTED = "CONTRADICTED"
UNVERIFIED = "unverified"


@dataclass(frozen=True)
class Prediction:
    """A claim about one circulant: ``z_lower <= Z <= z_upper`` (exact when equal)."""

    family: str
    z_lower: int
    z_upper: int
    m_status: str
    citation: str
    parameters: dict = field(default_factory=dict, compare=False)
    multiplier: int | None = None
    copies: int = 1
    m_lower: int | None = None

    def __post_init__(self):
        if self.z_lower > self.z_upper:
            raise ValueError(f"empty interval [{self.z_lower}, {self.z_upper}]")
        if self.m_status not in (PROVED_EQUAL, LOWER_BOUND, UNKNOWN):
            raise ValueError(f"bad m_status {self.m_status!r}")
        if self.m_status == PROVED_EQUAL and not self.exact:
            raise ValueError("M = Z can only accompany an exact Z")

    @property
    def exact(self) -> bool:
        return self.z_lower == self.z_upper

    @property
    def claim(self) -> str:
        z = f"Z = {self.z_lower}" if self.exact else f"{self.z_lower} <= Z <= {self.z_upper}"
        if self.m_status == PROVED_EQUAL:
            return f"{z}, M = Z"
        if self.m_status == LOWER_BOUND:
            return f"{z}, M >= {self.m_lower}"
        return z

    def to_dict(self) -> dict:
        out = {"family": self.family, "claim": self.claim, "z_lower": self.z_lower,
               "z_upper": self.z_upper, "m_status": self.m_status, "citation": self.citation,
               "parameters": dict(self.parameters)}
        if self.multiplier is not None:
            out["multiplier"] = self.multiplier
        if self.copies != 1:
            out["copies"] = self.copies
        return out


def _exact(family, z, citation, m_equal=True, **params) -> Prediction:
    return Prediction(family, z, z, PROVED_EQUAL if m_equal else UNKNOWN, citation, params)


# --- family matchers ---------------------------------------------------------------
# Each takes a connected spec already rewritten by some multiplier and returns
# the predictions whose hypotheses it meets exactly as stated.

def _cycle(spec):
    if spec.t == 1 and spec.n >= 3:
        yield _exact("cycle", 2, "Z = M = 2 for C_n(j), gcd(n, j) = 1, n >= 3", j=spec.S[0])


def _complete(spec):
    half = spec.n // 2
    if spec.n > 1 and spec.S == tuple(range(1, half + 1)):
        yield _exact("complete", spec.n - 1, "Z = M = n - 1 for K_n = C_n(1, ..., n//2)")


def _cycle_complement(spec):
    half = spec.n // 2
    if spec.n >= 5 and spec.t == half - 1:
        (j,) = set(range(1, half + 1)) - set(spec.S)
        if gcd(spec.n, j) == 1:
            yield _exact("cycle-complement", spec.n - 3,
                         "Z = M = n - 3 for C_n({1..n//2} minus j), gcd(n, j) = 1, n >= 5", j=j)


def _consecutive(spec):
    d = spec.t
    if spec.S == tuple(range(1, d + 1)) and 2 * d < spec.n:
        yield _exact("consecutive", 2 * d, "Z = M = 2d for C_n(1, ..., d), 2d < n", d=d)


def _bipartite_odd_run(spec):
    if spec.n % 2:
        return
    N = spec.n // 2
    ell = spec.t - 1
    if ell < 1 or N < 2 * ell + 2:
        return
    if N % 2 == 1 and spec.S == tuple(range(N - 2 * ell, N + 1, 2)):
        yield _exact("bipartite-odd-run", 4 * ell,
                     "Z = M = 4l for C_2N(N-2l, ..., N-2, N), N odd, N >= 2l+2", N=N, l=ell)
    if N % 2 == 0 and spec.S == tuple(range(N - 2 * ell - 1, N, 2)):
        yield _exact("bipartite-odd-run", 4 * ell + 2,
                     "Z = M = 4l+2 for C_2N(N-2l-1, ..., N-1), N even, N >= 2l+2", N=N, l=ell)


def _bipartite_initial_odd(spec):
    if spec.n % 2:
        return
    N = spec.n // 2
    ell = spec.t
    if N <= 1 or spec.S != tuple(range(1, 2 * ell, 2)) or N < 2 * ell - 1:
        return
    if 2 * ell - 1 <= N - 1:
        yield _exact("bipartite-initial-odd", 4 * ell - 2,
                     "Z = M = 4l-2 for C_2N(1, 3, ..., 2l-1), 2l-1 <= N-1", N=N, l=ell)
    else:
        yield _exact("bipartite-initial-odd", 4 * ell - 4,
                     "Z = M = 4l-4 for C_2N(1, 3, ..., N) = K_{N,N}", N=N, l=ell)


def _bipartite_sequential(spec):
    if not is_bipartite(spec):
        return
    N = spec.n // 2
    exps = exactla.biadjacency_exponents(spec)
    found = exactla.sequential_normalize(exps, N)
    # t = 0 is a perfect matching, where Z = N rather than 0
    if found and found[2] >= 1:
        a, b, t = found
        yield _exact("bipartite-sequential", 2 * t,
                     "Z = M = 2t when the biadjacency shifts normalise to P^0 + ... + P^t",
                     N=N, a=a, b=b, t=t)


def torus_kn_params(spec) -> tuple[int, int] | None:
    """(n, m) when spec is literally C_nm(1, m, 2m, ..., (n//2)m), n >= 3, m >= 2."""
    if spec.t < 2 or spec.S[0] != 1:
        return None
    m = spec.S[1]
    if m < 2 or spec.n % m:
        return None
    n = spec.n // m
    if n < 3 or spec.S != (1,) + tuple(m * j for j in range(1, n // 2 + 1)):
        return None
    return n, m


def _torus_kn(spec):
    found = torus_kn_params(spec)
    if not found:
        return
    n, m = found
    if m == 2:
        z, rule = n + 1, "Z = n+1 for C_2n(1, 2, 4, ..., 2(n//2))"
    elif m == 3:
        z, rule = 2 * n - 1, "Z = 2n-1 for C_3n(1, 3, ..., 3(n//2)) = K_n torus C_3"
    else:
        z, rule = 2 * n, "Z = 2n for C_nm(1, m, ..., m(n//2)) = K_n torus C_m, m >= 4"
    params = {"n": n, "m": m}
    if m == 2 and n % 2 == 0:
        params["note"] = "largest connection element equals half the order"
    if m in (4, 6):
        rule += f"; M = Z from the explicit K_n torus C_{m} witness"
    yield Prediction("torus-kn", z, z, PROVED_EQUAL if m in (4, 6) else UNKNOWN, rule, params)


def torus_cc_params(spec) -> tuple[int, int] | None:
    """(rows, cols) with spec = C_{rows*cols}(1, cols) = C_rows torus C_cols."""
    if spec.t != 2 or spec.S[0] != 1:
        return None
    m = spec.S[1]
    if m < 3 or spec.n % m or spec.n // m < 3:
        return None
    return spec.n // m, m


def _torus_cc(spec):
    found = torus_cc_params(spec)
    if not found:
        return
    n, m = found
    N = spec.n
    if n == m:
        upper, rule = 2 * m - 1, "Z(C_{m^2}(1, m)) <= 2m-1"
    else:
        upper, rule = 2 * min(n, m), "Z(C_nm(1, t)) <= 2 min(n, m), t in {n, m}, n != m"
    yield Prediction("torus-cc-upper", 4, upper, UNKNOWN, rule, {"n": n, "m": m})
    lower = 4 if 3 * m == N else 6
    yield Prediction("four-cycle-girth", lower, N, UNKNOWN,
                     "Z(C_nm(1, t)) >= 4 if 3t = nm else 6 (girth bound, 4-regular)",
                     {"n": n, "m": m, "t": m})
    if m == 3:
        if n == 3:
            yield _exact("c9-13", 5, "Z = M = 5 for C_9(1, 3), explicit rank-4 witness")
        else:
            yield _exact("c3m-13", 6, "Z(C_3m(1, 3)) = 6 for m > 3", m_equal=False, m=n)


def _cubic(spec):
    if spec.n % 2 or spec.t != 2 or spec.S[1] != spec.n // 2:
        return
    m = spec.n // 2
    a = spec.S[0]
    t = gcd(a, 2 * m)
    if (2 * m // t) % 2 == 0:
        z = 3 * t if m == 2 * t else 4 * t
        rule = "Z = M = 3t if m = 2t, 4t if m >= 3t, for C_2m(a, m), t = gcd(a, 2m), 2m/t even"
    else:
        z = m if 2 * m == 3 * t else 2 * t
        rule = "Z = M = m if 2m = 3t, else 2t, for C_2m(a, m), t = gcd(a, 2m), 2m/t odd"
    yield _exact("cubic", z, rule, a=a, m=m, t=t)
    if a == 1 and m >= 2:
        yield _exact("mobius-ladder", 3 if m == 2 else 4, "Z = M = 3 if m = 2, 4 if m >= 3, for C_2m(1, m)", m=m)
    if a == 2 and m >= 3:
        if m % 2:
            z = min(m, 4)
        else:
            z = 6 if m == 4 else 8
        yield _exact("prism", z, "Z = M = min(m, 4) (m odd), 6 (m = 4), 8 (m >= 6) for C_2m(2, m)", m=m)


CONNECTED_MATCHERS: tuple[Callable, ...] = (
    _cycle, _complete, _cycle_complement, _consecutive, _bipartite_odd_run,
    _bipartite_initial_odd, _bipartite_sequential, _torus_kn, _torus_cc, _cubic,
)


def regular_bound(spec: CirculantSpec) -> Prediction:
    return Prediction("regular", spec.degree, spec.n, UNKNOWN,
                      "Z >= 2t-1 if 2 s_t = n, else Z >= 2t (degree of regularity)")


def _with_multipliers(spec: CirculantSpec, matchers) -> list[Prediction]:
    seen = set()
    out = []
    for k in units(spec.n):
        rewritten = multiply(spec, k)
        for matcher in matchers:
            for p in matcher(rewritten):
                key = (p.family, p.z_lower, p.z_upper, p.m_status)
                if key in seen:
                    continue
                seen.add(key)
                params = dict(p.parameters)
                if k != 1:
                    params["rewritten"] = str(rewritten)
                out.append(Prediction(p.family, p.z_lower, p.z_upper, p.m_status, p.citation,
                                      params, None if k == 1 else k, p.copies, p.m_lower))
    return out


def predict(spec: CirculantSpec) -> list[Prediction]:
    """Every family prediction that applies to ``spec``, plus the regularity bound."""
    dec = decompose(spec)
    if dec.copies == 1:
        preds = _with_multipliers(spec, CONNECTED_MATCHERS)
    else:
        g = dec.copies
        preds = _with_multipliers(spec, (_cubic,))
        for p in _with_multipliers(dec.reduced, CONNECTED_MATCHERS):
            params = dict(p.parameters, component=str(dec.reduced))
            preds.append(Prediction(p.family, g * p.z_lower, g * p.z_upper, p.m_status,
                                    f"{p.citation}; {g} disjoint copies add", params,
                                    p.multiplier, g, None if p.m_lower is None else g * p.m_lower))
    preds.append(regular_bound(spec))
    return preds


def combined_interval(preds: list[Prediction]) -> tuple[int, int]:
    return max(p.z_lower for p in preds), min(p.z_upper for p in preds)


# --- verification ---------------------------------------------------------------

@dataclass
class Check:
    kind: str
    family: str
    claim: str
    method: str
    verdict: str
    parameters: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self, include_timing=False) -> dict:
        out = {"kind": self.kind, "family": self.family, "parameters": self.parameters,
               "claim": self.claim, "method": self.method, "verdict": self.verdict}
        if include_timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class VerificationReport:
    spec: CirculantSpec
    predictions: list[Prediction]
    z_search: int | None
    witness: list[int] | None
    checks: list[Check]
    complete: bool
    notes: list[str] = field(default_factory=list)

    @property
    def contradicted(self) -> list[Check]:
        return [c for c in self.checks if c.verdict == CONTRADICTED]

    @property
    def ok(self) -> bool:
        return not self.contradicted

    def to_dict(self, include_timing=False) -> dict:
        return {
            "spec": str(self.spec),
            "complete": self.complete,
            "z_search": self.z_search,
            "witness": self.witness,
            "predictions": [p.to_dict() for p in self.predictions],
            "checks": [c.to_dict(include_timing) for c in self.checks],
            "notes": self.notes,
        }

    def to_table(self) -> str:
        head = f"{self.spec}: Z = {self.z_search if self.z_search is not None else '?'}"
        if self.witness is not None:
            head += f"  witness {{{', '.join(map(str, self.witness))}}}"
        if not self.complete:
            head += "  [incomplete]"
        rows = [("kind", "family", "claim", "method", "verdict")]
        rows += [(c.kind, c.family, c.claim, c.method, c.verdict) for c in self.checks]
        return head + "\n" + format_table(rows) + "".join(f"note: {n}\n" for n in self.notes)


def format_table(rows: list[tuple]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _invert_unit(k: int, n: int) -> int:
    return pow(k, -1, n)


def _back_to_spec(verts: list[int], k: int | None, n: int) -> list[int]:
    """Map vertices of C_n(kS) back to C_n(S) (v -> k^-1 v)."""
    if not k:
        return verts
    inv = _invert_unit(k, n)
    return [inv * v % n for v in verts]


def _matrix_witness(pred: Prediction, spec: CirculantSpec):
    """(label, matrix, labels) for predictions backed by an explicit matrix;
    ``labels[v]`` is the matrix row of circulant vertex ``v`` of ``spec``."""
    n_ord = spec.n
    k = pred.multiplier
    if pred.copies != 1:
        return None
    if pred.family == "c9-13":
        M, rows = exactla.witness_c913(), exactla.c913_labels()
        label = "c9"
    elif pred.family == "torus-kn" and pred.parameters["m"] in (4, 6):
        n, m = pred.parameters["n"], pred.parameters["m"]
        M = exactla.witness_k4(n) if m == 4 else exactla.witness_k6(n)
        # matrix rows follow torus labels with the mirrored wrap orientation
        to_circ = torus_to_circulant_map(n, m, twist=-1)
        rows = [0] * n_ord
        for idx, v in enumerate(to_circ):
            rows[v] = idx
        label = f"k{m}:{n}"
    else:
        return None
    # rows indexes circulant vertices of the rewritten spec; pull back through k
    labels = [rows[(k or 1) * v % n_ord] for v in range(n_ord)]
    return label, M, labels


def _witness_sets(pred: Prediction) -> Iterator[tuple[str, int, int | None]]:
    if pred.copies != 1:
        return
    if pred.family == "torus-kn":
        n, m = pred.parameters["n"], pred.parameters["m"]
        if m == 2:
            yield "closed-neighborhood", n, None
        elif m == 3:
            yield "torus-m3", n, None
        else:
            yield "torus-two-columns", n, m
    elif pred.family == "torus-cc-upper":
        yield "torus-cc", pred.parameters["n"], pred.parameters["m"]


def verify(spec: CirculantSpec, budget_seconds: float | None = None, *,
           ceiling: int = DEFAULT_CEILING, z_cache: dict | None = None) -> VerificationReport:
    """Check every prediction for ``spec`` against exact search and the
    witness constructions. Any CONTRADICTED check means a claim failed."""
    preds = predict(spec)
    G = build_circulant(spec)
    checks: list[Check] = []
    notes: list[str] = []
    complete = True

    # exact search, cached per multiplier class
    z = witness = None
    t0 = time.perf_counter()
    canon = canonical_form(spec)
    k_canon = multiplier_isomorphic(spec, canon)
    try:
        if z_cache is not None and canon in z_cache:
            z, w_canon = z_cache[canon]
        else:
            z, F = zf_exact(build_circulant(canon), transitive=True, ceiling=ceiling,
                            budget_seconds=budget_seconds)
            w_canon = F.vertices
            if z_cache is not None:
                z_cache[canon] = (z, w_canon)
        witness = sorted(_back_to_spec(w_canon, k_canon, spec.n))
    except SearchCeilingExceeded as e:
        complete = False
        notes.append(str(e))
    except BudgetExhausted as e:
        complete = False
        notes.append(str(e))
    search_time = time.perf_counter() - t0

    if witness is not None:
        cert = is_forcing_set(G, FillState.of(spec.n, witness))
        ok = cert is not None and len(witness) == z
        if ok:
            try:
                cert.replay(G)
            except InternalInconsistency:
                ok = False
        checks.append(Check("search", "exact", f"Z = {z}", "exhaustive search + replay",
                            CONFIRMED if ok else CONTRADICTED, {}, search_time))

    lower = zf_lower_bounds(G)
    checks.append(Check("lower-bound", "generic", f"Z >= {lower}", "regularity / girth bounds",
                        _interval_verdict(z, lower, spec.n)))

    for p in preds:
        checks.append(Check("prediction", p.family, p.claim, "exact search",
                            _interval_verdict(z, p.z_lower, p.z_upper), p.to_dict()["parameters"]))

    lo, hi = combined_interval(preds)
    checks.append(Check("consistency", "all", f"predictions intersect in [{lo}, {hi}]",
                        "interval intersection", BOUND_CONSISTENT if lo <= hi else CONTRADICTED))

    for p in preds:
        if p.family == "four-cycle-girth":
            terms = lower_bound_terms(G)
            ok = terms.get("girth") == p.z_lower
            checks.append(Check("girth-formula", p.family, f"girth bound = {p.z_lower}",
                                "generic girth bound on the realized graph",
                                CONFIRMED if ok else CONTRADICTED, p.to_dict()["parameters"]))
        if p.family == "bipartite-sequential":
            a, b, t = (p.parameters[x] for x in "abt")
            rewritten = multiply(spec, p.multiplier or 1)
            exps = exactla.biadjacency_exponents(rewritten)
            N = spec.n // 2
            ok = {(a * e + b) % N for e in exps} == set(range(t + 1))
            checks.append(Check("certificate", p.family, f"shifts -> P^0 + ... + P^{t}",
                                f"a = {a}, b = {b}", CONFIRMED if ok else CONTRADICTED,
                                p.to_dict()["parameters"]))
        for fam, n, m in _witness_sets(p):
            t0 = time.perf_counter()
            try:
                F = witness_set(fam, n, m, circulant=True)
                verts = _back_to_spec(F.vertices, p.multiplier, spec.n)
                forcing = closure(G, FillState.of(spec.n, verts)).complete
                size = len(verts)
                verdict = CONTRADICTED if not forcing else (
                    UNVERIFIED if z is None else (BOUND_CONSISTENT if z <= size else CONTRADICTED))
                claim = f"forcing set of size {size}"
            except InternalInconsistency as e:
                verdict, claim = CONTRADICTED, str(e)
            checks.append(Check("witness-set", fam, claim, "construction + closure", verdict,
                                {"n": n, "m": m}, time.perf_counter() - t0))
        mw = _matrix_witness(p, spec)
        if mw:
            label, M, labels = mw
            t0 = time.perf_counter()
            pattern_ok = exactla.pattern_graph(M) == relabel(G, labels) and M.is_symmetric()
            nul = exactla.nullity(M)
            if not pattern_ok:
                verdict = CONTRADICTED
            elif z is None:
                verdict = UNVERIFIED
            elif nul > z:
                verdict = CONTRADICTED
            elif p.m_status == PROVED_EQUAL:
                verdict = CONFIRMED if nul == p.z_lower == z else CONTRADICTED
            else:
                verdict = BOUND_CONSISTENT
            checks.append(Check("witness-matrix", p.family, f"M >= nullity = {nul}",
                                f"exact rank of {label} + pattern match", verdict,
                                {"witness": label, "nullity": nul, "pattern": pattern_ok},
                                time.perf_counter() - t0))

    return VerificationReport(spec, preds, z, witness, checks, complete, notes)


def _interval_verdict(z: int | None, lo: int, hi: int) -> str:
    if z is None:
        return UNVERIFIED
    if not lo <= z <= hi:
        return CONTRADICTED
    return CONFIRMED if lo == hi else BOUND_CONSISTENT


# --- exhaustive sweep -------------------------------------------------------------

def connected_specs(max_n: int, min_n: int = 2) -> Iterator[CirculantSpec]:
    for n in range(min_n, max_n + 1):
        half = n // 2
        for size in range(1, half + 1):
            for S in combinations(range(1, half + 1), size):
                if gcd(n, *S) == 1:
                    yield CirculantSpec(n, S)


@dataclass
class SweepReport:
    max_n: int
    reports: list[VerificationReport]
    seconds: float = 0.0

    @property
    def contradicted(self) -> list[tuple[CirculantSpec, Check]]:
        return [(r.spec, c) for r in self.reports for c in r.contradicted]

    @property
    def ok(self) -> bool:
        return not self.contradicted and all(r.complete for r in self.reports)

    def summary(self) -> dict:
        counts: dict[str, int] = {}
        families: dict[str, int] = {}
        for r in self.reports:
            for c in r.checks:
                counts[c.verdict] = counts.get(c.verdict, 0) + 1
            for p in r.predictions:
                families[p.family] = families.get(p.family, 0) + 1
        return {
            "max_n": self.max_n,
            "graphs": len(self.reports),
            "incomplete": sum(not r.complete for r in self.reports),
            "verdicts": dict(sorted(counts.items())),
            "family_matches": dict(sorted(families.items())),
            "contradictions": [f"{s}: {c.family}: {c.claim}" for s, c in self.contradicted],
            "matrix_contradictions": sum(c.kind == "witness-matrix" for _, c in self.contradicted),
        }

    def to_dict(self) -> dict:
        return {"summary": self.summary(), "graphs": [
            {"spec": str(r.spec), "z_search": r.z_search,
             "predictions": [p.claim + f" [{p.family}]" for p in r.predictions if p.family != "regular"]}
            for r in self.reports]}

    def to_table(self) -> str:
        rows = [("spec", "Z", "predictions")]
        for r in self.reports:
            fams = ", ".join(f"{p.family}:{p.z_lower}" + ("" if p.exact else f"-{p.z_upper}")
                             for p in r.predictions if p.family != "regular")
            rows.append((str(r.spec), r.z_search, fams or "-"))
        s = self.summary()
        tail = f"graphs: {s['graphs']}  verdicts: {s['verdicts']}  contradictions: {len(s['contradictions'])}\n"
        return format_table(rows) + tail


def sweep(max_n: int, budget_seconds: float | None = None, min_n: int = 2,
          ceiling: int = DEFAULT_CEILING) -> SweepReport:
    """Verify every connected circulant with ``min_n <= n <= max_n``."""
    t0 = time.perf_counter()
    cache: dict = {}
    reports = []
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    for spec in connected_specs(max_n, min_n):
        remaining = None if deadline is None else max(deadline - time.monotonic(), 0.0)
        reports.append(verify(spec, remaining, ceiling=ceiling, z_cache=cache))
    return SweepReport(max_n, reports, time.perf_counter() - t0)
