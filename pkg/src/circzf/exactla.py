"""Exact linear algebra over Q and Q(sqrt(d)).

Rationals are ``fractions.Fraction``. ``QuadScalar`` is ``a + b*sqrt(d)`` with
rational ``a``, ``b`` and a ``d`` shared by every entry of a matrix. Ranks are
computed by fraction-free (Bareiss) elimination, over the integers for
rational matrices after clearing row denominators.

The builders reproduce the explicit matrices behind the maximum nullity
results: the circulant Hankel matrix and its orthogonal normalisation, the
block witnesses for ``K_n ⊠ C_4`` and ``K_n ⊠ C_6``, the 9x9 witness for
``C_9(1,3)``, and biadjacency matrices of bipartite circulants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt, lcm, sqrt
from typing import Sequence, Union

from .graphs import CirculantSpec, Graph, decompose, is_bipartite, units

Scalar = Union[Fraction, "QuadScalar"]


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


class QuadScalar:
    """``a + b*sqrt(d)`` with rational components and fixed ``d > 0``.

    Comparison is by value, so a perfect-square ``d`` is still handled
    correctly; for irrational ``sqrt(d)`` that is the same as comparing
    components. Mixing different ``d`` raises ``TypeError``.
    """

    __slots__ = ("a", "b", "d")
    __hash__ = None

    def __init__(self, a=0, b=0, d=2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)
        if self.d <= 0:
            raise ValueError("d must be positive")

    def _coerce(self, other) -> "QuadScalar":
        if isinstance(other, QuadScalar):
            if other.d != self.d:
                raise TypeError(f"mixing sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadScalar(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadScalar":
        if not self:
            raise ZeroDivisionError("QuadScalar division by zero")
        nrm = self.norm()
        if nrm:
            return QuadScalar(self.a / nrm, -self.b / nrm, self.d)
        # only possible when sqrt(d) is rational
        return QuadScalar(1 / (self.a + self.b * rational_sqrt(self.d)), 0, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self):
        a, b = self.a, self.b
        if not b:
            return bool(a)
        if not a:
            return True
        # a + b*sqrt(d) == 0  iff  a, b of opposite sign and a^2 == b^2 d
        return not ((a > 0) != (b > 0) and a * a == b * b * self.d)

    def __eq__(self, other):
        if isinstance(other, QuadScalar) and other.d != self.d:
            return False
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return not (self - o)

    def __float__(self):
        return float(self.a) + float(self.b) * sqrt(float(self.d))

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return f"{_frac_text(self.a)}+{_frac_text(self.b)}*sqrt({_frac_text(self.d)})"


def _frac_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _to_fraction(x) -> Fraction:
    if isinstance(x, QuadScalar):
        raise TypeError("expected a rational entry")
    return Fraction(x)


class ExactMatrix:
    """Dense immutable matrix of exact scalars.

    All entries are ``Fraction`` or all are ``QuadScalar`` over one ``d``;
    mixed input is promoted to ``QuadScalar``.
    """

    __slots__ = ("rows", "ncols", "d")

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        ds = {x.d for r in rows for x in r if isinstance(x, QuadScalar)}
        if len(ds) > 1:
            raise TypeError(f"entries over different extensions: {sorted(ds)}")
        d = ds.pop() if ds else None
        if d is None:
            rows = [[_to_fraction(x) for x in r] for r in rows]
        else:
            rows = [[x if isinstance(x, QuadScalar) else QuadScalar(x, 0, d) for x in r] for r in rows]
        self.rows = tuple(tuple(r) for r in rows)
        self.ncols = ncols
        self.d = d

    # construction helpers
    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int | None = None) -> "ExactMatrix":
        return cls([[Fraction(0)] * (r if c is None else c) for _ in range(r)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ExactMatrix | int"]]) -> "ExactMatrix":
        """Assemble from a grid of blocks; a literal ``0`` is a zero block sized
        from its row and column neighbours."""
        heights = [next(b.shape[0] for b in row if isinstance(b, ExactMatrix)) for row in blocks]
        widths = [next(blocks[i][j].shape[1] for i in range(len(blocks))
                       if isinstance(blocks[i][j], ExactMatrix)) for j in range(len(blocks[0]))]
        out = []
        for bi, row in enumerate(blocks):
            for r in range(heights[bi]):
                line = []
                for bj, b in enumerate(row):
                    if isinstance(b, ExactMatrix):
                        if b.shape != (heights[bi], widths[bj]):
                            raise ValueError(f"block ({bi},{bj}) has shape {b.shape}")
                        line.extend(b.rows[r])
                    elif b == 0:
                        line.extend([Fraction(0)] * widths[bj])
                    else:
                        raise TypeError("blocks must be ExactMatrix or 0")
                out.append(line)
        return cls(out)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)) if self.rows else [])

    def _zip(self, other, op):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return ExactMatrix([[op(x, y) for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self):
        return ExactMatrix([[-x for x in r] for r in self.rows])

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[c * x for x in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.shape[0]:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        zero = Fraction(0)
        out = []
        for r in self.rows:
            line = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                line.append(acc)
            out.append(line)
        return ExactMatrix(out)

    def __pow__(self, k: int) -> "ExactMatrix":
        result = ExactMatrix.identity(self.shape[0])
        for _ in range(k):
            result = result @ self
        return result

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix) or self.shape != other.shape:
            return False
        return all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def nonzero_everywhere(self) -> bool:
        return all(x for r in self.rows for x in r)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix([r[c0:c1] for r in self.rows[r0:r1]])

    def to_float(self):
        import numpy as np
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)

    def to_text(self) -> str:
        return "".join(" ".join(_frac_text(x) if isinstance(x, Fraction) else str(x) for x in r) + "\n"
                       for r in self.rows)

    @classmethod
    def from_text(cls, text: str) -> "ExactMatrix":
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                rows.append([parse_scalar(tok) for tok in line.split()])
            except ValueError as e:
                raise ValueError(f"line {lineno}: {e}") from None
        return cls(rows)

    def __repr__(self):
        return f"ExactMatrix({self.shape[0]}x{self.shape[1]})"


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD = re.compile(rf"({_RAT})\+({_RAT})\*sqrt\(({_RAT})\)")


def parse_scalar(tok: str) -> Scalar:
    m = _QUAD.fullmatch(tok)
    if m:
        return QuadScalar(Fraction(m.group(1)), Fraction(m.group(2)), Fraction(m.group(3)))
    if re.fullmatch(_RAT, tok):
        return Fraction(tok)
    raise ValueError(f"malformed scalar {tok!r}")


# --- rank ------------------------------------------------------------------------

def _bareiss_rank(M: list[list], exact_div) -> int:
    rows = len(M)
    cols = len(M[0]) if M else 0
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        pivot_row = M[r]
        for i in range(r + 1, rows):
            row = M[i]
            f = row[c]
            if f:
                for j in range(c + 1, cols):
                    row[j] = exact_div(p * row[j] - f * pivot_row[j], prev)
            else:
                for j in range(c + 1, cols):
                    row[j] = exact_div(p * row[j], prev)
            row[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def _int_div(x: int, y: int) -> int:
    q, rem = divmod(x, y)
    if rem:
        raise ArithmeticError("fraction-free elimination produced an inexact quotient")
    return q


def rank(M: ExactMatrix) -> int:
    """Exact rank by fraction-free elimination with first-nonzero pivoting."""
    if M.d is None:
        work = []
        for r in M.rows:
            den = lcm(*(x.denominator for x in r)) if r else 1
            work.append([int(x * den) for x in r])
        return _bareiss_rank(work, _int_div)
    return _bareiss_rank([list(r) for r in M.rows], lambda x, y: x / y)


def nullity(M: ExactMatrix) -> int:
    return M.shape[1] - rank(M)


def pattern_graph(M: ExactMatrix) -> Graph:
    """Graph of the off-diagonal nonzero pattern of a symmetric matrix."""
    n, m = M.shape
    if n != m:
        raise ValueError("pattern of a non-square matrix")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            a, b = bool(M[i, j]), bool(M[j, i])
            if a != b:
                raise ValueError(f"pattern not symmetric at ({i}, {j})")
            if a:
                edges.append((i, j))
    return Graph.from_edges(n, edges)


# --- builders --------------------------------------------------------------------

def shift_matrix(n: int) -> ExactMatrix:
    """Permutation matrix of the n-cycle: ones at ``(0, n-1)`` and ``(i, i-1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return ExactMatrix([[Fraction(int(j == (i - 1) % n)) for j in range(n)] for i in range(n)])


def circulant_hankel(first_row: Sequence) -> ExactMatrix:
    n = len(first_row)
    return ExactMatrix([[first_row[(i + j) % n] for j in range(n)] for i in range(n)])


def hankel_first_row(n: int) -> list[Fraction]:
    if n < 3:
        raise ValueError(f"Hankel construction needs n >= 3, got {n}")
    w = Fraction(-2, 3) * (2 ** (n - 2) - 1)
    return [Fraction(2 ** i) for i in range(n - 1)] + [w]


def hankel(n: int) -> tuple[ExactMatrix, Fraction]:
    """Circulant Hankel ``H`` with first row ``(1, 2, ..., 2^(n-2), w)`` and the
    scalar ``lam`` with ``H @ H == lam * I``."""
    a = hankel_first_row(n)
    lam = sum(x * x for x in a)
    return circulant_hankel(a), lam


def orthogonal_hankel(n: int) -> ExactMatrix:
    """``H / sqrt(lam)`` with entries ``(h/lam) * sqrt(lam)`` in Q(sqrt(lam))."""
    H, lam = hankel(n)
    return ExactMatrix([[QuadScalar(0, h / lam, lam) for h in r] for r in H.rows])


def _k_blocks(n: int):
    A = orthogonal_hankel(n)
    P = shift_matrix(n)
    I = ExactMatrix.identity(n)
    return A, P, I


def witness_k4(n: int) -> ExactMatrix:
    """``[[A, I, O, P^T], [I, B, I, O], [O, I, -PA, I], [P, O, I, -PB]]`` with
    ``B = A - PA``; nullity ``2n``."""
    A, P, I = _k_blocks(n)
    PA = P @ A
    B = A - PA
    PB = P @ B
    return ExactMatrix.block([
        [A, I, 0, P.T],
        [I, B, I, 0],
        [0, I, -PA, I],
        [P, 0, I, -PB],
    ])


def elimination_k4(n: int) -> ExactMatrix:
    """Block row operations that zero the first and last block rows of
    :func:`witness_k4`."""
    A, P, I = _k_blocks(n)
    PB = P @ (A - P @ A)
    return ExactMatrix.block([
        [I, -A, -P.T, 0],
        [0, I, 0, 0],
        [0, 0, I, 0],
        [0, -P, PB, I],
    ])


def witness_k6(n: int) -> ExactMatrix:
    A, P, I = _k_blocks(n)
    PA = P @ A
    return ExactMatrix.block([
        [A, I, 0, 0, 0, P.T],
        [I, A, I, 0, 0, 0],
        [0, I, A, I, 0, 0],
        [0, 0, I, PA, I, 0],
        [0, 0, 0, I, PA, I],
        [P, 0, 0, 0, I, PA],
    ])


def elimination_k6(n: int) -> ExactMatrix:
    A, P, I = _k_blocks(n)
    PA = P @ A
    return ExactMatrix.block([
        [I, -A, 0, A, -P.T, 0],
        [0, I, 0, 0, 0, 0],
        [0, 0, I, 0, 0, 0],
        [0, 0, 0, I, 0, 0],
        [0, 0, 0, 0, I, 0],
        [0, -P, PA, 0, -PA, I],
    ])


def _f(s: str) -> Fraction:
    return Fraction(s)


_C913 = """
-1/8 3/4  -1/2  1     0     0     0     1     0
3/4  -2   1/2   0     1     0     0     0     1
-1/2 1/2  -3/4  0     0     1     1     0     0
1    0    0     48/5  -12/5 -24/5 -16/5 0     0
0    1    0     -12/5 6/5   4/5   0     12/5  0
0    0    1     -24/5 4/5   4/5   0     0     -2/5
0    0    1     -16/5 0     0     -2/5  -4/5  -3/5
1    0    0     0     12/5  0     -4/5  24/5  6/5
0    1    0     0     0     -2/5  -3/5  6/5   -3/10
"""


def witness_c913() -> ExactMatrix:
    """The 9x9 rank-4 matrix with the pattern of ``C_9(1,3)``, rows ordered by
    column blocks of three (see :func:`c913_labels`)."""
    return ExactMatrix([[_f(t) for t in line.split()] for line in _C913.strip().splitlines()])


def c913_labels() -> list[int]:
    """``labels[v]`` is the matrix row of circulant vertex ``v`` of ``C_9(1,3)``.

    Row ``3i + k`` is ``x_{k,i}`` of a 3x3 torus with the wrap edges running
    ``x_{k,3} ~ x_{k-1,1}``; that vertex is ``v_{i - 3k mod 9}``.
    """
    labels = [0] * 9
    for i in range(3):
        for k in range(3):
            labels[(i - 3 * k) % 9] = 3 * i + k
    return labels


# --- bipartite circulants --------------------------------------------------------

def biadjacency_exponents(spec: CirculantSpec) -> list[int]:
    """Shift powers in the biadjacency matrix of a connected bipartite ``C_{2n}(S)``.

    Each ``s`` contributes ``(s-1)/2`` and ``n - (s+1)/2``; the two coincide
    when ``s = n``.
    """
    if decompose(spec).copies != 1:
        raise ValueError(f"{spec} is disconnected")
    if not is_bipartite(spec):
        raise ValueError(f"{spec} is not bipartite")
    n = spec.n // 2
    exps = set()
    for s in spec.S:
        exps.add((s - 1) // 2 % n)
        exps.add((n - (s + 1) // 2) % n)
    return sorted(exps)


def biadjacency(spec: CirculantSpec) -> ExactMatrix:
    """0/1 biadjacency of a connected bipartite circulant ``C_{2n}(S)``: row ``i``
    is the odd vertex ``v_{2i+1}``, column ``j`` the even vertex ``v_{2j}``."""
    exps = biadjacency_exponents(spec)
    n = spec.n // 2
    return ExactMatrix([[Fraction(int((i - j) % n in exps)) for j in range(n)] for i in range(n)])


def sequential_normalize(exponents, n: int) -> tuple[int, int, int] | None:
    """Find a unit ``a`` and shift ``b`` mod ``n`` with
    ``{a*i + b mod n : i in exponents} == {0, 1, ..., t}``.

    Tries units in increasing order, then shifts; returns ``(a, b, t)`` or None.
    """
    exps = {e % n for e in exponents}
    if not exps:
        return None
    t = len(exps) - 1
    target = set(range(t + 1))
    for a in units(n) if n > 1 else [1]:
        scaled = {a * e % n for e in exps}
        for b in range(n):
            if {(x + b) % n for x in scaled} == target:
                return a, b, t
    return None
