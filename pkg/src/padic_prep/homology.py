"""Free complexes over Q[x_1..x_n] near the origin: Koszul complexes, reduction
to the residue field, cohomology windows, and support tests for modules.

Complexes are cohomological: ``Q^i`` sits in degree ``i`` and the differential
``d^i: Q^i -> Q^{i+1}`` is a ``rank(i+1) x rank(i)`` matrix of polynomials
acting on column vectors.  Polynomials are dicts ``exponent -> Fraction``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from .errors import PreconditionUnverified

__all__ = [
    "CohomologyProfile",
    "FreeComplex",
    "check_window",
    "cone",
    "direct_sum",
    "fiber_test",
    "koszul_complex",
    "localization_test",
    "random_window_complex",
    "reduce_and_cohomology",
    "ring_cohomology",
    "supp_equals_Supp",
]

Poly = Dict[Tuple[int, ...], Fraction]


# -- polynomial helpers -----------------------------------------------------

def _padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pscale(a: Poly, c) -> Poly:
    return {m: v * c for m, v in a.items()} if c else {}


def _const(c, n: int) -> Poly:
    return {(0,) * n: Fraction(c)} if c else {}


def _var(j: int, n: int) -> Poly:
    return {tuple(1 if k == j else 0 for k in range(n)): Fraction(1)}


def _degrees(a: Poly) -> set:
    return {sum(m) for m in a}


def parse_poly(text: str, n: int) -> Poly:
    syms = sympy.symbols(f"x1:{n + 1}")
    poly = sympy.Poly(sympy.sympify(text, locals={str(s): s for s in syms}), *syms, domain="QQ")
    return {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c}


def format_poly(a: Poly) -> str:
    if not a:
        return "0"
    parts = []
    for m in sorted(a, key=lambda m: (sum(m), m)):
        c = a[m]
        mono = "*".join(f"x{i + 1}**{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(m) if e)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"({c})*{mono}")
    return " + ".join(parts)


def _rank(rows: List[List[Fraction]], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return DomainMatrix([[sympy.QQ(c.numerator, c.denominator) for c in r] for r in rows],
                        (len(rows), ncols), sympy.QQ).rank()


def _matmul(A, B, n):
    # A: r x s, B: s x t (lists of Poly)
    r = len(A)
    t = len(B[0]) if B else 0
    s = len(B)
    out = [[{} for _ in range(t)] for _ in range(r)]
    for i in range(r):
        for j in range(t):
            acc: Poly = {}
            for k in range(s):
                if A[i][k] and B[k][j]:
                    acc = _padd(acc, _pmul(A[i][k], B[k][j]))
            out[i][j] = acc
    return out


def _is_zero_matrix(M) -> bool:
    return all(not e for row in M for e in row)


# -- complexes ----------------------------------------------------------

@dataclass
class FreeComplex:
    """Terms in degrees ``lo .. lo + len(ranks) - 1``."""

    n: int
    lo: int
    ranks: List[int]
    differentials: List[list]  # differentials[k]: Q^{lo+k} -> Q^{lo+k+1}
    twists: Optional[List[List[int]]] = None

    def __post_init__(self):
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        for k, d in enumerate(self.differentials):
            r_src, r_tgt = self.ranks[k], self.ranks[k + 1]
            if len(d) != r_tgt or any(len(row) != r_src for row in d):
                raise ValueError(f"differential {k} has the wrong shape")
        for k in range(len(self.differentials) - 1):
            if not _is_zero_matrix(_matmul(self.differentials[k + 1], self.differentials[k], self.n)):
                raise ValueError(f"d o d != 0 at degree {self.lo + k}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank(self, i: int) -> int:
        return self.ranks[i - self.lo] if self.lo <= i <= self.hi else 0

    def diff(self, i: int):
        """d^i as a matrix, or None if it is a map to or from zero."""
        if self.lo <= i < self.hi:
            return self.differentials[i - self.lo]
        return None

    def shift(self, m: int) -> "FreeComplex":
        """Q[m]^i = Q^{i+m}, with differential multiplied by (-1)^m."""
        sign = -1 if m % 2 else 1
        diffs = [[[_pscale(e, sign) for e in row] for row in d] for d in self.differentials]
        tw = None if self.twists is None else [list(t) for t in self.twists]
        return FreeComplex(self.n, self.lo - m, list(self.ranks), diffs, tw)

    def infer_twists(self) -> Optional[List[List[int]]]:
        """Internal degrees making every differential entry homogeneous, if possible."""
        if self.twists is not None:
            return self.twists
        tw: List[List[Optional[int]]] = [[None] * r for r in self.ranks]
        for k in range(len(self.ranks)):
            for c in range(self.ranks[k]):
                if tw[k][c] is None:
                    tw[k][c] = 0
                    stack = [(k, c)]
                    while stack:
                        kk, cc = stack.pop()
                        w = tw[kk][cc]
                        nbrs = []
                        if kk < len(self.differentials):
                            for r, row in enumerate(self.differentials[kk]):
                                if row[cc]:
                                    nbrs.append((kk + 1, r, row[cc], 1))
                        if kk > 0:
                            for r, e in enumerate(self.differentials[kk - 1][cc]):
                                if e:
                                    nbrs.append((kk - 1, r, e, -1))
                        for k2, c2, e, direction in nbrs:
                            degs = _degrees(e)
                            if len(degs) != 1:
                                return None
                            (dg,) = degs
                            # deg(entry) + w(target) = w(source)
                            target = w - direction * dg
                            if tw[k2][c2] is None:
                                tw[k2][c2] = target
                                stack.append((k2, c2))
                            elif tw[k2][c2] != target:
                                return None
        return tw

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degrees": [self.lo, self.hi],
            "ranks": list(self.ranks),
            "differentials": [[[format_poly(e) for e in row] for row in d] for d in self.differentials],
        }

    @classmethod
    def from_json(cls, d: dict) -> "FreeComplex":
        n = int(d["n"])
        lo, hi = d["degrees"]
        ranks = [int(r) for r in d["ranks"]]
        if hi - lo + 1 != len(ranks):
            raise ValueError("degrees and ranks disagree")
        diffs = [[[parse_poly(e, n) for e in row] for row in m] for m in d["differentials"]]
        return cls(n, int(lo), ranks, diffs)


@dataclass(frozen=True)
class CohomologyProfile:
    dims: Dict[int, int] = field(default_factory=dict)

    def nonzero_degrees(self) -> List[int]:
        return sorted(i for i, v in self.dims.items() if v)

    def __getitem__(self, i: int) -> int:
        return self.dims.get(i, 0)

    def euler(self) -> int:
        return sum((-1) ** (i % 2) * v for i, v in self.dims.items())

    def to_json(self) -> dict:
        return {str(i): v for i, v in sorted(self.dims.items()) if v}


def koszul_complex(n: int) -> FreeComplex:
    """Kos(x_1..x_n): Q^{-k} = exterior power k, differential contracts with x."""
    if n < 1:
        raise ValueError("n >= 1")
    subsets = {k: list(combinations(range(n), k)) for k in range(n + 1)}
    ranks = [comb(n, k) for k in range(n, -1, -1)]
    diffs = []
    for k in range(n, 0, -1):
        src = subsets[k]
        tgt = {S: i for i, S in enumerate(subsets[k - 1])}
        M = [[{} for _ in src] for _ in tgt]
        for c, S in enumerate(src):
            for pos, j in enumerate(S):
                r = tgt[S[:pos] + S[pos + 1:]]
                M[r][c] = _pscale(_var(j, n), (-1) ** pos)
        diffs.append(M)
    twists = [[k] * comb(n, k) for k in range(n, -1, -1)]
    return FreeComplex(n, -n, ranks, diffs, twists)


def _constant_matrix(M, n) -> List[List[Fraction]]:
    z = (0,) * n
    return [[e.get(z, Fraction(0)) for e in row] for row in M]


def reduce_and_cohomology(Q: FreeComplex) -> CohomologyProfile:
    """Cohomology of Q with every variable set to 0."""
    ranks = {}
    for i in range(Q.lo, Q.hi):
        M = Q.diff(i)
        ranks[i] = _rank(_constant_matrix(M, Q.n), Q.rank(i))
    dims = {}
    for i in range(Q.lo, Q.hi + 1):
        h = Q.rank(i) - ranks.get(i, 0) - ranks.get(i - 1, 0)
        if h:
            dims[i] = h
    return CohomologyProfile(dims)


# -- ring-level cohomology of graded complexes --------------------------------

def _monomials(n: int, d: int):
    if d < 0:
        return []
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in _monomials(n - 1, d - first):
            out.append((first,) + rest)
    return out


def _graded_piece_rank(M, src_tw, tgt_tw, e, n) -> Tuple[int, int]:
    """(dim of source in internal degree e, rank of M there)."""
    cols = [(c, m) for c, w in enumerate(src_tw) for m in _monomials(n, e - w)]
    rowidx = {}
    for r, w in enumerate(tgt_tw):
        for m in _monomials(n, e - w):
            rowidx[(r, m)] = len(rowidx)
    if M is None or not cols or not rowidx:
        return len(cols), 0
    mat = [[Fraction(0)] * len(cols) for _ in range(len(rowidx))]
    for j, (c, m) in enumerate(cols):
        for r in range(len(tgt_tw)):
            for em, ec in M[r][c].items():
                key = (r, tuple(a + b for a, b in zip(em, m)))
                if key in rowidx:
                    mat[rowidx[key]][j] += ec
    return len(cols), _rank(mat, len(cols))


def ring_cohomology(Q: FreeComplex, tail: Optional[int] = None) -> Tuple[CohomologyProfile, bool]:
    """Total dimension of each H^i(Q) over the base field and a finite-length flag.

    Q must be graded (homogeneous differentials after suitable twists).  If the
    cohomology has finite length it equals the local cohomology of Q, whose
    terms vanish above ``max twist - n``; so pieces are summed up to that
    degree.  The flag checks that the next ``tail`` pieces (default: largest
    entry degree + n) vanish as well, which a module of positive dimension
    cannot do once its Hilbert function has become polynomial.
    """
    tw = Q.infer_twists()
    if tw is None:
        raise PreconditionUnverified("differentials are not homogeneous for any choice of twists")
    n = Q.n
    all_tw = [w for t in tw for w in t]
    if not all_tw:
        return CohomologyProfile({}), True
    entry_deg = max([max(_degrees(e)) for d in Q.differentials for row in d for e in row if e] + [1])
    if tail is None:
        tail = entry_deg + n
    e_lo = min(all_tw)
    e_top = max(all_tw) - n
    dims: Dict[int, int] = {}
    finite = True
    for e in range(e_lo, e_top + tail + 1):
        rk = {}
        dim = {}
        for k in range(len(Q.ranks)):
            M = Q.differentials[k] if k < len(Q.differentials) else None
            tgt = tw[k + 1] if k + 1 < len(tw) else []
            dim[k], rk[k] = _graded_piece_rank(M, tw[k], tgt, e, n)
        for k in range(len(Q.ranks)):
            h = dim[k] - rk[k] - (rk[k - 1] if k > 0 else 0)
            if h:
                if e > e_top:
                    finite = False
                else:
                    i = Q.lo + k
                    dims[i] = dims.get(i, 0) + h
        if not finite:
            break
    return CohomologyProfile(dims), finite


def check_window(Q: FreeComplex) -> dict:
    """Reduced cohomology is nonzero at a-n and b and vanishes outside [a-n, b]."""
    prof, finite = ring_cohomology(Q)
    if not finite:
        raise PreconditionUnverified("cohomology is not of finite length")
    nz = prof.nonzero_degrees()
    if not nz:
        raise PreconditionUnverified("complex is acyclic")
    a, b = nz[0], nz[-1]
    red = reduce_and_cohomology(Q)
    rnz = red.nonzero_degrees()
    ok = bool(rnz) and red[a - Q.n] > 0 and red[b] > 0 and rnz[0] >= a - Q.n and rnz[-1] <= b
    return {"a": a, "b": b, "n": Q.n, "window_ok": ok,
            "ring_cohomology": prof.to_json(), "reduced_cohomology": red.to_json()}


# -- constructions --------------------------------------------------------

def direct_sum(A: FreeComplex, B: FreeComplex) -> FreeComplex:
    if A.n != B.n:
        raise ValueError("complexes over different rings")
    lo, hi = min(A.lo, B.lo), max(A.hi, B.hi)
    ranks = [A.rank(i) + B.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        ra_s, rb_s, ra_t, rb_t = A.rank(i), B.rank(i), A.rank(i + 1), B.rank(i + 1)
        M = [[{} for _ in range(ra_s + rb_s)] for _ in range(ra_t + rb_t)]
        dA, dB = A.diff(i), B.diff(i)
        for r in range(ra_t):
            for c in range(ra_s):
                M[r][c] = dA[r][c]
        for r in range(rb_t):
            for c in range(rb_s):
                M[ra_t + r][ra_s + c] = dB[r][c]
        diffs.append(M)
    tw = None
    tA, tB = A.infer_twists(), B.infer_twists()
    if tA is not None and tB is not None:
        tw = []
        for i in range(lo, hi + 1):
            ta = tA[i - A.lo] if A.lo <= i <= A.hi else []
            tb = tB[i - B.lo] if B.lo <= i <= B.hi else []
            tw.append(list(ta) + list(tb))
    return FreeComplex(A.n, lo, ranks, diffs, tw)


def cone(A: FreeComplex, B: FreeComplex, f: Dict[int, list]) -> FreeComplex:
    """Cone of a chain map f: A -> B (f[i]: A^i -> B^i).

    C^i = A^{i+1} + B^i with d(a, b) = (-d_A a, f a + d_B b).
    """
    n = A.n
    for i in range(min(A.lo, B.lo) - 1, max(A.hi, B.hi) + 1):
        # check d_B f = f d_A
        fi, fj = f.get(i), f.get(i + 1)
        dA, dB = A.diff(i), B.diff(i)
        lhs = _matmul(dB, fi, n) if dB is not None and fi is not None else None
        rhs = _matmul(fj, dA, n) if fj is not None and dA is not None else None
        if lhs is not None and not _is_zero_matrix(lhs) and rhs is None:
            raise ValueError(f"f is not a chain map at degree {i}")
        if rhs is not None and not _is_zero_matrix(rhs) and lhs is None:
            raise ValueError(f"f is not a chain map at degree {i}")
        if lhs is not None and rhs is not None:
            diff = [[_padd(x, _pscale(y, -1)) for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
            if not _is_zero_matrix(diff):
                raise ValueError(f"f is not a chain map at degree {i}")
    lo = min(A.lo - 1, B.lo)
    hi = max(A.hi - 1, B.hi)
    ranks = [A.rank(i + 1) + B.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        sa, sb = A.rank(i + 1), B.rank(i)
        ta, tb = A.rank(i + 2), B.rank(i + 1)
        M = [[{} for _ in range(sa + sb)] for _ in range(ta + tb)]
        dA, dB, fi = A.diff(i + 1), B.diff(i), f.get(i + 1)
        if dA is not None:
            for r in range(ta):
                for c in range(sa):
                    M[r][c] = _pscale(dA[r][c], -1)
        if fi is not None:
            for r in range(tb):
                for c in range(sa):
                    M[ta + r][c] = fi[r][c]
        if dB is not None:
            for r in range(tb):
                for c in range(sb):
                    M[ta + r][sa + c] = dB[r][c]
        diffs.append(M)
    return FreeComplex(n, lo, ranks, diffs)


def _scalar_map(C: FreeComplex, g: Poly) -> Dict[int, list]:
    """Multiplication by g on every term (a chain map C -> C)."""
    out = {}
    for i in range(C.lo, C.hi + 1):
        r = C.rank(i)
        out[i] = [[dict(g) if a == b else {} for b in range(r)] for a in range(r)]
    return out


def _random_form(rng: random.Random, n: int, deg: int) -> Poly:
    out: Poly = {}
    for m in _monomials(n, deg):
        c = rng.randint(-3, 3)
        if c:
            out[m] = Fraction(c)
    return out


def random_window_complex(rng: random.Random, n: int) -> FreeComplex:
    """Sums of shifted Koszul complexes and cones of g * id with g homogeneous in m."""
    K = koszul_complex(n)
    pieces = []
    for _ in range(rng.randint(1, 3)):
        shift = rng.randint(-2, 2)
        P = K.shift(shift)
        if rng.random() < 0.6:
            g = _random_form(rng, n, rng.randint(1, 2))
            P = cone(P, P, _scalar_map(P, g))
        pieces.append(P)
    C = pieces[0]
    for P in pieces[1:]:
        C = direct_sum(C, P)
    return C


# -- supports -----------------------------------------------------------

def _eval(a: Poly, point) -> Fraction:
    total = Fraction(0)
    for m, c in a.items():
        term = c
        for x, e in zip(point, m):
            if e:
                term *= Fraction(x) ** e
        total += term
    return total


def _eval_matrix(M, point) -> List[List[Fraction]]:
    return [[_eval(e, point) for e in row] for row in M]


def _to_expr(e: Poly, syms):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([s**k for s, k in zip(syms, m)])
                for m, c in e.items()), sympy.Integer(0))


def localization_test(P: List[List[Poly]], rows: int, point) -> bool:
    """coker(P) localized at the point is nonzero iff every rows x rows minor vanishes there.

    The minors generate the 0-th Fitting ideal, whose zero set is the support.
    """
    cols = len(P[0]) if P else 0
    if rows == 0:
        return False
    if cols < rows:
        return True
    n = len(point)
    syms = sympy.symbols(f"x1:{n + 1}")
    Ms = sympy.Matrix([[_to_expr(e, syms) for e in row] for row in P])
    sub = {s: sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for s, x in zip(syms, point)}
    for cs in combinations(range(cols), rows):
        minor = Ms.extract(list(range(rows)), list(cs)).det()
        if sympy.expand(minor).subs(sub) != 0:
            return False
    return True


def _resolution(P: List[List[Poly]], rows: int, n: int, length: int):
    """Matrices F_1 -> F_0, F_2 -> F_1, ... of a free resolution of coker(P).

    Returns (matrices, complete) where complete means the last map is injective.
    """
    syms = sympy.symbols(f"x1:{n + 1}")
    R = sympy.QQ.old_poly_ring(*syms)

    def to_expr(e: Poly):
        return _to_expr(e, syms)

    def to_poly(x) -> Poly:
        x = sympy.sympify(R.to_sympy(x) if not isinstance(x, sympy.Basic) else x)
        p = sympy.Poly(x, *syms, domain="QQ")
        return {m: Fraction(int(c.p), int(c.q)) for m, c in p.terms() if c}

    mats = [P]
    cur_rows = rows
    cur = P
    for _ in range(length):
        ncols = len(cur[0]) if cur else 0
        if ncols == 0 or cur_rows == 0:
            return mats, True
        F = R.free_module(cur_rows)
        S = F.submodule(*[[to_expr(cur[i][j]) for i in range(cur_rows)] for j in range(ncols)])
        gens = [list(v) for v in S.syzygy_module().gens]
        gens = [g for g in gens if any(x != 0 for x in g)]
        if not gens:
            return mats, True
        nxt = [[to_poly(gens[j][i]) for j in range(len(gens))] for i in range(ncols)]
        mats.append(nxt)
        cur, cur_rows = nxt, ncols
    return mats, False


def fiber_test(mats: Sequence, rows: int, point, complete: bool = False) -> bool:
    """k(p) (x)^L coker is nonzero: some H_i of the resolution evaluated at p is nonzero.

    H_0 .. H_{len(mats)-1} are always exact Tor groups; the last term's H is
    read only when the resolution is complete.
    """
    ranks_free = [rows] + [len(M[0]) if M else 0 for M in mats]
    rk = [_rank(_eval_matrix(M, point), len(M[0])) if M and M[0] else 0 for M in mats] + [0]
    for i in range(len(mats) + (1 if complete else 0)):
        # H_i = ker(F_i -> F_{i-1}) / im(F_{i+1} -> F_i)
        ker = ranks_free[i] - (rk[i - 1] if i > 0 else 0)
        h = ker - rk[i]
        if h:
            return True
    return False


def supp_equals_Supp(P: List[List[Poly]], rows: int, points: Sequence) -> Tuple[bool, List[Tuple[bool, bool]]]:
    """Compare the two support tests at each point; returns (all agree, per-point pairs)."""
    n = len(points[0]) if points else 2
    mats, complete = _resolution(P, rows, n, n + 1) if rows and P and P[0] else ([], True)
    pairs = []
    for pt in points:
        loc = localization_test(P, rows, pt)
        if rows == 0:
            fib = False
        elif not P or not P[0]:
            fib = True
        else:
            fib = fiber_test(mats, rows, pt, complete)
        pairs.append((loc, fib))
    return all(a == b for a, b in pairs), pairs
