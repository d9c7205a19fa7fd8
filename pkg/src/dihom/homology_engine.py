"""Exact integer linear algebra for chain complexes.

Dense matrices are lists of rows of Python ints.  Sparse vectors are
dicts ``index -> nonzero int``; a sparse matrix is a list of such column
dicts together with a row count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import NotAChainMap

# ------------------------------------------------------------------ dense SNF


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(cols)] for row in A]


def determinant(M):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sgn, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1]


def smith_normal_form(M):
    """Return (U, D, V) with U*M*V = D in Smith form and U, V unimodular.

    Pivot: the nonzero entry of least absolute value in the active block,
    ties broken in row-major order.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [list(map(int, r)) for r in M]
    U = identity(m)
    V = identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in D:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, D[i][t] // p)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, D[t][j] // p)
                    if D[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility: fold a non-multiple into the pivot row
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            D[t] = [a + b for a, b in zip(D[t], D[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def is_smith_form(D) -> bool:
    diag = []
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            if i != j and v:
                return False
        if i < len(row):
            diag.append(row[i])
    nz = [d for d in diag if d]
    if any(d < 0 for d in nz) or any(d == 0 for d in diag[: len(nz)]):
        return False
    return all(b % a == 0 for a, b in zip(nz, nz[1:]))


def dense_invariant_factors(M) -> list:
    if not M or not M[0]:
        return []
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


# ------------------------------------------------------------- sparse tools


def sparse_invariant_factors(columns, nrows=None) -> list:
    """Nonzero invariant factors of the matrix given by sparse columns.

    Unit pivots are eliminated sparsely; what is left goes to dense SNF.
    """
    cols = {}
    rows = {}
    for c, col in enumerate(columns):
        col = {r: v for r, v in col.items() if v}
        if col:
            cols[c] = col
            for r, v in col.items():
                rows.setdefault(r, {})[c] = v
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda k: len(cols[k])):
            col = cols.get(c)
            if not col:
                continue
            cand = [r for r, v in col.items() if v in (1, -1)]
            if not cand:
                continue
            r = min(cand, key=lambda k: (len(rows[k]), k))
            v = col[r]
            prow = dict(rows[r])
            for r2, f in list(col.items()):
                if r2 == r:
                    continue
                q = f * v
                row2 = rows[r2]
                for c2, a in prow.items():
                    nv = row2.get(c2, 0) - q * a
                    if nv:
                        row2[c2] = nv
                        cols[c2][r2] = nv
                    else:
                        row2.pop(c2, None)
                        cols[c2].pop(r2, None)
                if not row2:
                    del rows[r2]
            for c2 in prow:
                cols[c2].pop(r, None)
                if not cols[c2]:
                    del cols[c2]
            del rows[r]
            cols.pop(c, None)
            units += 1
            progress = True
    rest_rows = sorted(rows)
    rest_cols = sorted(cols)
    rest = []
    if rest_rows and rest_cols:
        ri = {r: i for i, r in enumerate(rest_rows)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for j, c in enumerate(rest_cols):
            for r, v in cols[c].items():
                dense[ri[r]][j] = v
        rest = dense_invariant_factors(dense)
    return [1] * units + rest


def _low(v):
    return max(v)


def _axpy(y, q, x):
    """y -= q * x in place (sparse)."""
    for k, a in x.items():
        nv = y.get(k, 0) - q * a
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class Lattice:
    """The subgroup spanned by integer vectors, kept in column echelon form.

    Every echelon vector has a distinct lowest index.  With ``track`` the
    echelon vectors and the relations among generators are also expressed
    as integer combinations of the generators.
    """

    def __init__(self, generators=(), track=False):
        self.track = track
        self.pivots = {}  # low index -> (vector, transform)
        self.relations = []  # transforms whose image is zero
        self.count = 0
        for g in generators:
            self.add(g)

    @property
    def rank(self):
        return len(self.pivots)

    def add(self, vec):
        v = {k: a for k, a in vec.items() if a}
        t = {self.count: 1} if self.track else None
        self.count += 1
        while v:
            r = _low(v)
            if r not in self.pivots:
                self.pivots[r] = (v, t)
                return True
            p, pt = self.pivots[r]
            a, b = p[r], v[r]
            if b % a == 0:
                q = b // a
                _axpy(v, q, p)
                if self.track:
                    _axpy(t, q, pt)
                continue
            g, x, y = _ext_gcd(a, b)
            # new pivot x*p + y*v has entry g at r; remainder (b/g)p - (a/g)v vanishes at r
            newp = {}
            _axpy(newp, -x, p)
            _axpy(newp, -y, v)
            rem = {}
            _axpy(rem, -(b // g), p)
            _axpy(rem, a // g, v)
            if self.track:
                newt = {}
                _axpy(newt, -x, pt)
                _axpy(newt, -y, t)
                remt = {}
                _axpy(remt, -(b // g), pt)
                _axpy(remt, a // g, t)
                self.pivots[r] = (newp, newt)
                t = remt
            else:
                self.pivots[r] = (newp, None)
            v = rem
        if self.track:
            self.relations.append({k: a for k, a in t.items() if a})
        return False

    def solve(self, vec):
        """Integer coefficients over the generators giving vec, or None.

        Without tracking, returns coefficients over the echelon vectors
        keyed by their lowest index.
        """
        v = {k: a for k, a in vec.items() if a}
        coeff = {}
        while v:
            r = _low(v)
            if r not in self.pivots:
                return None
            p, pt = self.pivots[r]
            if v[r] % p[r]:
                return None
            q = v[r] // p[r]
            _axpy(v, q, p)
            if self.track:
                _axpy(coeff, -q, pt)
            else:
                coeff[r] = coeff.get(r, 0) + q
        return coeff

    def contains(self, vec):
        return self.solve(vec) is not None

    def basis(self):
        return [self.pivots[r][0] for r in sorted(self.pivots)]


class RationalSpan:
    """Incremental rational independence test on sparse integer vectors."""

    def __init__(self):
        self.pivots = {}

    def reduce(self, vec):
        v = {k: a for k, a in vec.items() if a}
        while v:
            r = _low(v)
            if r not in self.pivots:
                return v
            p = self.pivots[r]
            a, b = p[r], v[r]
            g = gcd(a, b)
            v = {k: (a // g) * v.get(k, 0) - (b // g) * p.get(k, 0) for k in set(v) | set(p)}
            v = {k: c for k, c in v.items() if c}
            if v:
                h = 0
                for c in v.values():
                    h = gcd(h, c)
                v = {k: c // h for k, c in v.items()}
        return v

    def add(self, vec) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        self.pivots[_low(v)] = v
        return True


def rank_of(columns) -> int:
    span = RationalSpan()
    return sum(1 for c in columns if span.add(c))


def solve_rational(columns, vec):
    """Rational coefficients x with sum x_i columns_i = vec, or None."""
    # echelon with rational transforms
    piv = {}
    for i, c in enumerate(columns):
        v = {k: Fraction(a) for k, a in c.items() if a}
        t = {i: Fraction(1)}
        while v:
            r = _low(v)
            if r not in piv:
                piv[r] = (v, t)
                break
            p, pt = piv[r]
            q = v[r] / p[r]
            v = {k: v.get(k, 0) - q * p.get(k, 0) for k in set(v) | set(p)}
            v = {k: a for k, a in v.items() if a}
            t = {k: t.get(k, 0) - q * pt.get(k, 0) for k in set(t) | set(pt)}
    v = {k: Fraction(a) for k, a in vec.items() if a}
    x = {}
    while v:
        r = _low(v)
        if r not in piv:
            return None
        p, pt = piv[r]
        q = v[r] / p[r]
        v = {k: v.get(k, 0) - q * p.get(k, 0) for k in set(v) | set(p)}
        v = {k: a for k, a in v.items() if a}
        for k, a in pt.items():
            x[k] = x.get(k, 0) + q * a
    return {k: a for k, a in x.items() if a}


# --------------------------------------------------------- chain complexes


@dataclass
class HomologyGroup:
    rank: int
    torsion: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)  # cycles as {label: coeff}

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


class ChainComplex:
    """Graded bases with sparse boundary matrices.

    ``boundaries[d]`` maps degree d to degree d-1: a list (one per basis
    element of degree d) of dicts ``row index -> coefficient``.
    """

    def __init__(self, bases, boundaries, check=True):
        self.bases = [list(b) for b in bases]
        self.index = [{lab: i for i, lab in enumerate(b)} for b in self.bases]
        self.boundaries = {d: [dict(c) for c in cols] for d, cols in boundaries.items()}
        for d in range(1, len(self.bases)):
            self.boundaries.setdefault(d, [{} for _ in self.bases[d]])
            if len(self.boundaries[d]) != len(self.bases[d]):
                raise ValueError(f"boundary in degree {d} has the wrong number of columns")
        if check:
            self.check()

    @property
    def top(self):
        return len(self.bases) - 1

    def boundary(self, d):
        if d <= 0 or d > self.top:
            return [{} for _ in self.basis(d)]
        return self.boundaries[d]

    def basis(self, d):
        return self.bases[d] if 0 <= d <= self.top else []

    def apply(self, d, chain):
        """Boundary of a chain given as {index: coeff} in degree d."""
        out = {}
        cols = self.boundary(d)
        for j, a in chain.items():
            _axpy(out, -a, cols[j])
        return out

    def check(self):
        for d in range(2, self.top + 1):
            for j, col in enumerate(self.boundaries[d]):
                if self.apply(d - 1, col):
                    raise NotAChainMap(f"boundary squared is nonzero on {self.bases[d][j]!r}")

    def label_chain(self, d, chain):
        return {self.bases[d][i]: a for i, a in sorted(chain.items())}

    def index_chain(self, d, chain):
        idx = self.index[d]
        return {idx[k]: a for k, a in chain.items() if a}


def kernel_basis(columns) -> list:
    lat = Lattice(columns, track=True)
    return lat.relations


def homology(C: ChainComplex, d: int, witnesses: bool = True) -> HomologyGroup:
    n_d = len(C.basis(d))
    rank_d = 0 if d == 0 else rank_of(C.boundary(d))
    up = C.boundary(d + 1) if d + 1 <= C.top else []
    facs = sparse_invariant_factors(up, n_d)
    rank = n_d - rank_d - len(facs)
    torsion = [f for f in facs if f > 1]
    wit = []
    if witnesses and rank:
        wit = _free_witnesses(C.boundary(d) if d else [{} for _ in range(n_d)], up, n_d, rank)
        wit = [C.label_chain(d, w) for w in wit]
    return HomologyGroup(rank, torsion, wit)


def _cycles(down, n):
    if all(not c for c in down):
        return [{i: 1} for i in range(n)]
    return kernel_basis(down)


def _free_witnesses(down, up_generators, n, rank):
    span = RationalSpan()
    for c in up_generators:
        span.add(c)
    out = []
    for z in _cycles(down, n):
        if len(out) == rank:
            break
        if span.add(z):
            out.append(z)
    return out


# ------------------------------------------------------------- chain maps


class ChainMap:
    """Per-degree sparse matrices from ``source`` to ``target``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict, check_degrees=None):
        self.source = source
        self.target = target
        self.maps = maps
        degrees = check_degrees if check_degrees is not None else sorted(maps)
        for d in degrees:
            self.check(d)

    def image(self, d, chain):
        out = {}
        cols = self.maps.get(d)
        if cols is None:
            raise NotAChainMap(f"chain map undefined in degree {d}")
        for j, a in chain.items():
            _axpy(out, -a, cols[j])
        return out

    def check(self, d):
        if d == 0 or d - 1 not in self.maps:
            return
        for j in range(len(self.source.basis(d))):
            lhs = self.target.apply(d, self.maps[d][j])
            rhs = self.image(d - 1, self.source.apply(d, {j: 1}))
            diff = dict(lhs)
            _axpy(diff, 1, rhs)
            if diff:
                raise NotAChainMap(f"square fails to commute at {self.source.bases[d][j]!r} in degree {d}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        maps = {}
        for d in self.maps:
            if d in other.maps:
                maps[d] = [self.image(d, col) for col in other.maps[d]]
        return ChainMap(other.source, self.target, maps, check_degrees=[])


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {d: [{i: 1} for i in range(len(C.basis(d)))] for d in range(C.top + 1)})


def induced_map(f: ChainMap, d: int):
    """Rational matrix of f_* between the witness bases of H_d.

    Columns follow the source witnesses, rows the target witnesses; the
    free parts only (torsion classes are dropped).
    """
    f.check(d)
    if d + 1 in f.maps:
        f.check(d + 1)
    HA = homology(f.source, d)
    HB = homology(f.target, d)
    up = f.target.boundary(d + 1) if d + 1 <= f.target.top else []
    wb = [f.target.index_chain(d, w) for w in HB.witnesses]
    cols = list(up) + wb
    out = [[Fraction(0)] * len(HA.witnesses) for _ in wb]
    for j, w in enumerate(HA.witnesses):
        img = f.image(d, f.source.index_chain(d, w))
        x = solve_rational(cols, img)
        if x is None:
            raise NotAChainMap("image of a cycle is not a cycle")
        for i in range(len(wb)):
            out[i][j] = x.get(len(up) + i, Fraction(0))
    return out


def cokernel_on_homology(f: ChainMap, d: int) -> HomologyGroup:
    f.check(d)
    A, B = f.source, f.target
    n = len(B.basis(d))
    up = list(B.boundary(d + 1)) if d + 1 <= B.top else []
    zA = _cycles(A.boundary(d) if d else [{} for _ in A.basis(d)], len(A.basis(d)))
    gens = up + [f.image(d, z) for z in zA]
    zB = _cycles(B.boundary(d) if d else [{} for _ in range(n)], n)
    facs = sparse_invariant_factors(gens, n)
    rank = len(zB) - len(facs)
    span = RationalSpan()
    for g in gens:
        span.add(g)
    wit = []
    for z in zB:
        if len(wit) == rank:
            break
        if span.add(z):
            wit.append(B.label_chain(d, z))
    return HomologyGroup(rank, [x for x in facs if x > 1], wit)


def induced_maps_agree(f: ChainMap, g: ChainMap, d: int) -> bool:
    """True when f and g induce the same map on H_d (exact test)."""
    A, B = f.source, f.target
    up = list(B.boundary(d + 1)) if d + 1 <= B.top else []
    lat = Lattice(up)
    for z in _cycles(A.boundary(d) if d else [{} for _ in A.basis(d)], len(A.basis(d))):
        diff = f.image(d, z)
        _axpy(diff, 1, g.image(d, z))
        if diff and not lat.contains(diff):
            return False
    return True


def solve_integer(columns, vec):
    """Integer x with sum x_i columns_i = vec, or None."""
    lat = Lattice(columns, track=True)
    return lat.solve(vec)
