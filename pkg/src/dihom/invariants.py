"""Globular and corner homology, Hurewicz maps, functor homotopies and
the deadlock report built from them."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import nerve as N
from .errors import DihomError, NotAChainMap, NotExhaustive, NotNonContracting
from .free_cat import Caps, FreeTwoCategory, Vertex, bilocalize, morphism_key
from .homology_engine import (ChainComplex, ChainMap, HomologyGroup, Lattice, cokernel_on_homology,
                              homology, induced_maps_agree)

MAX_DEGREE = 2


def _add(col, i, a):
    v = col.get(i, 0) + a
    if v:
        col[i] = v
    else:
        col.pop(i, None)


def same_lattice(a, b) -> bool:
    """Do two lists of sparse integer vectors span the same subgroup?"""
    la, lb = Lattice(a), Lattice(b)
    return all(lb.contains(v) for v in a) and all(la.contains(v) for v in b)


# ------------------------------------------------------------ globular


class GlobularComplex:
    """C^gl up to degree ``top``.

    Degree 0 holds two tagged copies of the objects.  With ``reduced_top``
    the top degree uses the category's image generators (whiskered
    generators for a free 2-category), which span the same boundary
    lattice as all top-dimensional morphisms.
    """

    def __init__(self, C, top: int, caps: Caps | None = None, reduced_top: bool = True):
        self.category = C
        self.caps = caps or Caps()
        self.exhaustive = True
        objs = C.morphisms(0, self.caps)[0]
        bases = [[("s", v) for v in objs] + [("t", v) for v in objs]]
        for k in range(1, top + 1):
            if k == top and reduced_top:
                xs = list(C.image_generators(k))
            else:
                xs, ex = C.morphisms(k, self.caps)
                self.exhaustive &= ex
            bases.append(list(xs))
        idx = [{lab: i for i, lab in enumerate(b)} for b in bases]
        bd = {}
        for k in range(1, top + 1):
            cols = []
            for x in bases[k]:
                col = {}
                if k == 1:
                    _add(col, idx[0][("s", C.source(x, 0))], 1)
                    _add(col, idx[0][("t", C.target(x, 0))], 1)
                else:
                    for y, sgn in ((C.source(x, k - 1), 1), (C.target(x, k - 1), -1)):
                        if C.dim(y) == k - 1:
                            _add(col, idx[k - 1][y], sgn)
                cols.append(col)
            bd[k] = cols
        self.chain = ChainComplex(bases, bd)


def globular_complex(C, top, caps=None, reduced_top=True):
    return GlobularComplex(C, top, caps, reduced_top)


def _require_degree(d):
    if not 0 <= d <= MAX_DEGREE:
        raise ValueError(f"degree must lie in 0..{MAX_DEGREE}")


def globular_homology(C, d: int, caps: Caps | None = None) -> HomologyGroup:
    _require_degree(d)
    G = GlobularComplex(C, d + 1, caps)
    if not G.exhaustive:
        raise NotExhaustive(f"morphism enumeration for degree {d} hit its caps")
    return homology(G.chain, d)


# ------------------------------------------------------------ corner


def is_degenerate(x: N.SingularCube, alpha: str) -> bool:
    """x = Gamma_j^alpha(y) for some j < n (a degenerate corner simplex)."""
    for j in range(1, x.n):
        if N.connection(N.face(x, j, alpha), j, alpha) == x:
            return True
    return False


def _cube_chain_complex(levels, alpha, normalized):
    bases = [list(xs) for xs in levels]
    if normalized:
        bases = [[x for x in xs if not is_degenerate(x, alpha)] for xs in bases]
    idx = [{x: i for i, x in enumerate(b)} for b in bases]
    bd = {}
    for k in range(1, len(bases)):
        cols = []
        for x in bases[k]:
            col = {}
            for i in range(1, k + 1):
                y = N.face(x, i, alpha)
                if normalized and is_degenerate(y, alpha):
                    continue
                j = idx[k - 1].get(y)
                if j is None:
                    raise DihomError(f"face {i}{alpha} of a degree {k} generator is missing from degree {k - 1}")
                _add(col, j, 1 if i % 2 else -1)
            cols.append(col)
        bd[k] = cols
    return ChainComplex(bases, bd)


class CornerComplex:
    """Normalized alpha-corner chains up to degree ``top`` (at most 3).

    A reduced top degree 2 keeps only corner squares whose top cell is a
    path or a generator image; they have the same boundary lattice.
    """

    def __init__(self, C, alpha: str, top: int, caps: Caps | None = None, reduced_top: bool = True,
                 normalized: bool = True):
        if alpha not in "-+":
            raise ValueError("alpha must be '-' or '+'")
        self.category = C
        self.alpha = alpha
        self.caps = caps or Caps()
        self.exhaustive = True
        levels = []
        for k in range(top + 1):
            g = N.enumerate_corner_generators(C, alpha, k, self.caps,
                                              reduced=(k == 2 and k == top and reduced_top))
            self.exhaustive &= g.exhaustive
            levels.append(N.sorted_cubes(g.cubes))
        self.chain = _cube_chain_complex(levels, alpha, normalized)


def full_nerve_complex(C, alpha, top, caps=None):
    """All cubes (corner or not, degenerate or not) with the alpha boundary."""
    levels = []
    for k in range(top + 1):
        xs, _ = N.cubes(C, k, caps)
        levels.append(N.sorted_cubes(xs))
    return _cube_chain_complex(levels, alpha, normalized=False)


def corner_homology(C, alpha: str, d: int, caps: Caps | None = None) -> HomologyGroup:
    _require_degree(d)
    K = CornerComplex(C, alpha, d + 1, caps)
    if not K.exhaustive:
        raise NotExhaustive(f"corner enumeration for degree {d} hit its caps")
    return homology(K.chain, d)


def retraction_defect(x: N.SingularCube, alpha: str) -> dict:
    """(d e_1 + e_1 d - id)(x) as a formal chain; empty when the identity holds."""
    out = {}

    def bd(y):
        out_ = {}
        for i in range(1, y.n + 1):
            _add(out_, N.face(y, i, alpha), 1 if i % 2 else -1)
        return out_

    def acc(chain, sgn):
        for y, a in chain.items():
            _add(out, y, sgn * a)

    e = N.degeneracy(x, 1)
    acc(bd(e), 1)
    if x.n:
        for y, a in bd(x).items():
            _add(out, N.degeneracy(y, 1), a)
    _add(out, x, -1)
    return out


# ------------------------------------------------------------ Hurewicz


def fold_signed(u, n, alpha, C):
    """(sign, cube) for h_n^alpha; the positive fold flips sign in even degree."""
    if alpha == "-":
        return 1, N.fold_minus(u, n, C)
    return (1 if n % 2 else -1), N.fold_plus(u, n, C)


@dataclass
class Hurewicz:
    alpha: str
    source: GlobularComplex
    target: CornerComplex
    map: ChainMap


def hurewicz_map(C, alpha: str, d: int, caps: Caps | None = None, upto: int | None = None) -> Hurewicz:
    """h^alpha in degrees 0..d, verified against both boundaries.

    Both complexes are built up to degree ``upto`` (default d + 1, which
    is what homology in degree d needs).
    """
    _require_degree(d)
    top = d + 1 if upto is None else upto
    G = GlobularComplex(C, top, caps, reduced_top=top > d)
    K = CornerComplex(C, alpha, top, caps, reduced_top=top > d)
    tgt = K.chain
    maps = {}
    for k in range(d + 1):
        cols = []
        for lab in G.chain.basis(k):
            col = {}
            if k == 0:
                tag, v = lab
                if (tag == "s") == (alpha == "-"):
                    col[tgt.index[0][N.constant(v)]] = 1
            else:
                sgn, cube = (1, N.fold1(lab, C)) if k == 1 else fold_signed(lab, k, alpha, C)
                if not is_degenerate(cube, alpha):
                    j = tgt.index[k].get(cube)
                    if j is None:
                        raise NotAChainMap(f"folded cube of {lab} is not a corner generator")
                    col[j] = sgn
            cols.append(col)
        maps[k] = cols
    return Hurewicz(alpha, G, K, ChainMap(G.chain, tgt, maps))


def hurewicz_cokernel(C, alpha, d, caps=None) -> HomologyGroup:
    return cokernel_on_homology(hurewicz_map(C, alpha, d, caps).map, d)


# ------------------------------------------------------------ functors


def functor_gl_map(f, d, caps=None):
    """C^gl(f) in degrees 0..d; morphisms whose dimension drops map to 0."""
    A = GlobularComplex(f.domain, d + 1, caps)
    B = GlobularComplex(f.codomain, d + 1, caps)
    maps = {}
    D = f.codomain
    for k in range(d + 1):
        cols = []
        for lab in A.chain.basis(k):
            col = {}
            if k == 0:
                tag, v = lab
                col[B.chain.index[0][(tag, f(v))]] = 1
            else:
                y = f(lab)
                if D.dim(y) == k:
                    col[B.chain.index[k][y]] = 1
            cols.append(col)
        maps[k] = cols
    return ChainMap(A.chain, B.chain, maps)


def apply_to_cube(f, x: N.SingularCube) -> N.SingularCube:
    return N.SingularCube(x.n, tuple(f(v) for v in x.values))


def functor_corner_map(f, alpha, d, caps=None):
    """Post-composition with f on normalized corner chains, degrees 0..d."""
    A = CornerComplex(f.domain, alpha, d + 1, caps)
    B = CornerComplex(f.codomain, alpha, d + 1, caps)
    maps = {}
    for k in range(d + 1):
        cols = []
        for x in A.chain.basis(k):
            y = apply_to_cube(f, x)
            col = {}
            if not is_degenerate(y, alpha):
                col[B.chain.index[k][y]] = 1
            cols.append(col)
        maps[k] = cols
    return ChainMap(A.chain, B.chain, maps)


@dataclass
class HomotopyResult:
    homotopic: bool
    h: dict = field(default_factory=dict)  # {(x, y): coefficient}: y occurs in h_n(x)
    reason: str = ""


def _cells_by_dim(C, top, caps):
    out = {}
    for k in range(top + 1):
        xs, ex = C.morphisms(k, caps)
        if not ex:
            raise NotExhaustive(f"{k}-morphism enumeration hit its caps")
        out[k] = list(xs)
    return out


def _dim_of(C):
    return getattr(C, "truncation", 2)


def functor_homotopy_check(f, g, caps: Caps | None = None, h_guess: dict | None = None) -> HomotopyResult:
    """Solve for h_n: Z C_n -> Z D_(n+1) with, for every n-morphism x,
    h_(n-1)(s - t)(x) + (s_n - t_n) h_n(x) = f(x) - g(x) modulo dimension < n.

    With ``h_guess`` the given map is checked instead of solved for.
    """
    C, D = f.domain, f.codomain
    top = _dim_of(C)
    cells = _cells_by_dim(C, top, caps)
    dcells = _cells_by_dim(D, top + 1, caps)
    for fn in (f, g):
        fn.check_non_contracting(cells.get(1, []))
    for v in cells[0]:
        if f(v) != g(v):
            return HomotopyResult(False, reason=f"objects differ at {v}")

    unknowns = []  # (n, x, y)
    uidx = {}
    for n in range(1, top + 1):
        for x in cells[n]:
            for y in dcells.get(n + 1, []):
                uidx[(n, x, y)] = len(unknowns)
                unknowns.append((n, x, y))
    rows = {}

    def row(n, x, z):
        return rows.setdefault((n, x, z), len(rows))

    cols = [dict() for _ in unknowns]
    for (n, x, y), j in uidx.items():
        # contribution of h_n(x) to the equation of x itself
        for z, s in ((D.source(y, n), 1), (D.target(y, n), -1)):
            if D.dim(z) == n:
                _add(cols[j], row(n, x, z), s)
        # contribution to the equations of (n+1)-cells w with x as a boundary
        for w in cells.get(n + 1, []):
            s = (1 if C.source(w, n) == x else 0) - (1 if C.target(w, n) == x else 0)
            if s:
                _add(cols[j], row(n + 1, w, y), s)
    rhs = {}
    for n in range(1, top + 1):
        for x in cells[n]:
            for y, s in ((f(x), 1), (g(x), -1)):
                if D.dim(y) == n:
                    _add(rhs, row(n, x, y), s)
    if h_guess is not None:
        got = {}
        for (x, y), a in h_guess.items():
            key = (C.dim(x), x, y)
            j = uidx.get(key)
            if j is None:
                return HomotopyResult(False, reason=f"guess entry {key} is out of range")
            for r, c in cols[j].items():
                _add(got, r, a * c)
        ok = got == rhs
        return HomotopyResult(ok, dict(h_guess) if ok else {}, "" if ok else "given map fails")
    sol = Lattice(cols, track=True).solve(rhs)
    if sol is None:
        return HomotopyResult(False, reason="the integer system has no solution")
    h = {unknowns[j][1:]: a for j, a in sorted(sol.items()) if a}
    return HomotopyResult(True, h)


def globe_homotopy(p, q):
    """The explicit map h_r(t_r A) = s_(r+1) A for q <= r < p on the globe 2_p."""
    from .free_cat import GlobeCell
    out = {}
    for r in range(q, p):
        out[(GlobeCell("t", r), GlobeCell("s", r + 1) if r + 1 < p else GlobeCell("A", p))] = 1
    return out


# ------------------------------------------------------------ report


@dataclass
class AnalysisReport:
    name: str
    counts: dict
    initial_states: list
    final_states: list
    deadlocks: list
    unreachable: list
    homology: dict  # label -> HomologyGroup
    cokernels: dict  # label -> HomologyGroup
    caveats: list

    def to_dict(self):
        def grp(h):
            return {"rank": h.rank, "torsion": list(h.torsion), "group": str(h),
                    "witnesses": [{str(k): v for k, v in sorted(w.items(), key=lambda kv: str(kv[0]))}
                                  for w in h.witnesses]}

        return {"schema": "dihom/1", "kind": "deadlocks", "model": self.name, "counts": self.counts,
                "initial_states": self.initial_states, "final_states": self.final_states,
                "deadlocks": self.deadlocks, "unreachable": self.unreachable,
                "homology": {k: grp(v) for k, v in self.homology.items()},
                "cokernels": {k: grp(v) for k, v in self.cokernels.items()},
                "caveats": list(self.caveats)}

    def to_text(self):
        lines = [f"model\t{self.name}"]
        lines += [f"count\t{k}\t{v}" for k, v in self.counts.items()]
        lines.append("initial\t" + ",".join(self.initial_states))
        lines.append("final\t" + ",".join(self.final_states))
        lines.append("deadlock\t" + ",".join(self.deadlocks))
        lines.append("unreachable\t" + ",".join(self.unreachable))
        for k, h in self.homology.items():
            lines.append(f"homology\t{k}\t{h}")
        for k, h in self.cokernels.items():
            lines.append(f"cokernel\t{k}\t{h}")
            for w in h.witnesses:
                lines.append(f"witness\t{k}\t" + _fmt_chain(w))
        lines += [f"caveat\t{c}" for c in self.caveats]
        return "\n".join(lines) + "\n"


def _fmt_chain(w):
    parts = []
    for k, a in sorted(w.items(), key=lambda kv: str(kv[0])):
        lab = str(k)
        parts.append(("+" if a > 0 else "-") + ("" if abs(a) == 1 else f"{abs(a)}*") + lab)
    s = " ".join(parts)
    return s[1:] if s.startswith("+") else s


def format_chain(w):
    return _fmt_chain(w)


def deadlock_report(model, caps: Caps | None = None, name: str = "model") -> AnalysisReport:
    from .cubical_sets import as_polygraph

    P = as_polygraph(model)
    C = FreeTwoCategory(P)
    C.check_acyclic()
    ini = [v.id for v in C.initial_states()]
    fin = [v.id for v in C.final_states()]
    # without declared intended states nothing is flagged
    want_ini = set(P.intended_initial) or set(ini)
    want_fin = set(P.intended_final) or set(fin)
    deadlocks = [v for v in fin if v not in want_fin]
    unreachable = [v for v in ini if v not in want_ini]
    caveats = []
    hom = {"H0-": corner_homology(C, "-", 0, caps), "H0+": corner_homology(C, "+", 0, caps)}
    B = bilocalize(C, ini, fin)
    hom["H1gl(I,F)"] = globular_homology(B, 1, caps)
    hom["H1-(I,F)"] = corner_homology(B, "-", 1, caps)
    hom["H1+(I,F)"] = corner_homology(B, "+", 1, caps)
    cok = {"coker h1-": hurewicz_cokernel(B, "-", 1, caps), "coker h1+": hurewicz_cokernel(B, "+", 1, caps)}
    if P.gen2 and not C.two_cells(caps)[1]:
        caveats.append("2-cell enumeration hit its caps; degree-2 data are lower bounds")
    counts = {"vertices": len(P.vertices), "edges": len(P.gen1), "squares": len(P.gen2)}
    return AnalysisReport(name, counts, ini, fin, deadlocks, unreachable, hom, cok, caveats)


__all__ = [n for n in dir() if not n.startswith("_")]
