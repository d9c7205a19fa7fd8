"""Singular cubes I^n -> C over a small omega-category C.

A cube stores the image of every face word; structure maps are index
substitutions on words and functoriality is checked face by face
against the composition table of I^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import cube_model as cm
from .errors import (CapExceeded, DimensionTooHigh, IndexOutOfRange, InconsistentTop, NotComposable,
                     NotFillable)
from .free_cat import Caps, sorted_morphisms

MAX_CUBE_DIM = 4


@lru_cache(maxsize=None)
def _words(n):
    return cm.enumerate_faces(n)


@lru_cache(maxsize=None)
def _word_index(n):
    return {w: i for i, w in enumerate(_words(n))}


@dataclass(frozen=True)
class SingularCube:
    n: int
    values: tuple  # image of each face word, in enumerate_faces order

    @staticmethod
    def from_assign(n, assign):
        if n > MAX_CUBE_DIM:
            raise DimensionTooHigh(f"cubes above dimension {MAX_CUBE_DIM} are not supported")
        return SingularCube(n, tuple(assign[w] for w in _words(n)))

    def __getitem__(self, word):
        return self.values[_word_index(self.n)[word]]

    def assign(self):
        return dict(zip(_words(self.n), self.values))

    @property
    def top(self):
        return self["0" * self.n]

    def __str__(self):
        if self.n <= 1:
            return str(self.top)
        if self.n == 2:
            return f"sq({self['-0']} ; {self['0+']} | {self['0-']} ; {self['+0']} : {self.top})"
        return "<" + ", ".join(f"{w}:{v}" for w, v in zip(_words(self.n), self.values) if "0" in w) + ">"


def constant(v, n=0):
    return SingularCube.from_assign(n, {w: v for w in _words(n)})


# ------------------------------------------------------------ structure maps

_MAX = {("-", "-"): "-", ("-", "0"): "0", ("0", "-"): "0", ("-", "+"): "+", ("+", "-"): "+",
        ("0", "0"): "0", ("0", "+"): "+", ("+", "0"): "+", ("+", "+"): "+"}
_RANK = {"-": 0, "0": 1, "+": 2}


def face(x: SingularCube, i: int, side: str) -> SingularCube:
    if x.n < 1 or not 1 <= i <= x.n:
        raise IndexOutOfRange(f"face index {i} for a {x.n}-cube")
    return SingularCube.from_assign(x.n - 1, {w: x[w[:i - 1] + side + w[i - 1:]] for w in _words(x.n - 1)})


def degeneracy(x: SingularCube, i: int) -> SingularCube:
    if not 1 <= i <= x.n + 1:
        raise IndexOutOfRange(f"degeneracy index {i} for a {x.n}-cube")
    return SingularCube.from_assign(x.n + 1, {w: x[w[:i - 1] + w[i:]] for w in _words(x.n + 1)})


def connection(x: SingularCube, i: int, side: str) -> SingularCube:
    """Gamma_i^- merges letters i, i+1 by max, Gamma_i^+ by min (- < 0 < +)."""
    if x.n < 1 or not 1 <= i <= x.n:
        raise IndexOutOfRange(f"connection index {i} for a {x.n}-cube")
    pick = max if side == "-" else min

    def merged(w):
        k = pick(w[i - 1], w[i], key=_RANK.get)
        return w[:i - 1] + k + w[i + 1:]

    return SingularCube.from_assign(x.n + 1, {w: x[merged(w)] for w in _words(x.n + 1)})


def structure_map(x, kind, i, side=None):
    if kind == "face":
        return face(x, i, side)
    if kind == "degeneracy":
        return degeneracy(x, i)
    if kind == "connection":
        return connection(x, i, side)
    raise ValueError(f"unknown structure map {kind!r}")


# ------------------------------------------------------------ functoriality


def evaluate(x: SingularCube, cell: cm.CubeCell, C, memo=None):
    """Image of a cell of I^n under x, composing in C."""
    if memo is None:
        memo = {}
    if cell in memo:
        return memo[cell]
    how = cm.decompositions(x.n)[cell]
    if how[0] == "atom":
        val = x[how[1]]
    else:
        _, a, b, p = how
        val = C.compose(evaluate(x, a, C, memo), evaluate(x, b, C, memo), p)
    memo[cell] = val
    return val


def functoriality_failures(x: SingularCube, C) -> list:
    """Face words where x fails to be an omega-functor (empty if it is one)."""
    bad = []
    memo = {}
    for w, v in zip(_words(x.n), x.values):
        if not C.contains(v) or C.dim(v) > cm.face_dim(w):
            bad.append(w)
            continue
        R = cm.atom(w)
        for p in range(cm.face_dim(w)):
            try:
                if (evaluate(x, cm.source(R, p), C, memo) != C.source(v, p)
                        or evaluate(x, cm.target(R, p), C, memo) != C.target(v, p)):
                    bad.append(w)
                    break
            except NotComposable:
                bad.append(w)
                break
    return bad


def is_functorial(x, C) -> bool:
    return not functoriality_failures(x, C)


def is_thin(x: SingularCube, C) -> bool:
    return C.dim(x.top) < x.n


def is_corner(x: SingularCube, alpha: str, C) -> bool:
    """Every word with a single 0 and alpha elsewhere maps to a 1-morphism."""
    for i in range(x.n):
        w = alpha * i + "0" + alpha * (x.n - i - 1)
        if C.dim(x[w]) != 1:
            return False
    return True


# ------------------------------------------------------------ shells


@dataclass(frozen=True)
class Shell:
    n: int
    faces: tuple  # ((i, side, cube), ...) for 1 <= i <= n+1

    @staticmethod
    def of(faces: dict):
        n = next(iter(faces.values())).n
        return Shell(n, tuple(sorted(((i, s, c) for (i, s), c in faces.items()), key=lambda t: t[:2])))

    def get(self, i, side):
        for j, s, c in self.faces:
            if j == i and s == side:
                return c
        raise KeyError((i, side))

    def compatibility_failures(self):
        out = []
        for j in range(2, self.n + 2):
            for i in range(1, j):
                for a in "-+":
                    for b in "-+":
                        if face(self.get(j, b), i, a) != face(self.get(i, a), j - 1, b):
                            out.append((i, a, j, b))
        return out


def shell_of(x: SingularCube) -> Shell:
    return Shell.of({(i, s): face(x, i, s) for i in range(1, x.n + 1) for s in "-+"})


def fill_shell(s: Shell, u, C, strict: bool = True) -> SingularCube:
    """The (n+1)-cube with faces s and top u.

    ``strict`` also demands exactly one thick face in each of the two
    families {x_i^((-)^i)} and {x_i^((-)^(i+1))} with u joining them;
    otherwise only the resulting cube's functoriality is required.
    """
    n = s.n
    want = {(i, a) for i in range(1, n + 2) for a in "-+"}
    if {(i, a) for i, a, _ in s.faces} != want or any(c.n != n for _, _, c in s.faces):
        raise NotFillable("shell does not have 2(n+1) faces of dimension n")
    if s.compatibility_failures():
        raise NotFillable(f"shell relations fail at {s.compatibility_failures()[0]}")
    if strict:
        fam_src = [s.get(i, cm.sign(i)) for i in range(1, n + 2)]
        fam_tgt = [s.get(i, cm.sign(i + 1)) for i in range(1, n + 2)]
        thick_src = [c for c in fam_src if C.dim(c.top) == n]
        thick_tgt = [c for c in fam_tgt if C.dim(c.top) == n]
        if len(thick_src) != 1 or len(thick_tgt) != 1:
            raise NotFillable("each face family needs exactly one thick element")
        if C.source(u, n) != thick_src[0].top or C.target(u, n) != thick_tgt[0].top:
            raise InconsistentTop("top cell does not join the two thick faces")
    assign = {}
    for w in _words(n + 1):
        k = next((j for j, ch in enumerate(w) if ch != "0"), None)
        assign[w] = u if k is None else s.get(k + 1, w[k])[w[:k] + w[k + 1:]]
    x = SingularCube.from_assign(n + 1, assign)
    bad = functoriality_failures(x, C)
    if bad:
        if "0" * (n + 1) in bad:
            raise InconsistentTop(f"top cell {u} does not fit the shell")
        raise NotFillable(f"filled cube is not a functor at {bad[0]}")
    return x


# ------------------------------------------------------------ +_j


def plus(x: SingularCube, y: SingularCube, j: int, C) -> SingularCube:
    """Composite of cubes along direction j (cubes of dimension 1 or 2)."""
    if x.n != y.n or not 1 <= j <= x.n or x.n > 2:
        raise IndexOutOfRange(f"+_{j} on cubes of dimension {x.n}, {y.n}")
    if face(x, j, "+") != face(y, j, "-"):
        raise NotComposable(j, "faces do not match")
    c0 = lambda a, b: C.compose(a, b, 0)
    if x.n == 1:
        return SingularCube.from_assign(1, {"-": x["-"], "0": c0(x["0"], y["0"]), "+": y["+"]})
    if j == 1:
        a = {"--": x["--"], "-+": x["-+"], "+-": y["+-"], "++": y["++"],
             "-0": x["-0"], "+0": y["+0"], "0-": c0(x["0-"], y["0-"]), "0+": c0(x["0+"], y["0+"]),
             "00": C.compose(c0(x["00"], y["0+"]), c0(x["0-"], y["00"]), 1)}
    else:
        a = {"--": x["--"], "+-": x["+-"], "-+": y["-+"], "++": y["++"],
             "0-": x["0-"], "0+": y["0+"], "-0": c0(x["-0"], y["-0"]), "+0": c0(x["+0"], y["+0"]),
             "00": C.compose(c0(x["-0"], y["00"]), c0(x["00"], y["+0"]), 1)}
    return SingularCube.from_assign(2, a)


def paste(top_left, top_right, bottom_left, bottom_right, j, C):
    """Four squares laid out with direction j upward and j+1 rightward."""
    return plus(plus(bottom_left, top_left, j, C), plus(bottom_right, top_right, j, C), j + 1, C)


# ------------------------------------------------------------ folding


def fold1(u, C) -> SingularCube:
    return SingularCube.from_assign(1, {"-": C.source(u, 0), "0": u, "+": C.target(u, 0)})


def _check_fold(u, n, C):
    if n > 3:
        raise DimensionTooHigh("folding is implemented up to dimension 3")
    if C.dim(u) > n:
        raise DimensionTooHigh(f"morphism of dimension {C.dim(u)} does not fit an {n}-cube")


def fold_minus(u, n, C) -> SingularCube:
    _check_fold(u, n, C)
    if n == 0:
        return constant(u)
    if n == 1:
        return fold1(u, C)
    if n == 2:
        t0 = C.target(u, 0)
        return SingularCube.from_assign(2, {
            "--": C.source(u, 0), "-+": C.target(C.source(u, 1), 0) if C.dim(u) else t0,
            "+-": C.target(C.target(u, 1), 0) if C.dim(u) else t0, "++": t0,
            "-0": C.source(u, 1), "0-": C.target(u, 1), "+0": t0, "0+": t0, "00": u})
    s2 = C.source(u, 2)
    faces = {}
    for a in "-+":
        faces[(1, a)] = connection(face(fold_minus(s2, 2, C), 1, a), 1, "-")
    faces[(2, "-")] = fold_minus(C.target(u, 2), 2, C)
    faces[(3, "-")] = fold_minus(s2, 2, C)
    faces[(2, "+")] = faces[(3, "+")] = degeneracy(face(fold_minus(s2, 2, C), 2, "+"), 2)
    return fill_shell(Shell.of(faces), u, C, strict=False)


def fold_plus(u, n, C) -> SingularCube:
    _check_fold(u, n, C)
    if n == 0:
        return constant(u)
    if n == 1:
        return fold1(u, C)
    if n == 2:
        s0 = C.source(u, 0)
        return SingularCube.from_assign(2, {
            "--": s0, "-+": s0, "+-": s0, "++": C.target(u, 0),
            "-0": s0, "0-": s0, "+0": C.target(u, 1), "0+": C.source(u, 1), "00": u})
    s2 = C.source(u, 2)
    faces = {}
    for a in "-+":
        faces[(1, a)] = connection(face(fold_plus(s2, 2, C), 1, a), 1, "+")
    faces[(2, "+")] = fold_plus(C.source(u, 2), 2, C)
    faces[(3, "+")] = fold_plus(C.target(u, 2), 2, C)
    faces[(2, "-")] = faces[(3, "-")] = degeneracy(face(fold_plus(s2, 2, C), 2, "-"), 2)
    return fill_shell(Shell.of(faces), u, C, strict=False)


def fold(u, n, C) -> SingularCube:
    """The folding cube: first-direction faces fold the (n-1)-source/target,
    the others are first-degeneracies of lower folds."""
    _check_fold(u, n, C)
    if n == 0:
        return constant(u)
    if n == 1:
        return fold1(u, C)
    faces = {}
    for a in "-+":
        d = C.source(u, n - 1) if a == "-" else C.target(u, n - 1)
        faces[(1, a)] = fold(d, n - 1, C)
        low = fold(C.source(u, n - 1), n - 1, C)
        for i in range(2, n + 1):
            faces[(i, a)] = degeneracy(face(low, i - 1, a), 1)
    if n == 2:
        return _square_from_faces(faces, u)
    return fill_shell(Shell.of(faces), u, C, strict=False)


def _square_from_faces(faces, u):
    a = {"00": u}
    for (i, s), c in faces.items():
        for w in _words(1):
            word = w[:i - 1] + s + w[i - 1:]
            a[word] = c[w]
    return SingularCube.from_assign(2, a)


# ------------------------------------------------------------ enumeration


def truncation_morphisms(C, n, caps=None):
    """(tau_n C as a list, exhaustive): morphisms of dimension at most n."""
    out = []
    exhaustive = True
    for k in range(n + 1):
        xs, ex = C.morphisms(k, caps)
        out += xs
        exhaustive &= ex
    return out, exhaustive


def squares_over(u, C):
    """All 2-cubes with top cell u."""
    out = []
    for a, c in C.splits(C.source(u, 1)):
        for b, d in C.splits(C.target(u, 1)):
            out.append(SingularCube.from_assign(2, {
                "--": C.source(u, 0), "-+": C.target(a, 0), "+-": C.target(b, 0), "++": C.target(u, 0),
                "-0": a, "0+": c, "0-": b, "+0": d, "00": u}))
    return out


def cubes(C, n, caps: Caps | None = None, tops=None):
    """(all n-cubes, exhaustive) for n <= 3."""
    caps = caps or Caps()
    if n == 0:
        xs, ex = C.morphisms(0, caps)
        return [constant(v) for v in xs], ex
    if n == 1:
        xs, ex = truncation_morphisms(C, 1, caps)
        return [fold1(u, C) for u in xs], ex
    if n == 2:
        xs, ex = (tops, True) if tops is not None else truncation_morphisms(C, 2, caps)
        out = []
        for u in xs:
            out += squares_over(u, C)
            if len(out) > caps.max_words:
                raise CapExceeded(f"more than {caps.max_words} squares", partial=out)
        return out, ex
    if n == 3:
        sq, ex = cubes(C, 2, caps)
        return three_cubes(sq, sq, C, caps), ex
    raise DimensionTooHigh("cube enumeration is implemented up to dimension 3")


def three_cubes(minus_faces, all_squares, C, caps: Caps):
    """3-cubes whose minus faces come from ``minus_faces``.

    C is 2-truncated, so every 3-cube is thin and its top is forced: it is
    the common value of the two composites of faces giving the 2-source
    and 2-target of the standard 3-cube.
    """
    assert getattr(C, "truncation", 2) <= 2, "3-cube enumeration relies on 2-truncation"
    f = face
    by1m = {}
    for q in minus_faces:
        by1m.setdefault(f(q, 1, "-"), []).append(q)
    by_1m_2m = {}
    for q in minus_faces:
        by_1m_2m.setdefault((f(q, 1, "-"), f(q, 2, "-")), []).append(q)
    all_by_1m_2m = {}
    all_by_3 = {}
    all_by_4 = {}
    for q in all_squares:
        all_by_1m_2m.setdefault((f(q, 1, "-"), f(q, 2, "-")), []).append(q)
        all_by_3.setdefault((f(q, 1, "-"), f(q, 1, "+"), f(q, 2, "-")), []).append(q)
        all_by_4.setdefault((f(q, 1, "-"), f(q, 1, "+"), f(q, 2, "-"), f(q, 2, "+")), []).append(q)
    s2 = cm.source(cm.top_cell(3), 2)
    t2 = cm.target(cm.top_cell(3), 2)
    out = []
    seen = set()
    for x1m in minus_faces:
        for x2m in by1m.get(f(x1m, 1, "-"), ()):
            for x3m in by_1m_2m.get((f(x1m, 2, "-"), f(x2m, 2, "-")), ()):
                for x1p in all_by_1m_2m.get((f(x2m, 1, "+"), f(x3m, 1, "+")), ()):
                    for x2p in all_by_3.get((f(x1m, 1, "+"), f(x1p, 1, "+"), f(x3m, 2, "+")), ()):
                        key4 = (f(x1m, 2, "+"), f(x1p, 2, "+"), f(x2m, 2, "+"), f(x2p, 2, "+"))
                        for x3p in all_by_4.get(key4, ()):
                            faces = {(1, "-"): x1m, (1, "+"): x1p, (2, "-"): x2m, (2, "+"): x2p,
                                     (3, "-"): x3m, (3, "+"): x3p}
                            sh = Shell.of(faces)
                            if sh.compatibility_failures():
                                continue
                            partial = {}
                            for w in _words(3):
                                k = next((j for j, ch in enumerate(w) if ch != "0"), None)
                                if k is not None:
                                    partial[w] = faces[(k + 1, w[k])][w[:k] + w[k + 1:]]
                            probe = SingularCube.from_assign(3, {**partial, "000": None})
                            try:
                                top = evaluate(probe, s2, C)
                                if evaluate(probe, t2, C) != top:
                                    continue
                            except NotComposable:
                                continue
                            x = SingularCube.from_assign(3, {**partial, "000": top})
                            if x in seen or not is_functorial(x, C):
                                continue
                            seen.add(x)
                            out.append(x)
                            if len(out) > caps.max_words:
                                raise CapExceeded(f"more than {caps.max_words} 3-cubes", partial=out)
    return out


def cube_key(x: SingularCube):
    from .free_cat import morphism_key
    return tuple(morphism_key(v) for v in x.values)


@dataclass
class CornerGenerators:
    alpha: str
    degree: int
    cubes: list
    exhaustive: bool


def enumerate_corner_generators(C, alpha, d, caps: Caps | None = None, reduced=False):
    """Generators of the alpha-corner complex in degree d.

    With ``reduced`` (degree 2 only) keep the squares whose top is a path
    or a single whiskered generator; they span the same boundary image in
    degree 1.
    """
    caps = caps or Caps()
    if d == 0:
        xs, ex = C.morphisms(0, caps)
        return CornerGenerators(alpha, 0, [constant(v) for v in xs], ex)
    if d == 1:
        xs, ex = C.morphisms(1, caps)
        return CornerGenerators(alpha, 1, [fold1(u, C) for u in xs], ex)
    if d == 2:
        if reduced:
            tops = C.morphisms(1, caps)[0] + C.image_generators(2)
            ex = True
        else:
            tops, ex = truncation_morphisms(C, 2, caps)
            tops = tops[len(C.morphisms(0, caps)[0]):]
        sq, _ = cubes(C, 2, caps, tops=tops)
        return CornerGenerators(alpha, 2, [q for q in sq if is_corner(q, alpha, C)], ex)
    if d == 3:
        assert getattr(C, "truncation", 2) <= 2
        allsq, ex = cubes(C, 2, caps)
        corner_sq = [q for q in allsq if is_corner(q, alpha, C)] if alpha == "-" else allsq
        xs = three_cubes(corner_sq, allsq, C, caps)
        return CornerGenerators(alpha, 3, [x for x in xs if is_corner(x, alpha, C)], ex)
    raise DimensionTooHigh("corner generators are implemented up to degree 3")


# ------------------------------------------------------------ gamma part


def in_gamma_part(x: SingularCube) -> bool:
    """Faces in direction j are (j-1)-fold first degeneracies."""
    for j in range(1, x.n + 1):
        for a in "-+":
            fc = face(x, j, a)
            base = fc
            for _ in range(j - 1):
                base = face(base, 1, "-")
            rebuilt = base
            for _ in range(j - 1):
                rebuilt = degeneracy(rebuilt, 1)
            if rebuilt != fc:
                return False
    return True


def gamma_part(C, n, caps: Caps | None = None):
    if n > 2:
        raise DimensionTooHigh("gamma part is implemented up to dimension 2")
    xs, ex = cubes(C, n, caps)
    return [x for x in xs if in_gamma_part(x)], ex


def ev_top(x: SingularCube):
    return x.top


def sorted_cubes(xs):
    return sorted(xs, key=cube_key)


__all__ = [name for name in dir() if not name.startswith("_")] + ["sorted_morphisms"]
