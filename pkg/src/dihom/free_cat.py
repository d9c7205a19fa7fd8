"""The 2-truncated free omega-category on a polygraph, and small relatives.

Morphisms are vertices, nonempty paths, or 2-cells.  A 2-cell is a
source path plus a word of rewriting steps ``(offset, generator)``, kept
in a canonical form for the interchange law: two adjacent steps acting
on disjoint intervals commute, and the canonical word repeatedly pulls
to the front the movable step with the least ``(offset, generator)``.

All categories here share a duck-typed interface: ``dim``, ``source``,
``target``, ``compose``, ``contains``, ``morphisms(k)`` and friends.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cubical_sets import Polygraph2, as_polygraph
from .errors import CapExceeded, InvalidModel, NotAcyclic, NotComposable, NotExhaustive, NotNonContracting
from .homology_engine import Lattice

DEFAULT_MAX_WORDS = 20000
DEFAULT_MAX_LEN = 64


@dataclass(frozen=True)
class Vertex:
    id: str

    def __str__(self):
        return self.id


@dataclass(frozen=True)
class Path:
    edges: tuple

    def __str__(self):
        return "·".join(self.edges)


@dataclass(frozen=True)
class TwoCell:
    source: tuple
    word: tuple  # ((offset, generator), ...), canonical
    target: tuple

    def __str__(self):
        steps = " ".join(f"{g}@{o}" for o, g in self.word)
        return f"[{'·'.join(self.source)} => {'·'.join(self.target)} : {steps}]"


def morphism_key(x):
    if isinstance(x, Vertex):
        return (0, 0, (x.id,), ())
    if isinstance(x, Path):
        return (1, len(x.edges), x.edges, ())
    if isinstance(x, TwoCell):
        return (2, len(x.word), x.source, x.word)
    return (x.dim, 0, (str(x),), ())


def sorted_morphisms(xs):
    return sorted(xs, key=morphism_key)


@dataclass
class Caps:
    max_words: int = DEFAULT_MAX_WORDS
    max_len: int = DEFAULT_MAX_LEN

    def __post_init__(self):
        if self.max_words <= 0 or self.max_len <= 0:
            raise ValueError("caps must be positive")


# ------------------------------------------------------------ interchange


def swap_steps(first, second, lengths):
    """Swap two consecutive steps acting on disjoint intervals, else None."""
    p1, g1 = first
    p2, g2 = second
    l1, m1 = lengths[g1]
    l2, m2 = lengths[g2]
    if p2 + l2 <= p1:
        return (p2, g2), (p1 + m2 - l2, g1)
    if p2 >= p1 + m1:
        return (p2 - m1 + l1, g2), (p1, g1)
    return None


def normal_form(word, lengths):
    """Canonical representative of the interchange class of ``word``."""
    rest = list(word)
    out = []
    while rest:
        best = None
        for j in range(len(rest)):
            step = rest[j]
            moved = []
            ok = True
            for i in range(j - 1, -1, -1):
                sw = swap_steps(rest[i], step, lengths)
                if sw is None:
                    ok = False
                    break
                step, shifted = sw
                moved.append(shifted)
            if not ok:
                continue
            if best is None or step < best[0]:
                best = (step, j, moved[::-1])
        step, j, moved = best
        out.append(step)
        rest = moved + rest[j + 1:]
    return tuple(out)


def swap_class(word, lengths):
    """All words reachable by adjacent disjoint swaps (test oracle)."""
    start = tuple(word)
    seen = {start}
    todo = [start]
    while todo:
        w = todo.pop()
        for i in range(len(w) - 1):
            sw = swap_steps(w[i], w[i + 1], lengths)
            if sw is not None:
                nw = w[:i] + sw + w[i + 2:]
                if nw not in seen:
                    seen.add(nw)
                    todo.append(nw)
    return seen


# ------------------------------------------------------------ free category


class FreeTwoCategory:
    """Free 2-category on a :class:`Polygraph2`."""

    truncation = 2

    def __init__(self, model):
        P = as_polygraph(model)
        self.polygraph = P
        self.vertex_ids = list(P.vertices)
        self.edges = {e: (s, t) for e, s, t in P.gen1}
        self.edge_order = {e: i for i, (e, _, _) in enumerate(P.gen1)}
        self.gens = {g: (tuple(s), tuple(t)) for g, s, t in P.gen2}
        self.lengths = {g: (len(s), len(t)) for g, (s, t) in self.gens.items()}
        self.out_edges = {v: [] for v in P.vertices}
        self.in_edges = {v: [] for v in P.vertices}
        for e, s, t in P.gen1:
            self.out_edges[s].append(e)
            self.in_edges[t].append(e)
        self.by_first = {}
        for g, (s, _) in sorted(self.gens.items()):
            self.by_first.setdefault(s[0], []).append(g)
        self._paths = None
        self._two = {}

    # structure ---------------------------------------------------------
    def dim(self, x):
        if isinstance(x, Vertex):
            return 0
        if isinstance(x, Path):
            return 1
        return 2

    def path(self, edges, start=None):
        edges = tuple(edges)
        if not edges:
            if start is None:
                raise InvalidModel("empty path needs a start vertex")
            return Vertex(start)
        return Path(edges)

    def source(self, x, p):
        if p >= self.dim(x):
            return x
        if isinstance(x, Path):
            return Vertex(self.edges[x.edges[0]][0])
        if p == 0:
            return Vertex(self.edges[x.source[0]][0])
        return Path(x.source)

    def target(self, x, p):
        if p >= self.dim(x):
            return x
        if isinstance(x, Path):
            return Vertex(self.edges[x.edges[-1]][1])
        if p == 0:
            return Vertex(self.edges[x.source[-1]][1])
        return Path(x.target)

    def contains(self, x):
        if isinstance(x, Vertex):
            return x.id in self.out_edges
        if isinstance(x, Path):
            return self.is_path(x.edges)
        if isinstance(x, TwoCell):
            try:
                return self.replay(x.source, x.word) == x.target and self.is_path(x.source)
            except InvalidModel:
                return False
        return False

    def is_path(self, edges):
        if not edges or any(e not in self.edges for e in edges):
            return False
        return all(self.edges[a][1] == self.edges[b][0] for a, b in zip(edges, edges[1:]))

    def apply_step(self, path, step):
        o, g = step
        src, tgt = self.gens[g]
        if tuple(path[o:o + len(src)]) != src:
            raise InvalidModel(f"step {g}@{o} does not match the path")
        return tuple(path[:o]) + tgt + tuple(path[o + len(src):])

    def replay(self, source, word):
        p = tuple(source)
        for st in word:
            p = self.apply_step(p, st)
        return p

    def two_cell(self, source, word):
        source = tuple(source)
        word = tuple(word)
        if not word:
            return Path(source)
        tgt = self.replay(source, word)
        return TwoCell(source, normal_form(word, self.lengths), tgt)

    def generator(self, g):
        s, _ = self.gens[g]
        return self.two_cell(s, [(0, g)])

    def identity_vertex(self, v):
        return Vertex(v)

    def compose(self, a, b, p):
        if self.target(a, p) != self.source(b, p):
            raise NotComposable(p, f"{self.target(a, p)} != {self.source(b, p)}")
        da, db = self.dim(a), self.dim(b)
        if da <= p:
            return b
        if db <= p:
            return a
        if p == 0:
            if isinstance(a, Path) and isinstance(b, Path):
                return Path(a.edges + b.edges)
            if isinstance(a, Path):
                shift = len(a.edges)
                return TwoCell(a.edges + b.source, tuple((o + shift, g) for o, g in b.word),
                               a.edges + b.target)
            if isinstance(b, Path):
                return TwoCell(a.source + b.edges, a.word, a.target + b.edges)
            shift = len(a.target)
            word = a.word + tuple((o + shift, g) for o, g in b.word)
            return TwoCell(a.source + b.source, normal_form(word, self.lengths), a.target + b.target)
        if p == 1:
            return TwoCell(a.source, normal_form(a.word + b.word, self.lengths), b.target)
        raise NotComposable(p, "no composition above dimension 1")

    # enumeration -------------------------------------------------------
    def check_acyclic(self):
        color = {v: 0 for v in self.vertex_ids}
        parent = {}
        for root in self.vertex_ids:
            if color[root]:
                continue
            stack = [(root, iter(self.out_edges[root]))]
            color[root] = 1
            while stack:
                v, it = stack[-1]
                e = next(it, None)
                if e is None:
                    color[v] = 2
                    stack.pop()
                    continue
                w = self.edges[e][1]
                if color[w] == 1:
                    cycle = [e]
                    u = v
                    while u != w:
                        pe = parent[u]
                        cycle.append(pe)
                        u = self.edges[pe][0]
                    raise NotAcyclic(cycle[::-1])
                if color[w] == 0:
                    color[w] = 1
                    parent[w] = e
                    stack.append((w, iter(self.out_edges[w])))

    def all_paths(self, max_words=None):
        if self._paths is None:
            self.check_acyclic()
            out = []
            cap = max_words or DEFAULT_MAX_WORDS * 10

            def walk(v, acc):
                for e in self.out_edges[v]:
                    nxt = acc + (e,)
                    out.append(Path(nxt))
                    if len(out) > cap:
                        raise CapExceeded(f"more than {cap} paths", partial=out)
                    walk(self.edges[e][1], nxt)

            for v in self.vertex_ids:
                walk(v, ())
            self._paths = sorted_morphisms(out)
        return self._paths

    def objects(self):
        return [Vertex(v) for v in self.vertex_ids]

    def paths(self, frm=None, to=None):
        out = self.all_paths()
        if frm is not None:
            out = [p for p in out if self.source(p, 0).id == frm]
        if to is not None:
            out = [p for p in out if self.target(p, 0).id == to]
        return out

    def splits(self, path):
        """All (a, c) in the category with a *0 c equal to the path."""
        if isinstance(path, Vertex):
            return [(path, path)]
        e = path.edges
        out = [(self.source(path, 0), path)]
        out += [(Path(e[:k]), Path(e[k:])) for k in range(1, len(e))]
        out.append((path, self.target(path, 0)))
        return out

    def matches(self, path):
        """Single-step 2-cells with the given source path."""
        out = []
        for o, e in enumerate(path):
            for g in self.by_first.get(e, ()):
                s = self.gens[g][0]
                if tuple(path[o:o + len(s)]) == s:
                    out.append((o, g))
        return out

    def elementary_two_cells(self):
        """Whiskered generators p·g·q, one rewriting step each."""
        out = []
        for p in self.all_paths():
            for st in self.matches(p.edges):
                out.append(TwoCell(p.edges, (st,), self.apply_step(p.edges, st)))
        return sorted_morphisms(out)

    def two_cells(self, caps: Caps | None = None):
        """(cells, exhaustive): every 2-cell up to the caps."""
        caps = caps or Caps()
        key = (caps.max_words, caps.max_len)
        if key in self._two:
            return self._two[key]
        frontier = self.elementary_two_cells()
        seen = set(frontier)
        exhaustive = True
        length = 1
        while frontier:
            if length >= caps.max_len:
                if any(self.matches(c.target) for c in frontier):
                    exhaustive = False
                break
            nxt = []
            for c in frontier:
                for st in self.matches(c.target):
                    word = normal_form(c.word + (st,), self.lengths)
                    cell = TwoCell(c.source, word, self.apply_step(c.target, st))
                    if cell not in seen:
                        seen.add(cell)
                        nxt.append(cell)
                        if len(seen) > caps.max_words:
                            exhaustive = False
                            nxt = []
                            break
                if not exhaustive:
                    break
            if not exhaustive:
                break
            frontier = nxt
            length += 1
        result = (sorted_morphisms(seen), exhaustive)
        self._two[key] = result
        return result

    def morphisms(self, k, caps: Caps | None = None):
        """(list of k-dimensional morphisms, exhaustive)."""
        if k == 0:
            return self.objects(), True
        if k == 1:
            return self.all_paths(), True
        if k == 2:
            return self.two_cells(caps)
        return [], True

    def image_generators(self, k):
        """Generators spanning the image of s - t from degree k (k = 2)."""
        if k == 2:
            return self.elementary_two_cells()
        return self.morphisms(k)[0]

    # states --------------------------------------------------------------
    def initial_states(self):
        return [Vertex(v) for v in self.vertex_ids if not self.in_edges[v]]

    def final_states(self):
        return [Vertex(v) for v in self.vertex_ids if not self.out_edges[v]]


def enumerate_paths(P, frm=None, to=None):
    return FreeTwoCategory(P).paths(frm, to)


def enumerate_two_cells(P, caps: Caps | None = None):
    C = P if isinstance(P, FreeTwoCategory) else FreeTwoCategory(P)
    cells, exhaustive = C.two_cells(caps)
    if not exhaustive:
        raise CapExceeded("2-cell enumeration hit its caps", partial=cells)
    return cells


def initial_states(model):
    return FreeTwoCategory(model).initial_states()


def final_states(model):
    return FreeTwoCategory(model).final_states()


# ------------------------------------------------------------ bilocalization


class Bilocalization:
    """Morphisms with 0-source in I and 0-target in F; 0-cells are I and F."""

    def __init__(self, C, I, F):
        self.base = C
        self.I = {v.id if isinstance(v, Vertex) else v for v in I}
        self.F = {v.id if isinstance(v, Vertex) else v for v in F}
        self.truncation = C.truncation
        self.lengths = getattr(C, "lengths", {})

    def contains(self, x):
        if not self.base.contains(x):
            return False
        if self.dim(x) == 0:
            return x.id in self.I or x.id in self.F
        return self.base.source(x, 0).id in self.I and self.base.target(x, 0).id in self.F

    def dim(self, x):
        return self.base.dim(x)

    def source(self, x, p):
        return self.base.source(x, p)

    def target(self, x, p):
        return self.base.target(x, p)

    def compose(self, a, b, p):
        return self.base.compose(a, b, p)

    def objects(self):
        return [v for v in self.base.objects() if v.id in self.I or v.id in self.F]

    def _keep(self, xs):
        return [x for x in xs if self.contains(x)]

    def all_paths(self):
        return self._keep(self.base.all_paths())

    def paths(self, frm=None, to=None):
        return self._keep(self.base.paths(frm, to))

    def splits(self, path):
        return [(a, c) for a, c in self.base.splits(path) if self.contains(a) and self.contains(c)]

    def elementary_two_cells(self):
        return self._keep(self.base.elementary_two_cells())

    def two_cells(self, caps=None):
        cells, ex = self.base.two_cells(caps)
        return self._keep(cells), ex

    def morphisms(self, k, caps=None):
        if k == 0:
            return self.objects(), True
        if k == 1:
            return self.all_paths(), True
        if k == 2:
            return self.two_cells(caps)
        return [], True

    def image_generators(self, k):
        if k == 2:
            return self.elementary_two_cells()
        return self.morphisms(k)[0]

    def initial_states(self):
        return [v for v in self.objects() if v.id in self.I]

    def final_states(self):
        return [v for v in self.objects() if v.id in self.F]


def bilocalize(C, I, F):
    return Bilocalization(C, I, F)


# ------------------------------------------------------------ globes


@dataclass(frozen=True)
class GlobeCell:
    kind: str  # "s", "t" or "A"
    k: int

    def __str__(self):
        return "A" if self.kind == "A" else f"{self.kind}{self.k}A"


class GlobeCategory:
    """Free omega-category on a single p-cell A: cells s_kA, t_kA (k < p) and A."""

    def __init__(self, p: int):
        if p < 0:
            raise InvalidModel("globe dimension must be nonnegative")
        self.p = p
        self.truncation = p
        self.top = GlobeCell("A", p)

    def cells(self):
        out = []
        for k in range(self.p):
            out += [GlobeCell("s", k), GlobeCell("t", k)]
        return out + [self.top]

    def dim(self, x):
        return x.k

    def contains(self, x):
        return isinstance(x, GlobeCell) and (x == self.top or (x.kind in "st" and 0 <= x.k < self.p))

    def source(self, x, n):
        return x if n >= x.k else GlobeCell("s", n)

    def target(self, x, n):
        return x if n >= x.k else GlobeCell("t", n)

    def compose(self, a, b, n):
        if self.target(a, n) != self.source(b, n):
            raise NotComposable(n)
        if a.k <= n:
            return b
        if b.k <= n:
            return a
        raise NotComposable(n)

    def objects(self):
        return [c for c in self.cells() if c.k == 0]

    def morphisms(self, k, caps=None):
        return [c for c in self.cells() if c.k == k], True

    def image_generators(self, k):
        return self.morphisms(k)[0]


# ------------------------------------------------------------ functors


class Functor:
    """An omega-functor given by a function on all morphisms."""

    def __init__(self, domain, codomain, fn, name="f"):
        self.domain = domain
        self.codomain = codomain
        self._fn = fn
        self.name = name
        self._memo = {}

    def __call__(self, x):
        if x not in self._memo:
            self._memo[x] = self._fn(x)
        return self._memo[x]

    def then(self, other: "Functor") -> "Functor":
        """other after self."""
        return Functor(self.domain, other.codomain, lambda x: other(self(x)), f"{other.name}∘{self.name}")

    @staticmethod
    def identity(C):
        return Functor(C, C, lambda x: x, "id")

    def check_non_contracting(self, cells_1):
        for x in cells_1:
            if self.codomain.dim(self(x)) != 1:
                raise NotNonContracting(f"{self.name} sends the 1-morphism {x} to {self(x)}")

    def check_functor(self, cells):
        """Sources and targets are preserved on the given cells."""
        D = self.codomain
        for x in cells:
            fx = self(x)
            if not D.contains(fx):
                return False
            for p in range(self.domain.dim(x)):
                if D.source(fx, p) != self(self.domain.source(x, p)):
                    return False
                if D.target(fx, p) != self(self.domain.target(x, p)):
                    return False
        return True


def globe_functor(domain: GlobeCategory, codomain, image, name="f"):
    """The functor out of a globe sending its top cell to ``image``."""

    def fn(x):
        if x.kind == "A":
            return image
        return codomain.source(image, x.k) if x.kind == "s" else codomain.target(image, x.k)

    return Functor(domain, codomain, fn, name)


def polygraph_functor(domain: FreeTwoCategory, codomain, vertices, edges, gens, name="f"):
    """Extend images of generators to every morphism of a free category."""
    D = codomain

    def fpath(edge_seq, start):
        if not edge_seq:
            return vertices[start]
        acc = edges[edge_seq[0]]
        for e in edge_seq[1:]:
            acc = D.compose(acc, edges[e], 0)
        return acc

    def fn(x):
        if isinstance(x, Vertex):
            return vertices[x.id]
        if isinstance(x, Path):
            return fpath(x.edges, None)
        cur = x.source
        acc = None
        for o, g in x.word:
            src, _ = domain.gens[g]
            start = domain.edges[cur[0]][0]
            pre = fpath(cur[:o], start)
            mid_start = domain.edges[src[0]][0]
            post_start = domain.edges[src[-1]][1]
            piece = D.compose(D.compose(pre if o else vertices[mid_start], gens[g], 0),
                              fpath(cur[o + len(src):], post_start), 0)
            acc = piece if acc is None else D.compose(acc, piece, 1)
            cur = domain.apply_step(cur, (o, g))
        return acc

    F = Functor(domain, codomain, fn, name)
    for e, (s, t) in domain.edges.items():
        if D.source(edges[e], 0) != vertices[s] or D.target(edges[e], 0) != vertices[t]:
            raise InvalidModel(f"image of edge {e} has the wrong endpoints")
    for g, (s, t) in domain.gens.items():
        start = domain.edges[s[0]][0]
        if D.source(gens[g], 1) != fpath(s, start) or D.target(gens[g], 1) != fpath(t, start):
            raise InvalidModel(f"image of 2-generator {g} has the wrong boundary")
    return F


# ------------------------------------------------------------ homotopy


@dataclass
class HomotopyWitness:
    holds: bool
    chain: dict  # {morphism: coefficient}


def _sub(C, z, n):
    """(s_n - t_n) applied to a chain of (n+1)-morphisms, as a dict."""
    out = {}
    for x, a in z.items():
        for y, sgn in ((C.source(x, n), 1), (C.target(x, n), -1)):
            out[y] = out.get(y, 0) + sgn * a
    return {k: v for k, v in out.items() if v}


def morphism_homotopic(x, y, C, caps: Caps | None = None) -> HomotopyWitness:
    """Is there z in Z C_{n+1} with (s_n - t_n) z = x - y?"""
    n = C.dim(x)
    if C.dim(y) != n:
        return HomotopyWitness(False, {})
    if x == y:
        return HomotopyWitness(True, {})
    gens = C.image_generators(n + 1) if n == 1 else C.morphisms(n + 1, caps)[0]
    if n != 1:
        _, exhaustive = C.morphisms(n + 1, caps)
        if not exhaustive:
            raise NotExhaustive(f"{n + 1}-cell enumeration hit its caps")
    if n == 0:
        gens = C.morphisms(1, caps)[0]
    labels = {}
    cols = []
    for g in gens:
        col = {}
        for lab, a in _sub(C, {g: 1}, n).items():
            col[labels.setdefault(lab, len(labels))] = a
        cols.append(col)
    rhs = {}
    for lab, a in ((x, 1), (y, -1)):
        i = labels.setdefault(lab, len(labels))
        rhs[i] = rhs.get(i, 0) + a
    sol = Lattice(cols, track=True).solve(rhs)
    if sol is None:
        return HomotopyWitness(False, {})
    return HomotopyWitness(True, {gens[i]: a for i, a in sorted(sol.items()) if a})
