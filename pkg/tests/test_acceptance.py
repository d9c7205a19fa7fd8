"""Acceptance suite: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) for the summary lines,
or through pytest, where each criterion is its own test and prints its line.
"""

import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from dihom import cube_model as cm
from dihom import fixtures
from dihom import homology_engine as he
from dihom import invariants as inv
from dihom import nerve as N
from dihom.errors import NotComposable
from dihom.free_cat import Caps, FreeTwoCategory, GlobeCategory, Vertex, bilocalize, globe_functor, morphism_homotopic

import oracles

R = cm.closure
TIME_LIMIT = 60.0


def cat(name):
    return FreeTwoCategory(fixtures.NAMED[name]())


# ------------------------------------------------------------ criteria


def c1():
    listed = {R({w}) for w in ["--", "-+", "+-", "++", "-0", "0-", "+0", "0+", "00"]}
    listed |= {R({"-0", "0+"}), R({"0-", "+0"})}
    i2 = cm.enumerate_In(2)
    ok = set(i2) == listed and len(i2) == 11
    ok &= len(cm.enumerate_In(1)) == 3
    n3 = len(cm.enumerate_In(3))
    ok &= n3 == len(oracles.steiner_tables(3)) == 57
    return ok, f"|I1|=3 |I2|={len(i2)} |I3|={n3} (oracle 57)"


def c2():
    ok = cm.source(R({"00"}), 1) == R({"-0", "0+"})
    c0 = lambda a, b: cm.compose_cells(R({a}), R({b}), 0)
    # the printed last factor 0++ is read as ++0 (the literal one does not compose)
    pasted = cm.compose_cells(cm.compose_cells(c0("-00", "0++"), c0("-0-", "0+0"), 1), c0("00-", "++0"), 1)
    ok &= cm.source(R({"000"}), 2) == pasted
    try:
        c0("00-", "0++")
        ok = False
    except NotComposable:
        pass
    return ok, "s1R(00) and s2R(000) reproduced"


def c3():
    import test_nerve as tn

    cases = 0
    for name in ("square", "column", "row"):
        C = cat(name)
        for n in (0, 1, 2):
            xs = N.cubes(C, n)[0]
            for x in xs:
                tn.cubical_relations(x)
                if n:
                    tn.connection_relations(x)
                    tn.corner_simplicial(x, "-")
                    tn.corner_simplicial(x, "+")
                    tn.cubcat_single(x, C)
                cases += 1
            for j in range(1, n + 1):
                for x, y in tn.composable_pairs(xs, j):
                    tn.cubcat_pair(x, y, j, C)
                    cases += 1
        tn.cubcat_interchange(N.cubes(C, 2)[0], C)
    C = cat("trou")
    sq = N.cubes(C, 2)[0]
    for x in random.Random(2).sample(sq, 500):
        tn.cubical_relations(x)
        tn.connection_relations(x)
        tn.corner_simplicial(x, "-")
        tn.corner_simplicial(x, "+")
        cases += 1
    tn.test_cubcat_random_trou()
    return True, f"{cases} exhaustive/sampled cubes and pairs, plus 500+ random trou cases per suite"


def c4():
    n = 0
    for name in ("square", "row", "column", "coin2"):
        C = cat(name)
        for d in (0, 1, 2):
            for x in N.cubes(C, d)[0]:
                for a in "-+":
                    if inv.retraction_defect(x, a):
                        return False, f"defect at {x}"
                    n += 1
    for x in random.Random(0).sample(N.cubes(cat("trou"), 2)[0], 500):
        for a in "-+":
            if inv.retraction_defect(x, a):
                return False, f"defect at {x}"
            n += 1
    C = cat("square")
    for a in "-+":
        K = inv.full_nerve_complex(C, a, 2)
        if not (he.homology(K, 0).is_zero() and he.homology(K, 1).is_zero()):
            return False, "full complex homology is nonzero"
    return True, f"{n} chains checked; full complex H0 = H1 = 0"


def c5():
    rep = inv.deadlock_report(fixtures.swissflag(), name="swissflag")
    h = {k: str(v) for k, v in rep.homology.items()}
    ck = {k: str(v) for k, v in rep.cokernels.items()}
    ok = sorted(rep.final_states) == ["v(2,2)", "v(5,5)"] and sorted(rep.initial_states) == ["v(0,0)", "v(3,3)"]
    ok &= h["H0-"] == "Z^2" and h["H0+"] == "Z^2"
    ok &= all(not v.is_zero() for v in rep.cokernels.values())
    ok &= ck == {"coker h1-": "Z", "coker h1+": "Z"}
    return ok, f"H0-={h['H0-']} H0+={h['H0+']} coker h1-={ck['coker h1-']} coker h1+={ck['coker h1+']}"


def c6():
    C = cat("trou")
    g = {i: fixtures.trou_path(w) for i, w in fixtures.TROU_GAMMA.items()}
    a = morphism_homotopic(g[1], g[2], C).holds
    b = morphism_homotopic(g[1], g[4], C).holds
    B = bilocalize(C, C.initial_states(), C.final_states())
    h1 = str(inv.globular_homology(B, 1))
    hg = str(inv.globular_homology(cat("g1"), 1))
    return a and not b and h1 == hg == "Z", f"g1~g2={a} g1~g4={b} H1gl(trou bilocalized)={h1} H1gl(G1)={hg}"


def c7():
    C = cat("cube3")
    c = C.compose(C.generator("-00"), C.path(["0++"]), 0)
    d = C.compose(C.path(["-0-"]), C.generator("0+0"), 0)
    G = inv.GlobularComplex(C, 3, reduced_top=False).chain
    z = G.index_chain(2, {C.compose(c, d, 1): 1, c: -1, d: -1})
    h2 = inv.globular_homology(C, 2)
    ok = bool(z) and G.apply(2, z) == {} and not G.boundary(3) and not h2.is_zero()
    B = cat("bord")
    A, Bg = B.generator("A"), B.generator("B")
    AB = B.compose(A, Bg, 1)
    hz = inv.hurewicz_map(B, "-", 2)
    img = hz.map.image(2, hz.source.chain.index_chain(2, {AB: 1, A: -1, Bg: -1}))
    K = hz.target.chain
    x = K.basis(3)[0]
    ok &= bool(img) and K.apply(3, {0: 1}) == {k: -v for k, v in img.items()}
    ok &= [N.face(x, i, "-").top for i in (1, 2, 3)] == [A, AB, Bg]
    return ok, f"H2gl(I3)={h2}; boundary of the bord cube = -h2(A*1B - A - B)"


def c8():
    ok = True
    for p, q in ((2, 1), (3, 2), (3, 1)):
        gf, ident = fixtures.globe_pair(p, q)
        ok &= inv.functor_homotopy_check(gf, ident, h_guess=inv.globe_homotopy(p, q)).homotopic
        ok &= inv.functor_homotopy_check(gf, ident).homotopic
    pairs = [fixtures.globe_pair(p, q) for p, q in ((2, 1), (3, 2), (3, 1))]
    pairs.append(fixtures.homotopic_functors())
    P, D = GlobeCategory(2), cat("g2")
    pairs.append((globe_functor(P, D, D.generator("A")), globe_functor(P, D, D.generator("B"))))
    for f, g in pairs:
        ok &= inv.functor_homotopy_check(f, g).homotopic
        for d in range(3):
            ok &= he.induced_maps_agree(inv.functor_gl_map(f, 2), inv.functor_gl_map(g, 2), d)
    return ok, f"globe pairs (2,1),(3,2),(3,1) with the explicit h; {len(pairs)} homotopic pairs agree on H0..H2"


def c9():
    done = []
    big = Caps(max_words=2_000_000)
    for name in sorted(fixtures.NAMED):
        C = cat(name)
        for n in (0, 1, 2):
            part, _ = N.gamma_part(C, n, big)
            tau, _ = N.truncation_morphisms(C, n, big)
            tops = [N.ev_top(x) for x in part]
            if len(tops) != len(set(tops)) or set(tops) != set(tau):
                return False, f"{name} n={n}: {len(tops)} cubes vs {len(tau)} morphisms"
        done.append(name)
    return True, f"bijective for n<=2 on {len(done)} fixtures"


def c10():
    rng = random.Random(20261017)
    for _ in range(1000):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-4, 4) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(m)]
        U, D, V = he.smith_normal_form(M)
        if he.matmul(he.matmul(U, M), V) != D or abs(he.determinant(U)) != 1 or abs(he.determinant(V)) != 1:
            return False, f"bad transform for {M}"
        if not he.is_smith_form(D) or he.dense_invariant_factors(M) != oracles.invariant_factors_by_minors(M):
            return False, f"bad diagonal for {M}"
    for _ in range(300):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-2, 2) if rng.random() < 0.4 else 0 for _ in range(n)] for _ in range(m)]
        cols = [{i: M[i][j] for i in range(m) if M[i][j]} for j in range(n)]
        if he.rank_of(cols) != oracles.rational_rank(M):
            return False, f"rank mismatch for {M}"
        # chain complex Z^n -> Z^m -> 0: homology ranks from the rational oracle
        C = he.ChainComplex([list(range(m)), list(range(n))], {1: cols}, check=False)
        r = oracles.rational_rank(M)
        if he.homology(C, 0, witnesses=False).rank != m - r or he.homology(C, 1, witnesses=False).rank != n - r:
            return False, f"homology rank mismatch for {M}"
    return True, "1000 SNF cases and 300 rank/homology cases agree with the oracles"


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]


def evaluate(k):
    t = time.time()
    try:
        ok, detail = CRITERIA[k - 1]()
    except Exception as exc:  # a crash is a failure, reported with its type
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.time() - t
    if dt > TIME_LIMIT:
        ok, detail = False, f"{detail}; took {dt:.1f}s (limit {TIME_LIMIT:.0f}s)"
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {detail}"
    return ok, line


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k):
    ok, line = evaluate(k)
    print(line)
    assert ok, line


def main():
    results = [evaluate(k) for k in range(1, 11)]
    for _, line in results:
        print(line, flush=True)
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
