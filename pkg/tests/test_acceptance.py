"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every criterion is checked twice where possible: the library answer at the
stated scale, and a brute-force oracle from ``oracles.py`` at a scale small
enough for literal loops.
"""
import random
import time
from fractions import Fraction
from pathlib import Path

import oracles as O
import pytest
from conftest import ACCEPTANCE

from coarsekit import FiniteMetric, GraphMetric, IntegerGrid, RationalGrid, Window, ZdGroup
from coarsekit.classify import (
    is_bounded_trace,
    is_large_at,
    is_small_at,
    is_thick_at,
    is_thin_at,
    small_sweep,
)
from coarsekit.cli import main as cli_main
from coarsekit.ideals import closure_ball_invariant, prop3_split
from coarsekit.pointset import Complement, Explicit, ball_of_set, geom, seq
from coarsekit.recurrence import ShiftFamily, band_bounds, sparse_verdict, sparsity_index
from coarsekit.wobbling import decompose, is_ulf_at, verify_cover

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def report(n, title, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n} {status}  {title}: {detail} ({elapsed:.1f}s, limit {limit}s)"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line
    assert within, line


def to_set(ans):
    return {"YES": True, "NO": False, "UNKNOWN": None}[ans.value]


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_sparse_under_grid_refinement():
    t0 = time.perf_counter()
    steps = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    grids = [RationalGrid(h) for h in steps]
    windows = [Window(g, 0, 2**20) for g in grids]
    shifts = [ShiftFamily.offsets(g, -1, 1) for g in grids]
    A = [geom(g, 2) for g in grids]
    B = [ball_of_set(a, 1) for a in A]
    va = sparse_verdict(A, shifts, windows, 8)
    vb = sparse_verdict(B, shifts, windows, 8)
    ok = (
        va.label == "SPARSE-EVIDENCE"
        and va.certificate["mu"] == [1, 1, 1]
        and vb.label == "NOT-SPARSE"
        and tuple(vb.certificate["mu"]) == (5, 9, 17)
    )
    elapsed = time.perf_counter() - t0
    report(1, "sparsity trend under grid refinement 1/2, 1/4, 1/8", ok, f"A mu={va.certificate['mu']} {va.label}, ball(A,1) mu={vb.certificate['mu']} {vb.label}", elapsed, 30)


@pytest.mark.parametrize("h", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
def test_criterion_1_oracle_small_window(h):
    g = RationalGrid(h)
    W = Window(g, 0, 2**9)
    S = ShiftFamily.offsets(g, -1, 1)
    offs = [s.d for s in S]
    two = O.power_of(2)
    for member, X in ((two, geom(g, 2)), (O.expand(two, 1, h), ball_of_set(geom(g, 2), 1))):
        mu, _ = sparsity_index(X, S, W, 8)
        assert mu == O.mu_scan(member, offs, 2**9, 8, h)


# -- 2 ------------------------------------------------------------------------


def _mu_int(A, lo, hi, W, bands=8):
    return sparsity_index(A, ShiftFamily.offsets(W.space, lo, hi), W, bands)[0]


def test_criterion_2_subadditivity():
    t0 = time.perf_counter()
    Z = IntegerGrid()
    W = Window(Z, 0, 2**16)
    sets = {"2^n": geom(Z, 2), "n^2": seq(Z, lambda n: n * n, "seq(n^2)")}
    rows = []
    ok = True
    for name, A in sets.items():
        for r in (1, 2, 4):
            B = ball_of_set(A, r)
            for s in (1, 2, 4, 8):
                lhs = _mu_int(B, -s, s, W)
                rhs = (2 * r + 1) * _mu_int(A, -s - r, s + r, W)
                rows.append((name, r, s, lhs, rhs))
                ok = ok and lhs is not None and lhs <= rhs
    # no false NOT-SPARSE: the 2-ball of {2^n} keeps mu = 5 as ranges double
    shifts = [ShiftFamily.offsets(Z, -(2**k), 2**k) for k in range(1, 5)]
    wins = [Window(Z, 0, 2 ** (16 + 2 * i)) for i in range(4)]
    v = sparse_verdict(ball_of_set(geom(Z, 2), 2), shifts, wins, 8)
    ok = ok and v.label == "SPARSE-EVIDENCE" and v.certificate["mu"] == [5, 5, 5, 5]
    worst = max(rows, key=lambda t: Fraction(t[3], t[4]))
    elapsed = time.perf_counter() - t0
    report(2, "expansion subadditivity", ok, f"{len(rows)} cases, tightest {worst}, ball(2^n,2) mu={v.certificate['mu']} {v.label}", elapsed, 30)


@pytest.mark.parametrize("name,member", [("2^n", O.power_of(2)), ("n^2", O.is_square)])
@pytest.mark.parametrize("r", [1, 2])
def test_criterion_2_oracle_small_window(name, member, r):
    Z = IntegerGrid()
    W = Window(Z, 0, 2**12)
    A = geom(Z, 2) if name == "2^n" else seq(Z, lambda n: n * n, "seq(n^2)")
    for s in (1, 4):
        assert _mu_int(ball_of_set(A, r), -s, s, W) == O.mu_scan(O.expand(member, r), range(-s, s + 1), 2**12, 8)
        assert _mu_int(A, -s - r, s + r, W) == O.mu_scan(member, range(-s - r, s + r + 1), 2**12, 8)


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_greedy_split():
    t0 = time.perf_counter()
    Z = IntegerGrid()
    W = Window(Z, 0, 2**20)
    A = geom(Z, 2)
    I = closure_ball_invariant([A], True, 8)
    res = prop3_split(A, I, W, 8)
    powers = [2**n for n in range(21)]
    expected = O.greedy_disjoint(sorted(powers, key=lambda x: (abs(x), x)))
    prefix_ok = res.a_seq[:7] == [1, 4, 8, 16, 32, 64, 128] and res.a_seq == expected
    # disjointness re-checked with plain intervals
    ivs = [(a - n, a + n) for n, a in enumerate(res.a_seq)]
    disjoint = all(ivs[i][1] < ivs[j][0] or ivs[j][1] < ivs[i][0] for i in range(len(ivs)) for j in range(i))
    A0 = res.a_seq[0::2]
    A1 = set(res.a_seq[1::2])
    wit = res.verdict.certificate["A1_not_in_J"]
    wit_ok = [w["r"] for w in wit] == list(range(9))
    for w in wit:
        x = w["witness"]
        wit_ok = wit_ok and x in A1 and x != 0 and all(abs(x - a) > w["r"] for a in A0)
    ok = res.verdict.yes and prefix_ok and disjoint and wit_ok
    elapsed = time.perf_counter() - t0
    report(3, "greedy disjoint-ball split", ok, f"prefix {res.a_seq[:8]}..., {len(res.a_seq)} terms, witnesses {[w['witness'] for w in wit]}", elapsed, 10)


# -- 4 ------------------------------------------------------------------------


def corpus(seed=2024, count=200):
    """Random finite spaces with a window (center, radius) and an oracle matrix."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(2, 12) if i % 2 == 0 else rng.randint(13, 24)
        kind, payload, d = O.random_metric(rng, n)
        if kind == "graph":
            sp = GraphMetric.from_edges(payload, range(n))
        else:
            sp = FiniteMetric(payload)
        dists = sorted({v for row in d for v in row})
        c = rng.randrange(n)
        R = rng.choice(dists[1:] + [max(d[c])])
        out.append((sp, O.Metric(d), c, R, dists, rng))
    return out


def subsets(n, rng):
    if n <= 12:
        for mask in range(1 << n):
            yield {i for i in range(n) if mask >> i & 1}
    else:
        for _ in range(500):
            yield {i for i in range(n) if rng.random() < rng.choice([0.2, 0.5, 0.8])}


def test_criterion_4_classifier_oracles():
    t0 = time.perf_counter()
    checked = 0
    mismatches = []
    for sp, M, c, R, dists, rng in corpus():
        W = Window(sp, c, R)
        small = [v for v in dists if v <= R]
        for A in subsets(M.n, rng):
            X = Explicit(sp, sorted(A))
            r = rng.choice(small)
            rho = rng.choice(small)
            rho_max = rng.choice(small)
            got = (
                to_set(is_large_at(X, r, W).answer),
                to_set(is_thick_at(X, r, W).answer),
                to_set(is_thin_at(X, r, W, rho_max).answer),
                to_set(is_bounded_trace(X, W, rho).answer),
            )
            want = (
                O.large(M, A, r, c, R),
                O.thick(M, A, r, c, R),
                O.thin(M, A, r, c, R, rho_max),
                O.bounded(M, A, c, R, rho),
            )
            checked += 1
            if got != want:
                mismatches.append((sp, sorted(A), r, got, want))
    elapsed = time.perf_counter() - t0
    report(4, "classifier/oracle agreement", not mismatches, f"{checked} subsets x 4 classifiers, {len(mismatches)} mismatches", elapsed, 120)


# -- 5 ------------------------------------------------------------------------


def test_criterion_5_thick_large_duality():
    t0 = time.perf_counter()
    checked = 0
    bad = []
    for sp, M, c, R, dists, rng in corpus(seed=7):
        W = Window(sp, c, R)
        sweep = [v for v in dists if v <= 8]
        for A in list(subsets(M.n, rng))[:: max(1, (1 << min(M.n, 12)) // 64)]:
            B = Explicit(sp, sorted(A))
            for r in sweep:
                thick = is_thick_at(B, r, W).answer.value
                large = is_large_at(Complement(B), r, W).answer.value
                checked += 1
                if (thick == "YES") != (large == "NO") or (thick == "UNKNOWN") != (large == "UNKNOWN"):
                    bad.append((sp, sorted(A), r, thick, large))
    Z = IntegerGrid()
    rng = random.Random(11)
    for _ in range(120):
        R = rng.choice([16, 64, 256])
        W = Window(Z, 0, R)
        runs, x = [], -R - 8
        while x < R + 8:
            ln = rng.randint(1, 20)
            if rng.random() < 0.5:
                runs.append((x, x + ln - 1))
            x += ln + rng.randint(1, 12)
        B = Explicit(Z, [p for a, b in runs for p in range(a, b + 1)])
        member = B.contains
        for r in range(9):
            thick = is_thick_at(B, r, W).answer.value
            large = is_large_at(Complement(B), r, W).answer.value
            checked += 1
            if (thick == "YES") != (large == "NO") or thick != ("YES" if O.line_thick(member, r, R) else "NO"):
                bad.append(("Z", R, runs, r, thick, large))
    elapsed = time.perf_counter() - t0
    report(5, "thick/large complement duality", not bad, f"{checked} (set, r') pairs, {len(bad)} disagreements", elapsed, 60)


# -- 6 ------------------------------------------------------------------------


def test_criterion_6_small_set_suite():
    t0 = time.perf_counter()
    Z = IntegerGrid()
    W = Window(Z, 0, 2**16)
    sets = {"2^n": geom(Z, 2), "n^2": seq(Z, lambda n: n * n, "seq(n^2)")}
    failures = []
    for name, A in sets.items():
        if not small_sweep(A, 8, 64, W).yes:
            failures.append((name, "sweep"))
        for r in range(9):
            B = ball_of_set(A, r)
            if not is_small_at(B, 0, 64, W).yes:
                failures.append((name, r, "direct"))
            # total expansion r + e stays within the cap 8
            if not small_sweep(B, 8 - r, 64, W).yes:
                failures.append((name, r, "compatible sweep"))
    elapsed = time.perf_counter() - t0
    report(6, "small-set suite", not failures, f"2 sets x 9 radii, failures {failures}", elapsed, 60)


def test_criterion_6_strict_reading_is_recorded():
    """A full 8/64 sweep on ball({n^2}, r) needs r + e < 10; the answer is frozen here."""
    Z = IntegerGrid()
    W = Window(Z, 0, 2**16)
    A = seq(Z, lambda n: n * n, "seq(n^2)")
    B2 = ball_of_set(A, 2)
    v = is_small_at(B2, 8, 64, W)
    assert v.no
    # the witness ball sits in the block B(A, 10) ⊇ [-10, 131]
    c = v.certificate["center"]
    assert all(O.expand(O.is_square, 10)(x) for x in range(c - 64, c + 65))
    assert is_small_at(B2, 7, 64, W).yes
    assert small_sweep(B2, 8, 256, W).yes
    assert small_sweep(ball_of_set(geom(Z, 2), 8), 8, 64, W).yes


# -- 7 ------------------------------------------------------------------------


def _oracle_cover(F, W, rel, core):
    """Both properties from explicit pair sets: rel(x) is the r-ball relation at x."""
    maps = [g.pairs for g in F.maps]
    if not all(O.is_partial_bijection(m) for m in maps):
        return False
    for x in core:
        imgs = {m[x] for m in maps if x in m}
        if not rel(x) <= imgs or not imgs <= rel(x):
            return False
    return True


def test_criterion_7_wobbling():
    t0 = time.perf_counter()
    notes = []
    ok = True
    Z = IntegerGrid()
    W = Window(Z, 0, 4096)
    for r in range(1, 9):
        F = decompose(Z, r, W)
        v = verify_cover(F, r, W)
        good = v.yes and len(F) == 2 * r + 1
        if r in (1, 8):
            core = range(-4096 + r, 4097 - r)
            good = good and _oracle_cover(F, W, lambda x: set(range(x - r, x + r + 1)), core)
        ok = ok and good
    notes.append("Z r<=8 sizes 2r+1")
    Z2 = ZdGroup(2)
    for r in (1, 2):
        W2 = Window(Z2, (0, 0), 6)
        F = decompose(Z2, r, W2)
        v = verify_cover(F, r, W2)
        _, m = is_ulf_at(Z2, r, W2)
        core = [x for x in O.zd_word_ball((0, 0), 6) if sum(map(abs, x)) + r <= 6]
        ok = ok and v.yes and len(F) <= 2 * m + 1
        ok = ok and _oracle_cover(F, W2, lambda x: set(O.zd_word_ball(x, r)), core)
        notes.append(f"Z^2 r={r} size {len(F)} (m={m})")
    rng = random.Random(5)
    sizes = []
    for _ in range(50):
        n = rng.randint(6, 40)
        edges = O.random_connected_edges(rng, n, extra=1.5, max_degree=8)
        G = GraphMetric.from_edges(edges, range(n))
        d = O.floyd(n, [(u, v, 1) for u, v in edges])
        r = rng.choice([1, 2])
        ecc = max(d[0])
        Wg = Window(G, 0, ecc)
        F = decompose(G, r, Wg)
        v = verify_cover(F, r, Wg)
        _, m = is_ulf_at(G, r, Wg)
        core = range(n)
        ok = ok and v.yes and len(F) <= 2 * m + 1
        ok = ok and _oracle_cover(F, Wg, lambda x: {y for y in range(n) if d[x][y] <= r}, core)
        sizes.append(len(F))
    notes.append(f"50 graphs, family sizes {min(sizes)}..{max(sizes)}")
    elapsed = time.perf_counter() - t0
    report(7, "wobbling decomposition", ok, "; ".join(notes), elapsed, 60)


# -- 8 ------------------------------------------------------------------------


def thin_sets(seed=8, count=40):
    rng = random.Random(seed)
    for _ in range(count):
        a = rng.randint(1, 64)
        pts = []
        while a <= 2**20:
            pts.append(a)
            a = 2 * a + rng.randint(0, 8)
        if rng.random() < 0.5:
            pts += [-p for p in pts[rng.randint(0, 3):]]
        yield sorted(pts)


def test_criterion_8_thin_index_one():
    t0 = time.perf_counter()
    Z = IntegerGrid()
    W = Window(Z, 0, 2**20)
    S = ShiftFamily.offsets(Z, -8, 8)
    first = band_bounds(2**20 - 8, 8)[0]
    mus = []
    tested = 0
    for pts in thin_sets():
        A = Explicit(Z, pts)
        v = is_thin_at(A, 8, W, first, 8)
        if not v.yes:
            continue
        tested += 1
        mu, _ = sparsity_index(A, S, W, 8)
        mus.append(mu)
    ok = tested >= 30 and all(m == 1 for m in mus)
    elapsed = time.perf_counter() - t0
    report(8, "thin implies index 1", ok, f"{tested} thin sets, mu values {sorted(set(mus), key=str)}", elapsed, 30)


# -- 9 ------------------------------------------------------------------------


def test_criterion_9_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    same = []
    for prog in sorted(PROGRAMS.glob("*.bl")):
        outs = []
        for k in range(2):
            dest = tmp_path / f"{prog.stem}.{k}.json"
            code = cli_main(["run", str(prog), "--json", str(dest)])
            assert code == 0, prog
            outs.append(dest.read_bytes())
        same.append((prog.name, outs[0] == outs[1]))
    capsys.readouterr()
    ok = bool(same) and all(s for _, s in same)
    elapsed = time.perf_counter() - t0
    report(9, "byte-identical reports", ok, ", ".join(f"{n}={'same' if s else 'DIFF'}" for n, s in same), elapsed, 120)
