"""Window classifiers for bounded, large, thick, prethick, small and thin sets.

Every universal quantifier over radii is capped and the caps are reported in
the verdict. NO answers carry a witness that is valid in the infinite space;
YES answers are statements about the window core. Witness points are chosen
nearest to the window center, ties broken by canonical point order.

One-dimensional grids are handled on index runs; other spaces enumerate the
window carrier.
"""
from __future__ import annotations

import itertools
from typing import Any

from .pointset import (
    BallOf,
    Complement,
    Diff,
    PointSet,
    Union,
    complement_runs,
    intersect_runs,
    runs_size,
)
from .space import Ballean, Point, Window
from .verdict import Answer, Certificate, PreconditionError, Verdict, unknown

ESCAPE_CAP = 4096  # entries kept in a universal-NO escape map


def _nearest_in_runs(runs, c: int) -> int | None:
    best = None
    for a, b in runs:
        i = c if a <= c <= b else (a if c < a else b)
        cand = (abs(i - c), i)
        if best is None or cand < best:
            best = cand
    return None if best is None else best[1]


def _farthest_in_runs(runs, c: int) -> int | None:
    best = None
    for a, b in runs:
        for i in (a, b):
            cand = (abs(i - c), -i)
            if best is None or cand > best:
                best = cand
    return None if best is None else -best[1]


def _nearest(W: Window, pts) -> Point | None:
    pts = list(pts)
    return W.nearest_first(pts)[0] if pts else None


def default_rho(W: Window) -> Any:
    """Exclusion radius budget for thinness: half the window radius."""
    if isinstance(W.radius, int) and W.space.group:
        return W.radius // 2
    return W.radius / 2


# ---------------------------------------------------------------------------


def is_bounded_trace(A: PointSet, W: Window, rho: Any) -> Verdict:
    """YES iff ``A ∩ carrier(W) ⊆ ball(center, rho)``."""
    sp = W.space
    rho = sp.scale(rho)
    if not sp.scale_le(rho, W.radius):
        raise PreconditionError("bounded radius exceeds the window radius")
    scales = {"rho": rho}
    if sp.line:
        lo, hi = W.bounds
        c = sp.to_index(W.center)
        k = sp.radius_index(rho)
        runs = A.runs(lo, hi)
        outside = complement_runs([(c - k, c + k)], lo, hi)
        esc = intersect_runs(runs, outside)
        x = None if not esc else sp.from_index(_nearest_in_runs(esc, c))
        members = runs_size(runs)
    else:
        pts = A.points(W)
        members = len(pts)
        x = _nearest(W, (p for p in pts if not sp.within(W.center, p, rho)))
    if x is None:
        cert = Certificate("Cover", {"points": [W.center], "radius": rho, "members": members})
        return Verdict(Answer.YES, "bounded", scales, W, cert, f"all {members} window members lie in B(center, {rho})")
    cert = Certificate("WitnessPoint", {"point": x, "distance": W.dist(x)})
    return Verdict(Answer.NO, "bounded", scales, W, cert, f"member {x} lies beyond radius {rho}")


def is_large_at(A: PointSet, r: Any, W: Window) -> Verdict:
    """YES iff every point of ``core(W, r)`` lies in ``B(A, r)``."""
    sp = W.space
    r = sp.scale(r)
    scales = {"r": r}
    if W.core_size(r) == 0:
        return unknown("large", W, scales)
    if sp.line:
        cl, ch = W.core_bounds(r)
        k = sp.radius_index(r)
        covered = BallOf(A, r).runs(cl, ch)
        gaps = complement_runs(covered, cl, ch)
        if not gaps:
            used = A.runs(cl - k, ch + k)
            cert = Certificate(
                "Cover",
                {"cover_runs": [(sp.from_index(a), sp.from_index(b)) for a, b in used], "radius": r},
            )
            return Verdict(Answer.YES, "large", scales, W, cert, f"B(A, {r}) covers the core")
        x = sp.from_index(_nearest_in_runs(gaps, sp.to_index(W.center)))
    else:
        core = W.core(r)
        uncovered = [x for x in core if not any(A.contains(z) for z in sp.star(x, r))]
        if not uncovered:
            used = [a for a in A.points(W)]
            cert = Certificate("Cover", {"points": used, "radius": r})
            return Verdict(Answer.YES, "large", scales, W, cert, f"B(A, {r}) covers the core")
        x = _nearest(W, uncovered)
    cert = Certificate("WitnessPoint", {"point": x})
    return Verdict(Answer.NO, "large", scales, W, cert, f"core point {x} is farther than {r} from A")


def is_thick_at(A: PointSet, r: Any, W: Window) -> Verdict:
    """YES iff some ``a in A ∩ core(W, r)`` has ``ball(a, r) ⊆ A``."""
    sp = W.space
    r = sp.scale(r)
    scales = {"r": r}
    if W.core_size(r) == 0:
        return unknown("thick", W, scales)
    if sp.line:
        cl, ch = W.core_bounds(r)
        k = sp.radius_index(r)
        runs = A.runs(cl - k, ch + k)
        centers = [(max(a + k, cl), min(b - k, ch)) for a, b in runs]
        centers = [(a, b) for a, b in centers if a <= b]
        if centers:
            a = sp.from_index(_nearest_in_runs(centers, sp.to_index(W.center)))
            cert = Certificate("WitnessBall", {"center": a, "radius": r})
            return Verdict(Answer.YES, "thick", scales, W, cert, f"B({a}, {r}) ⊆ A")
        escapes = {}
        truncated = False
        for s, e in runs:
            for i in range(max(s, cl), min(e, ch) + 1):
                if len(escapes) >= ESCAPE_CAP:
                    truncated = True
                    break
                # the run is too short for a k-ball at i: one of its ends falls inside
                escapes[sp.from_index(i)] = sp.from_index(s - 1 if i - k < s else e + 1)
            if truncated:
                break
    else:
        core = W.core(r)
        escapes = {}
        for a in W.nearest_first(x for x in core if A.contains(x)):
            miss = next((y for y in sp.ball(a, r) if not A.contains(y)), None)
            if miss is None:
                cert = Certificate("WitnessBall", {"center": a, "radius": r})
                return Verdict(Answer.YES, "thick", scales, W, cert, f"B({a}, {r}) ⊆ A")
            escapes[a] = miss
        truncated = False
        if len(escapes) > ESCAPE_CAP:
            escapes = dict(itertools.islice(escapes.items(), ESCAPE_CAP))
            truncated = True
    cert = Certificate("EscapeSample", {"escapes": escapes, "truncated": truncated, "radius": r})
    return Verdict(Answer.NO, "thick", scales, W, cert, f"no ball of radius {r} around a core point of A lies in A")


def is_prethick_at(A: PointSet, r: Any, r2: Any, W: Window) -> Verdict:
    """YES iff ``B(A, r)`` is ``r2``-thick on the window."""
    sp = W.space
    r, r2 = sp.scale(r), sp.scale(r2)
    v = is_thick_at(BallOf(A, r), r2, W)
    return Verdict(
        v.answer,
        "prethick",
        {"r": r, "r2": r2},
        W,
        v.certificate,
        f"B(A, {r}) is {'' if v.yes else 'not '}{r2}-thick" if not v.unknown else v.narrative,
        reason=v.reason,
    )


def thick_profile(B: PointSet, r2_max: Any, W: Window) -> Any:
    """Least ``r' <= r2_max`` at which B is not r'-thick (None if thick at all)."""
    sp = W.space
    grid = [s for s in sp.scale_grid(r2_max) if W.core_size(s) > 0]
    # thickness is antitone in r' on nested cores: binary search the first failure
    lo, hi = 0, len(grid)
    while lo < hi:
        mid = (lo + hi) // 2
        if is_thick_at(B, grid[mid], W).yes:
            lo = mid + 1
        else:
            hi = mid
    return grid[lo] if lo < len(grid) else None


def prethick_sweep(A: PointSet, r_max: Any, r2_max: Any, W: Window) -> Verdict:
    """Capped prethickness: some ``r <= r_max`` with ``B(A, r)`` thick at every ``r' <= r2_max``."""
    sp = W.space
    r_max, r2_max = sp.scale(r_max), sp.scale(r2_max)
    scales = {"r_max": r_max, "r2_max": r2_max}
    if W.core_size(r2_max) == 0:
        return unknown("prethick", W, scales)
    failures = []
    for r in sp.scale_grid(r_max):
        v = is_thick_at(BallOf(A, r), r2_max, W)
        if v.yes:
            cert = Certificate("WitnessBall", {**v.certificate.data, "expansion": r})
            return Verdict(Answer.YES, "prethick", scales, W, cert, f"B(A, {r}) is thick up to {r2_max}")
        failures.append((r, thick_profile(BallOf(A, r), r2_max, W)))
    cert = Certificate("EscapeSample", {"first_non_thick": failures})
    return Verdict(Answer.NO, "prethick", scales, W, cert, f"no expansion r <= {r_max} is thick up to {r2_max}")


def is_small_at(A: PointSet, r: Any, r2_max: Any, W: Window) -> Verdict:
    """A is small at expansion r iff ``X \\ B(A, r)`` is r'-large for some ``r' <= r2_max``."""
    sp = W.space
    r, r2_max = sp.scale(r), sp.scale(r2_max)
    scales = {"r": r, "r2_max": r2_max}
    if W.core_size(sp.compose(r, r2_max)) == 0:
        return unknown("small", W, scales)
    B = BallOf(A, r)
    C = Complement(B)
    grid = [s for s in sp.scale_grid(r2_max) if W.core_size(s) > 0]
    # largeness is monotone in r' on nested cores
    lo, hi = 0, len(grid)
    while lo < hi:
        mid = (lo + hi) // 2
        if is_large_at(C, grid[mid], W).yes:
            hi = mid
        else:
            lo = mid + 1
    if lo < len(grid):
        r2 = grid[lo]
        v = is_large_at(C, r2, W)
        cert = Certificate("Cover", {**v.certificate.data, "r2": r2, "expansion": r})
        return Verdict(Answer.YES, "small", scales, W, cert, f"X \\ B(A, {r}) is {r2}-large")
    v = is_thick_at(B, r2_max, W)
    assert v.yes, "thick/large duality violated"
    cert = Certificate("WitnessBall", {**v.certificate.data, "expansion": r})
    return Verdict(Answer.NO, "small", scales, W, cert, f"B(A, {r}) contains a ball of radius {r2_max}")


def small_sweep(A: PointSet, r_max: Any, r2_max: Any, W: Window) -> Verdict:
    """Aggregate smallness over every expansion ``r <= r_max``."""
    sp = W.space
    r_max, r2_max = sp.scale(r_max), sp.scale(r2_max)
    scales = {"r_max": r_max, "r2_max": r2_max}
    per_r = []
    for r in sp.scale_grid(r_max):
        v = is_small_at(A, r, r2_max, W)
        if not v.yes:
            return Verdict(v.answer, "small", scales, W, v.certificate, v.narrative, reason=v.reason)
        per_r.append((r, v.certificate["r2"]))
    cert = Certificate("Cover", {"largeness_radii": per_r})
    return Verdict(Answer.YES, "small", scales, W, cert, f"every expansion r <= {r_max} has an r'-large complement, r' <= {r2_max}")


def small_duality_witness(A: PointSet, r: Any, r2: Any, W: Window) -> tuple[PointSet, Verdict]:
    """For a prethick A build ``L = A ∪ (X \\ B(A, r))``: L is r-large, L \\ A is not.

    ``L \\ A`` misses the thick ball inside ``B(A, r)``, so it is not s-large
    for any ``s <= r2 - r``.
    """
    sp = W.space
    r, r2 = sp.scale(r), sp.scale(r2)
    pre = is_prethick_at(A, r, r2, W)
    if not pre.yes:
        raise PreconditionError(f"A is not prethick at ({r}, {r2}) on this window")
    L = Union([A, Complement(BallOf(A, r))])
    L.text = f"union({A}, complement(ball({A}, {r})))"
    large = is_large_at(L, r, W)
    if not large.yes:
        raise AssertionError("L must be r-large by construction")
    D = Diff(L, A)
    upto = r2 if isinstance(r2, frozenset) else max(r2 - r, 0)
    not_large = is_large_at(D, upto, W)
    if not not_large.no:
        raise AssertionError("L \\ A must fail largeness inside the thick ball")
    cert = Certificate(
        "WitnessBall",
        {
            "center": pre.certificate["center"],
            "radius": r2,
            "L": L.text,
            "non_large_upto": upto,
            "uncovered": not_large.certificate["point"],
        },
    )
    v = Verdict(
        Answer.YES,
        "duality",
        {"r": r, "r2": r2},
        W,
        cert,
        f"L is {r}-large; L \\ A is not s-large for s <= {upto}",
    )
    return L, v


def is_thin_at(A: PointSet, r: Any, W: Window, rho_max: Any = None, domain: Any = None) -> Verdict:
    """Thin at r: outside some ``V = ball(center, rho)``, ``rho <= rho_max``,
    each core point of A is alone in its r-ball.

    ``domain`` fixes the core scale (default r) so sweeps over r can share
    one quantification domain.
    """
    sp = W.space
    r = sp.scale(r)
    rho_max = default_rho(W) if rho_max is None else sp.scale(rho_max)
    domain = r if domain is None else sp.scale(domain)
    scales = {"r": r, "rho_max": rho_max, "domain": domain}
    if W.core_size(domain) == 0:
        return unknown("thin", W, scales)
    violators: list[tuple[Point, Point]]
    if sp.line:
        cl, ch = W.core_bounds(domain)
        k = sp.radius_index(r)
        runs = A.runs(cl - k, ch + k)
        bad = []
        if k >= 1:
            for j, (a, b) in enumerate(runs):
                if b > a:
                    bad.append((a, b))
                    continue
                near_prev = j > 0 and runs[j - 1][1] >= a - k
                near_next = j + 1 < len(runs) and runs[j + 1][0] <= a + k
                if near_prev or near_next:
                    bad.append((a, a))
        bad = intersect_runs(bad, [(cl, ch)])
        c = sp.to_index(W.center)

        def companion(i: int) -> Point:
            for s, e in runs:
                if s <= i <= e and e > s:
                    return sp.from_index(i + 1 if i < e else i - 1)
            nbrs = [s for s, e in runs if abs(s - i) <= k and s != i] + [e for s, e in runs if abs(e - i) <= k and e != i]
            return sp.from_index(min(nbrs, key=lambda t: (abs(t - i), t)))

        if not bad:
            cert = Certificate("Cover", {"rho": None, "radius": r})
            return Verdict(Answer.YES, "thin", scales, W, cert, "no two points of A within r on the core; V = ∅")
        far = _farthest_in_runs(bad, c)
        rho = W.dist(sp.from_index(far))
        if sp.scale_le(rho, rho_max):
            cert = Certificate(
                "Cover",
                {"rho": rho, "radius": r, "violator": sp.from_index(far), "companion": companion(far)},
            )
            return Verdict(Answer.YES, "thin", scales, W, cert, f"V = B(center, {rho}) isolates A at radius {r}")
        k_rho = sp.radius_index(rho_max)
        beyond = intersect_runs(bad, complement_runs([(c - k_rho, c + k_rho)], cl, ch))
        x = _nearest_in_runs(beyond, c)
        cert = Certificate("Companion", {"point": sp.from_index(x), "companion": companion(x), "radius": r})
        return Verdict(Answer.NO, "thin", scales, W, cert, f"{sp.from_index(x)} has a companion within {r} beyond {rho_max}")
    D = W.core(domain)
    violators = []
    for a in D:
        if not A.contains(a):
            continue
        comp = [b for b in sp.ball(a, r) if b != a and A.contains(b)]
        if comp:
            violators.append((a, min(comp, key=lambda b: (sp.min_scale(a, b), sp.key(b)))))
    if not violators:
        cert = Certificate("Cover", {"rho": None, "radius": r})
        return Verdict(Answer.YES, "thin", scales, W, cert, "no two points of A within r on the core; V = ∅")
    rho = max(W.dist(a) for a, _ in violators)
    far_a, far_b = min((ab for ab in violators if W.dist(ab[0]) == rho), key=lambda ab: sp.key(ab[0]))
    if sp.scale_le(rho, rho_max):
        cert = Certificate("Cover", {"rho": rho, "radius": r, "violator": far_a, "companion": far_b})
        return Verdict(Answer.YES, "thin", scales, W, cert, f"V = B(center, {rho}) isolates A at radius {r}")
    beyond = [ab for ab in violators if not sp.scale_le(W.dist(ab[0]), rho_max)]
    a, b = min(beyond, key=lambda ab: (W.dist(ab[0]), sp.key(ab[0])))
    cert = Certificate("Companion", {"point": a, "companion": b, "radius": r})
    return Verdict(Answer.NO, "thin", scales, W, cert, f"{a} has a companion within {r} beyond {rho_max}")


# ---------------------------------------------------------------------------
# asden


EXACT_LIMIT = 24


def asden_at(space: Ballean, r: Any, W: Window, cover: str = "core") -> tuple[int, Verdict]:
    """Least number of r-balls centred in ``carrier(W)`` covering ``core(W, r)``.

    ``cover='carrier'`` covers the whole carrier instead. Exact on line grids
    (interval cover) and on carriers of at most 24 points (branch and bound);
    otherwise the greedy count is returned with the packing lower bound and
    ``exact=False``.
    """
    if W.space is not space:
        raise ValueError("window belongs to a different space")
    sp = space
    r = sp.scale(r)
    if cover not in ("core", "carrier"):
        raise ValueError("cover must be 'core' or 'carrier'")
    scales = {"r": r}
    if sp.line:
        lo, hi = W.bounds
        tl, th = W.core_bounds(r) if cover == "core" else (lo, hi)
        if tl > th:
            raise PreconditionError("asden needs a nonempty core")
        k = sp.radius_index(r)
        centers = []
        p = tl
        while p <= th:
            c = min(p + k, hi)
            centers.append(c)
            p = c + k + 1
        packing = len(range(tl, th + 1, 2 * k + 1))
        count = len(centers)
        cert = Certificate(
            "Cover",
            {
                "points": [sp.from_index(c) for c in centers],
                "radius": r,
                "exact": True,
                "upper": count,
                "lower": packing,
                "target": cover,
            },
        )
        return count, Verdict(Answer.YES, "asden", scales, W, cert, f"{count} balls of radius {r} cover the {cover}")
    targets = list(W.core(r)) if cover == "core" else list(W.carrier)
    if not targets:
        raise PreconditionError("asden needs a nonempty core")
    centers = list(W.carrier)
    tindex = {t: i for i, t in enumerate(targets)}
    masks = []
    for c in centers:
        m = 0
        for y in sp.ball(c, r):
            if y in tindex:
                m |= 1 << tindex[y]
        masks.append(m)
    full = (1 << len(targets)) - 1
    greedy = _greedy_cover(masks, full, len(targets))
    lower = _packing(sp, targets, W, r)
    exact = len(centers) <= EXACT_LIMIT
    best = _exact_cover(masks, full, len(targets), len(greedy)) if exact else greedy
    count = len(best)
    cert = Certificate(
        "Cover",
        {
            "points": [centers[i] for i in best],
            "radius": r,
            "exact": exact,
            "upper": len(greedy),
            "lower": lower,
            "target": cover,
        },
    )
    label = None if exact else "APPROXIMATE"
    return count, Verdict(Answer.YES, "asden", scales, W, cert, f"{count} balls of radius {r} cover the {cover}", label=label)


def _greedy_cover(masks: list[int], full: int, n: int) -> list[int]:
    chosen = []
    covered = 0
    while covered != full:
        t = next(i for i in range(n) if not covered >> i & 1)
        best = max(
            (i for i, m in enumerate(masks) if m >> t & 1),
            key=lambda i: (bin(masks[i] & ~covered).count("1"), -i),
        )
        chosen.append(best)
        covered |= masks[best]
    return chosen


def _exact_cover(masks: list[int], full: int, n: int, bound: int) -> list[int]:
    best: list[list[int]] = [None]  # type: ignore[list-item]
    best_len = [bound + 1]

    def go(covered: int, chosen: list[int]) -> None:
        if covered == full:
            if len(chosen) < best_len[0]:
                best_len[0] = len(chosen)
                best[0] = list(chosen)
            return
        if len(chosen) + 1 >= best_len[0]:
            return
        t = next(i for i in range(n) if not covered >> i & 1)
        opts = sorted(
            (i for i, m in enumerate(masks) if m >> t & 1),
            key=lambda i: (-bin(masks[i] & ~covered).count("1"), i),
        )
        for i in opts:
            chosen.append(i)
            go(covered | masks[i], chosen)
            chosen.pop()

    go(0, [])
    return best[0]


def _packing(sp: Ballean, targets: list, W: Window, r: Any) -> int:
    """Targets whose star sets are pairwise disjoint need distinct centres."""
    cs = W.carrier_set
    used: set = set()
    count = 0
    for t in targets:
        st = {c for c in sp.star(t, r) if c in cs}
        if not st & used:
            used |= st
            count += 1
    return count
