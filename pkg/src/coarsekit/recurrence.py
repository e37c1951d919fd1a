"""Translate patterns, recurrent pattern width and the sparse trend test.

For a point ``x`` and a finite family ``S`` of shifts, the pattern
``P(x) = {g in S : g(x) in A}`` records which translates of ``x`` land in
``A``. The window core is cut into doubling annuli around the center; the
width ``mu`` is the largest ``F ⊆ S`` contained in some pattern of every band
beyond the innermost one. Bounded ``mu`` under growing shift families and
windows is evidence of sparseness; steady growth refutes it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .pointset import BallOf, PointSet, complement_runs, intersect_runs
from .space import Ballean, GroupBallean, Point, Window, as_fraction, norm
from .verdict import Answer, Certificate, PreconditionError, Verdict, jsonable, unknown
from .wobbling import PartialMap, WobblingFamily

MAX_CANDIDATES = 2_000_000
MAX_FOLD = 20_000


# ---------------------------------------------------------------------------
# shifts


class Shift:
    label: str

    def __call__(self, x: Point) -> Point | None:
        raise NotImplementedError

    def key(self) -> Any:
        return self.label

    def displacement(self, space: Ballean) -> Any:
        raise NotImplementedError

    def is_identity(self) -> bool:
        return False


class Offset(Shift):
    """``x -> x + d`` on a grid (``d`` a tuple on ℤ^d)."""

    def __init__(self, d: Any):
        self.d = d
        self.label = jsonable(d) if not isinstance(d, tuple) else jsonable(list(d))

    def __call__(self, x: Point) -> Point:
        if isinstance(x, tuple):
            return tuple(a + b for a, b in zip(x, self.d))
        if type(x) is int and type(self.d) is int:
            return x + self.d
        return norm(as_fraction(x) + as_fraction(self.d))

    def key(self) -> Any:
        return self.d

    def displacement(self, space: Ballean) -> Any:
        return space.min_scale(space.origin(), self.d)

    def is_identity(self) -> bool:
        return not any(self.d) if isinstance(self.d, tuple) else self.d == 0


class GroupShift(Shift):
    """Left multiplication ``x -> g·x``; ``g·x`` lies in ``B(x, F)`` iff ``g in F``."""

    def __init__(self, G: GroupBallean, g: Point):
        self.G = G
        self.g = g
        fmt = getattr(G, "format_word", None)
        self.label = fmt(g) if fmt else jsonable(g)

    def __call__(self, x: Point) -> Point:
        return self.G.mul(self.g, x)

    def key(self) -> Any:
        return self.G.key(self.g)

    def displacement(self, space: Ballean) -> Any:
        return space.word_length(self.g)

    def is_identity(self) -> bool:
        return self.g == self.G.e


class MapShift(Shift):
    """A partial bijection from a wobbling family; undefined off its domain."""

    def __init__(self, g: PartialMap):
        self.g = g
        self.label = g.label

    def __call__(self, x: Point) -> Point | None:
        return self.g(x)

    def key(self) -> Any:
        return self.label

    def displacement(self, space: Ballean) -> Any:
        return self.g.displacement

    def is_identity(self) -> bool:
        return self.g.label == "id"


class ShiftFamily:
    """Distinct shifts with the identity first."""

    def __init__(self, space: Ballean, elements: Sequence[Shift]):
        self.space = space
        seen = set()
        ident, rest = [], []
        for s in elements:
            k = s.key()
            if k in seen:
                continue
            seen.add(k)
            (ident if s.is_identity() else rest).append(s)
        if len(ident) != 1:
            raise ValueError("a shift family needs exactly one identity")
        self.elements: list[Shift] = ident + rest

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def labels(self) -> list:
        return [s.label for s in self.elements]

    def max_displacement(self) -> Any:
        return max(s.displacement(self.space) for s in self.elements)

    def to_json(self) -> dict:
        return {"size": len(self), "max_displacement": jsonable(self.max_displacement())}

    @classmethod
    def offsets(cls, space: Ballean, lo: Any, hi: Any) -> "ShiftFamily":
        """All grid points of ``[lo, hi]`` (line spaces) as additive offsets."""
        if not space.line:
            raise ValueError("offset ranges need a line space")
        a = -((-as_fraction(lo)) // space.step)
        b = as_fraction(hi) // space.step
        if not a <= 0 <= b:
            raise ValueError("offset range must contain 0")
        return cls(space, [Offset(space.from_index(i)) for i in sorted(range(int(a), int(b) + 1), key=abs)])

    @classmethod
    def box(cls, space: Ballean, k: int) -> "ShiftFamily":
        """Offsets ``{-k..k}^d`` on ℤ^d."""
        import itertools

        vecs = itertools.product(range(-k, k + 1), repeat=space.dim)
        return cls(space, [Offset(v) for v in sorted(vecs, key=lambda v: (max(map(abs, v)), v))])

    @classmethod
    def group_ball(cls, G: GroupBallean, k: int) -> "ShiftFamily":
        return cls(G, [GroupShift(G, g) for g in G.sort(G.word_ball(k))])

    @classmethod
    def wobbling(cls, F: WobblingFamily) -> "ShiftFamily":
        return cls(F.space, [MapShift(g) for g in F.maps])


def pattern(A: PointSet, x: Point, S: ShiftFamily, skipped: list | None = None) -> frozenset:
    """Indices (into ``S``) of the shifts taking ``x`` into ``A``."""
    out = []
    for i, g in enumerate(S.elements):
        y = g(x)
        if y is None:
            if skipped is not None:
                skipped.append(i)
            continue
        if A.contains(y):
            out.append(i)
    return frozenset(out)


# ---------------------------------------------------------------------------
# bands and the width mu


@dataclass
class PatternProfile:
    labels: list
    bounds: list
    patterns: list = field(default_factory=list)
    recurrent: list = field(default_factory=list)
    mu: int | None = None
    empty_bands: list = field(default_factory=list)

    def to_json(self) -> dict:
        def names(p):
            return [self.labels[i] for i in sorted(p)]

        bands = []
        for k, table in enumerate(self.patterns):
            rows = sorted(table.items(), key=lambda kv: (-len(kv[0]), sorted(kv[0])))
            bands.append(
                {
                    "band": k,
                    "outer": jsonable(self.bounds[k]),
                    "patterns": [{"pattern": names(p), "count": n} for p, n in rows],
                }
            )
        return {
            "mu": self.mu,
            "recurrent": [names(p) for p in self.recurrent],
            "empty_bands": self.empty_bands,
            "bands": bands,
        }


def band_bounds(outer: Any, bands: int, integral: bool = False) -> list:
    """Outer radii of ``bands`` doubling annuli ending at ``outer``."""
    if integral:
        return [outer >> (bands - 1 - k) for k in range(bands)]
    return [norm(Fraction(outer) / 2 ** (bands - 1 - k)) for k in range(bands)]


def _band_of(d: Any, bounds: list) -> int:
    for k, b in enumerate(bounds):
        if d <= b:
            return k
    return len(bounds)


def _candidates(A: PointSet, S: ShiftFamily, W: Window, disp: Any) -> list:
    """Core points whose pattern may be nonempty: ``a - g`` for ``a`` in ``A``."""
    sp = W.space
    if sp.line and all(isinstance(g, Offset) for g in S):
        cl, ch = W.core_bounds(disp)
        k = sp.radius_index(disp)
        runs = A.runs(cl - k, ch + k)
        total = sum(b - a + 1 for a, b in runs) * len(S)
        if total > MAX_CANDIDATES:
            raise PreconditionError(f"too many candidate points ({total}); shrink the window")
        idx = set()
        offs = [sp.to_index(g.d) for g in S.elements]
        for a, b in runs:
            for i in range(a, b + 1):
                for o in offs:
                    j = i - o
                    if cl <= j <= ch:
                        idx.add(j)
        return [sp.from_index(i) for i in sorted(idx)]
    return list(W.core(disp))


def _fold(bands: list[set]) -> list[frozenset]:
    """Maximal sets contained in some pattern of every band."""
    cur = _maximal(bands[0])
    for pats in bands[1:]:
        nxt = {f & p for f in cur for p in pats}
        nxt.discard(frozenset())
        cur = _maximal(nxt)
        if len(cur) > MAX_FOLD:
            raise PreconditionError("pattern fold too large")
        if not cur:
            break
    return cur


def _maximal(sets) -> list[frozenset]:
    out: list[frozenset] = []
    for s in sorted(set(sets), key=len, reverse=True):
        if not any(s <= t for t in out):
            out.append(s)
    return sorted(out, key=lambda s: (-len(s), sorted(s)))


def sparsity_index(A: PointSet, S: ShiftFamily, W: Window, bands: int = 8) -> tuple[int | None, PatternProfile]:
    """``(mu, profile)``; ``mu`` is None when some outer band holds no pattern."""
    if bands < 3:
        raise ValueError("at least three bands are needed")
    sp = W.space
    disp = S.max_displacement()
    if W.core_size(disp) == 0:
        raise PreconditionError("window core is empty at the shift displacement")
    if sp.line:
        cl, ch = W.core_bounds(disp)
        c = sp.to_index(W.center)
        outer = sp.from_index(min(c - cl, ch - c))
    else:
        outer = max(W.dist(x) for x in W.core(disp))
    integral = isinstance(sp, GroupBallean)
    bounds = band_bounds(outer, bands, integral)
    tables: list[dict] = [{} for _ in range(bands)]
    fast = sp.line and all(isinstance(g, Offset) for g in S)
    if fast:
        # same patterns as pattern(), read off the index runs of A
        cl, ch = W.core_bounds(disp)
        kd = sp.radius_index(disp)
        inA = {i for a, b in A.runs(cl - kd, ch + kd) for i in range(a, b + 1)}
        offs = list(enumerate(sp.to_index(g.d) for g in S.elements))
    for x in _candidates(A, S, W, disp):
        k = _band_of(W.dist(x), bounds)
        if k >= bands:
            continue
        if fast:
            j = sp.to_index(x)
            p = frozenset(i for i, o in offs if j + o in inA)
        else:
            p = pattern(A, x, S)
        if p:
            tables[k][p] = tables[k].get(p, 0) + 1
    prof = PatternProfile(S.labels, bounds, tables)
    prof.empty_bands = [k for k in range(1, bands) if not tables[k]]
    if prof.empty_bands:
        return None, prof
    prof.recurrent = _fold([set(t) for t in tables[1:]])
    prof.mu = max((len(f) for f in prof.recurrent), default=0)
    return prof.mu, prof


def _broadcast(xs: Any, n: int, what: str) -> list:
    xs = list(xs) if isinstance(xs, (list, tuple)) else [xs]
    if len(xs) == 1:
        return xs * n
    if len(xs) != n:
        raise ValueError(f"{what} schedule has {len(xs)} entries, expected {n}")
    return xs


def _step_of(sp: Ballean) -> Any:
    return getattr(sp, "step", None) if sp.line else None


def sparse_verdict(
    A: PointSet | Sequence[PointSet],
    shifts: Sequence[ShiftFamily],
    windows: Sequence[Window],
    bands: int = 8,
) -> Verdict:
    """Trend of ``mu`` along a growing schedule.

    Constant ``mu`` is SPARSE-EVIDENCE (YES); ``mu`` strictly increasing over
    at least three steps is NOT-SPARSE (NO); anything else is UNKNOWN.
    """
    n = max(len(x) if isinstance(x, (list, tuple)) else 1 for x in (A, shifts, windows))
    if n < 2:
        raise ValueError("a schedule needs at least two steps")
    As = _broadcast(A, n, "set")
    Ss = _broadcast(shifts, n, "shift")
    Ws = _broadcast(windows, n, "window")
    for i in range(1, n):
        prev = (len(Ss[i - 1]), Ws[i - 1].radius, _step_of(Ws[i - 1].space))
        cur = (len(Ss[i]), Ws[i].radius, _step_of(Ws[i].space))
        grows = [cur[0] >= prev[0], Ws[i - 1].space.scale_le(prev[1], cur[1])]
        if prev[2] is not None and cur[2] is not None:
            grows.append(cur[2] <= prev[2])
        if not all(grows) or cur == prev:
            raise PreconditionError(f"schedule step {i} does not grow")
    mus, profiles = [], []
    for a, s, w in zip(As, Ss, Ws):
        mu, prof = sparsity_index(a, s, w, bands)
        mus.append(mu)
        profiles.append(prof)
    scales = {"bands": bands, "shift_sizes": [len(s) for s in Ss], "windows": [w.radius for w in Ws]}
    if steps := [k for k, w in enumerate(Ws) if _step_of(w.space) is not None]:
        scales["grid_steps"] = [_step_of(Ws[k].space) for k in steps]
    recurrent = [[[p.labels[i] for i in sorted(f)] for f in p.recurrent] for p in profiles]
    cert = Certificate("Chain", {"mu": mus, "recurrent": recurrent})
    window = Ws[-1]
    if any(m is None for m in mus):
        k = mus.index(None)
        return Verdict(
            Answer.UNKNOWN,
            "sparse",
            scales,
            window,
            cert,
            f"step {k} has empty bands {profiles[k].empty_bands}",
            reason="empty-band",
        )
    if len(set(mus)) == 1:
        return Verdict(Answer.YES, "sparse", scales, window, cert, f"mu stays {mus[0]} along the schedule", label="SPARSE-EVIDENCE")
    if n >= 3 and all(a < b for a, b in zip(mus, mus[1:])):
        return Verdict(Answer.NO, "sparse", scales, window, cert, f"mu grows {tuple(mus)}", label="NOT-SPARSE")
    return Verdict(Answer.UNKNOWN, "sparse", scales, window, cert, f"no clear trend in mu {tuple(mus)}", reason="no-trend")


# ---------------------------------------------------------------------------
# linked sets


def parallel_linked_at(A: PointSet, B: PointSet, r: Any, W: Window) -> Verdict:
    """``A ⊆ B(B, r)`` and ``B ⊆ B(A, r)`` on ``core(W, r)``."""
    sp = W.space
    r = sp.scale(r)
    scales = {"r": r}
    if W.core_size(r) == 0:
        return unknown("linked", W, scales)
    esc: list[tuple[Point, str]] = []
    if sp.line:
        cl, ch = W.core_bounds(r)
        for name, X, Y in (("A", A, B), ("B", B, A)):
            runs = intersect_runs(X.runs(cl, ch), complement_runs(BallOf(Y, r).runs(cl, ch), cl, ch))
            if runs:
                from .classify import _nearest_in_runs

                esc.append((sp.from_index(_nearest_in_runs(runs, sp.to_index(W.center))), name))
    else:
        core = W.core(r)
        for name, X, Y in (("A", A, B), ("B", B, A)):
            far = [x for x in core if X.contains(x) and not any(Y.contains(y) for y in sp.star(x, r))]
            if far:
                esc.append((W.nearest_first(far)[0], name))
    if not esc:
        cert = Certificate("Cover", {"radius": r})
        return Verdict(Answer.YES, "linked", scales, W, cert, f"each set lies within {r} of the other on the core")
    x, side = min(esc, key=lambda e: (W.dist(e[0]), sp.key(e[0])))
    other = B if side == "A" else A
    cert = Certificate("WitnessPoint", {"point": x, "side": side, "distance": W.dist(x)})
    return Verdict(Answer.NO, "linked", scales, W, cert, f"{x} in {side} has no partner of {other} within {r}")
