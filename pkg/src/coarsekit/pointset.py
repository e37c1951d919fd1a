"""Subsets of a space: a membership predicate plus a window enumerator.

On one-dimensional grids every set can also report its trace on an index
interval as a list of maximal runs ``(lo, hi)``; this is what keeps windows
of radius 2^20 cheap. Other spaces enumerate the window carrier.
"""
from __future__ import annotations

import bisect
import math
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .space import Ballean, Point, UnsupportedKind, Window, as_fraction, as_radius, norm

Runs = list  # list[tuple[int, int]], sorted, disjoint, non-adjacent

MAX_TERMS = 1_000_000


def merge_runs(runs: Iterable[tuple[int, int]]) -> Runs:
    out: list[list[int]] = []
    for a, b in sorted(runs):
        if a > b:
            continue
        if out and a <= out[-1][1] + 1:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def clip_runs(runs: Runs, lo: int, hi: int) -> Runs:
    out = []
    for a, b in runs:
        a, b = max(a, lo), min(b, hi)
        if a <= b:
            out.append((a, b))
    return out


def intersect_runs(x: Runs, y: Runs) -> Runs:
    out = []
    i = j = 0
    while i < len(x) and j < len(y):
        a = max(x[i][0], y[j][0])
        b = min(x[i][1], y[j][1])
        if a <= b:
            out.append((a, b))
        if x[i][1] < y[j][1]:
            i += 1
        else:
            j += 1
    return out


def complement_runs(runs: Runs, lo: int, hi: int) -> Runs:
    out = []
    cur = lo
    for a, b in runs:
        if a > cur:
            out.append((cur, min(a - 1, hi)))
        cur = max(cur, b + 1)
        if cur > hi:
            break
    if cur <= hi:
        out.append((cur, hi))
    return [(a, b) for a, b in out if a <= b]


def runs_size(runs: Runs) -> int:
    return sum(b - a + 1 for a, b in runs)


class PointSet:
    """Base class. ``text`` is the set's DSL expression."""

    def __init__(self, space: Ballean, text: str = "?"):
        self.space = space
        self.text = text

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"<PointSet {self.text} on {self.space!r}>"

    def contains(self, x: Point) -> bool:
        raise NotImplementedError

    def __contains__(self, x: Point) -> bool:
        return self.space.contains(x) and self.contains(x)

    def runs(self, lo: int, hi: int) -> Runs:
        """Maximal index runs of the set inside ``[lo, hi]`` (line spaces)."""
        sp = _line(self.space)
        out: list[tuple[int, int]] = []
        for i in range(lo, hi + 1):
            if self.contains(sp.from_index(i)):
                if out and out[-1][1] == i - 1:
                    out[-1] = (out[-1][0], i)
                else:
                    out.append((i, i))
        return out

    def window_runs(self, W: Window) -> Runs:
        lo, hi = W.bounds
        return self.runs(lo, hi)

    def points(self, W: Window) -> list:
        """``{x in carrier(W) : x in self}`` in canonical order."""
        sp = self.space
        if sp.line:
            return [sp.from_index(i) for a, b in self.window_runs(W) for i in range(a, b + 1)]
        return [x for x in W.carrier if self.contains(x)]

    def count(self, W: Window) -> int:
        if self.space.line:
            return runs_size(self.window_runs(W))
        return len(self.points(W))

    # -- algebra ------------------------------------------------------------
    def __or__(self, other: "PointSet") -> "PointSet":
        return Union([self, other])

    def __and__(self, other: "PointSet") -> "PointSet":
        return Inter([self, other])

    def __sub__(self, other: "PointSet") -> "PointSet":
        return Diff(self, other)

    def __invert__(self) -> "PointSet":
        return Complement(self)

    def expand(self, r: Any) -> "PointSet":
        return BallOf(self, r)


def _line(space: Ballean) -> Ballean:
    if not space.line:
        raise UnsupportedKind(f"{space!r} is not a one-dimensional grid")
    return space


class Explicit(PointSet):
    def __init__(self, space: Ballean, pts: Iterable[Point], text: str | None = None):
        pts = [space.point(p) if hasattr(space, "point") else p for p in pts]
        for p in pts:
            space.check(p)
        self.pts = tuple(space.sort(set(pts)))
        self._set = frozenset(self.pts)
        if text is None:
            text = "list(" + ", ".join(_fmt_point(space, p) for p in self.pts) + ")"
        super().__init__(space, text)
        if space.line:
            self._idx = [space.to_index(p) for p in self.pts]

    def contains(self, x: Point) -> bool:
        return x in self._set

    def runs(self, lo: int, hi: int) -> Runs:
        i = bisect.bisect_left(self._idx, lo)
        j = bisect.bisect_right(self._idx, hi)
        return merge_runs((k, k) for k in self._idx[i:j])

    def points(self, W: Window) -> list:
        if self.space.line:
            return super().points(W)
        return [p for p in self.pts if W.covers(p)]


def _fmt_point(space: Ballean, p: Point) -> str:
    if hasattr(space, "format_word"):
        return space.format_word(p)
    if isinstance(p, tuple):
        return "(" + ", ".join(str(c) for c in p) + ")"
    return str(p)


class Everything(PointSet):
    def __init__(self, space: Ballean):
        super().__init__(space, "all")

    def contains(self, x: Point) -> bool:
        return True

    def runs(self, lo: int, hi: int) -> Runs:
        return [(lo, hi)] if lo <= hi else []


class Nothing(PointSet):
    def __init__(self, space: Ballean):
        super().__init__(space, "empty")

    def contains(self, x: Point) -> bool:
        return False

    def runs(self, lo: int, hi: int) -> Runs:
        return []


class Predicate(PointSet):
    def __init__(self, space: Ballean, fn: Callable[[Point], bool], text: str = "predicate"):
        super().__init__(space, text)
        self.fn = fn

    def contains(self, x: Point) -> bool:
        return bool(self.fn(x))


class Arith(PointSet):
    """``{a + k d : k in ℤ}`` on a line."""

    def __init__(self, space: Ballean, a: Any, d: Any):
        sp = _line(space)
        self.a = as_fraction(a)
        self.d = as_fraction(d)
        if self.d <= 0:
            raise ValueError("progression difference must be positive")
        self.ai = sp.to_index(norm(self.a))
        di = self.d / sp.step
        if di.denominator != 1:
            raise ValueError("progression difference must be a multiple of the grid step")
        self.di = int(di)
        super().__init__(space, f"arith({_fmt_q(self.a)}, {_fmt_q(self.d)})")

    def contains(self, x: Point) -> bool:
        q = (as_fraction(x) - self.a) / self.d
        return q.denominator == 1

    def runs(self, lo: int, hi: int) -> Runs:
        if self.di == 1:
            return [(lo, hi)] if lo <= hi else []
        first = lo + (self.ai - lo) % self.di
        return [(i, i) for i in range(first, hi + 1, self.di)]


def _fmt_q(q: Any) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Sequence_(PointSet):
    """``{f(n) : n = 0, 1, 2, ...}`` for an eventually nondecreasing ``f``.

    Terms are generated until they exceed the query bound; off-grid terms are
    not points of the space and are dropped.
    """

    def __init__(self, space: Ballean, f: Callable[[int], Any], text: str):
        _line(space)
        super().__init__(space, text)
        self.f = f
        self._terms: list[Fraction] = []
        self._sorted: list[Fraction] = []
        self._top = None  # largest bound already covered
        self._members: frozenset = frozenset()

    def _extend(self, bound: Fraction) -> None:
        if self._top is not None and self._top >= bound:
            return
        n = len(self._terms)
        while True:
            if n > MAX_TERMS:
                raise ValueError(f"sequence {self.text} does not escape {bound}")
            v = as_fraction(self.f(n))
            self._terms.append(v)
            n += 1
            if v > bound:
                break
        self._sorted = sorted(set(self._terms))
        self._members = frozenset(self._sorted)
        self._top = int(bound) if bound.denominator == 1 else bound

    def values(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        self._extend(hi)
        i = bisect.bisect_left(self._sorted, lo)
        j = bisect.bisect_right(self._sorted, hi)
        return self._sorted[i:j]

    def contains(self, x: Point) -> bool:
        if self._top is None or not x <= self._top:
            self._extend(as_fraction(x))
        return x in self._members

    def runs(self, lo: int, hi: int) -> Runs:
        sp = self.space
        idx = []
        for v in self.values(lo * sp.step, hi * sp.step):
            q = v / sp.step
            if q.denominator == 1:
                idx.append(int(q))
        return merge_runs((i, i) for i in idx)


class IntervalUnion(PointSet):
    """``⋃_n [lo(n), hi(n)]`` with ``lo`` eventually nondecreasing."""

    def __init__(self, space: Ballean, lo: Callable[[int], Any], hi: Callable[[int], Any], text: str):
        _line(space)
        super().__init__(space, text)
        self.lo = lo
        self.hi = hi
        self._blocks: list[tuple[Fraction, Fraction]] = []
        self._top = None

    def _extend(self, bound: Fraction) -> None:
        if self._top is not None and self._top >= bound:
            return
        n = len(self._blocks)
        while True:
            if n > MAX_TERMS:
                raise ValueError(f"interval family {self.text} does not escape {bound}")
            a, b = as_fraction(self.lo(n)), as_fraction(self.hi(n))
            self._blocks.append((a, b))
            n += 1
            if a > bound:
                break
        self._top = bound

    def contains(self, x: Point) -> bool:
        x = as_fraction(x)
        self._extend(x)
        return any(a <= x <= b for a, b in self._blocks)

    def runs(self, lo: int, hi: int) -> Runs:
        sp = self.space
        self._extend(hi * sp.step)
        out = []
        for a, b in self._blocks:
            i = math.ceil(a / sp.step)
            j = math.floor(b / sp.step)
            out.append((max(i, lo), min(j, hi)))
        return merge_runs(out)


class Interval(PointSet):
    """``[lo, hi]`` on a line; ``None`` ends are unbounded."""

    def __init__(self, space: Ballean, lo: Any = None, hi: Any = None):
        _line(space)
        self.lo = None if lo is None else as_fraction(lo)
        self.hi = None if hi is None else as_fraction(hi)
        if self.hi is None and self.lo is not None:
            text = f"ray({_fmt_q(self.lo)})"
        else:
            text = f"interval({_fmt_q(self.lo) if self.lo is not None else '-inf'}, " \
                   f"{_fmt_q(self.hi) if self.hi is not None else 'inf'})"
        super().__init__(space, text)

    def contains(self, x: Point) -> bool:
        x = as_fraction(x)
        return (self.lo is None or x >= self.lo) and (self.hi is None or x <= self.hi)

    def runs(self, lo: int, hi: int) -> Runs:
        sp = self.space
        a = lo if self.lo is None else max(lo, math.ceil(self.lo / sp.step))
        b = hi if self.hi is None else min(hi, math.floor(self.hi / sp.step))
        return [(a, b)] if a <= b else []


# ---------------------------------------------------------------------------
# combinators


def _same_space(parts: Sequence[PointSet]) -> Ballean:
    sp = parts[0].space
    for p in parts[1:]:
        if p.space is not sp:
            raise ValueError("cannot combine sets on different spaces")
    return sp


class Union(PointSet):
    def __init__(self, parts: Sequence[PointSet]):
        self.parts = list(parts)
        super().__init__(_same_space(self.parts), "union(" + ", ".join(map(str, self.parts)) + ")")

    def contains(self, x: Point) -> bool:
        return any(p.contains(x) for p in self.parts)

    def runs(self, lo: int, hi: int) -> Runs:
        return merge_runs(r for p in self.parts for r in p.runs(lo, hi))


class Inter(PointSet):
    def __init__(self, parts: Sequence[PointSet]):
        self.parts = list(parts)
        super().__init__(_same_space(self.parts), "inter(" + ", ".join(map(str, self.parts)) + ")")

    def contains(self, x: Point) -> bool:
        return all(p.contains(x) for p in self.parts)

    def runs(self, lo: int, hi: int) -> Runs:
        out = self.parts[0].runs(lo, hi)
        for p in self.parts[1:]:
            out = intersect_runs(out, p.runs(lo, hi))
        return out


class Diff(PointSet):
    def __init__(self, a: PointSet, b: PointSet):
        self.a, self.b = a, b
        super().__init__(_same_space([a, b]), f"diff({a}, {b})")

    def contains(self, x: Point) -> bool:
        return self.a.contains(x) and not self.b.contains(x)

    def runs(self, lo: int, hi: int) -> Runs:
        return intersect_runs(self.a.runs(lo, hi), complement_runs(self.b.runs(lo, hi), lo, hi))


class Complement(PointSet):
    def __init__(self, a: PointSet):
        self.a = a
        super().__init__(a.space, f"complement({a})")

    def contains(self, x: Point) -> bool:
        return not self.a.contains(x)

    def runs(self, lo: int, hi: int) -> Runs:
        return complement_runs(self.a.runs(lo, hi), lo, hi)


class BallOf(PointSet):
    """``B(A, r) = ⋃_{a in A} B(a, r)``, exact on the whole space.

    ``y in B(A, r)`` iff ``A`` meets the star ``B*(y, r)``.
    """

    def __init__(self, base: PointSet, r: Any):
        self.base = base
        self.r = base.space.scale(r)
        super().__init__(base.space, f"ball({base}, {_fmt_scale(self.r)})")
        self._k = base.space.radius_index(self.r) if base.space.line else None

    def contains(self, x: Point) -> bool:
        sp = self.space
        if self._k is not None:
            if not sp.contains(x):
                return False
            i = sp.to_index(x)
            return any(self.base.contains(sp.from_index(j)) for j in range(i - self._k, i + self._k + 1))
        return any(self.base.contains(z) for z in sp.star(x, self.r))

    def runs(self, lo: int, hi: int) -> Runs:
        k = self.space.radius_index(self.r)
        inner = self.base.runs(lo - k, hi + k)
        return clip_runs(merge_runs((a - k, b + k) for a, b in inner), lo, hi)


def _fmt_scale(r: Any) -> str:
    if isinstance(r, frozenset):
        return "{" + ", ".join(sorted(map(str, r))) + "}"
    return _fmt_q(r)


# ---------------------------------------------------------------------------
# builders


def explicit(space: Ballean, pts: Iterable[Point]) -> PointSet:
    return Explicit(space, pts)


def everything(space: Ballean) -> PointSet:
    return Everything(space)


def nothing(space: Ballean) -> PointSet:
    return Nothing(space)


def arith(space: Ballean, a: Any, d: Any) -> PointSet:
    return Arith(space, a, d)


def geom(space: Ballean, b: Any) -> PointSet:
    """``{b^n : n >= 0}``."""
    b = as_fraction(b)
    if b <= 1:
        raise ValueError("geometric base must exceed 1")
    return Sequence_(space, lambda n: b**n, f"geom({_fmt_q(b)})")


def seq(space: Ballean, f: Callable[[int], Any], text: str | None = None) -> PointSet:
    return Sequence_(space, f, text or f"seq({f})")


def interval_union(space: Ballean, lo: Callable[[int], Any], hi: Callable[[int], Any], text: str | None = None) -> PointSet:
    return IntervalUnion(space, lo, hi, text or f"interval_union({lo}, {hi})")


def interval(space: Ballean, lo: Any = None, hi: Any = None) -> PointSet:
    return Interval(space, lo, hi)


def ray(space: Ballean, lo: Any) -> PointSet:
    return Interval(space, lo, None)


def predicate(space: Ballean, fn: Callable[[Point], bool], text: str = "predicate") -> PointSet:
    return Predicate(space, fn, text)


def union(*parts: PointSet) -> PointSet:
    return Union(parts)


def inter(*parts: PointSet) -> PointSet:
    return Inter(parts)


def diff(a: PointSet, b: PointSet) -> PointSet:
    return Diff(a, b)


def complement(a: PointSet) -> PointSet:
    return Complement(a)


def ball(space: Ballean, x: Point, r: Any) -> PointSet:
    """The closed ball ``B(x, r)`` as a point set."""
    space.check(x)
    return Explicit(space, space.ball(x, r), text=f"ball(list({_fmt_point(space, x)}), {_fmt_scale(space.scale(r))})")


def ball_of_set(A: PointSet, r: Any, W: Window | None = None) -> PointSet:
    """``B(A, r)``; with a window, its materialized trace on ``carrier(W)``."""
    B = BallOf(A, r)
    if W is None:
        return B
    return Explicit(A.space, B.points(W), text=B.text)
