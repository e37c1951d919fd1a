"""Balleans given by ball oracles, and finite windows into them.

Every space exposes ``ball(x, r)`` and ``star(x, r)`` as finite, canonically
sorted point lists. Metric kinds take nonnegative exact rationals as radii;
group kinds take either a word-length index ``k`` (meaning the ball
``F_k = (S u S^-1 u {e})^k``) or an explicit finite set ``F`` containing the
identity, and answer ``B(g, F) = Fg``.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

Point = Hashable


class DomainError(ValueError):
    """A point is not an element of the space's carrier."""


class UnsupportedKind(ValueError):
    """The requested operation is not available for this kind of space."""


class NoScale(ValueError):
    """No radius connects the two points (disconnected graph components)."""


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational expected, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"exact rational expected, got {value!r}")


def norm(q: Fraction | int) -> Fraction | int:
    """Integral rationals are stored as ``int`` so that ℤ-points stay ints."""
    if isinstance(q, Fraction) and q.denominator == 1:
        return int(q)
    return q


def as_radius(value: Any) -> Fraction:
    r = as_fraction(value)
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return r


class Ballean:
    """Base class; subclasses fill in the oracles."""

    kind: str = "abstract"
    symmetric: bool = True
    locally_finite: bool = True
    line: bool = False
    group: bool = False

    # -- oracles ---------------------------------------------------------
    def contains(self, x: Point) -> bool:
        raise NotImplementedError

    def ball(self, x: Point, r: Any) -> list:
        raise NotImplementedError

    def star(self, x: Point, r: Any) -> list:
        return self.ball(x, r)

    def min_scale(self, x: Point, y: Point) -> Any:
        raise NotImplementedError

    def key(self, x: Point) -> Any:
        return x

    # -- scales ----------------------------------------------------------
    def scale(self, r: Any) -> Any:
        return as_radius(r)

    def scale_le(self, a: Any, b: Any) -> bool:
        return a <= b

    def scale_grid(self, upto: Any) -> list:
        """Distinct radii ``<= upto`` at which balls can change."""
        raise NotImplementedError

    def compose(self, a: Any, b: Any) -> Any:
        """A radius ``g`` with ``B(B(x, a), b) ⊆ B(x, g)`` for every x."""
        return self.scale(a) + self.scale(b)

    def dual(self, a: Any) -> Any:
        """A radius ``a'`` with ``B(x, a) ⊆ B*(x, a')`` for every x."""
        return self.scale(a)

    def origin(self) -> Point:
        raise NotImplementedError

    def dist(self, x: Point, y: Point) -> Any:
        return self.min_scale(x, y)

    def within(self, x: Point, y: Point, r: Any) -> bool:
        """``y in ball(x, r)``."""
        return self.scale_le(self.min_scale(x, y), self.scale(r))

    def check(self, x: Point) -> None:
        if not self.contains(x):
            raise DomainError(f"{x!r} is not a point of {self}")

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        raise NotImplementedError

    def sort(self, pts: Iterable[Point]) -> list:
        return sorted(pts, key=self.key)


# ---------------------------------------------------------------------------
# one-dimensional grids


class _LineMixin:
    """Shared index arithmetic for the grids ``step·ℤ`` inside ℚ."""

    line = True
    step: Fraction

    def to_index(self, x: Point) -> int:
        if self.step == 1 and type(x) is int:
            return x
        q = as_fraction(x) / self.step
        if q.denominator != 1:
            raise DomainError(f"{x!r} is not on the grid of step {self.step}")
        return int(q)

    def from_index(self, i: int) -> Point:
        if self.step == 1:
            return i
        return norm(self.step * i)

    def radius_index(self, r: Any) -> int:
        return math.floor(as_radius(r) / self.step)

    def contains(self, x: Point) -> bool:
        try:
            return (as_fraction(x) / self.step).denominator == 1
        except TypeError:
            return False

    def ball(self, x: Point, r: Any) -> list:
        i = self.to_index(x)
        k = self.radius_index(r)
        if self.step == 1:
            return list(range(i - k, i + k + 1))
        return [self.from_index(j) for j in range(i - k, i + k + 1)]

    def min_scale(self, x: Point, y: Point) -> Fraction | int:
        if self.step == 1 and type(x) is int and type(y) is int:
            return abs(x - y)
        self.check(x)
        self.check(y)
        return norm(abs(as_fraction(x) - as_fraction(y)))

    def scale_grid(self, upto: Any) -> list:
        k = self.radius_index(upto)
        return [norm(self.step * j) for j in range(k + 1)]

    def origin(self) -> Point:
        return 0

    def point(self, value: Any) -> Point:
        x = norm(as_fraction(value))
        self.check(x)
        return x


class IntegerGrid(_LineMixin, Ballean):
    """The lattice ``step·ℤ^dim``; sup metric unless ``metric='l1'``.

    ``dim == 1`` gives a line (points are ints); higher dimensions use integer
    tuples.
    """

    kind = "grid"

    def __init__(self, dim: int = 1, step: int = 1, metric: str = "sup"):
        if dim < 1:
            raise ValueError("dim must be positive")
        step = as_fraction(step)
        if step.denominator != 1 or step <= 0:
            raise ValueError("integer grid step must be a positive integer")
        if metric not in ("sup", "l1"):
            raise ValueError(f"unknown metric {metric!r}")
        self.dim = dim
        self.step = step
        self.metric = metric
        self.line = dim == 1

    def __repr__(self) -> str:
        return f"IntegerGrid(dim={self.dim}, step={self.step}, metric={self.metric!r})"

    # the mixin's versions are for dim == 1 only
    def contains(self, x: Point) -> bool:
        if self.line:
            return isinstance(x, int) and not isinstance(x, bool) and x % int(self.step) == 0
        return (
            isinstance(x, tuple)
            and len(x) == self.dim
            and all(isinstance(c, int) and c % int(self.step) == 0 for c in x)
        )

    def ball(self, x: Point, r: Any) -> list:
        if self.line:
            return _LineMixin.ball(self, x, r)
        self.check(x)
        k = self.radius_index(r)
        s = int(self.step)
        ranges = [range(c - k * s, c + k * s + 1, s) for c in x]
        pts = list(itertools.product(*ranges))
        if self.metric == "l1":
            pts = [p for p in pts if sum(abs(a - b) for a, b in zip(p, x)) <= k * s]
        return pts

    def min_scale(self, x: Point, y: Point) -> Any:
        if self.line:
            return _LineMixin.min_scale(self, x, y)
        self.check(x)
        self.check(y)
        diffs = [abs(a - b) for a, b in zip(x, y)]
        return max(diffs) if self.metric == "sup" else sum(diffs)

    def origin(self) -> Point:
        return 0 if self.line else (0,) * self.dim

    def point(self, value: Any) -> Point:
        if self.line:
            return _LineMixin.point(self, value)
        x = tuple(int(as_fraction(v)) for v in value)
        self.check(x)
        return x

    def to_json(self) -> dict:
        d = {"kind": "grid", "dim": self.dim, "step": int(self.step)}
        if self.metric != "sup":
            d["metric"] = self.metric
        return d


class RationalGrid(_LineMixin, Ballean):
    """The grid ``(1/D)·ℤ ⊂ ℚ`` with ``|x - y|``; ``step=None`` is all of ℚ.

    The dense case supports membership and distances only: its balls are
    infinite.
    """

    kind = "rational"

    def __init__(self, step: Any = None):
        if step is None:
            self.step = None
            self.line = False
            self.locally_finite = False
        else:
            step = as_fraction(step)
            if step <= 0:
                raise ValueError("grid step must be positive")
            self.step = step

    def __repr__(self) -> str:
        return f"RationalGrid(step={self.step})"

    def _dense(self) -> None:
        if self.step is None:
            raise UnsupportedKind("dense ℚ has infinite balls; choose a grid step 1/D")

    def contains(self, x: Point) -> bool:
        if self.step is None:
            return isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        return _LineMixin.contains(self, x)

    def ball(self, x: Point, r: Any) -> list:
        self._dense()
        return _LineMixin.ball(self, x, r)

    def min_scale(self, x: Point, y: Point) -> Any:
        if self.step is None:
            self.check(x)
            self.check(y)
            return norm(abs(as_fraction(x) - as_fraction(y)))
        return _LineMixin.min_scale(self, x, y)

    def scale_grid(self, upto: Any) -> list:
        self._dense()
        return _LineMixin.scale_grid(self, upto)

    def refine(self, step: Any) -> "RationalGrid":
        return RationalGrid(step)

    def to_json(self) -> dict:
        return {"kind": "rational", "step": None if self.step is None else str(self.step)}


# ---------------------------------------------------------------------------
# graphs and finite metric spaces


class GraphMetric(Ballean):
    """Path metric of an undirected graph on integer nodes."""

    kind = "graph"

    def __init__(self, adjacency: dict[int, Iterable[int]]):
        adj: dict[int, set[int]] = {}
        for u, nbrs in adjacency.items():
            adj.setdefault(u, set())
            for v in nbrs:
                if v == u:
                    continue
                adj[u].add(v)
                adj.setdefault(v, set()).add(u)
        self.adj = {u: tuple(sorted(vs)) for u, vs in sorted(adj.items())}
        self._bfs: dict[int, dict[int, int]] = {}

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], nodes: Iterable[int] = ()) -> "GraphMetric":
        adj: dict[int, list[int]] = {n: [] for n in nodes}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        return cls(adj)

    @classmethod
    def path(cls, n: int) -> "GraphMetric":
        return cls.from_edges(((i, i + 1) for i in range(n - 1)), range(n))

    def __repr__(self) -> str:
        return f"GraphMetric(<{len(self.adj)} nodes>)"

    def _distances(self, x: int) -> dict[int, int]:
        if x not in self._bfs:
            self.check(x)
            dist = {x: 0}
            queue = deque([x])
            while queue:
                u = queue.popleft()
                for v in self.adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            self._bfs[x] = dist
        return self._bfs[x]

    def contains(self, x: Point) -> bool:
        return x in self.adj

    def ball(self, x: Point, r: Any) -> list:
        k = math.floor(as_radius(r))
        return sorted(y for y, d in self._distances(x).items() if d <= k)

    def min_scale(self, x: Point, y: Point) -> int:
        self.check(y)
        d = self._distances(x).get(y)
        if d is None:
            raise NoScale(f"{x!r} and {y!r} lie in different components")
        return d

    def scale_grid(self, upto: Any) -> list:
        return list(range(math.floor(as_radius(upto)) + 1))

    def origin(self) -> Point:
        return next(iter(self.adj))

    def point(self, value: Any) -> Point:
        x = int(as_fraction(value))
        self.check(x)
        return x

    def max_degree(self) -> int:
        return max((len(v) for v in self.adj.values()), default=0)

    def to_json(self) -> dict:
        return {"kind": "graph", "adjacency": {str(u): list(vs) for u, vs in self.adj.items()}}


class FiniteMetric(Ballean):
    """Points ``0..n-1`` with an exact rational distance table."""

    kind = "finite"

    def __init__(self, table: Sequence[Sequence[Any]], validate: bool = True):
        n = len(table)
        d = [[as_fraction(v) for v in row] for row in table]
        if any(len(row) != n for row in d):
            raise ValueError("distance table must be square")
        if validate:
            for i in range(n):
                if d[i][i] != 0:
                    raise ValueError(f"d({i},{i}) must be 0")
                for j in range(n):
                    if d[i][j] != d[j][i]:
                        raise ValueError(f"table is not symmetric at ({i},{j})")
                    if i != j and d[i][j] <= 0:
                        raise ValueError(f"d({i},{j}) must be positive")
        self.n = n
        self.d = d

    @classmethod
    def from_triangular(cls, rows: Sequence[Sequence[Any]]) -> "FiniteMetric":
        """``rows[i]`` lists ``d(i, 0..i-1)``; ``rows[0]`` may be omitted."""
        rows = list(rows)
        if rows and len(rows[0]) != 0:
            rows = [[]] + rows
        n = len(rows)
        table = [[Fraction(0)] * n for _ in range(n)]
        for i, row in enumerate(rows):
            if len(row) != i:
                raise ValueError(f"row {i} of a triangular table needs {i} entries")
            for j, v in enumerate(row):
                table[i][j] = table[j][i] = as_fraction(v)
        return cls(table)

    def triangular(self) -> list[list[Fraction]]:
        return [self.d[i][:i] for i in range(self.n)]

    def __repr__(self) -> str:
        return f"FiniteMetric(n={self.n})"

    def contains(self, x: Point) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.n

    def ball(self, x: Point, r: Any) -> list:
        self.check(x)
        r = as_radius(r)
        return [y for y in range(self.n) if self.d[x][y] <= r]

    def min_scale(self, x: Point, y: Point) -> Any:
        self.check(x)
        self.check(y)
        return norm(self.d[x][y])

    def scale_grid(self, upto: Any) -> list:
        upto = as_radius(upto)
        vals = {v for row in self.d for v in row if v <= upto}
        return [norm(v) for v in sorted(vals | {Fraction(0)})]

    def origin(self) -> Point:
        return 0

    def point(self, value: Any) -> Point:
        x = int(as_fraction(value))
        self.check(x)
        return x

    def to_json(self) -> dict:
        return {"kind": "finite", "table": [[str(v) for v in row] for row in self.triangular()]}


# ---------------------------------------------------------------------------
# group balleans


class GroupBallean(Ballean):
    """``B(g, F) = Fg`` over a group given by a multiplication oracle.

    Elements must be passed in canonical normal form (``canon`` is applied
    to user input); radii are word-length indices or finite sets with e.
    """

    kind = "group"
    group = True

    def __init__(
        self,
        identity: Point,
        mul: Callable[[Point, Point], Point],
        inv: Callable[[Point], Point],
        generators: Sequence[Point],
        canon: Callable[[Any], Point] | None = None,
        key: Callable[[Point], Any] | None = None,
        name: str = "group",
    ):
        self.e = identity
        self.mul = mul
        self.inv = inv
        self.generators = tuple(generators)
        self._canon = canon or (lambda v: v)
        self._key = key
        self.name = name
        gens = set(self.generators) | {inv(s) for s in self.generators}
        gens.discard(identity)
        self._steps = tuple(sorted(gens, key=self.key))
        self._layers: list[set] = [{identity}]
        self._balls: list[frozenset] = [frozenset([identity])]

    def __repr__(self) -> str:
        return f"GroupBallean({self.name})"

    def key(self, x: Point) -> Any:
        return self._key(x) if self._key else x

    def contains(self, x: Point) -> bool:
        try:
            return self._canon(x) == x
        except Exception:
            return False

    def point(self, value: Any) -> Point:
        return self._canon(value)

    def word_ball(self, k: int) -> frozenset:
        """``F_k``: products of at most k generators and their inverses."""
        while len(self._balls) <= k:
            frontier = set()
            seen = self._balls[-1]
            for g in self._layers[-1]:
                for s in self._steps:
                    h = self.mul(s, g)
                    if h not in seen:
                        frontier.add(h)
            self._layers.append(frontier)
            self._balls.append(seen | frontier)
        return self._balls[k]

    def scale(self, r: Any) -> Any:
        if isinstance(r, (set, frozenset)):
            F = frozenset(r)
            if self.e not in F:
                raise ValueError("a group radius must contain the identity")
            return F
        r = as_fraction(r)
        if r < 0 or r.denominator != 1:
            raise ValueError(f"group radius index must be a nonnegative integer, got {r}")
        return int(r)

    def radius_set(self, r: Any) -> frozenset:
        r = self.scale(r)
        return r if isinstance(r, frozenset) else self.word_ball(r)

    def scale_le(self, a: Any, b: Any) -> bool:
        a, b = self.scale(a), self.scale(b)
        if isinstance(a, int) and isinstance(b, int):
            return a <= b
        return self.radius_set(a) <= self.radius_set(b)

    def ball(self, x: Point, r: Any) -> list:
        return self.sort({self.mul(f, x) for f in self.radius_set(r)})

    def star(self, x: Point, r: Any) -> list:
        return self.sort({self.mul(self.inv(f), x) for f in self.radius_set(r)})

    def within(self, x: Point, y: Point, r: Any) -> bool:
        r = self.scale(r)
        if isinstance(r, int):
            return self.min_scale(x, y) <= r
        return self.mul(y, self.inv(x)) in r

    def word_length(self, g: Point, limit: int = 64) -> int:
        for k in range(limit + 1):
            if g in self.word_ball(k):
                return k
        raise NoScale(f"{g!r} has word length beyond {limit}")

    def min_scale(self, x: Point, y: Point) -> int:
        return self.word_length(self.mul(y, self.inv(x)))

    def scale_grid(self, upto: Any) -> list:
        return list(range(self.scale(upto) + 1))

    def compose(self, a: Any, b: Any) -> Any:
        a, b = self.scale(a), self.scale(b)
        if isinstance(a, int) and isinstance(b, int):
            return a + b
        Fa, Fb = self.radius_set(a), self.radius_set(b)
        return frozenset(self.mul(g, f) for g in Fb for f in Fa)

    def dual(self, a: Any) -> Any:
        a = self.scale(a)
        if isinstance(a, int):
            return a
        return frozenset(self.inv(f) for f in a)

    def origin(self) -> Point:
        return self.e

    def to_json(self) -> dict:
        return {"kind": "group", "name": self.name}


class ZdGroup(GroupBallean):
    """ℤ^d as a group ballean; the standard generators give the l1 word metric."""

    kind = "zgroup"

    def __init__(self, dim: int = 1, generators: Sequence[tuple] | None = None):
        self.dim = dim
        std = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
        gens = [tuple(g) for g in generators] if generators else std
        self.standard = gens == std
        super().__init__(
            identity=(0,) * dim,
            mul=lambda a, b: tuple(x + y for x, y in zip(a, b)),
            inv=lambda a: tuple(-x for x in a),
            generators=gens,
            canon=lambda v: tuple(int(as_fraction(c)) for c in v),
            name=f"Z^{dim}",
        )

    def contains(self, x: Point) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim and all(isinstance(c, int) for c in x)

    def word_length(self, g: Point, limit: int = 64) -> int:
        if self.standard:
            return sum(abs(c) for c in g)
        return super().word_length(g, limit)

    def to_json(self) -> dict:
        d: dict = {"kind": "zgroup", "dim": self.dim}
        if not self.standard:
            d["generators"] = [list(g) for g in self.generators]
        return d


def _reduce(word: Iterable[int]) -> tuple:
    out: list[int] = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


class FreeGroup(GroupBallean):
    """Free group on ``rank`` letters; words are reduced tuples of signed indices.

    Letter ``i`` (1-based) is ``i`` and its inverse ``-i``; ``parse_word``
    reads ``a, b, ...`` with capitals for inverses and ``e`` for the identity.
    """

    kind = "freegroup"

    def __init__(self, rank: int = 2):
        if not 1 <= rank <= 25:
            raise ValueError("free group rank must be in 1..25")
        self.rank = rank
        super().__init__(
            identity=(),
            mul=lambda a, b: _reduce(a + b),
            inv=lambda a: tuple(-s for s in reversed(a)),
            generators=[(i,) for i in range(1, rank + 1)],
            canon=self._canon_word,
            key=lambda w: (len(w), tuple((abs(s), s < 0) for s in w)),
            name=f"F{rank}",
        )

    def _canon_word(self, v: Any) -> tuple:
        if isinstance(v, str):
            return self.parse_word(v)
        w = tuple(int(s) for s in v)
        if any(s == 0 or abs(s) > self.rank for s in w):
            raise DomainError(f"{v!r} is not a word over {self.rank} letters")
        return _reduce(w)

    def contains(self, x: Point) -> bool:
        return (
            isinstance(x, tuple)
            and all(isinstance(s, int) and s != 0 and abs(s) <= self.rank for s in x)
            and _reduce(x) == x
        )

    def parse_word(self, text: str) -> tuple:
        text = text.strip()
        if text in ("", "e"):
            return ()
        out = []
        for ch in text:
            i = ord(ch.lower()) - ord("a") + 1
            if not ch.isalpha() or not 1 <= i <= self.rank:
                raise DomainError(f"bad letter {ch!r} in word {text!r}")
            out.append(-i if ch.isupper() else i)
        return _reduce(out)

    def format_word(self, w: tuple) -> str:
        if not w:
            return "e"
        return "".join(chr(ord("a") + abs(s) - 1).upper() if s < 0 else chr(ord("a") + s - 1) for s in w)

    def word_length(self, g: Point, limit: int = 64) -> int:
        return len(g)

    def to_json(self) -> dict:
        return {"kind": "freegroup", "rank": self.rank}


# ---------------------------------------------------------------------------
# JSON descriptors


def space_from_json(desc: dict) -> Ballean:
    """Build a space from ``{"kind": ..., params}``; see README for the schema."""
    kind = desc.get("kind")
    if kind == "grid":
        return IntegerGrid(int(desc.get("dim", 1)), int(desc.get("step", 1)), desc.get("metric", "sup"))
    if kind == "rational":
        step = desc.get("step")
        return RationalGrid(None if step is None else as_fraction(step))
    if kind == "graph":
        return GraphMetric({int(k): [int(v) for v in vs] for k, vs in desc["adjacency"].items()})
    if kind == "finite":
        return FiniteMetric.from_triangular(desc["table"])
    if kind == "zgroup":
        gens = desc.get("generators")
        return ZdGroup(int(desc.get("dim", 1)), [tuple(g) for g in gens] if gens else None)
    if kind == "freegroup":
        return FreeGroup(int(desc.get("rank", 2)))
    raise UnsupportedKind(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# windows


class Window:
    """The finite truncation ``ball(center, radius)`` of a space."""

    def __init__(self, space: Ballean, center: Point, radius: Any):
        space.check(center)
        self.space = space
        self.center = center
        self.radius = space.scale(radius)
        self._cores: dict[Any, tuple] = {}

    def __repr__(self) -> str:
        return f"Window({self.space!r}, center={self.center!r}, radius={self.radius})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Window)
            and other.space is self.space
            and other.center == self.center
            and other.radius == self.radius
        )

    def __hash__(self) -> int:
        return hash((id(self.space), self.center, self.radius))

    # -- line spaces work on index intervals -------------------------------
    @cached_property
    def bounds(self) -> tuple[int, int]:
        """Index interval of the carrier (line spaces only)."""
        sp = self.space
        c = sp.to_index(self.center)
        k = sp.radius_index(self.radius)
        return c - k, c + k

    def core_bounds(self, r: Any) -> tuple[int, int]:
        lo, hi = self.bounds
        k = self.space.radius_index(r)
        return lo + k, hi - k

    # -- generic ------------------------------------------------------------
    @cached_property
    def carrier(self) -> tuple:
        sp = self.space
        if sp.line:
            lo, hi = self.bounds
            return tuple(sp.from_index(i) for i in range(lo, hi + 1))
        return tuple(sp.ball(self.center, self.radius))

    @cached_property
    def carrier_set(self) -> frozenset:
        return frozenset(self.carrier)

    def size(self) -> int:
        if self.space.line:
            lo, hi = self.bounds
            return hi - lo + 1
        return len(self.carrier)

    def covers(self, x: Point) -> bool:
        sp = self.space
        if not sp.contains(x):
            return False
        if sp.line:
            lo, hi = self.bounds
            return lo <= sp.to_index(x) <= hi
        return x in self.carrier_set

    def dist(self, x: Point) -> Any:
        return self.space.min_scale(self.center, x)

    def core(self, r: Any) -> tuple:
        """``{x in carrier : ball(x, r) ⊆ carrier}``, computed from the oracle."""
        r = self.space.scale(r)
        if r not in self._cores:
            sp = self.space
            if sp.line:
                lo, hi = self.core_bounds(r)
                pts = tuple(sp.from_index(i) for i in range(lo, hi + 1))
            else:
                cs = self.carrier_set
                pts = tuple(x for x in self.carrier if all(y in cs for y in sp.ball(x, r)))
            self._cores[r] = pts
        return self._cores[r]

    def core_size(self, r: Any) -> int:
        if self.space.line:
            lo, hi = self.core_bounds(r)
            return max(0, hi - lo + 1)
        return len(self.core(r))

    def in_core(self, x: Point, r: Any) -> bool:
        sp = self.space
        if sp.line:
            if not sp.contains(x):
                return False
            lo, hi = self.core_bounds(r)
            return lo <= sp.to_index(x) <= hi
        return self.covers(x) and all(self.covers(y) for y in sp.ball(x, r))

    def grow(self, r: Any) -> "Window":
        return Window(self.space, self.center, self.space.compose(self.radius, r))

    def nearest_first(self, pts: Iterable[Point]) -> list:
        """Order by distance from the center, then canonical order."""
        sp = self.space
        return sorted(pts, key=lambda x: (self.dist(x), sp.key(x)))

    def to_json(self) -> dict:
        from .verdict import jsonable

        return {"center": jsonable(self.center), "radius": jsonable(self.radius)}
