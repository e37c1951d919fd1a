"""Bounded-displacement partial bijections covering the r-ball relation.

The symmetrized relation ``y in ball(x, r) ∪ star(x, r)`` on a window
carrier (the r-ball relation itself for symmetric spaces) is split as
identity + upper edges (``x < y`` canonically) + their reverses. The upper
edges form a bipartite graph whose proper edge colouring (König) turns every
colour class into a partial bijection; reversing a class gives its inverse.
On ℤ this yields exactly ``id, +1..+r, -1..-r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .pointset import Explicit, PointSet
from .space import Ballean, Point, UnsupportedKind, Window
from .verdict import Answer, Certificate, Verdict, jsonable


@dataclass
class PartialMap:
    pairs: dict
    label: str
    displacement: Any = 0

    def __call__(self, x: Point) -> Point | None:
        return self.pairs.get(x)

    def __len__(self) -> int:
        return len(self.pairs)

    def inverse(self, label: str) -> "PartialMap":
        return PartialMap({y: x for x, y in self.pairs.items()}, label, self.displacement)

    def to_json(self, with_pairs: bool = True) -> dict:
        out = {"label": self.label, "displacement": jsonable(self.displacement), "size": len(self.pairs)}
        if with_pairs:
            out["pairs"] = [[jsonable(x), jsonable(y)] for x, y in self.pairs.items()]
        return out


@dataclass
class WobblingFamily:
    space: Ballean
    radius: Any
    window: Window
    maps: list = field(default_factory=list)
    colors: int = 0

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def displacement(self) -> Any:
        return max((g.displacement for g in self.maps), default=0)

    def to_json(self, with_pairs: bool = True) -> dict:
        return {
            "radius": jsonable(self.radius),
            "size": len(self.maps),
            "colors": self.colors,
            "displacement": jsonable(self.displacement()),
            "maps": [g.to_json(with_pairs) for g in self.maps],
        }


def is_ulf_at(space: Ballean, r: Any, W: Window) -> tuple[bool, int | None]:
    """``(flag, m)`` with ``m = max |ball(x, r)|`` over the carrier."""
    if not space.locally_finite:
        return False, None
    r = space.scale(r)
    if space.line:
        return True, 2 * space.radius_index(r) + 1
    return True, max(len(space.ball(x, r)) for x in W.carrier)


def edge_color_bipartite(edges: list[tuple[Any, Any]]) -> dict[tuple[Any, Any], int]:
    """Proper colouring of a simple bipartite graph with Δ colours.

    Edges are taken in the given order. Each gets the lowest colour below Δ
    free at both ends; failing that, the ``a/b`` alternating path from the
    right end is swapped (``a`` free on the left, ``b`` free on the right),
    which frees ``a`` there.
    """
    deg: dict[tuple[str, Any], int] = {}
    for u, v in edges:
        deg["L", u] = deg.get(("L", u), 0) + 1
        deg["R", v] = deg.get(("R", v), 0) + 1
    delta = max(deg.values(), default=0)
    used = {"L": {}, "R": {}}
    color: dict[tuple[Any, Any], int] = {}

    def lowest_free(at: dict[int, Any]) -> int:
        c = 0
        while c in at:
            c += 1
        return c

    for u, v in edges:
        lu = used["L"].setdefault(u, {})
        rv = used["R"].setdefault(v, {})
        c = 0
        while c in lu or c in rv:
            c += 1
        if c >= delta:
            a, b = lowest_free(lu), lowest_free(rv)
            path = []
            side, node, col = "R", v, a
            while col in used[side].get(node, {}):
                nxt = used[side][node][col]
                path.append((side, node, nxt, col))
                side, node, col = ("L" if side == "R" else "R"), nxt, (b if col == a else a)
            flipped = []
            for side, x, y, col in path:
                lft, rgt = (y, x) if side == "R" else (x, y)
                del used["L"][lft][col]
                del used["R"][rgt][col]
                flipped.append((lft, rgt, b if col == a else a))
            for lft, rgt, col in flipped:
                used["L"][lft][col] = rgt
                used["R"][rgt][col] = lft
                color[lft, rgt] = col
            c = a
        lu[c] = v
        rv[c] = u
        color[(u, v)] = c
    return color


def _shift_label(space: Ballean, pairs: dict) -> str | None:
    if not space.line or not pairs:
        return None
    deltas = {space.to_index(y) - space.to_index(x) for x, y in pairs.items()}
    if len(deltas) != 1:
        return None
    d = space.from_index(deltas.pop())
    return f"shift{'+' if d > 0 else '-'}{jsonable(abs(d))}"


def decompose(space: Ballean, r: Any, W: Window) -> WobblingFamily:
    flag, _ = is_ulf_at(space, r, W)
    if not flag:
        raise UnsupportedKind(f"{space!r} is not uniformly locally finite")
    r = space.scale(r)
    carrier = space.sort(W.carrier)
    rank = {x: i for i, x in enumerate(carrier)}
    cs = W.carrier_set
    edges = []
    for x in carrier:
        for y in space.sort(set(space.ball(x, r)) | set(space.star(x, r))):
            if y in cs and rank[y] > rank[x]:
                edges.append((x, y))
    color = edge_color_bipartite(edges)
    ncolors = 1 + max(color.values(), default=-1)
    ldeg: dict = {}
    rdeg: dict = {}
    for x, y in edges:
        ldeg[x] = ldeg.get(x, 0) + 1
        rdeg[y] = rdeg.get(y, 0) + 1
    delta = max(list(ldeg.values()) + list(rdeg.values()), default=0)
    assert ncolors == delta, "colouring uses more than the maximum degree"
    classes: list[dict] = [{} for _ in range(ncolors)]
    for (x, y), c in sorted(color.items(), key=lambda kv: (rank[kv[0][0]], rank[kv[0][1]])):
        classes[c][x] = y
    ident = PartialMap({x: x for x in carrier}, "id", space.scale(0))
    maps = [ident]
    inverses = []
    for c, pairs in enumerate(classes):
        disp = max(space.min_scale(x, y) for x, y in pairs.items())
        label = _shift_label(space, pairs) or f"c{c}"
        g = PartialMap(pairs, label, disp)
        inv = g.inverse(_shift_label(space, {y: x for x, y in pairs.items()}) or f"c{c}^-1")
        maps.append(g)
        inverses.append(inv)
    return WobblingFamily(space, r, W, maps + inverses, ncolors)


def verify_cover(F: WobblingFamily, r: Any, W: Window) -> Verdict:
    """Property (1): ``ball(x, r) ⊆ {g(x)}``; property (2): every ``g(x)`` in
    ``ball(x, r) ∪ star(x, r)``; both for ``x`` in ``core(W, r)``."""
    sp = W.space
    r = sp.scale(r)
    core = W.nearest_first(W.core(r))
    eff = sp.scale(0)
    missing = None
    too_far = None
    for x in core:
        imgs = set()
        near = set(sp.ball(x, r)) | set(sp.star(x, r))
        for g in F.maps:
            y = g(x)
            if y is None:
                continue
            imgs.add(y)
            eff = max(eff, sp.min_scale(x, y))
            if too_far is None and y not in near:
                too_far = (x, y, g.label)
        if missing is None:
            gaps = [y for y in near if y not in imgs and sp.within(x, y, r)]
            if gaps:
                missing = (x, sorted(gaps, key=lambda y: (sp.min_scale(x, y), sp.key(y)))[0])
    scales = {"r": r, "effective": eff}
    if missing is not None:
        cert = Certificate("WitnessPoint", {"property": 1, "pair": missing, "effective": eff})
        return Verdict(Answer.NO, "wobble", scales, W, cert, f"property (1) fails: {missing[1]} unreached from {missing[0]}")
    if too_far is not None:
        cert = Certificate("WitnessPoint", {"property": 2, "pair": too_far[:2], "map": too_far[2], "effective": eff})
        return Verdict(Answer.NO, "wobble", scales, W, cert, f"property (2) fails: displacement {eff} exceeds {r}")
    cert = Certificate("Family", {"size": len(F.maps), "colors": F.colors, "effective": eff})
    return Verdict(Answer.YES, "wobble", scales, W, cert, f"{len(F.maps)} partial bijections cover the {r}-ball relation")


def apply(g: PartialMap, A: PointSet, W: Window) -> PointSet:
    """Image of ``A ∩ domain(g)``."""
    imgs = [g(x) for x in g.pairs if W.covers(x) and A.contains(x)]
    return Explicit(A.space, imgs)
