"""Simulated table of blocks and centroid-threshold spatial relation models.

Coordinate frame: x rightward from the viewer's perspective, y away from the
viewer, z up; the viewer sits at the front (negative y) edge of the table.
All relations are evaluated on block centroids only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

Vec = tuple[float, float, float]

DEFAULT_SIDE = 0.15
DEFAULT_HALF_EXTENTS = (0.75, 0.75)

RELATIONS = ("on", "above", "below", "touching", "near", "between",
             "behind", "in-front-of", "left-of", "right-of")

# order in which relation classes are preferred when describing a location
SALIENCE_ORDER = ("on", "between", "touching", "near",
                  "behind", "in-front-of", "left-of", "right-of",
                  "above", "below")


class WorldError(Exception):
    pass


class UnknownBlock(WorldError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown block {name}")


class OutOfBounds(WorldError):
    pass


class Interpenetration(WorldError):
    pass


@dataclass(frozen=True)
class Block:
    name: str          # bare logo name, e.g. "Toyota" or "Burger King"
    color: str         # red | green | blue
    side: float = DEFAULT_SIDE


@dataclass(frozen=True)
class SpatialFact:
    subject: str
    predicate: str
    objects: tuple[str, ...]

    def __post_init__(self):
        n = 2 if self.predicate == "between" else 1
        if len(self.objects) != n:
            raise ValueError(f"{self.predicate} takes {n} object(s)")
        if self.subject in self.objects:
            raise ValueError("subject may not be one of the objects")

    def key(self) -> tuple:
        objs = self.objects
        if self.predicate == "between":
            objs = tuple(sorted(objs))
        return (self.subject, self.predicate, objs)


@dataclass(frozen=True)
class Scene:
    positions: dict[str, Vec]
    side: float = DEFAULT_SIDE
    table: tuple[float, float] = DEFAULT_HALF_EXTENTS   # half-extents

    def position(self, name: str) -> Vec:
        try:
            return self.positions[name]
        except KeyError:
            raise UnknownBlock(name) from None

    def names(self) -> list[str]:
        return list(self.positions)

    def with_position(self, name: str, pos: Vec) -> "Scene":
        if name not in self.positions:
            raise UnknownBlock(name)
        new = dict(self.positions)
        new[name] = pos
        return replace(self, positions=new)


def _dist(a: Vec, b: Vec) -> float:
    return math.dist(a, b)


def _hdist(a: Vec, b: Vec) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def eval_relation(scene: Scene, fact: SpatialFact) -> bool:
    """Truth of one spatial fact under the rough centroid thresholds."""
    s = scene.side
    a = scene.position(fact.subject)
    if fact.predicate == "between":
        b = scene.position(fact.objects[0])
        c = scene.position(fact.objects[1])
        return _between(a, b, c, s)
    b = scene.position(fact.objects[0])
    dx, dy, dz = a[0] - b[0], a[1] - b[1], a[2] - b[2]
    pred = fact.predicate
    if pred == "touching":
        return _dist(a, b) <= 1.1 * s
    if pred == "on":
        return 0.8 * s <= dz <= 1.2 * s and _hdist(a, b) < 0.5 * s
    if pred == "above":
        return dz > 0.8 * s and _hdist(a, b) < s
    if pred == "below":
        return -dz > 0.8 * s and _hdist(a, b) < s
    if pred == "near":
        return _hdist(a, b) <= 2 * s and _dist(a, b) > 1.1 * s
    if pred == "behind":
        return abs(dy) > abs(dx) and dy > 0.5 * s
    if pred == "in-front-of":
        return abs(dy) > abs(dx) and -dy > 0.5 * s
    if pred == "left-of":
        return abs(dx) >= abs(dy) and -dx > 0.5 * s
    if pred == "right-of":
        return abs(dx) >= abs(dy) and dx > 0.5 * s
    raise ValueError(f"unknown relation {pred!r}")


def _between(p: Vec, a: Vec, c: Vec, side: float) -> bool:
    """Perpendicular deviation from the a-c segment < side/2, projection interior."""
    seg = (c[0] - a[0], c[1] - a[1], c[2] - a[2])
    seg_len2 = sum(v * v for v in seg)
    if seg_len2 == 0:
        return False
    ap = (p[0] - a[0], p[1] - a[1], p[2] - a[2])
    t = sum(u * v for u, v in zip(ap, seg)) / seg_len2
    if not 0.0 < t < 1.0:
        return False
    proj = (a[0] + t * seg[0], a[1] + t * seg[1], a[2] + t * seg[2])
    return _dist(p, proj) < 0.5 * side


def relations_holding(scene: Scene, subject: str) -> list[SpatialFact]:
    """Every true relation with the given subject, deduplicated."""
    scene.position(subject)
    others = [n for n in scene.names() if n != subject]
    facts: list[SpatialFact] = []
    seen: set[tuple] = set()
    for obj in others:
        for pred in RELATIONS:
            if pred == "between":
                continue
            f = SpatialFact(subject, pred, (obj,))
            if eval_relation(scene, f) and f.key() not in seen:
                seen.add(f.key())
                facts.append(f)
    for i, a in enumerate(others):
        for c in others[i + 1:]:
            pair = _ordered_pair(scene, a, c)
            f = SpatialFact(subject, "between", pair)
            if eval_relation(scene, f) and f.key() not in seen:
                seen.add(f.key())
                facts.append(f)
    return facts


def _ordered_pair(scene: Scene, a: str, c: str) -> tuple[str, str]:
    # canonical flanker order: by x, then y, then name
    pa, pc = scene.position(a), scene.position(c)
    if (pa[0], pa[1], a) <= (pc[0], pc[1], c):
        return (a, c)
    return (c, a)


def describe_location(scene: Scene, subject: str) -> list[SpatialFact]:
    """Relations of the single most salient class, best first, truncated.

    'between' reports only the tightest flanker pair; other classes report
    at most two facts in lexicographic object order.
    """
    facts = relations_holding(scene, subject)
    for pred in SALIENCE_ORDER:
        cls = [f for f in facts if f.predicate == pred]
        if not cls:
            continue
        if pred == "between":
            def spread(f: SpatialFact) -> float:
                return _dist(scene.position(f.objects[0]),
                             scene.position(f.objects[1]))
            cls.sort(key=lambda f: (spread(f), tuple(sorted(f.objects))))
            return cls[:1]
        cls.sort(key=lambda f: f.objects)
        return cls[:2]
    return []


def table_region(scene: Scene, subject: str) -> str:
    """Rough table-region wording used when no relation to another block holds."""
    x, y, _ = scene.position(subject)
    hx, hy = scene.table
    parts = []
    if y < -hy / 3:
        parts.append("front")
    elif y > hy / 3:
        parts.append("back")
    if x < -hx / 3:
        parts.append("left")
    elif x > hx / 3:
        parts.append("right")
    return "-".join(parts) if parts else "middle"


def check_placement(scene: Scene, block: str, to: Vec) -> None:
    hx, hy = scene.table
    s = scene.side
    if abs(to[0]) > hx + s or abs(to[1]) > hy + s or to[2] < s / 2 - 1e-9:
        raise OutOfBounds(f"{to} is off the table")
    for name, pos in scene.positions.items():
        if name != block and _dist(pos, to) < 0.8 * s:
            raise Interpenetration(f"{block} at {to} would overlap {name}")


def apply_move(scene: Scene, block: str, to: Vec) -> Scene:
    """Scene with one block displaced; validates bounds and interpenetration."""
    scene.position(block)
    check_placement(scene, block, to)
    return scene.with_position(block, to)


def invert_move(scene: Scene, block: str, from_: Vec) -> Scene:
    """Undo a move by restoring the block's prior centroid (no re-validation)."""
    return scene.with_position(block, from_)


@dataclass(frozen=True)
class World:
    """Block inventory plus the initial scene, as loaded from a world file."""
    blocks: dict[str, Block]
    scene: Scene

    def block(self, name: str) -> Block:
        try:
            return self.blocks[name]
        except KeyError:
            raise UnknownBlock(name) from None


def load_world(path: str) -> World:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    return world_from_dict(data)


def world_from_dict(data: dict) -> World:
    side = float(data.get("side", DEFAULT_SIDE))
    tx, ty = data.get("table", [1.5, 1.5])
    table = (float(tx) / 2, float(ty) / 2)   # file stores full extents
    blocks: dict[str, Block] = {}
    positions: dict[str, Vec] = {}
    for b in data["blocks"]:
        name = b["name"]
        if name in blocks:
            raise WorldError(f"duplicate block name {name!r}")
        blocks[name] = Block(name=name, color=b.get("color", "red"), side=side)
        x, y, z = b["position"]
        positions[name] = (float(x), float(y), float(z))
    return World(blocks=blocks, scene=Scene(positions=positions, side=side, table=table))


def world_to_dict(world: World) -> dict:
    return {
        "side": world.scene.side,
        "table": [world.scene.table[0] * 2, world.scene.table[1] * 2],
        "blocks": [
            {"name": b.name, "color": b.color,
             "position": list(world.scene.positions[b.name])}
            for b in world.blocks.values()
        ],
    }
