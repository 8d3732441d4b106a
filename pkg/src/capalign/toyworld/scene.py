"""Synthetic scene graphs: colored geometric primitives on a small canvas.

A scene is the ground truth behind one image: 1-3 objects, each a colored
shape with one or two non-overlapping instances, plus optional spatial
relations that are geometrically true of the instance centers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CANVAS = 32

SHAPES = ("circle", "square", "triangle")
COLORS = ("red", "green", "blue", "yellow")
RELATIONS = ("above", "below", "left of", "right of")

# Relations the sampler may declare; the other two are parse/query synonyms.
_DECLARED_RELATIONS = ("above", "left of")

_MAX_SCENE_ATTEMPTS = 100
_MAX_PLACE_ATTEMPTS = 200


class PlacementError(RuntimeError):
    """Raised when non-overlapping placement fails after bounded retries."""


def _bounding_radius(shape: str, radius: float) -> float:
    # Square "radius" is the half-side, so its bounding circle is r*sqrt(2);
    # circle and equilateral triangle fit inside their circumradius.
    return radius * np.sqrt(2.0) if shape == "square" else radius


@dataclass(frozen=True)
class ObjectSpec:
    shape: str
    color: str
    count: int
    centers: tuple[tuple[float, float], ...]  # (row, col) per instance
    radius: float

    def validate(self) -> None:
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.color not in COLORS:
            raise ValueError(f"unknown color {self.color!r}")
        if self.count not in (1, 2):
            raise ValueError(f"count must be 1 or 2, got {self.count}")
        if len(self.centers) != self.count:
            raise ValueError("count must equal the number of instances")
        bound = _bounding_radius(self.shape, self.radius)
        for r, c in self.centers:
            if not (bound <= r <= CANVAS - bound and bound <= c <= CANVAS - bound):
                raise ValueError(f"instance at ({r:.1f},{c:.1f}) leaves the canvas")

    def mean_center(self) -> tuple[float, float]:
        rows = [c[0] for c in self.centers]
        cols = [c[1] for c in self.centers]
        return (sum(rows) / len(rows), sum(cols) / len(cols))


@dataclass(frozen=True)
class SceneGraph:
    objects: tuple[ObjectSpec, ...]
    relations: tuple[tuple[str, int, int], ...] = field(default_factory=tuple)
    seed: int = 0

    def validate(self) -> None:
        if not self.objects:
            raise ValueError("scene must contain at least one object")
        for obj in self.objects:
            obj.validate()
        instances = [
            (obj.shape, obj.radius, ctr)
            for obj in self.objects
            for ctr in obj.centers
        ]
        for i in range(len(instances)):
            for j in range(i + 1, len(instances)):
                si, ri, (yi, xi) = instances[i]
                sj, rj, (yj, xj) = instances[j]
                min_dist = _bounding_radius(si, ri) + _bounding_radius(sj, rj)
                if np.hypot(yi - yj, xi - xj) < min_dist:
                    raise ValueError("object instances overlap")
        for rel, s, o in self.relations:
            if not relation_holds(self, rel, s, o):
                raise ValueError(f"declared relation {(rel, s, o)} is not geometrically true")


def relation_holds(scene: SceneGraph, relation: str, subject: int, obj: int) -> bool:
    """Geometric truth of a relation between two objects' mean instance centers."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if subject == obj:
        return False
    sy, sx = scene.objects[subject].mean_center()
    oy, ox = scene.objects[obj].mean_center()
    if relation == "above":
        return sy < oy
    if relation == "below":
        return sy > oy
    if relation == "left of":
        return sx < ox
    return sx > ox


def sample_scene(seed: int, max_objects: int = 3, min_objects: int = 1) -> SceneGraph:
    """Draw a random valid scene; pure function of the seed."""
    if not 1 <= max_objects <= 3:
        raise ValueError(f"max_objects must be in [1, 3], got {max_objects}")
    if not 1 <= min_objects <= max_objects:
        raise ValueError(f"min_objects must be in [1, {max_objects}]")
    rng = np.random.default_rng(seed)
    n_objects = int(rng.integers(min_objects, max_objects + 1))
    shapes = [SHAPES[rng.integers(len(SHAPES))] for _ in range(n_objects)]
    colors = [COLORS[rng.integers(len(COLORS))] for _ in range(n_objects)]
    counts = [2 if rng.random() < 0.25 else 1 for _ in range(n_objects)]
    radii = [float(rng.uniform(2.5, 4.0)) for _ in range(n_objects)]

    for _ in range(_MAX_SCENE_ATTEMPTS):
        placed: list[tuple[float, float, float]] = []  # (row, col, bounding radius)
        objects: list[ObjectSpec] = []
        ok = True
        for shape, color, count, radius in zip(shapes, colors, counts, radii):
            bound = _bounding_radius(shape, radius)
            centers = []
            for _ in range(count):
                for _ in range(_MAX_PLACE_ATTEMPTS):
                    row = float(rng.uniform(bound + 0.5, CANVAS - bound - 0.5))
                    col = float(rng.uniform(bound + 0.5, CANVAS - bound - 0.5))
                    if all(
                        np.hypot(row - pr, col - pc) >= bound + pb + 1.0
                        for pr, pc, pb in placed
                    ):
                        placed.append((row, col, bound))
                        centers.append((round(row, 3), round(col, 3)))
                        break
                else:
                    ok = False
                    break
            if not ok:
                break
            objects.append(
                ObjectSpec(shape=shape, color=color, count=count,
                           centers=tuple(centers), radius=round(radius, 3))
            )
        if not ok:
            continue
        scene = SceneGraph(objects=tuple(objects), relations=_pick_relation(objects, rng),
                           seed=seed)
        scene.validate()
        return scene
    raise PlacementError(f"could not place {n_objects} objects after "
                         f"{_MAX_SCENE_ATTEMPTS} attempts (seed={seed})")


def _pick_relation(objects, rng) -> tuple[tuple[str, int, int], ...]:
    # Declare at most one relation between the first two objects, only when the
    # geometry is unambiguous (margin of 4 px between mean centers).
    if len(objects) < 2 or rng.random() >= 0.5:
        return ()
    (ay, ax), (by, bx) = objects[0].mean_center(), objects[1].mean_center()
    candidates = []
    if by - ay >= 4.0:
        candidates.append(("above", 0, 1))
    if bx - ax >= 4.0:
        candidates.append(("left of", 0, 1))
    if ay - by >= 4.0:
        candidates.append(("above", 1, 0))
    if ax - bx >= 4.0:
        candidates.append(("left of", 1, 0))
    if not candidates:
        return ()
    return (candidates[rng.integers(len(candidates))],)


def oracle_vqa(scene: SceneGraph, query: tuple) -> bool:
    """Answer a structured query exactly from the scene graph.

    Two query forms:
      ("<shape>", "<color>")                          object presence
      ("<relation>", (shape, color), (shape, color))  spatial relation
    Relation queries are true when any pair of matching objects satisfies the
    relation geometrically (declared relations always do, by invariant).
    """
    if len(query) == 2:
        shape, color = query
        if shape not in SHAPES:
            raise ValueError(f"unknown shape {shape!r}")
        if color not in COLORS:
            raise ValueError(f"unknown color {color!r}")
        return any(o.shape == shape and o.color == color for o in scene.objects)
    if len(query) == 3:
        relation, subj_spec, obj_spec = query
        if relation not in RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        subj_idx = [i for i, o in enumerate(scene.objects)
                    if (o.shape, o.color) == tuple(subj_spec)]
        obj_idx = [i for i, o in enumerate(scene.objects)
                   if (o.shape, o.color) == tuple(obj_spec)]
        for spec in (subj_spec, obj_spec):
            if spec[0] not in SHAPES or spec[1] not in COLORS:
                raise ValueError(f"unknown object spec {tuple(spec)!r}")
        return any(
            relation_holds(scene, relation, s, o)
            for s in subj_idx for o in obj_idx if s != o
        )
    raise ValueError("query must be (shape, color) or (relation, subj, obj)")
