"""Rasterizer for scene graphs: anti-aliased RGB images plus oracle masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scene import CANVAS, SceneGraph

BACKGROUND = 0.82

PALETTE = {
    "red": (0.85, 0.10, 0.10),
    "green": (0.10, 0.72, 0.15),
    "blue": (0.12, 0.22, 0.85),
    "yellow": (0.90, 0.85, 0.10),
}

# 4x4 subpixel coverage sampling; a pixel belongs to the oracle mask when more
# than half its subsamples fall inside the primitive.
_SS = 4
_MASK_THRESHOLD = 0.5


@dataclass
class MaskSet:
    """One binary mask per entity, aligned with the entity order of the prompt."""

    masks: list[np.ndarray]  # each (H, W) uint8 in {0, 1}
    provenance: str  # "oracle" | "segmenter"

    def __post_init__(self):
        if self.provenance not in ("oracle", "segmenter"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for m in self.masks:
            vals = np.unique(m)
            if not np.isin(vals, (0, 1)).all():
                raise ValueError("masks must be binary")

    def __len__(self) -> int:
        return len(self.masks)


def _subpixel_grid(size: int) -> tuple[np.ndarray, np.ndarray]:
    # Subsample centers: pixel (i, j) covers [i, i+1) x [j, j+1).
    offs = (np.arange(_SS) + 0.5) / _SS
    base = np.arange(size)
    rows = (base[:, None] + offs[None, :]).reshape(-1)  # size*_SS
    return rows, rows.copy()


def _coverage(shape: str, center: tuple[float, float], radius: float) -> np.ndarray:
    """Fraction of each pixel covered by the primitive, (CANVAS, CANVAS) float."""
    rows, cols = _subpixel_grid(CANVAS)
    cy, cx = center
    dy = rows[:, None] - cy  # (H*_SS, 1)
    dx = cols[None, :] - cx  # (1, W*_SS)
    if shape == "circle":
        inside = dy * dy + dx * dx <= radius * radius
    elif shape == "square":
        inside = (np.abs(dy) <= radius) & (np.abs(dx) <= radius)
    elif shape == "triangle":
        # Equilateral, apex up, circumradius = radius. Inside = intersection of
        # three half-planes through consecutive vertices.
        angles = np.array([-np.pi / 2, np.pi / 6, 5 * np.pi / 6])
        vy = cy + radius * np.sin(angles)
        vx = cx + radius * np.cos(angles)
        py = rows[:, None]  # absolute subsample coordinates
        px = cols[None, :]
        inside = np.ones((len(rows), len(cols)), dtype=bool)
        for k in range(3):
            ay, ax = vy[k], vx[k]
            by, bx = vy[(k + 1) % 3], vx[(k + 1) % 3]
            # Cross product sign relative to edge a->b; with rows growing
            # downward the vertex loop keeps the interior on the positive side.
            cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            inside &= cross >= 0
    else:
        raise ValueError(f"unknown shape {shape!r}")
    inside = inside.reshape(CANVAS, _SS, CANVAS, _SS)
    return inside.mean(axis=(1, 3))


def render(scene: SceneGraph) -> tuple[np.ndarray, MaskSet]:
    """Draw the scene on a light-gray background.

    Returns (image, masks): image is float32 (3, H, W) in [0, 1]; mask i is the
    pixels where object i's coverage exceeds 0.5, in scene-object order.
    Instances never overlap, so paint order does not matter.
    """
    scene.validate()
    img = np.full((3, CANVAS, CANVAS), BACKGROUND, dtype=np.float64)
    masks = []
    for obj in scene.objects:
        cov = np.zeros((CANVAS, CANVAS))
        for center in obj.centers:
            cov = np.maximum(cov, _coverage(obj.shape, center, obj.radius))
        color = np.asarray(PALETTE[obj.color])[:, None, None]
        img = cov[None] * color + (1.0 - cov[None]) * img
        masks.append((cov > _MASK_THRESHOLD).astype(np.uint8))
    return img.astype(np.float32), MaskSet(masks=masks, provenance="oracle")
