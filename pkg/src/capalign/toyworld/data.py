"""Dataset builder and loader: PNG images, JSONL scene records, manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .grammar import GRAMMAR_VERSION, TokenSeq, parse_prompt, scene_to_prompt, prompt_object_order
from .render import MaskSet, render
from .scene import ObjectSpec, SceneGraph, sample_scene

MANIFEST_SCHEMA = "toyworld/1"


class DatasetError(RuntimeError):
    pass


def _scene_to_json(scene: SceneGraph) -> dict:
    return {
        "objects": [
            {"shape": o.shape, "color": o.color, "count": o.count,
             "centers": [list(c) for c in o.centers], "radius": o.radius}
            for o in scene.objects
        ],
        "relations": [list(r) for r in scene.relations],
        "seed": scene.seed,
    }


def scene_from_json(rec: dict) -> SceneGraph:
    return SceneGraph(
        objects=tuple(
            ObjectSpec(shape=o["shape"], color=o["color"], count=o["count"],
                       centers=tuple(tuple(c) for c in o["centers"]),
                       radius=o["radius"])
            for o in rec["objects"]
        ),
        relations=tuple(tuple(r) for r in rec["relations"]),
        seed=rec["seed"],
    )


def save_image_png(path: Path, image: np.ndarray) -> None:
    arr = np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr.transpose(1, 2, 0), mode="RGB").save(path)


def load_image_png(path: Path) -> np.ndarray:
    arr = np.asarray(Image.open(path).convert("RGB"), dtype=np.float32) / 255.0
    return arr.transpose(2, 0, 1)


def _save_masks_png(path: Path, masks: MaskSet) -> None:
    # Oracle masks are disjoint; store them as one label map (0 = background,
    # i+1 = entity i in prompt order).
    label = np.zeros(masks.masks[0].shape, dtype=np.uint8)
    for i, m in enumerate(masks.masks):
        label[m.astype(bool)] = i + 1
    Image.fromarray(label, mode="L").save(path)


def _load_masks_png(path: Path, n_entities: int) -> MaskSet:
    label = np.asarray(Image.open(path).convert("L"))
    masks = [(label == i + 1).astype(np.uint8) for i in range(n_entities)]
    return MaskSet(masks=masks, provenance="oracle")


def build_dataset(n: int, seed: int, out_path: str | Path,
                  max_objects: int = 3, min_objects: int = 1) -> dict:
    """Generate ``n`` scenes and write images, masks, JSONL records and manifest.

    Byte-identical output for identical (n, seed). Returns the manifest dict.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = Path(out_path)
    try:
        (out / "images").mkdir(parents=True, exist_ok=True)
        (out / "masks").mkdir(parents=True, exist_ok=True)
        records = []
        for i in range(n):
            scene = sample_scene(seed * 1_000_003 + i, max_objects=max_objects,
                                 min_objects=min_objects)
            image, masks = render(scene)
            tokens = scene_to_prompt(scene)
            parsed = parse_prompt(tokens)
            order = prompt_object_order(scene)
            # Reorder oracle masks from scene-object order to prompt-entity order.
            entity_masks = MaskSet(masks=[masks.masks[k] for k in order],
                                   provenance="oracle")
            name = f"{i:05d}"
            save_image_png(out / "images" / f"{name}.png", image)
            _save_masks_png(out / "masks" / f"{name}.png", entity_masks)
            records.append({
                "id": name,
                "scene": _scene_to_json(scene),
                "prompt": tokens.text,
                "tokens": list(tokens.ids),
                "entities": [
                    {"object_index": order[j],
                     "noun_positions": list(e.noun_positions),
                     "attribute_positions": list(e.attribute_positions)}
                    for j, e in enumerate(parsed.entities)
                ],
                "prompt_relations": [
                    {"word_position": r.word_position,
                     "subject": r.subject, "object": r.object}
                    for r in parsed.relations
                ],
            })
        with open(out / "scenes.jsonl", "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        manifest = {"schema": MANIFEST_SCHEMA, "n": n, "seed": seed,
                    "max_objects": max_objects, "min_objects": min_objects,
                    "grammar_version": GRAMMAR_VERSION}
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
        return manifest
    except OSError as exc:
        raise DatasetError(f"dataset write failed under {out}: {exc}") from exc


@dataclass
class Sample:
    scene: SceneGraph
    tokens: TokenSeq
    image: np.ndarray  # (3, H, W) float32
    masks: MaskSet  # prompt-entity order
    record: dict


class ToyDataset:
    """Lazy reader over a built dataset directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        manifest_path = self.root / "manifest.json"
        if not manifest_path.exists():
            raise DatasetError(f"no manifest at {manifest_path}")
        with open(manifest_path) as fh:
            self.manifest = json.load(fh)
        if self.manifest.get("schema") != MANIFEST_SCHEMA:
            raise DatasetError(
                f"manifest schema {self.manifest.get('schema')!r} does not match "
                f"{MANIFEST_SCHEMA!r}")
        if self.manifest.get("grammar_version") != GRAMMAR_VERSION:
            raise DatasetError(
                f"dataset grammar version {self.manifest.get('grammar_version')!r} "
                f"does not match {GRAMMAR_VERSION!r}")
        with open(self.root / "scenes.jsonl") as fh:
            self.records = [json.loads(line) for line in fh]

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i: int) -> Sample:
        rec = self.records[i]
        scene = scene_from_json(rec["scene"])
        tokens = TokenSeq(tuple(rec["tokens"]))
        image = load_image_png(self.root / "images" / f"{rec['id']}.png")
        masks = _load_masks_png(self.root / "masks" / f"{rec['id']}.png",
                                len(rec["entities"]))
        return Sample(scene=scene, tokens=tokens, image=image, masks=masks, record=rec)

    def tokens(self, i: int) -> TokenSeq:
        return TokenSeq(tuple(self.records[i]["tokens"]))
