from .scene import (CANVAS, COLORS, RELATIONS, SHAPES, ObjectSpec, PlacementError,
                    SceneGraph, oracle_vqa, relation_holds, sample_scene)
from .render import BACKGROUND, PALETTE, MaskSet, render
from .grammar import (BOS, EOS, GRAMMAR_VERSION, MAX_LEN, PAD, UNK, VOCAB, VOCAB_SIZE,
                      CorruptionMode, Entity, EntityList, InapplicableCorruption,
                      ParseError, Relation, TokenSeq, corrupt_caption, entity_specs,
                      parse_prompt, prompt_object_order, scene_to_prompt, token_class)
from .data import (MANIFEST_SCHEMA, DatasetError, Sample, ToyDataset, build_dataset,
                   load_image_png, save_image_png, scene_from_json)

__all__ = [
    "CANVAS", "COLORS", "RELATIONS", "SHAPES", "ObjectSpec", "PlacementError",
    "SceneGraph", "oracle_vqa", "relation_holds", "sample_scene",
    "BACKGROUND", "PALETTE", "MaskSet", "render",
    "BOS", "EOS", "GRAMMAR_VERSION", "MAX_LEN", "PAD", "UNK", "VOCAB", "VOCAB_SIZE",
    "CorruptionMode", "Entity", "EntityList", "InapplicableCorruption", "ParseError",
    "Relation", "TokenSeq", "corrupt_caption", "entity_specs", "parse_prompt",
    "prompt_object_order", "scene_to_prompt", "token_class",
    "MANIFEST_SCHEMA", "DatasetError", "Sample", "ToyDataset", "build_dataset",
    "load_image_png", "save_image_png", "scene_from_json",
]
