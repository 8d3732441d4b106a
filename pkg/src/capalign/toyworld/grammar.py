"""Closed prompt grammar: tokenization, generation, parsing, corruption.

The vocabulary is exactly 24 symbols. The generator emits prompts like
"a red circle and two blue squares" or "a red circle above a blue square";
the parser additionally understands the synonym relations (below, right of)
and the numerals one/three, which only occur in queries and corruptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .scene import SceneGraph

GRAMMAR_VERSION = "colorshapes-grammar/1"

VOCAB = (
    "<pad>", "<bos>", "<eos>", "<unk>",
    "a", "one", "two", "three",
    "and",
    "red", "green", "blue", "yellow",
    "circle", "square", "triangle",
    "circles", "squares", "triangles",
    "above", "below", "left", "right", "of",
)
VOCAB_SIZE = len(VOCAB)  # 24
WORD_TO_ID = {w: i for i, w in enumerate(VOCAB)}

PAD, BOS, EOS, UNK = 0, 1, 2, 3
MAX_LEN = 16

_COLOR_WORDS = ("red", "green", "blue", "yellow")
_SHAPE_SINGULAR = {"circle": "circle", "square": "square", "triangle": "triangle"}
_SHAPE_PLURAL = {"circle": "circles", "square": "squares", "triangle": "triangles"}
_PLURAL_TO_SINGULAR = {v: k for k, v in _SHAPE_PLURAL.items()}
_NUMERALS = {"a": 1, "one": 1, "two": 2, "three": 3}
_COUNT_TO_NUMERAL = {1: "a", 2: "two"}
_REL_FIRST_WORDS = ("above", "below", "left", "right")

TOKEN_CLASSES = {
    **{w: "color" for w in _COLOR_WORDS},
    **{w: "shape" for w in (*_SHAPE_SINGULAR, *_SHAPE_PLURAL.values())},
    "one": "count", "two": "count", "three": "count",
    "above": "relation", "below": "relation", "left": "relation", "right": "relation",
}


def token_class(word: str) -> str:
    """Audit taxonomy; everything not color/shape/count/relation is a function word."""
    return TOKEN_CLASSES.get(word, "function")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (token position {position})")
        self.position = position


class InapplicableCorruption(ValueError):
    """The prompt lacks the structure the corruption mode needs."""


class CorruptionMode(str, Enum):
    ATTRIBUTE = "attribute"
    RELATION = "relation"
    QUANTITY = "quantity"


@dataclass(frozen=True)
class TokenSeq:
    ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.ids) > MAX_LEN:
            raise ValueError(f"sequence length {len(self.ids)} exceeds {MAX_LEN}")
        if any(not 0 <= i < VOCAB_SIZE for i in self.ids):
            raise ValueError("token id out of vocabulary range")
        if len(self.ids) < 2 or self.ids[0] != BOS or self.ids[-1] != EOS:
            raise ValueError("sequence must start with BOS and end with EOS")
        if any(i in (PAD, BOS, EOS) for i in self.ids[1:-1]):
            raise ValueError("special tokens are not allowed inside a sequence")

    @classmethod
    def from_words(cls, words: list[str]) -> "TokenSeq":
        ids = [BOS]
        for w in words:
            if w not in WORD_TO_ID:
                raise ValueError(f"unknown word {w!r}")
            ids.append(WORD_TO_ID[w])
        ids.append(EOS)
        return cls(tuple(ids))

    @classmethod
    def from_text(cls, text: str) -> "TokenSeq":
        return cls.from_words(text.split())

    @property
    def words(self) -> list[str]:
        return [VOCAB[i] for i in self.ids[1:-1]]

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Entity:
    """Token positions (into TokenSeq.ids) of one noun and its attributes."""

    noun_positions: tuple[int, ...]
    attribute_positions: tuple[int, ...]

    def __post_init__(self):
        if len(self.noun_positions) != 1:
            raise ValueError("an entity has exactly one noun position")

    @property
    def token_positions(self) -> tuple[int, ...]:
        return tuple(sorted(self.noun_positions + self.attribute_positions))


@dataclass(frozen=True)
class Relation:
    word_position: int
    subject: int  # entity index
    object: int


@dataclass
class EntityList:
    entities: list[Entity] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)


def prompt_object_order(scene: SceneGraph) -> tuple[int, ...]:
    """Scene-object indices in the order their phrases appear in the prompt.

    When a relation is declared, its subject and object lead the sentence.
    """
    if not scene.relations:
        return tuple(range(len(scene.objects)))
    _, s, o = scene.relations[0]
    rest = [i for i in range(len(scene.objects)) if i not in (s, o)]
    return (s, o, *rest)


def _noun_phrase(obj) -> list[str]:
    shape = _SHAPE_SINGULAR[obj.shape] if obj.count == 1 else _SHAPE_PLURAL[obj.shape]
    return [_COUNT_TO_NUMERAL[obj.count], obj.color, shape]


def scene_to_prompt(scene: SceneGraph) -> TokenSeq:
    scene.validate()
    order = prompt_object_order(scene)
    words: list[str] = []
    if scene.relations:
        rel, s, o = scene.relations[0]
        words += _noun_phrase(scene.objects[s])
        words += rel.split()
        words += _noun_phrase(scene.objects[o])
        for idx in order[2:]:
            words.append("and")
            words += _noun_phrase(scene.objects[idx])
    else:
        for k, idx in enumerate(order):
            if k:
                words.append("and")
            words += _noun_phrase(scene.objects[idx])
    return TokenSeq.from_words(words)


class _Parser:
    def __init__(self, seq: TokenSeq):
        self.ids = seq.ids
        self.pos = 1  # skip BOS

    def peek(self) -> str:
        return VOCAB[self.ids[self.pos]]

    def take(self, expected: tuple[str, ...], what: str) -> int:
        word = self.peek()
        if word not in expected:
            raise ParseError(f"expected {what}, found {word!r}", self.pos)
        self.pos += 1
        return self.pos - 1

    def noun_phrase(self) -> Entity:
        numeral_pos = self.take(tuple(_NUMERALS), "a numeral")
        plural = _NUMERALS[VOCAB[self.ids[numeral_pos]]] > 1
        color_pos = self.take(_COLOR_WORDS, "a color")
        nouns = tuple(_SHAPE_PLURAL.values()) if plural else tuple(_SHAPE_SINGULAR)
        noun_pos = self.take(nouns, "a plural noun" if plural else "a singular noun")
        return Entity(noun_positions=(noun_pos,), attribute_positions=(color_pos,))


def parse_prompt(seq: TokenSeq, stoplist: tuple[str, ...] = ()) -> EntityList:
    """Extract entities (noun + attribute token positions) and relations.

    ``stoplist`` drops entities whose noun is listed, mirroring a manual
    abstract-noun filter; all toy nouns are concrete, so it defaults to empty.
    """
    p = _Parser(seq)
    out = EntityList()
    while True:
        e1 = p.noun_phrase()
        out.entities.append(e1)
        if p.peek() in _REL_FIRST_WORDS:
            rel_pos = p.pos
            rel_word = p.peek()
            p.pos += 1
            if rel_word in ("left", "right"):
                p.take(("of",), "'of'")
            e2 = p.noun_phrase()
            out.entities.append(e2)
            out.relations.append(
                Relation(word_position=rel_pos,
                         subject=len(out.entities) - 2,
                         object=len(out.entities) - 1))
        word = p.peek()
        if word == "<eos>":
            break
        if word != "and":
            raise ParseError(f"expected 'and' or end of prompt, found {word!r}", p.pos)
        p.pos += 1
    if stoplist:
        out = _apply_stoplist(seq, out, stoplist)
    return out


def _apply_stoplist(seq: TokenSeq, parsed: EntityList, stoplist) -> EntityList:
    keep: list[int] = []
    for i, ent in enumerate(parsed.entities):
        noun = VOCAB[seq.ids[ent.noun_positions[0]]]
        if noun not in stoplist and _PLURAL_TO_SINGULAR.get(noun, noun) not in stoplist:
            keep.append(i)
    remap = {old: new for new, old in enumerate(keep)}
    return EntityList(
        entities=[parsed.entities[i] for i in keep],
        relations=[
            Relation(r.word_position, remap[r.subject], remap[r.object])
            for r in parsed.relations
            if r.subject in remap and r.object in remap
        ],
    )


def entity_specs(seq: TokenSeq, parsed: EntityList) -> list[tuple[str, str, int]]:
    """(shape, color, count) per entity, re-read from the token sequence."""
    specs = []
    for ent in parsed.entities:
        noun = VOCAB[seq.ids[ent.noun_positions[0]]]
        shape = _PLURAL_TO_SINGULAR.get(noun, noun)
        color = VOCAB[seq.ids[ent.attribute_positions[0]]]
        numeral = VOCAB[seq.ids[min(ent.token_positions) - 1]]
        specs.append((shape, color, _NUMERALS[numeral]))
    return specs


def corrupt_caption(seq: TokenSeq, mode: CorruptionMode | str) -> TokenSeq:
    """Produce a grammatical but factually wrong caption for the source scene.

    attribute: swap the colors of the first two differently-colored nouns.
    relation:  swap the subject and object phrases around the relation word.
    quantity:  flip every noun between singular and plural.
    """
    mode = CorruptionMode(mode)
    parsed = parse_prompt(seq)
    ids = list(seq.ids)

    if mode is CorruptionMode.ATTRIBUTE:
        pair = _first_distinct_attribute_pair(seq, parsed)
        if pair is None:
            raise InapplicableCorruption(
                "attribute corruption needs two nouns with distinct attributes")
        (pa, pb) = pair
        ids[pa], ids[pb] = ids[pb], ids[pa]
        return TokenSeq(tuple(ids))

    if mode is CorruptionMode.RELATION:
        if not parsed.relations:
            raise InapplicableCorruption("relation corruption needs a relation")
        rel = parsed.relations[0]
        subj = parsed.entities[rel.subject]
        obj = parsed.entities[rel.object]
        s_lo = min(subj.token_positions) - 1  # include the numeral
        s_hi = max(subj.token_positions)
        o_lo = min(obj.token_positions) - 1
        o_hi = max(obj.token_positions)
        # Noun phrases are always numeral+color+noun, so the swap is in-place.
        ids[s_lo:s_hi + 1], ids[o_lo:o_hi + 1] = ids[o_lo:o_hi + 1], ids[s_lo:s_hi + 1]
        return TokenSeq(tuple(ids))

    for ent in parsed.entities:
        noun_pos = ent.noun_positions[0]
        numeral_pos = min(ent.token_positions) - 1
        noun = VOCAB[ids[noun_pos]]
        if noun in _PLURAL_TO_SINGULAR:
            ids[noun_pos] = WORD_TO_ID[_PLURAL_TO_SINGULAR[noun]]
            ids[numeral_pos] = WORD_TO_ID["a"]
        else:
            ids[noun_pos] = WORD_TO_ID[_SHAPE_PLURAL[noun]]
            ids[numeral_pos] = WORD_TO_ID["two"]
    return TokenSeq(tuple(ids))


def _first_distinct_attribute_pair(seq, parsed):
    attributed = [e for e in parsed.entities if e.attribute_positions]
    for i in range(len(attributed)):
        for j in range(i + 1, len(attributed)):
            pa = attributed[i].attribute_positions[0]
            pb = attributed[j].attribute_positions[0]
            if seq.ids[pa] != seq.ids[pb]:
                return pa, pb
    return None
