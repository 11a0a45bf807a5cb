"""Combinatory BIES x POS label space with data-driven pruning.

Joint segmentation and tagging is cast as character-level tagging: each
character gets a (boundary, pos) label where the boundary is one of B/I/E/S
(begin, inside, end, single-character word). The label universe is pruned
against the training data: a combo is kept only if the observed word lengths
for that POS make it realizable (e.g. a tag that only ever marks
single-character words keeps S but loses B/I/E).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import TaggedSentence

BOUNDARIES = ("B", "I", "E", "S")
_BOUNDARY_RANK = {b: i for i, b in enumerate(BOUNDARIES)}

# Boundary bigrams that keep BIES sequences well-formed.
_VALID_NEXT = {
    "B": ("I", "E"),
    "I": ("I", "E"),
    "E": ("B", "S"),
    "S": ("B", "S"),
}
_VALID_START = ("B", "S")
_VALID_END = ("E", "S")


@dataclass(frozen=True, order=True)
class ComboLabel:
    boundary: str
    pos: str

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"bad boundary tag {self.boundary!r}")

    def __str__(self) -> str:
        return f"{self.boundary}-{self.pos}"


def encode_labels(sentence: TaggedSentence) -> list[ComboLabel]:
    """Word-level annotation -> one combinatory label per character."""
    if len(sentence) == 0:
        raise ValueError("empty input")
    labels = []
    for surface, pos in sentence.words:
        n = len(surface)
        if n == 1:
            labels.append(ComboLabel("S", pos))
        else:
            labels.append(ComboLabel("B", pos))
            labels.extend(ComboLabel("I", pos) for _ in range(n - 2))
            labels.append(ComboLabel("E", pos))
    return labels


def decode_labels(chars: str, labels: list[ComboLabel]) -> TaggedSentence:
    """Character labels -> words, with greedy left-to-right repair.

    A word starts at B or S; I/E continue the open word; an I/E with no open
    word starts a new one. A word's POS is the POS of its first character's
    label. Well-formed inputs round-trip with :func:`encode_labels` exactly;
    ill-formed ones are repaired deterministically so the function is total.
    """
    if len(chars) != len(labels):
        raise ValueError(f"length mismatch: {len(chars)} chars, {len(labels)} labels")
    words: list[tuple[str, str]] = []
    buf = ""
    buf_pos = ""
    for ch, label in zip(chars, labels):
        if label.boundary == "S":
            if buf:
                words.append((buf, buf_pos))
                buf = ""
            words.append((ch, label.pos))
        elif label.boundary == "B":
            if buf:
                words.append((buf, buf_pos))
            buf, buf_pos = ch, label.pos
        else:  # I or E
            if buf:
                buf += ch
            else:
                buf, buf_pos = ch, label.pos
            if label.boundary == "E":
                words.append((buf, buf_pos))
                buf = ""
    if buf:
        words.append((buf, buf_pos))
    return TaggedSentence(words)


@dataclass
class LabelSpace:
    """Pruned, index-stable list of combinatory labels."""

    labels: list[ComboLabel]
    pos_max_len: dict[str, int]
    index_of: dict[ComboLabel, int] = field(init=False)

    def __post_init__(self):
        self.index_of = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index_of) != len(self.labels):
            raise ValueError("duplicate labels")

    @property
    def k(self) -> int:
        return len(self.labels)

    def encode_ids(self, sentence: TaggedSentence) -> list[int]:
        """Gold label ids for a sentence; raises if a label was pruned."""
        ids = []
        for label in encode_labels(sentence):
            if label not in self.index_of:
                raise KeyError(f"label {label} not in label space")
            ids.append(self.index_of[label])
        return ids

    def decode_ids(self, chars: str, ids: list[int]) -> TaggedSentence:
        return decode_labels(chars, [self.labels[i] for i in ids])

    def transition_masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Boolean (trans[k,k], start[k], end[k]) validity masks.

        trans[i, j] is True when label j may follow label i: the boundary
        bigram must be well-formed and a continuation (I/E) must keep the POS
        of the word opened by the preceding B/I.
        """
        k = self.k
        trans = np.zeros((k, k), dtype=bool)
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                if b.boundary not in _VALID_NEXT[a.boundary]:
                    continue
                if b.boundary in ("I", "E") and b.pos != a.pos:
                    continue
                trans[i, j] = True
        start = np.array([lab.boundary in _VALID_START for lab in self.labels])
        end = np.array([lab.boundary in _VALID_END for lab in self.labels])
        return trans, start, end


def build_label_space(corpus: list[TaggedSentence]) -> LabelSpace:
    """Collect realizable (boundary, pos) combos from a training corpus.

    For each POS tag: S requires an observed length-1 word, B/E require max
    observed length >= 2, I requires >= 3. Labels are ordered by POS string,
    then B < I < E < S, so serialized models are stable across runs.
    """
    if not corpus:
        raise ValueError("empty corpus")
    pos_max_len: dict[str, int] = {}
    has_single: set[str] = set()
    for sentence in corpus:
        for surface, pos in sentence.words:
            n = len(surface)
            pos_max_len[pos] = max(pos_max_len.get(pos, 0), n)
            if n == 1:
                has_single.add(pos)
    labels = []
    for pos in sorted(pos_max_len):
        max_len = pos_max_len[pos]
        for boundary in BOUNDARIES:
            if boundary == "S":
                keep = pos in has_single
            elif boundary == "I":
                keep = max_len >= 3
            else:  # B or E
                keep = max_len >= 2
            if keep:
                labels.append(ComboLabel(boundary, pos))
    labels.sort(key=lambda lab: (lab.pos, _BOUNDARY_RANK[lab.boundary]))
    return LabelSpace(labels, pos_max_len)
