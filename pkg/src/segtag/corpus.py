"""Tagged-sentence data type and corpus file I/O.

Corpus file format: UTF-8 text, one sentence per line, tokens separated by
single spaces, each token ``surface_POS`` with the *last* underscore as the
separator (surfaces may contain underscores, POS tags may not). Blank lines
are ignored when reading corpora.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class TaggedSentence:
    """A segmented, POS-tagged sentence: an ordered list of (surface, pos)."""

    words: list[tuple[str, str]]

    def __post_init__(self):
        for surface, _pos in self.words:
            if not surface:
                raise ValueError("empty word surface in sentence")

    def chars(self) -> str:
        """The raw character sequence (concatenation of all surfaces)."""
        return "".join(surface for surface, _ in self.words)

    def spans(self, with_pos: bool) -> set[tuple]:
        """Word spans as (start, end) character offsets, end exclusive.

        With ``with_pos`` each span also carries the word's POS tag.
        """
        out = set()
        pos_start = 0
        for surface, pos in self.words:
            end = pos_start + len(surface)
            out.add((pos_start, end, pos) if with_pos else (pos_start, end))
            pos_start = end
        return out

    def __len__(self) -> int:
        return len(self.words)


def parse_sentence(line: str, where: str = "") -> TaggedSentence:
    """Parse one ``surface_POS surface_POS ...`` line."""
    words = []
    for token in line.split(" "):
        surface, sep, pos = token.rpartition("_")
        if not sep or not surface or not pos:
            raise ValueError(f"malformed token {token!r}{where}")
        words.append((surface, pos))
    return TaggedSentence(words)


def format_sentence(sentence: TaggedSentence) -> str:
    return " ".join(f"{surface}_{pos}" for surface, pos in sentence.words)


def read_corpus(path: str) -> list[TaggedSentence]:
    """Read a corpus file; blank lines are skipped."""
    sentences = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            sentences.append(parse_sentence(line, f" ({path}, line {lineno})"))
    return sentences


def write_corpus(path: str, sentences: list[TaggedSentence | None]) -> None:
    """Write sentences one per line; ``None`` entries become blank lines."""
    with open(path, "w", encoding="utf-8") as f:
        for sentence in sentences:
            f.write(format_sentence(sentence) if sentence is not None else "")
            f.write("\n")


def read_raw(path: str) -> list[str]:
    """Read raw input for tagging: one unsegmented sentence per line.

    Blank lines are kept (they map to blank output lines).
    """
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]
