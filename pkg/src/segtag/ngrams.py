"""Character n-gram vocabularies and context-window spans.

A character's representation concatenates separately-embedded n-grams of
orders 1..max_order centred on it, extending left first for even orders
(so the order-2 context of position i is characters i-1..i). Windows
overflowing the sentence edges are filled with a reserved padding character.
Each order has its own id space with a single UNK id (0) for unseen n-grams.
"""

from __future__ import annotations

from dataclasses import dataclass

# Private-use codepoint: cannot collide with real corpus text.
PAD_CHAR = ""
UNK_ID = 0


def ngram_span(i: int, order: int, n: int) -> tuple[int, int]:
    """Inclusive (start, end) character span of the order-o window at i.

    start = i - ceil((o-1)/2), end = i + floor((o-1)/2); positions outside
    [0, n) are later filled with PAD_CHAR. Always o characters long.
    """
    if not 0 <= i < n:
        raise ValueError(f"position {i} out of range for length {n}")
    if order < 1:
        raise ValueError("order must be >= 1")
    half = order - 1
    return i - (half + 1) // 2, i + half // 2


def ngram_at(chars: str, i: int, order: int) -> str:
    """The order-o window string at position i, padded at sentence edges."""
    start, end = ngram_span(i, order, len(chars))
    return "".join(
        chars[j] if 0 <= j < len(chars) else PAD_CHAR
        for j in range(start, end + 1)
    )


@dataclass
class NgramVocab:
    """Per-order n-gram -> dense id maps (id 0 reserved for UNK)."""

    max_order: int
    maps: list[dict[str, int]]  # maps[o-1] for order o

    def id_of(self, gram: str, order: int) -> int:
        return self.maps[order - 1].get(gram, UNK_ID)

    def size(self, order: int) -> int:
        """Rows needed by the order-o embedding table, UNK included."""
        return len(self.maps[order - 1]) + 1

    def sentence_ids(self, chars: str, order: int) -> list[int]:
        return [self.id_of(ngram_at(chars, i, order), order)
                for i in range(len(chars))]


def build_vocab(corpus_chars: list[str], max_order: int) -> NgramVocab:
    """Collect every n-gram of each order occurring in the training text.

    Edge windows contribute padded n-grams. The padding character itself is
    entered into the order-1 vocabulary so its embedding row exists. Keys are
    sorted per order, which makes ids deterministic.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    seen: list[set[str]] = [set() for _ in range(max_order)]
    seen[0].add(PAD_CHAR)
    for chars in corpus_chars:
        for order in range(1, max_order + 1):
            for i in range(len(chars)):
                seen[order - 1].add(ngram_at(chars, i, order))
    maps = [{gram: idx for idx, gram in enumerate(sorted(grams), start=1)}
            for grams in seen]
    return NgramVocab(max_order, maps)
