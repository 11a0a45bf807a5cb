"""Kangxi radical lookup for CJK unified ideographs.

Characters in U+4E00..U+9FFF are mapped to their Kangxi radical index
(1..214) through a table of inclusive codepoint ranges; everything else
(including non-Chinese text) maps to the shared index 0. The embedding
table for radicals therefore has 215 rows.

The default table ships as package data (see scripts/gen_radical_table.py);
an alternative table can be loaded from a file of ``U+XXXX U+YYYY idx``
lines.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from importlib import resources

CJK_LO = 0x4E00
CJK_HI = 0x9FFF
NUM_RADICALS = 214
# rows in the radical embedding table: indices 0..214
RADICAL_VOCAB = NUM_RADICALS + 1


@dataclass
class RadicalTable:
    """Sorted, non-overlapping codepoint ranges -> radical index."""

    ranges: list[tuple[int, int, int]]  # (lo, hi, idx), sorted by lo

    def __post_init__(self):
        self._starts = [lo for lo, _, _ in self.ranges]

    def radical_of(self, ch: str) -> int:
        """Radical index of a character, 0 if outside the CJK range."""
        cp = ord(ch)
        if not CJK_LO <= cp <= CJK_HI:
            return 0
        pos = bisect.bisect_right(self._starts, cp) - 1
        if pos < 0:
            return 0
        lo, hi, idx = self.ranges[pos]
        return idx if lo <= cp <= hi else 0


def parse_radical_table(lines) -> RadicalTable:
    ranges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            lo_s, hi_s, idx_s = line.split()
            lo, hi, idx = int(lo_s[2:], 16), int(hi_s[2:], 16), int(idx_s)
        except ValueError as exc:
            raise ValueError(f"bad radical table line {lineno}: {line!r}") from exc
        if not 1 <= idx <= NUM_RADICALS:
            raise ValueError(f"radical index {idx} out of 1..{NUM_RADICALS} (line {lineno})")
        if not CJK_LO <= lo <= hi <= CJK_HI:
            raise ValueError(f"range outside CJK block (line {lineno})")
        ranges.append((lo, hi, idx))
    ranges.sort()
    for (_, hi_a, _), (lo_b, _, _) in zip(ranges, ranges[1:]):
        if lo_b <= hi_a:
            raise ValueError("overlapping radical ranges")
    return RadicalTable(ranges)


def load_radical_table(path: str) -> RadicalTable:
    with open(path, encoding="utf-8") as f:
        return parse_radical_table(f)


def default_radical_table() -> RadicalTable:
    text = resources.files("segtag.data").joinpath("kangxi_ranges.txt").read_text("utf-8")
    return parse_radical_table(text.splitlines())
