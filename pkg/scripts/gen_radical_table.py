#!/usr/bin/env python3
"""Regenerate src/segtag/data/kangxi_ranges.txt from the stdlib unicodedata.

The CJK Unified Ideographs block (U+4E00..U+9FFF) is laid out by Kangxi
radical: each radical's section starts with the radical ideograph itself.
Those 214 section anchors are recovered from the compatibility
decompositions of the Kangxi Radicals block (U+2F00..U+2FD5), which map
each radical character to its unified ideograph.

Characters appended to the block after the original URO (U+9FA6 onward)
are not radical-ordered; the last range simply absorbs them, which is the
usual approximation for range-based lookup.
"""

import os
import unicodedata

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "segtag", "data",
                   "kangxi_ranges.txt")


def radical_anchors():
    anchors = []
    for i in range(214):
        decomp = unicodedata.decomposition(chr(0x2F00 + i))
        assert decomp.startswith("<compat> "), f"radical {i + 1}: {decomp!r}"
        anchors.append(int(decomp.split()[1], 16))
    assert all(a < b for a, b in zip(anchors, anchors[1:]))
    assert anchors[0] == 0x4E00
    return anchors


def main():
    anchors = radical_anchors()
    lines = ["# Kangxi radical index by codepoint range (inclusive).",
             "# Format: U+XXXX U+YYYY idx"]
    for idx, lo in enumerate(anchors, start=1):
        hi = anchors[idx] - 1 if idx < 214 else 0x9FFF
        lines.append(f"U+{lo:04X} U+{hi:04X} {idx}")
    with open(OUT, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {len(anchors)} ranges to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
