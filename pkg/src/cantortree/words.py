"""Finite binary words and the packed-integer representation used internally.

Words at the API boundary are plain Python strings over {0,1}; the empty
word is "".  Hot paths (level enumeration, counting) carry words as
``(bits, length)`` pairs where ``bits`` packs the word MSB-first, so that
for words of equal length numeric order equals lexicographic order.
"""

from __future__ import annotations


def check_word(w: str) -> str:
    """Validate that w is a binary word; returns it unchanged."""
    if not all(c in "01" for c in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def flip_last(w: str) -> str:
    """The sibling of w: same word with the last bit flipped.

    Undefined on the empty word, which has no last bit.
    """
    if not w:
        raise ValueError("flip_last is undefined on the empty word")
    return w[:-1] + ("1" if w[-1] == "0" else "0")


def pack(w: str) -> tuple[int, int]:
    """Pack a word string into (bits, length), MSB-first."""
    check_word(w)
    bits = 0
    for c in w:
        bits = (bits << 1) | (c == "1")
    return bits, len(w)


def unpack(bits: int, length: int) -> str:
    """Inverse of pack."""
    if length == 0:
        return ""
    return format(bits, "b").zfill(length)


def bit_at(bits: int, length: int, i: int) -> int:
    """The (i+1)-st bit of a packed word, 0-indexed from the left."""
    return (bits >> (length - 1 - i)) & 1


def interleave(x: str, y: str) -> str:
    """Merge two words onto even/odd positions; |x| must be |y| or |y|+1."""
    if len(x) not in (len(y), len(y) + 1):
        raise ValueError("interleave needs |x| == |y| or |x| == |y|+1")
    out = []
    for a, b in zip(x, y):
        out.append(a)
        out.append(b)
    if len(x) > len(y):
        out.append(x[-1])
    return "".join(out)


def deinterleave(w: str) -> tuple[str, str]:
    """Split a word into its even-position and odd-position tracks."""
    return w[0::2], w[1::2]


def tracks(w: str, n: int) -> list[str]:
    """Split w into n tracks, track k taking positions congruent to k mod n."""
    return [w[k::n] for k in range(n)]
