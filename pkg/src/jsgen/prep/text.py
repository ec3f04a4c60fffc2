"""Description tokenization and rule-based identifier subtokenization."""
from __future__ import annotations

import re

CONTINUATION = "##"

_DESC_TOKEN_RE = re.compile(r"<STR\d+>|[A-Za-z0-9_$]+|\S")
_CONTENT_TOKEN_RE = re.compile(r"<STR\d+>|[A-Za-z0-9_$]+|\s|\S")
PLACEHOLDER_RE = re.compile(r"<STR(\d+)>")


def tokenize_description(text: str) -> list[str]:
    """CJK characters and punctuation become single tokens; Latin/digit
    runs and ``<STRk>`` placeholders stay whole; whitespace is dropped."""
    return _DESC_TOKEN_RE.findall(text)


def split_string_content(value: str) -> list[str]:
    """Lossless split of a string literal's content (``''.join`` inverts it).

    Same granularity as descriptions so literal text can be copied from the
    input, but whitespace is kept as its own tokens.
    """
    return _CONTENT_TOKEN_RE.findall(value)


def _camel_split(segment: str) -> list[str]:
    parts, start = [], 0
    for i in range(1, len(segment)):
        ch, prev = segment[i], segment[i - 1]
        if not ch.isupper():
            continue
        if prev.islower() or prev.isdigit():
            cut = True
        else:
            cut = prev.isupper() and i + 1 < len(segment) and segment[i + 1].islower()
        if cut:
            parts.append(segment[start:i])
            start = i
    parts.append(segment[start:])
    return parts


def subtokenize(identifier: str) -> list[str]:
    """Split at camel-case boundaries and underscores.

    >>> subtokenize("liveTimeDesc")
    ['live', '##Time', '##Desc']
    >>> subtokenize("before_promotion_price")
    ['before', '##promotion', '##price']

    A single underscore is implied when a continuation piece starts with a
    non-uppercase character; any other underscore run is kept inside the
    piece (``foo_Bar`` -> ``foo``, ``##_Bar``) so that joining is exact.
    """
    if not identifier:
        raise ValueError("empty identifier")
    lead = len(identifier) - len(identifier.lstrip("_"))
    rest = identifier[lead:]
    chunks = re.split(r"(_+)", rest)
    first = _camel_split(chunks[0]) if chunks[0] else [""]
    pieces = [identifier[:lead] + first[0]] + [CONTINUATION + p for p in first[1:]]
    for k in range(1, len(chunks), 2):
        sep, seg = chunks[k], chunks[k + 1]
        parts = _camel_split(seg) if seg else [""]
        if sep == "_" and seg and not seg[0].isupper():
            pieces.append(CONTINUATION + parts[0])
        else:
            pieces.append(CONTINUATION + sep + parts[0])
        pieces.extend(CONTINUATION + p for p in parts[1:])
    return pieces


def join_subtokens(pieces: list[str]) -> str:
    """Inverse of :func:`subtokenize`."""
    if not pieces:
        raise ValueError("no subtokens to join")
    out = [pieces[0]]
    for piece in pieces[1:]:
        body = piece[len(CONTINUATION):] if piece.startswith(CONTINUATION) else piece
        if body[:1] == "_" or body[:1].isupper():
            out.append(body)
        else:
            out.append("_" + body)
    return "".join(out)
