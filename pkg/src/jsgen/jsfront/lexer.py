"""Tokenizer for the supported JavaScript expression subset."""
from __future__ import annotations

import re
from dataclasses import dataclass


class JsSyntaxError(Exception):
    def __init__(self, msg: str, source: str = "", start: int = 0, end: int | None = None):
        line = source.count("\n", 0, start) + 1
        col = start - (source.rfind("\n", 0, start) + 1) + 1
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.start = start
        self.end = start + 1 if end is None else end
        self.line = line
        self.col = col


class UnsupportedConstruct(JsSyntaxError):
    """Valid JavaScript outside the supported subset."""


@dataclass(frozen=True)
class Token:
    kind: str  # name, num, str, punct, template, eof
    value: object
    start: int
    end: int


PUNCTUATORS = sorted(
    """{ } ( ) [ ] . ; , ? : === !== == != <= >= < > + - * / % ! && || ?? ?. => ++ -- = += -= *= /= %= ** & | ^ ~ << >> >>> ...""".split(),
    key=len,
    reverse=True,
)
UNSUPPORTED_PUNCT = {"??", "?.", "=>", "++", "--", "=", "+=", "-=", "*=", "/=", "%=", "**",
                     "&", "|", "^", "~", "<<", ">>", ">>>", "..."}

NUMBER_RE = re.compile(r"0[xX][0-9a-fA-F]+|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v", "0": "\0"}


def is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def is_name_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(source: str, start: int = 0, end: int | None = None) -> list[Token]:
    """Split ``source`` into tokens.

    Template literals become a single ``template`` token whose value is a
    pair ``(quasis, expression_sources)``: raw quasi texts and the source
    spans (start, end) of each ``${...}`` interpolation, parsed later.
    """
    toks: list[Token] = []
    i, n = start, len(source) if end is None else end
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\ufeff\u00a0\u3000":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise JsSyntaxError("unterminated comment", source, i)
            i = j + 2
            continue
        if is_name_start(ch):
            j = i + 1
            while j < n and is_name_part(source[j]):
                j += 1
            toks.append(Token("name", source[i:j], i, j))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = NUMBER_RE.match(source, i)
            j = m.end()
            if j < n and is_name_part(source[j]):
                raise JsSyntaxError("identifier directly after number", source, i, j + 1)
            toks.append(Token("num", m.group(), i, j))
            i = j
            continue
        if ch in "'\"":
            value, j = _scan_string(source, i)
            toks.append(Token("str", value, i, j))
            i = j
            continue
        if ch == "`":
            value, j = _scan_template(source, i)
            toks.append(Token("template", value, i, j))
            i = j
            continue
        for p in PUNCTUATORS:
            if source.startswith(p, i):
                if p == "?." and i + 2 < n and source[i + 2].isdigit():
                    continue
                if p in UNSUPPORTED_PUNCT:
                    raise UnsupportedConstruct(f"operator {p!r} is not supported", source, i, i + len(p))
                toks.append(Token("punct", p, i, i + len(p)))
                i += len(p)
                break
        else:
            raise JsSyntaxError(f"unexpected character {ch!r}", source, i)
    toks.append(Token("eof", None, n, n))
    return toks


def _scan_string(source: str, start: int) -> tuple[str, int]:
    quote = source[start]
    out = []
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == quote:
            return "".join(out), i + 1
        if ch == "\n":
            break
        if ch == "\\":
            i += 1
            if i >= n:
                break
            esc = source[i]
            if esc in _ESCAPES and not (esc == "0" and i + 1 < n and source[i + 1].isdigit()):
                out.append(_ESCAPES[esc])
                i += 1
            elif esc == "x":
                hexdigits = source[i + 1:i + 3]
                if not re.fullmatch(r"[0-9a-fA-F]{2}", hexdigits):
                    raise JsSyntaxError("bad \\x escape", source, i - 1)
                out.append(chr(int(hexdigits, 16)))
                i += 3
            elif esc == "u":
                if source.startswith("{", i + 1):
                    close = source.find("}", i + 2)
                    digits = source[i + 2:close] if close > 0 else ""
                    if not re.fullmatch(r"[0-9a-fA-F]{1,6}", digits):
                        raise JsSyntaxError("bad \\u{} escape", source, i - 1)
                    out.append(chr(int(digits, 16)))
                    i = close + 1
                else:
                    digits = source[i + 1:i + 5]
                    if not re.fullmatch(r"[0-9a-fA-F]{4}", digits):
                        raise JsSyntaxError("bad \\u escape", source, i - 1)
                    out.append(chr(int(digits, 16)))
                    i += 5
            elif esc == "\r":
                i += 2 if source.startswith("\r\n", i) else 1
            elif esc == "\n":
                i += 1
            else:
                out.append(esc)
                i += 1
            continue
        out.append(ch)
        i += 1
    raise JsSyntaxError("unterminated string literal", source, start)


def _scan_template(source: str, start: int):
    """Return ((quasis, spans), end) for the template starting at ``start``."""
    quasis: list[str] = []
    spans: list[tuple[int, int]] = []
    i = start + 1
    n = len(source)
    seg_start = i
    while i < n:
        ch = source[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "`":
            quasis.append(source[seg_start:i])
            return (quasis, spans), i + 1
        if source.startswith("${", i):
            quasis.append(source[seg_start:i])
            expr_start = i + 2
            i = _skip_balanced(source, expr_start)
            spans.append((expr_start, i))
            i += 1
            seg_start = i
            continue
        i += 1
    raise JsSyntaxError("unbalanced template literal", source, start)


def _skip_balanced(source: str, i: int) -> int:
    """Index of the ``}`` closing an interpolation that starts at ``i``."""
    depth = 0
    n = len(source)
    open_at = i - 2
    while i < n:
        ch = source[i]
        if ch in "'\"":
            _, i = _scan_string(source, i)
            continue
        if ch == "`":
            _, i = _scan_template(source, i)
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            if depth == 0:
                return i
            depth -= 1
        i += 1
    raise JsSyntaxError("unbalanced template literal", source, open_at)
