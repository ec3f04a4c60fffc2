"""JavaScript expression front end: parse, print, and tree conversion."""
from .convert import IllegalJsAst, UnsupportedNode, abstract_to_code, to_abstract, to_concrete
from .lexer import JsSyntaxError, UnsupportedConstruct, tokenize
from .parser import parse_js
from .printer import print_js


def canonicalize(source: str) -> str:
    return print_js(parse_js(source))


def code_tokens(source: str, start: int = 0, end: int | None = None) -> list[str]:
    """Token texts of ``source`` at lexer granularity (used by BLEU).

    Template literals are split the way Esprima does: ```a${``, ``}b`` ...
    pieces with the interpolated tokens in between.
    """
    from .printer import quote_string

    out = []
    for tok in tokenize(source, start, end):
        if tok.kind == "eof":
            break
        if tok.kind == "str":
            out.append(quote_string(tok.value))
        elif tok.kind == "template":
            quasis, spans = tok.value
            for k, q in enumerate(quasis):
                head = "`" if k == 0 else "}"
                tail = "`" if k == len(quasis) - 1 else "${"
                out.append(head + q + tail)
                if k < len(spans):
                    out.extend(code_tokens(source, *spans[k]))
        else:
            out.append(source[tok.start:tok.end])
    return out


__all__ = [
    "IllegalJsAst", "JsSyntaxError", "UnsupportedConstruct", "UnsupportedNode",
    "abstract_to_code", "canonicalize", "code_tokens", "parse_js", "print_js",
    "to_abstract", "to_concrete", "tokenize",
]
