"""Recursive-descent parser producing Mozilla-Parser-API shaped dicts."""
from __future__ import annotations

from .lexer import JsSyntaxError, Token, UnsupportedConstruct, tokenize

BINARY_PRECEDENCE = {
    "||": 3,
    "&&": 4,
    "===": 7, "!==": 7, "==": 7, "!=": 7,
    "<": 8, ">": 8, "<=": 8, ">=": 8,
    "+": 10, "-": 10,
    "*": 11, "/": 11, "%": 11,
}
LOGICAL_OPERATORS = {"||", "&&"}
UNARY_OPERATORS = {"!", "-", "+", "typeof"}

# Keywords that cannot be used as identifier references.
RESERVED = {
    "break", "case", "catch", "class", "const", "continue", "debugger", "default",
    "delete", "do", "else", "export", "extends", "finally", "for", "function", "if",
    "import", "in", "instanceof", "new", "return", "super", "switch", "this", "throw",
    "try", "typeof", "var", "void", "while", "with", "yield", "let", "static",
    "enum", "await", "implements", "package", "protected", "interface", "private",
    "public", "null", "true", "false",
}


def number_value(raw: str):
    if raw[:2] in ("0x", "0X"):
        return int(raw, 16)
    if raw.isdigit():
        return int(raw)
    return float(raw)


class Parser:
    def __init__(self, source: str, start: int = 0, end: int | None = None):
        self.source = source
        self.toks = tokenize(source, start, end)
        self.i = 0

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, value, kind="punct") -> bool:
        return self.tok.kind == kind and self.tok.value == value

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, value) -> Token:
        if not self.at(value):
            self.fail(f"expected {value!r}")
        return self.advance()

    def fail(self, msg, tok: Token | None = None, unsupported=False):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(self.source[tok.start:tok.end])
        cls = UnsupportedConstruct if unsupported else JsSyntaxError
        raise cls(f"{msg}, found {found}", self.source, tok.start, tok.end)

    # -- statements -------------------------------------------------------

    def program(self) -> dict:
        if self.at("{"):
            block = self.block()
            if self.at(";"):
                self.advance()
        else:
            stmt = self.expression_statement(top=True)
            block = {"type": "BlockStatement", "body": [stmt]}
        if self.tok.kind != "eof":
            self.fail("expected end of input")
        return block

    def block(self) -> dict:
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unclosed block")
            if self.at(";"):
                self.advance()
                continue
            body.append(self.statement())
        self.advance()
        return {"type": "BlockStatement", "body": body}

    def statement(self) -> dict:
        if self.at("{"):
            return self.block()
        if self.at("break", "name"):
            self.advance()
            label = None
            if self.tok.kind == "name" and self.tok.value not in RESERVED:
                label = {"type": "Identifier", "name": self.advance().value}
            self.end_statement()
            return {"type": "BreakStatement", "label": label}
        return self.expression_statement()

    def expression_statement(self, top=False) -> dict:
        expr = self.expression()
        if top:
            if self.at(";"):
                self.advance()
        else:
            self.end_statement()
        return {"type": "ExpressionStatement", "expression": expr}

    def end_statement(self):
        if self.at(";"):
            self.advance()
        elif not self.at("}"):
            self.fail("expected ';'")

    # -- expressions ------------------------------------------------------

    def expression(self) -> dict:
        expr = self.conditional()
        if self.at(","):
            self.fail("sequence expressions are not supported", unsupported=True)
        return expr

    def conditional(self) -> dict:
        test = self.binary(0)
        if not self.at("?"):
            return test
        self.advance()
        consequent = self.conditional()
        self.expect(":")
        alternate = self.conditional()
        return {"type": "ConditionalExpression", "test": test,
                "consequent": consequent, "alternate": alternate}

    def binary(self, min_prec: int) -> dict:
        left = self.unary()
        while True:
            tok = self.tok
            if tok.kind == "name" and tok.value in ("in", "instanceof"):
                self.fail(f"operator {tok.value!r} is not supported", unsupported=True)
            if tok.kind != "punct" or tok.value not in BINARY_PRECEDENCE:
                return left
            prec = BINARY_PRECEDENCE[tok.value]
            if prec <= min_prec:
                return left
            self.advance()
            right = self.binary(prec)
            kind = "LogicalExpression" if tok.value in LOGICAL_OPERATORS else "BinaryExpression"
            left = {"type": kind, "operator": tok.value, "left": left, "right": right}

    def unary(self) -> dict:
        tok = self.tok
        if (tok.kind == "punct" and tok.value in ("!", "-", "+")) or (tok.kind == "name" and tok.value == "typeof"):
            self.advance()
            return {"type": "UnaryExpression", "operator": tok.value, "argument": self.unary()}
        if tok.kind == "name" and tok.value in ("delete", "void", "await", "new"):
            self.fail(f"{tok.value!r} expressions are not supported", unsupported=True)
        return self.postfix()

    def postfix(self) -> dict:
        expr = self.primary()
        while True:
            if self.at("."):
                self.advance()
                if self.tok.kind != "name":
                    self.fail("expected property name")
                prop = {"type": "Identifier", "name": self.advance().value}
                expr = {"type": "MemberExpression", "computed": False, "object": expr, "property": prop}
            elif self.at("["):
                self.advance()
                prop = self.expression()
                self.expect("]")
                expr = {"type": "MemberExpression", "computed": True, "object": expr, "property": prop}
            elif self.at("("):
                self.advance()
                args = []
                while not self.at(")"):
                    args.append(self.conditional())
                    if not self.at(")"):
                        self.expect(",")
                self.advance()
                expr = {"type": "CallExpression", "callee": expr, "arguments": args}
            elif self.tok.kind == "template":
                self.fail("tagged templates are not supported", unsupported=True)
            else:
                return expr

    def primary(self) -> dict:
        tok = self.tok
        if tok.kind == "name":
            word = tok.value
            if word in ("true", "false"):
                self.advance()
                return {"type": "Literal", "value": word == "true"}
            if word == "null":
                self.advance()
                return {"type": "Literal", "value": None}
            if word in RESERVED:
                self.fail(f"keyword {word!r} is not supported here", unsupported=True)
            self.advance()
            return {"type": "Identifier", "name": word}
        if tok.kind == "num":
            self.advance()
            return {"type": "Literal", "value": number_value(tok.value), "raw": tok.value}
        if tok.kind == "str":
            self.advance()
            return {"type": "Literal", "value": tok.value}
        if tok.kind == "template":
            self.advance()
            quasis, spans = tok.value
            expressions = []
            for start, end in spans:
                sub = Parser(self.source, start, end)
                expressions.append(sub.expression())
                if sub.tok.kind != "eof":
                    sub.fail("unexpected token in template interpolation")
            elements = [
                {"type": "TemplateElement", "value": {"raw": q}, "tail": k == len(quasis) - 1}
                for k, q in enumerate(quasis)
            ]
            return {"type": "TemplateLiteral", "quasis": elements, "expressions": expressions}
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.fail("arrow functions are not supported", unsupported=True)
            expr = self.expression()
            self.expect(")")
            return expr
        if self.at("["):
            self.fail("array literals are not supported", unsupported=True)
        if self.at("{"):
            self.fail("object literals are not supported", unsupported=True)
        self.fail("expected an expression")


def parse_js(source: str) -> dict:
    """Parse one expression, or a brace-wrapped block of statements.

    The result is always a BlockStatement; a bare expression is wrapped in
    a block holding one ExpressionStatement.
    """
    return Parser(source).program()
