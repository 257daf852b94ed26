"""Recursive-descent parser for the MEO surface syntax.

    program    = meo { ";" meo } [ ";" ]
    meo        = constraint "@" frame
    constraint = "rotate" "(" joint "," verb [ "," number "deg" ] ")"
               | "translate" "(" joint "," dir [ "," "of" "=" joint ] [ "," number "m" ] ")"
    frame      = "start" | "end" | "middle" | "entire_motion"
               | "when" "(" joint "," extremum "," relation ")"
               | "frame" integer

The full EBNF ships in docs/meo-grammar.ebnf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    Explicit, ExplicitFrame, Extremum, Implicit, Index, JointConstraint,
    JointName, MEO, MEOProgram, Rotate, RotationVerb, TemporalRelation,
    Translate, TranslationDir,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass
class _Token:
    kind: str  # ident | number | punct | eof
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(\.\d+)?([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),@;=])
""", re.VERBOSE)


def _tokenize(text: str) -> list:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group(0)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _vocab_error(word: str, kind: str, options, tok: _Token) -> ParseError:
    opts = ", ".join(o.value for o in options)
    return ParseError(f"unknown {kind} {word!r}; valid options: {opts}",
                      tok.line, tok.column)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text.lower() != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.column)
        return self.advance()

    def enum_word(self, enum_cls, kind: str):
        tok = self.expect("ident")
        try:
            return enum_cls(tok.text.lower())
        except ValueError:
            raise _vocab_error(tok.text, kind, enum_cls, tok) from None

    def magnitude(self, unit: str) -> float:
        tok = self.expect("number")
        value = float(tok.text)
        utok = self.expect("ident")
        if utok.text.lower() != unit:
            raise ParseError(f"expected unit {unit!r}, found {utok.text!r}",
                             utok.line, utok.column)
        if not value > 0:
            raise ParseError("magnitude must be positive", tok.line, tok.column)
        return value

    def constraint(self) -> JointConstraint:
        tok = self.expect("ident")
        head = tok.text.lower()
        if head == "rotate":
            self.expect("punct", "(")
            joint = self.enum_word(JointName, "joint")
            self.expect("punct", ",")
            verb = self.enum_word(RotationVerb, "verb")
            magnitude = None
            if self.cur.text == ",":
                self.advance()
                magnitude = self.magnitude("deg")
            self.expect("punct", ")")
            return JointConstraint(joint, Rotate(verb, magnitude))
        if head == "translate":
            self.expect("punct", "(")
            joint = self.enum_word(JointName, "joint")
            self.expect("punct", ",")
            direction = self.enum_word(TranslationDir, "direction")
            relative_to = None
            magnitude = None
            while self.cur.text == ",":
                self.advance()
                if self.cur.kind == "ident" and self.cur.text.lower() == "of":
                    self.advance()
                    self.expect("punct", "=")
                    relative_to = self.enum_word(JointName, "joint")
                else:
                    magnitude = self.magnitude("m")
            self.expect("punct", ")")
            if relative_to == joint:
                raise ParseError("of= joint must differ from the edited joint",
                                 tok.line, tok.column)
            return JointConstraint(joint, Translate(direction, relative_to, magnitude))
        raise ParseError(f"expected 'rotate' or 'translate', found {tok.text!r}",
                         tok.line, tok.column)

    def frame(self):
        tok = self.cur
        if tok.kind == "ident":
            word = tok.text.lower()
            if word == "when":
                self.advance()
                self.expect("punct", "(")
                anchor = self.enum_word(JointName, "joint")
                self.expect("punct", ",")
                extremum = self.enum_word(Extremum, "extremum")
                self.expect("punct", ",")
                relation = self.enum_word(TemporalRelation, "relation")
                self.expect("punct", ")")
                return Implicit(relation, anchor, extremum)
            if word == "frame":
                self.advance()
                num = self.expect("number")
                if "." in num.text or "e" in num.text.lower():
                    raise ParseError("frame index must be an integer", num.line, num.column)
                return Index(int(num.text))
            try:
                g = ExplicitFrame(word)
            except ValueError:
                raise _vocab_error(tok.text, "frame reference", ExplicitFrame, tok) from None
            self.advance()
            return Explicit(g)
        raise ParseError(f"expected a frame reference, found {tok.text or 'end of input'!r}",
                         tok.line, tok.column)

    def meo(self) -> MEO:
        constraint = self.constraint()
        self.expect("punct", "@")
        return MEO(constraint, self.frame())

    def program(self) -> MEOProgram:
        ops = [self.meo()]
        while self.cur.text == ";":
            self.advance()
            if self.cur.kind == "eof":
                break
            ops.append(self.meo())
        self.expect("eof")
        return MEOProgram(tuple(ops))


def parse_meo(text: str) -> MEOProgram:
    return _Parser(text).program()
