"""Equational language: signatures, terms, identities, and their evaluation.

Concrete syntax is prefix-only: ``f(t1,...,tk)`` with nullary symbols
written bare.  Any identifier not declared in the signature is a variable.
"""

import re
from dataclasses import dataclass
from itertools import product

from .errors import EvalError, ParseError, SignatureMismatchError
from .verdict import Verdict

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Signature:
    """Operation symbols with arities.  Iteration follows declaration order."""

    def __init__(self, ops):
        cleaned = {}
        for name, arity in ops.items():
            if not _IDENT_RE.fullmatch(name):
                raise ValueError(f"bad operation symbol {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"bad arity for {name!r}: {arity!r}")
            cleaned[name] = arity
        self.ops = cleaned

    def arity(self, name):
        return self.ops[name]

    def __contains__(self, name):
        return name in self.ops

    def __iter__(self):
        return iter(self.ops.items())

    def __len__(self):
        return len(self.ops)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.ops == other.ops

    def __hash__(self):
        return hash(frozenset(self.ops.items()))

    def __repr__(self):
        inner = ", ".join(f"{k}:{v}" for k, v in self.ops.items())
        return f"Signature({{{inner}}})"

    def key(self):
        return tuple(sorted(self.ops.items()))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple


Term = (Var, App)


def term_variables(t):
    """Variable names of a term in first-occurrence order."""
    seen = []

    def walk(node):
        if isinstance(node, Var):
            if node.name not in seen:
                seen.append(node.name)
        else:
            for a in node.args:
                walk(a)

    walk(t)
    return seen


def render(t):
    """Canonical concrete syntax; inverse of parse_term over the same signature."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.sym
    return f"{t.sym}({','.join(render(a) for a in t.args)})"


def validate_term(t, sig):
    """Check every applied symbol exists in sig with matching arity."""
    if isinstance(t, Var):
        if t.name in sig:
            raise SignatureMismatchError(
                f"variable {t.name!r} clashes with an operation symbol"
            )
        return
    if t.sym not in sig:
        raise SignatureMismatchError(f"unknown operation {t.sym!r}")
    if sig.arity(t.sym) != len(t.args):
        raise SignatureMismatchError(
            f"{t.sym!r} expects {sig.arity(t.sym)} arguments, got {len(t.args)}"
        )
    for a in t.args:
        validate_term(a, sig)


class _Parser:
    def __init__(self, text, sig):
        self.text = text
        self.sig = sig
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_ident(self):
        self._skip_ws()
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected identifier, found {got!r}", pos=self.pos)
        self.pos = m.end()
        return m.group(0)

    def expect(self, ch):
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {ch!r}, found {got!r}", pos=self.pos)
        self.pos += 1

    def term(self):
        start = self.pos
        name = self.take_ident()
        if self.peek() == "(":
            if name not in self.sig:
                raise ParseError(f"unknown operation {name!r}", pos=start)
            arity = self.sig.arity(name)
            if arity == 0:
                raise ParseError(
                    f"nullary symbol {name!r} written with arguments", pos=start
                )
            self.expect("(")
            args = [self.term()]
            while self.peek() == ",":
                self.expect(",")
                args.append(self.term())
            self.expect(")")
            if len(args) != arity:
                raise ParseError(
                    f"{name!r} expects {arity} arguments, got {len(args)}", pos=start
                )
            return App(name, tuple(args))
        if name in self.sig:
            if self.sig.arity(name) != 0:
                raise ParseError(
                    f"{name!r} expects {self.sig.arity(name)} arguments, got 0",
                    pos=start,
                )
            return App(name, ())
        return Var(name)

    def end(self):
        self._skip_ws()
        if self.pos < len(self.text):
            raise ParseError(
                f"unexpected trailing input {self.text[self.pos]!r}", pos=self.pos
            )


def parse_term(text, sig):
    p = _Parser(text, sig)
    t = p.term()
    p.end()
    return t


@dataclass(frozen=True)
class Identity:
    """An equation lhs = rhs; vars lists both sides' variables in first-occurrence order."""

    lhs: object
    rhs: object
    vars: tuple

    @classmethod
    def of(cls, lhs, rhs):
        names = term_variables(lhs)
        for v in term_variables(rhs):
            if v not in names:
                names.append(v)
        return cls(lhs, rhs, tuple(names))

    def render(self):
        return f"{render(self.lhs)} = {render(self.rhs)}"

    def key(self):
        return (render(self.lhs), render(self.rhs))


def parse_identity(text, sig):
    if text.count("=") != 1:
        raise ParseError("identity must contain exactly one '='", pos=text.find("="))
    left, right = text.split("=")
    return Identity.of(parse_term(left, sig), parse_term(right, sig))


def parse_identities(text, sig):
    """Parse identity-file content: one ``TERM = TERM`` per line, ``#`` comments."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_identity(line, sig))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    return out


def load_identities(path, sig):
    with open(path, encoding="utf-8") as fh:
        return parse_identities(fh.read(), sig)


def eval_term(alg, t, env):
    """Evaluate a term on a finite algebra under a variable assignment."""
    if isinstance(t, Var):
        if t.name not in env:
            raise EvalError(f"unbound variable {t.name!r}")
        return env[t.name]
    if t.sym not in alg.sig:
        raise EvalError(f"operation {t.sym!r} not in the algebra's signature")
    if alg.sig.arity(t.sym) != len(t.args):
        raise EvalError(f"arity mismatch applying {t.sym!r}")
    args = tuple(eval_term(alg, a, env) for a in t.args)
    return alg.apply(t.sym, args)


def satisfies_identity(alg, ident):
    """True iff the identity holds under every assignment.

    On failure the witness is the lexicographically least falsifying
    assignment under the identity's variable ordering.
    """
    validate_term(ident.lhs, alg.sig)
    validate_term(ident.rhs, alg.sig)
    names = ident.vars
    for values in product(range(alg.n), repeat=len(names)):
        env = dict(zip(names, values))
        if eval_term(alg, ident.lhs, env) != eval_term(alg, ident.rhs, env):
            return Verdict(False, witness=env)
    return Verdict(True)
