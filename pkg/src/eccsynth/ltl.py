"""Linear temporal logic over machine steps.

Atoms observe one execution step (the input action consumed and the output
action produced): ``in=<event>``, ``out=<event>`` (``out=.`` for the empty
event), ``x<i>`` for input variable truth and ``z<i>`` for output variable
truth.  Temporal operators: X U R G F.  Formulas rewrite to negation normal
form where only atoms are negated, with G f == false R f and F f == true U f.

Besides the parser and NNF this module carries a direct lasso-semantics
evaluator used to cross-check every counterexample the automaton-theoretic
pipeline produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .automaton import InputAction, OutputAction
from .errors import LtlSyntaxError

Step = Tuple[InputAction, OutputAction]


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class LTrue(Formula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class LFalse(Formula):
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class AtomIn(Formula):
    event: str

    def __str__(self):
        return f"in={self.event}"


@dataclass(frozen=True)
class AtomOut(Formula):
    event: Optional[str]  # None for the empty event

    def __str__(self):
        return f"out={self.event or '.'}"


@dataclass(frozen=True)
class AtomInVar(Formula):
    index: int

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class AtomOutVar(Formula):
    index: int

    def __str__(self):
        return f"z{self.index + 1}"


@dataclass(frozen=True)
class LNot(Formula):
    operand: Formula

    def __str__(self):
        return f"!({self.operand})"


@dataclass(frozen=True)
class LAnd(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class LOr(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class LImplies(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class LNext(Formula):
    operand: Formula

    def __str__(self):
        return f"X({self.operand})"


@dataclass(frozen=True)
class LUntil(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} U {self.right})"


@dataclass(frozen=True)
class LRelease(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} R {self.right})"


@dataclass(frozen=True)
class LGlobally(Formula):
    operand: Formula

    def __str__(self):
        return f"G({self.operand})"


@dataclass(frozen=True)
class LFinally(Formula):
    operand: Formula

    def __str__(self):
        return f"F({self.operand})"


ATOM_TYPES = (AtomIn, AtomOut, AtomInVar, AtomOutVar)


def is_atom(f: Formula) -> bool:
    return isinstance(f, ATOM_TYPES)


def is_literal(f: Formula) -> bool:
    return is_atom(f) or (isinstance(f, LNot) and is_atom(f.operand))


def is_propositional(f: Formula) -> bool:
    if isinstance(f, (LTrue, LFalse)) or is_atom(f):
        return True
    if isinstance(f, LNot):
        return is_propositional(f.operand)
    if isinstance(f, (LAnd, LOr, LImplies)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


# --- parsing -----------------------------------------------------------------

_UNARY = {"!", "~", "X", "G", "F"}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []  # (kind, value, pos)
        self._scan()
        self.index = 0

    def _scan(self):
        text, i = self.text, 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if text.startswith("->", i):
                self.tokens.append(("op", "->", i))
                i += 2
            elif text.startswith("!=", i):
                self.tokens.append(("op", "!=", i))
                i += 2
            elif c in "()=&|!~":
                kind = "punct" if c in "()" else "op"
                self.tokens.append((kind, c, i))
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
            elif c == ".":
                self.tokens.append(("name", ".", i))
                i += 1
            else:
                raise LtlSyntaxError(f"unexpected character {c!r}", i)

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def next(self) -> Tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise LtlSyntaxError("unexpected end of formula", len(self.text))
        self.index += 1
        return tok

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == value:
            self.index += 1
            return True
        return False

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise LtlSyntaxError(f"expected {value!r}, got {tok[1]!r}", tok[2])


def parse_ltl(text: str) -> Formula:
    """Parse one formula.  Precedence: unary > U/R > & > | > ->."""
    toks = _Tokens(text)
    if toks.peek() is None:
        raise LtlSyntaxError("empty formula", 0)
    f = _parse_implies(toks)
    trailing = toks.peek()
    if trailing is not None:
        raise LtlSyntaxError(f"trailing input {trailing[1]!r}", trailing[2])
    return f


def _parse_implies(toks: _Tokens) -> Formula:
    left = _parse_or(toks)
    if toks.accept("->"):
        return LImplies(left, _parse_implies(toks))
    return left


def _parse_or(toks: _Tokens) -> Formula:
    f = _parse_and(toks)
    while toks.accept("|"):
        f = LOr(f, _parse_and(toks))
    return f


def _parse_and(toks: _Tokens) -> Formula:
    f = _parse_until(toks)
    while toks.accept("&"):
        f = LAnd(f, _parse_until(toks))
    return f


def _parse_until(toks: _Tokens) -> Formula:
    left = _parse_unary(toks)
    tok = toks.peek()
    if tok is not None and tok[0] == "name" and tok[1] in ("U", "R"):
        toks.next()
        right = _parse_until(toks)  # right-associative
        return LUntil(left, right) if tok[1] == "U" else LRelease(left, right)
    return left


def _parse_unary(toks: _Tokens) -> Formula:
    tok = toks.next()
    kind, value, pos = tok
    if value in ("!", "~"):
        return LNot(_parse_unary(toks))
    if kind == "name" and value in ("X", "G", "F"):
        inner = _parse_unary(toks)
        return {"X": LNext, "G": LGlobally, "F": LFinally}[value](inner)
    if value == "(":
        f = _parse_implies(toks)
        toks.expect(")")
        return f
    if kind == "name":
        return _parse_atom(toks, value, pos)
    raise LtlSyntaxError(f"unexpected token {value!r}", pos)


def _parse_atom(toks: _Tokens, name: str, pos: int) -> Formula:
    if name == "true":
        return LTrue()
    if name == "false":
        return LFalse()
    if name in ("in", "out"):
        negated = False
        if toks.accept("!="):
            negated = True
        else:
            toks.expect("=")
        tok = toks.next()
        if tok[0] != "name":
            raise LtlSyntaxError(f"expected event name, got {tok[1]!r}", tok[2])
        if name == "in":
            atom: Formula = AtomIn(tok[1])
        else:
            atom = AtomOut(None if tok[1] == "." else tok[1])
        return LNot(atom) if negated else atom
    if len(name) > 1 and name[0] in "xz" and name[1:].isdigit():
        index = int(name[1:]) - 1
        if index < 0:
            raise LtlSyntaxError("variable indices start at 1", pos)
        return AtomInVar(index) if name[0] == "x" else AtomOutVar(index)
    raise LtlSyntaxError(f"unknown atom {name!r}", pos)


def parse_ltl_file(text: str) -> List[Formula]:
    """One formula per line; ``#`` starts a comment; blank lines ignored."""
    formulas = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            formulas.append(parse_ltl(stripped))
    return formulas


# --- negation normal form ----------------------------------------------------


def nnf(f: Formula, negate: bool = False) -> Formula:
    if isinstance(f, LTrue):
        return LFalse() if negate else f
    if isinstance(f, LFalse):
        return LTrue() if negate else f
    if is_atom(f):
        return LNot(f) if negate else f
    if isinstance(f, LNot):
        return nnf(f.operand, not negate)
    if isinstance(f, LAnd):
        cls = LOr if negate else LAnd
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, LOr):
        cls = LAnd if negate else LOr
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, LImplies):
        return nnf(LOr(LNot(f.left), f.right), negate)
    if isinstance(f, LNext):
        return LNext(nnf(f.operand, negate))
    if isinstance(f, LUntil):
        cls = LRelease if negate else LUntil
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, LRelease):
        cls = LUntil if negate else LRelease
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, LGlobally):
        if negate:
            return LUntil(LTrue(), nnf(f.operand, True))
        return LRelease(LFalse(), nnf(f.operand, False))
    if isinstance(f, LFinally):
        if negate:
            return LRelease(LFalse(), nnf(f.operand, True))
        return LUntil(LTrue(), nnf(f.operand, False))
    raise TypeError(f"not a formula: {f!r}")


# --- evaluation --------------------------------------------------------------


def eval_atom(f: Formula, step: Step) -> bool:
    action, output = step
    if isinstance(f, AtomIn):
        return action.event == f.event
    if isinstance(f, AtomOut):
        return output.event == f.event
    if isinstance(f, AtomInVar):
        return f.index < len(action.values) and action.values[f.index]
    if isinstance(f, AtomOutVar):
        return f.index < len(output.values) and output.values[f.index]
    raise TypeError(f"not an atom: {f!r}")


def eval_propositional(f: Formula, step: Step) -> bool:
    if isinstance(f, LTrue):
        return True
    if isinstance(f, LFalse):
        return False
    if is_atom(f):
        return eval_atom(f, step)
    if isinstance(f, LNot):
        return not eval_propositional(f.operand, step)
    if isinstance(f, LAnd):
        return eval_propositional(f.left, step) and eval_propositional(f.right, step)
    if isinstance(f, LOr):
        return eval_propositional(f.left, step) or eval_propositional(f.right, step)
    if isinstance(f, LImplies):
        return (not eval_propositional(f.left, step)) or eval_propositional(f.right, step)
    raise TypeError(f"not propositional: {f!r}")


def evaluate_lasso(f: Formula, steps: Sequence[Step], loop_start: int) -> bool:
    """Truth of the formula on the infinite word stem+cycle^w, at position 0.

    ``loop_start`` is the 0-based index the word returns to after the last
    step.  Until is the least and Release the greatest fixpoint of their
    expansion laws, computed by iteration to stability (at most one sweep
    per position plus one).
    """
    n = len(steps)
    if not 0 <= loop_start < n:
        raise ValueError("loop start outside the trace")
    succ = [i + 1 for i in range(n)]
    succ[n - 1] = loop_start
    cache: Dict[Formula, List[bool]] = {}

    def ev(g: Formula) -> List[bool]:
        got = cache.get(g)
        if got is not None:
            return got
        if isinstance(g, LTrue):
            vals = [True] * n
        elif isinstance(g, LFalse):
            vals = [False] * n
        elif is_atom(g):
            vals = [eval_atom(g, s) for s in steps]
        elif isinstance(g, LNot):
            vals = [not v for v in ev(g.operand)]
        elif isinstance(g, LAnd):
            left, right = ev(g.left), ev(g.right)
            vals = [a and b for a, b in zip(left, right)]
        elif isinstance(g, LOr):
            left, right = ev(g.left), ev(g.right)
            vals = [a or b for a, b in zip(left, right)]
        elif isinstance(g, LImplies):
            left, right = ev(g.left), ev(g.right)
            vals = [(not a) or b for a, b in zip(left, right)]
        elif isinstance(g, LNext):
            sub = ev(g.operand)
            vals = [sub[succ[i]] for i in range(n)]
        elif isinstance(g, (LUntil, LRelease)):
            a, b = ev(g.left), ev(g.right)
            if isinstance(g, LUntil):
                vals = list(b)
                for _ in range(n + 1):
                    new = [b[i] or (a[i] and vals[succ[i]]) for i in range(n)]
                    if new == vals:
                        break
                    vals = new
            else:
                vals = [True] * n
                for _ in range(n + 1):
                    new = [b[i] and (a[i] or vals[succ[i]]) for i in range(n)]
                    if new == vals:
                        break
                    vals = new
        elif isinstance(g, LGlobally):
            vals = ev(LRelease(LFalse(), g.operand))
        elif isinstance(g, LFinally):
            vals = ev(LUntil(LTrue(), g.operand))
        else:
            raise TypeError(f"not a formula: {g!r}")
        cache[g] = vals
        return vals

    return ev(f)[0]
