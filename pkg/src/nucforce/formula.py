"""First-order formula ASTs, the surface parser, and hierarchy classifiers.

The term signature is {0, S, +, *, -.} plus numerals.  Atoms are either
uninterpreted relation symbols (used by the lattice-model backend) or
the arithmetic atoms t = t and StepHalt(e, x, w) (used by the machine
backend).  `~p` is sugar for `p -> bot` and `bot` is falsum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


# ---------------------------------------------------------------- terms

class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Zero(Term):
    def __repr__(self):
        return "0"


@dataclass(frozen=True)
class NumLit(Term):
    value: int

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class Succ(Term):
    arg: Term

    def __repr__(self):
        return f"S({self.arg!r})"


@dataclass(frozen=True)
class Plus(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Times(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Monus(Term):
    left: Term
    right: Term


# ------------------------------------------------------------- formulas

class Formula:
    def __repr__(self):
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula


BOT = Bot()
STEP_HALT = "StepHalt"
FIXED_ARITIES = {STEP_HALT: 3}


def neg(phi: Formula) -> Formula:
    return Imp(phi, BOT)


def top() -> Formula:
    return Eq(Zero(), Zero())


def num(n: int) -> Term:
    return Zero() if n == 0 else NumLit(n)


# --------------------------------------------------------------- parser

class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


KEYWORDS = {"forall", "exists", "bot", "S"}
_SYMBOLS = ["/\\", "\\/", "->", "-.", ">=", "(", ")", "[", "]", ",", ".", "=", "+", "*", "~"]
_TOKEN_RE = re.compile(
    "|".join(re.escape(s) for s in _SYMBOLS) + r"|\d+|[A-Za-z][A-Za-z0-9_']*"
)


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tokens.append(Token(m.group(), lineno, m.start() + 1))
            pos = m.end()
    return tokens


class Parser:
    """Recursive-descent parser for the surface grammar.

    Connective precedence, loosest first: ->, \\/, /\\, ~.  Implication
    is right-associative; quantifier bodies extend as far right as they
    can.  Relation symbols start with an uppercase letter; variables are
    lowercase identifiers.  Relation arities must be used consistently.
    """

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.arities: dict[str, int] = dict(FIXED_ARITIES)

    def peek(self) -> str | None:
        return self.tokens[self.pos].text if self.pos < len(self.tokens) else None

    def here(self) -> tuple[int, int]:
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
            return t.line, t.col
        if self.tokens:
            t = self.tokens[-1]
            return t.line, t.col + len(t.text)
        return 1, 1

    def fail(self, message: str):
        raise ParseError(message, *self.here())

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input" + (f", expected {expected!r}" if expected else ""))
        if expected is not None and tok != expected:
            self.fail(f"expected {expected!r} but found {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            self.fail("empty input")
        phi = self.formula()
        if self.peek() is not None:
            self.fail(f"unexpected trailing token {self.peek()!r}")
        return phi

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take("->")
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek() == "\\/":
            self.take("\\/")
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek() == "/\\":
            self.take("/\\")
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take("~")
            return neg(self.unary())
        if tok in ("forall", "exists"):
            kind = self.take()
            var = self.variable()
            self.take(".")
            body = self.formula()
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        return self.atom()

    def variable(self) -> str:
        tok = self.peek()
        if tok is None or not tok[0].islower() or tok in KEYWORDS:
            self.fail(f"expected a variable, found {tok!r}")
        return self.take()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.fail("expected a formula")
        if tok == "bot":
            self.take()
            return BOT
        if tok == "(":
            # could open a grouped formula or a parenthesized term of an
            # equation; snapshot and retry as a term on failure
            saved = self.pos
            self.take("(")
            try:
                inner = self.formula()
                self.take(")")
                return inner
            except ParseError:
                self.pos = saved
                return self.equation()
        if tok[0].isupper() and tok != "S":
            return self.relation()
        return self.equation()

    def relation(self) -> Formula:
        line, col = self.here()
        name = self.take()
        self.take("(")
        args = [self.term()]
        while self.peek() == ",":
            self.take(",")
            args.append(self.term())
        self.take(")")
        known = self.arities.get(name)
        if known is not None and known != len(args):
            raise ParseError(f"relation {name} used with {len(args)} arguments, expected {known}", line, col)
        self.arities[name] = len(args)
        return Atom(name, tuple(args))

    def equation(self) -> Formula:
        left = self.term()
        self.take("=")
        return Eq(left, self.term())

    def term(self) -> Term:
        left = self.mul_term()
        while self.peek() in ("+", "-."):
            op = self.take()
            right = self.mul_term()
            left = Plus(left, right) if op == "+" else Monus(left, right)
        return left

    def mul_term(self) -> Term:
        left = self.prim_term()
        while self.peek() == "*":
            self.take("*")
            left = Times(left, self.prim_term())
        return left

    def prim_term(self) -> Term:
        tok = self.peek()
        if tok is None:
            self.fail("expected a term")
        if tok.isdigit():
            self.take()
            return num(int(tok))
        if tok == "S":
            self.take()
            self.take("(")
            inner = self.term()
            self.take(")")
            return Succ(inner)
        if tok == "(":
            self.take()
            inner = self.term()
            self.take(")")
            return inner
        if tok[0].islower() and tok not in KEYWORDS:
            self.take()
            return Var(tok)
        self.fail(f"expected a term, found {tok!r}")


def parse(text: str) -> Formula:
    return Parser(text).parse()


# -------------------------------------------------------------- printer

_TERM_LEVEL = {"add": 0, "mul": 1, "prim": 2}


def print_term(t: Term, level: int = 0) -> str:
    if isinstance(t, (Var, Zero, NumLit)):
        return repr(t)
    if isinstance(t, Succ):
        return f"S({print_term(t.arg)})"
    if isinstance(t, Times):
        s = f"{print_term(t.left, 1)}*{print_term(t.right, 2)}"
        return f"({s})" if level > 1 else s
    op = "+" if isinstance(t, Plus) else "-."
    s = f"{print_term(t.left, 0)}{op}{print_term(t.right, 1)}"
    return f"({s})" if level > 0 else s


def print_formula(phi: Formula, level: int = 0) -> str:
    """Render with minimal parentheses; parse(print_formula(x)) == x.

    Levels: 0 implication/quantifier, 1 disjunction, 2 conjunction,
    3 negation and atoms.
    """
    if isinstance(phi, Bot):
        return "bot"
    if isinstance(phi, Atom):
        return f"{phi.rel}({', '.join(print_term(a) for a in phi.args)})"
    if isinstance(phi, Eq):
        return f"{print_term(phi.left)} = {print_term(phi.right)}"
    if isinstance(phi, Imp):
        if phi.right == BOT:
            return "~" + print_formula(phi.left, 3)
        s = f"{print_formula(phi.left, 1)} -> {print_formula(phi.right, 0)}"
        return f"({s})" if level > 0 else s
    if isinstance(phi, Or):
        s = f"{print_formula(phi.left, 1)} \\/ {print_formula(phi.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(phi, And):
        s = f"{print_formula(phi.left, 2)} /\\ {print_formula(phi.right, 3)}"
        return f"({s})" if level > 2 else s
    if isinstance(phi, (Forall, Exists)):
        q = "forall" if isinstance(phi, Forall) else "exists"
        s = f"{q} {phi.var}. {print_formula(phi.body, 0)}"
        return f"({s})" if level > 0 else s
    raise FormulaError(f"cannot print {phi!r}")


# ------------------------------------------------- structural utilities

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Succ):
        return term_vars(t.arg)
    if isinstance(t, (Plus, Times, Monus)):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Bot):
        return set()
    if isinstance(phi, Atom):
        out = set()
        for a in phi.args:
            out |= term_vars(a)
        return out
    if isinstance(phi, Eq):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, (And, Or, Imp)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise FormulaError(f"unknown formula node {phi!r}")


def subst_term(t: Term, env: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return env.get(t.name, t)
    if isinstance(t, Succ):
        return Succ(subst_term(t.arg, env))
    if isinstance(t, (Plus, Times, Monus)):
        return type(t)(subst_term(t.left, env), subst_term(t.right, env))
    return t


def subst(phi: Formula, env: dict[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables.

    Substituted terms must not contain variables bound at the point of
    substitution (the corpus only substitutes closed terms, so this is
    checked rather than renamed around).
    """
    if not env:
        return phi
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(subst_term(a, env) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, env), subst_term(phi.right, env))
    if isinstance(phi, (And, Or, Imp)):
        return type(phi)(subst(phi.left, env), subst(phi.right, env))
    if isinstance(phi, (Forall, Exists)):
        inner = {k: v for k, v in env.items() if k != phi.var}
        for v in inner.values():
            if phi.var in term_vars(v):
                raise FormulaError(f"substitution would capture variable {phi.var}")
        return type(phi)(phi.var, subst(phi.body, inner))
    raise FormulaError(f"unknown formula node {phi!r}")


def atoms_of(phi: Formula) -> set[tuple[str, int]]:
    """All relation symbols with their arities."""
    if isinstance(phi, Atom):
        return {(phi.rel, len(phi.args))}
    if isinstance(phi, (And, Or, Imp)):
        return atoms_of(phi.left) | atoms_of(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return atoms_of(phi.body)
    return set()


def has_arithmetic(phi: Formula) -> bool:
    """True if the formula uses Eq or the StepHalt relation."""
    if isinstance(phi, Eq):
        return True
    if isinstance(phi, Atom):
        return phi.rel == STEP_HALT
    if isinstance(phi, (And, Or, Imp)):
        return has_arithmetic(phi.left) or has_arithmetic(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return has_arithmetic(phi.body)
    return False


def has_abstract(phi: Formula) -> bool:
    """True if the formula uses an uninterpreted relation symbol."""
    return any(rel != STEP_HALT for rel, _ in atoms_of(phi))


# ---------------------------------------------------------- classifiers

@dataclass(frozen=True)
class FormulaClass:
    kind: str  # "sigma" | "pi" | "pi-or-pi" | "literal" | "imp-free"
    n: int | None = None

    def __repr__(self):
        if self.kind == "sigma":
            return f"Sigma({self.n})"
        if self.kind == "pi":
            return f"Pi({self.n})"
        if self.kind == "pi-or-pi":
            return f"PiOrPi({self.n})"
        return {"literal": "LiteralClassR", "imp-free": "ImplicationFree"}[self.kind]


def Sigma(n: int) -> FormulaClass:
    return FormulaClass("sigma", n)


def Pi(n: int) -> FormulaClass:
    return FormulaClass("pi", n)


def PiOrPi(n: int) -> FormulaClass:
    return FormulaClass("pi-or-pi", n)


LITERAL_CLASS_R = FormulaClass("literal")
IMPLICATION_FREE = FormulaClass("imp-free")


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Forall, Exists)):
        return False
    if isinstance(phi, (And, Or, Imp)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return True


def in_sigma(phi: Formula, n: int) -> bool:
    """Cumulative prenex class: an existential block (possibly empty)
    over a Pi(n-1) formula."""
    if n == 0:
        return is_quantifier_free(phi)
    while isinstance(phi, Exists):
        phi = phi.body
    return in_pi(phi, n - 1)


def in_pi(phi: Formula, n: int) -> bool:
    if n == 0:
        return is_quantifier_free(phi)
    while isinstance(phi, Forall):
        phi = phi.body
    return in_sigma(phi, n - 1)


def is_implication_free(phi: Formula) -> bool:
    if isinstance(phi, Imp):
        return False
    if isinstance(phi, (And, Or)):
        return is_implication_free(phi.left) and is_implication_free(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return is_implication_free(phi.body)
    return True


def in_literal_class(phi: Formula) -> bool:
    """The fragment generated by atoms, negated atoms, /\\, and forall."""
    if isinstance(phi, (Atom, Eq)):
        return True
    if isinstance(phi, Imp) and phi.right == BOT:
        return isinstance(phi.left, (Atom, Eq))
    if isinstance(phi, And):
        return in_literal_class(phi.left) and in_literal_class(phi.right)
    if isinstance(phi, Forall):
        return in_literal_class(phi.body)
    return False


def in_class(phi: Formula, cls: FormulaClass) -> bool:
    if cls.kind == "sigma":
        return in_sigma(phi, cls.n)
    if cls.kind == "pi":
        return in_pi(phi, cls.n)
    if cls.kind == "pi-or-pi":
        return isinstance(phi, Or) and in_pi(phi.left, cls.n) and in_pi(phi.right, cls.n)
    if cls.kind == "literal":
        return in_literal_class(phi)
    if cls.kind == "imp-free":
        return is_implication_free(phi)
    raise FormulaError(f"unknown class kind {cls.kind!r}")


MAX_CLASS_LEVEL = 16  # quantifier alternations beyond this are not tagged


def classify(phi: Formula) -> set[FormulaClass]:
    """The minimal hierarchy tags plus the structural classes.

    Sigma and Pi are cumulative, so only the least levels are reported;
    a quantifier-free formula gets both Sigma(0) and Pi(0).
    """
    out: set[FormulaClass] = set()
    ms = next((n for n in range(MAX_CLASS_LEVEL + 1) if in_sigma(phi, n)), None)
    mp = next((n for n in range(MAX_CLASS_LEVEL + 1) if in_pi(phi, n)), None)
    if ms is not None and (mp is None or ms <= mp):
        out.add(Sigma(ms))
    if mp is not None and (ms is None or mp <= ms):
        out.add(Pi(mp))
    if isinstance(phi, Or):
        both = next(
            (n for n in range(MAX_CLASS_LEVEL + 1) if in_pi(phi.left, n) and in_pi(phi.right, n)),
            None,
        )
        if both is not None:
            out.add(PiOrPi(both))
    if in_literal_class(phi):
        out.add(LITERAL_CLASS_R)
    if is_implication_free(phi):
        out.add(IMPLICATION_FREE)
    return out


# ------------------------------------------------------------- schemes

def universal_closure(phi: Formula) -> Formula:
    for v in sorted(free_vars(phi), reverse=True):
        phi = Forall(v, phi)
    return phi


def scheme(cls: FormulaClass, ax: str, instance: Formula) -> Formula:
    """The DNE or LEM axiom instance for a formula of the given class."""
    if not in_class(instance, cls):
        raise FormulaError(f"instance is not in class {cls!r}")
    if ax == "DNE":
        return universal_closure(Imp(neg(neg(instance)), instance))
    if ax == "LEM":
        return universal_closure(Or(instance, neg(instance)))
    raise FormulaError(f"unknown scheme kind {ax!r} (want DNE or LEM)")


def universal_instance(cls: FormulaClass, e: int, x: int, e2: int | None = None, x2: int | None = None) -> Formula:
    """Machine-backed instance formulas of the low hierarchy classes."""
    def sigma1(code, arg):
        return Exists("w", Atom(STEP_HALT, (num(code), num(arg), Var("w"))))

    def pi1(code, arg):
        return Forall("w", neg(Atom(STEP_HALT, (num(code), num(arg), Var("w")))))

    if cls == Sigma(1):
        return sigma1(e, x)
    if cls == Pi(1):
        return pi1(e, x)
    if cls == PiOrPi(1):
        if e2 is None or x2 is None:
            raise FormulaError("PiOrPi(1) instance needs two code/input pairs")
        return Or(pi1(e, x), pi1(e2, x2))
    raise FormulaError(f"no universal instance family for class {cls!r}")
