"""Syntactic translations into a modal formula language.

The target language extends the first-order language with two nodes:
Mod(j, phi) applies the nucleus named j to the truth value of phi, and
GuardAll(k, P, j, phi) quantifies k over the members of the frame P
that lie above j.  Three translations are provided: the plain nucleus
translation (atoms, disjunctions, and existentials get Mod), the
forcing translation (implications and universals additionally guard
over the frame), and the Kuroda-style variant (atoms untouched, the
modality lands on consequents and under universals).
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Imp,
    Or,
    Parser,
    Term,
    print_term,
    subst_term,
    term_vars,
)


@dataclass(frozen=True, repr=False)
class Mod(Formula):
    """Application of the nucleus bound to `nvar` to the body's value."""

    nvar: str
    body: Formula


@dataclass(frozen=True, repr=False)
class GuardAll(Formula):
    """For every member `kvar` of frame `frame` above `above`: body."""

    kvar: str
    frame: str
    above: str
    body: Formula


def _guard_name(depth: int) -> str:
    return "k" if depth == 1 else f"k{depth}"


def gg_translate(phi: Formula, j: str = "j") -> Formula:
    """Nucleus translation: Mod at atoms, \\/ and exists; the rest commutes."""
    if isinstance(phi, (Atom, Eq, Bot)):
        return Mod(j, phi)
    if isinstance(phi, And):
        return And(gg_translate(phi.left, j), gg_translate(phi.right, j))
    if isinstance(phi, Or):
        return Mod(j, Or(gg_translate(phi.left, j), gg_translate(phi.right, j)))
    if isinstance(phi, Imp):
        return Imp(gg_translate(phi.left, j), gg_translate(phi.right, j))
    if isinstance(phi, Exists):
        return Mod(j, Exists(phi.var, gg_translate(phi.body, j)))
    if isinstance(phi, Forall):
        return Forall(phi.var, gg_translate(phi.body, j))
    raise FormulaError(f"cannot translate node {phi!r}")


def forcing_translate(phi: Formula, j: str = "j", frame: str = "P", _depth: int = 0) -> Formula:
    """Forcing translation over a frame of nuclei.

    Implications and universals quantify over all frame members above
    the current nucleus; guard variables are named k, k2, k3, ... by
    nesting depth, which keeps the output deterministic.
    """
    if isinstance(phi, (Atom, Eq, Bot)):
        return Mod(j, phi)
    if isinstance(phi, And):
        return And(forcing_translate(phi.left, j, frame, _depth), forcing_translate(phi.right, j, frame, _depth))
    if isinstance(phi, Or):
        return Mod(j, Or(forcing_translate(phi.left, j, frame, _depth), forcing_translate(phi.right, j, frame, _depth)))
    if isinstance(phi, Imp):
        k = _guard_name(_depth + 1)
        body = Imp(
            forcing_translate(phi.left, k, frame, _depth + 1),
            forcing_translate(phi.right, k, frame, _depth + 1),
        )
        return GuardAll(k, frame, j, body)
    if isinstance(phi, Exists):
        return Mod(j, Exists(phi.var, forcing_translate(phi.body, j, frame, _depth)))
    if isinstance(phi, Forall):
        k = _guard_name(_depth + 1)
        return GuardAll(k, frame, j, Forall(phi.var, forcing_translate(phi.body, k, frame, _depth + 1)))
    raise FormulaError(f"cannot translate node {phi!r}")


def kuroda_forcing_translate(phi: Formula, j: str = "j", frame: str = "P", _depth: int = 0) -> Formula:
    """Kuroda-style variant: atoms stay bare, \\/ and exists commute, the
    modality is applied to implication consequents and under universals."""
    if isinstance(phi, (Atom, Eq, Bot)):
        return phi
    if isinstance(phi, And):
        return And(kuroda_forcing_translate(phi.left, j, frame, _depth), kuroda_forcing_translate(phi.right, j, frame, _depth))
    if isinstance(phi, Or):
        return Or(kuroda_forcing_translate(phi.left, j, frame, _depth), kuroda_forcing_translate(phi.right, j, frame, _depth))
    if isinstance(phi, Imp):
        k = _guard_name(_depth + 1)
        body = Imp(
            kuroda_forcing_translate(phi.left, k, frame, _depth + 1),
            Mod(k, kuroda_forcing_translate(phi.right, k, frame, _depth + 1)),
        )
        return GuardAll(k, frame, j, body)
    if isinstance(phi, Exists):
        return Exists(phi.var, kuroda_forcing_translate(phi.body, j, frame, _depth))
    if isinstance(phi, Forall):
        k = _guard_name(_depth + 1)
        return GuardAll(k, frame, j, Forall(phi.var, Mod(k, kuroda_forcing_translate(phi.body, k, frame, _depth + 1))))
    raise FormulaError(f"cannot translate node {phi!r}")


def kuroda_wrapped_translate(phi: Formula, j: str = "j", frame: str = "P") -> Formula:
    return Mod(j, kuroda_forcing_translate(phi, j, frame))


TRANSLATIONS = {
    "gg": gg_translate,
    "forcing": forcing_translate,
    "kuroda": kuroda_forcing_translate,
    "kuroda-wrapped": kuroda_wrapped_translate,
}


# -------------------------------------------------------------- printing

def print_mformula(phi: Formula, level: int = 0) -> str:
    """Extended printer: `[j]phi` for Mod, `all k>=j in P. phi` for GuardAll."""
    if isinstance(phi, Mod):
        return f"[{phi.nvar}]" + print_mformula(phi.body, 3)
    if isinstance(phi, GuardAll):
        s = f"all {phi.kvar}>={phi.above} in {phi.frame}. {print_mformula(phi.body, 0)}"
        return f"({s})" if level > 0 else s
    if isinstance(phi, Bot):
        return "bot"
    if isinstance(phi, Atom):
        return f"{phi.rel}({', '.join(print_term(a) for a in phi.args)})"
    if isinstance(phi, Eq):
        return f"{print_term(phi.left)} = {print_term(phi.right)}"
    if isinstance(phi, Imp):
        if phi.right == Bot():
            return "~" + print_mformula(phi.left, 3)
        s = f"{print_mformula(phi.left, 1)} -> {print_mformula(phi.right, 0)}"
        return f"({s})" if level > 0 else s
    if isinstance(phi, Or):
        s = f"{print_mformula(phi.left, 1)} \\/ {print_mformula(phi.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(phi, And):
        s = f"{print_mformula(phi.left, 2)} /\\ {print_mformula(phi.right, 3)}"
        return f"({s})" if level > 2 else s
    if isinstance(phi, (Forall, Exists)):
        q = "forall" if isinstance(phi, Forall) else "exists"
        s = f"{q} {phi.var}. {print_mformula(phi.body, 0)}"
        return f"({s})" if level > 0 else s
    raise FormulaError(f"cannot print {phi!r}")


class MParser(Parser):
    """Parser for the modal surface syntax; round-trips print_mformula."""

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "[":
            self.take("[")
            nvar = self.variable()
            self.take("]")
            return Mod(nvar, self.unary())
        if tok == "all":
            self.take("all")
            kvar = self.variable()
            self.take(">=")
            above = self.variable()
            self.take("in")
            frame = self.frame_name()
            self.take(".")
            return GuardAll(kvar, frame, above, self.formula())
        return super().unary()

    def frame_name(self) -> str:
        tok = self.peek()
        if tok is None or not tok[0].isalpha():
            self.fail(f"expected a frame name, found {tok!r}")
        return self.take()


def parse_mformula(text: str) -> Formula:
    return MParser(text).parse()


# ---------------------------------------------------------- substitution

def subst_m(phi: Formula, env: dict[str, Term]) -> Formula:
    """Substitute terms for free first-order variables in an MFormula."""
    if not env:
        return phi
    if isinstance(phi, Mod):
        return Mod(phi.nvar, subst_m(phi.body, env))
    if isinstance(phi, GuardAll):
        return GuardAll(phi.kvar, phi.frame, phi.above, subst_m(phi.body, env))
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(subst_term(a, env) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, env), subst_term(phi.right, env))
    if isinstance(phi, (And, Or, Imp)):
        return type(phi)(subst_m(phi.left, env), subst_m(phi.right, env))
    if isinstance(phi, (Forall, Exists)):
        inner = {k: v for k, v in env.items() if k != phi.var}
        for v in inner.values():
            if phi.var in term_vars(v):
                raise FormulaError(f"substitution would capture variable {phi.var}")
        return type(phi)(phi.var, subst_m(phi.body, inner))
    raise FormulaError(f"unknown formula node {phi!r}")


def mformula_size(phi: Formula) -> int:
    if isinstance(phi, Mod):
        return 1 + mformula_size(phi.body)
    if isinstance(phi, GuardAll):
        return 1 + mformula_size(phi.body)
    if isinstance(phi, (And, Or, Imp)):
        return 1 + mformula_size(phi.left) + mformula_size(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return 1 + mformula_size(phi.body)
    return 1
