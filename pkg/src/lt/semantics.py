"""Evaluation of formulas under homomorphisms into powerset algebras.

A homomorphism fixes an algebra and a denotation for each propositional
variable; it then determines the value of every formula compositionally.
The default path expands derived connectives to core syntax first; the
native path computes them directly at the set level (closures, strict
negation, the two-case modal operators) and exists so the two can be
cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import Algebra, Denotation
from .errors import EvalError
from .syntax import (
    Derived,
    DerivedTag,
    ExtAnd,
    ExtBot,
    ExtNot,
    ExtOr,
    Formula,
    IntAnd,
    IntBot,
    IntNot,
    IntOr,
    LAnd,
    LAtom,
    Label,
    LabelledFormula,
    LBot,
    LNot,
    LOr,
    Var,
    expand,
    substitute,
)


@dataclass(frozen=True)
class Homomorphism:
    """Assignment of a denotation to each variable, over a fixed algebra."""

    algebra: Algebra
    assignment: Mapping[int, Denotation]

    def __post_init__(self):
        for v, d in self.assignment.items():
            if d.algebra != self.algebra:
                raise ValueError(f"assignment for P{v} targets a different algebra")

    @classmethod
    def from_bits(cls, algebra: Algebra, bits_by_var: Mapping[int, int]) -> "Homomorphism":
        return cls(algebra, {v: Denotation(algebra, b) for v, b in bits_by_var.items()})

    def bits_env(self) -> dict[int, int]:
        return {v: d.bits for v, d in self.assignment.items()}


@dataclass(frozen=True)
class LabelValuation:
    """Assignment of an algebra element to each atomic label."""

    algebra: Algebra
    assignment: Mapping[int, int]


def eval_core_bits(algebra: Algebra, env: Mapping[int, int], formula: Formula) -> int:
    """Evaluate a core formula to a denotation bitset.  env maps variable
    indices to denotation bitsets; unbound variables are an error."""
    if isinstance(f := formula, Var):
        try:
            return env[f.index]
        except KeyError:
            raise EvalError(f"unbound variable P{f.index}") from None
    if isinstance(f, ExtBot):
        return 0
    if isinstance(f, IntBot):
        return algebra.int_bot()
    if isinstance(f, ExtNot):
        return algebra.ext_not(eval_core_bits(algebra, env, f.child))
    if isinstance(f, IntNot):
        return algebra.int_not(eval_core_bits(algebra, env, f.child))
    if isinstance(f, ExtOr):
        return eval_core_bits(algebra, env, f.left) | eval_core_bits(algebra, env, f.right)
    if isinstance(f, ExtAnd):
        return eval_core_bits(algebra, env, f.left) & eval_core_bits(algebra, env, f.right)
    if isinstance(f, IntOr):
        return algebra.int_or(
            eval_core_bits(algebra, env, f.left), eval_core_bits(algebra, env, f.right)
        )
    if isinstance(f, IntAnd):
        return algebra.int_and(
            eval_core_bits(algebra, env, f.left), eval_core_bits(algebra, env, f.right)
        )
    raise EvalError(f"derived connective {f.tag.value} in core evaluation; expand first")  # type: ignore[union-attr]


def eval_native_bits(algebra: Algebra, env: Mapping[int, int], formula: Formula) -> int:
    """Evaluate with derived connectives computed directly at the set level."""
    if isinstance(f := formula, Derived):
        tag = f.tag
        if tag is DerivedTag.EXT_TOP:
            return algebra.full
        if tag is DerivedTag.INT_TOP:
            return algebra.int_top()
        if tag is DerivedTag.NB:
            return algebra.ext_not(algebra.int_bot())
        args = [eval_native_bits(algebra, env, a) for a in f.args]
        if tag is DerivedTag.DOWN:
            return algebra.down_closure(args[0])
        if tag is DerivedTag.UP:
            return algebra.up_closure(args[0])
        if tag is DerivedTag.DIAMOND:
            return algebra.full if args[0] else 0
        if tag is DerivedTag.BOX:
            return algebra.full if args[0] == algebra.full else 0
        if tag is DerivedTag.STRICT_NOT:
            return algebra.strict_neg(args[0])
        if tag is DerivedTag.IMPLIES:
            return algebra.ext_not(args[0]) | args[1]
        assert tag is DerivedTag.CIRCLE_STAR
        nb = algebra.ext_not(algebra.int_bot())
        return algebra.int_or(args[0] & nb, args[1] & nb)
    if isinstance(f, Var):
        try:
            return env[f.index]
        except KeyError:
            raise EvalError(f"unbound variable P{f.index}") from None
    if isinstance(f, ExtBot):
        return 0
    if isinstance(f, IntBot):
        return algebra.int_bot()
    if isinstance(f, ExtNot):
        return algebra.ext_not(eval_native_bits(algebra, env, f.child))
    if isinstance(f, IntNot):
        return algebra.int_not(eval_native_bits(algebra, env, f.child))
    if isinstance(f, ExtOr):
        return eval_native_bits(algebra, env, f.left) | eval_native_bits(algebra, env, f.right)
    if isinstance(f, ExtAnd):
        return eval_native_bits(algebra, env, f.left) & eval_native_bits(algebra, env, f.right)
    if isinstance(f, IntOr):
        return algebra.int_or(
            eval_native_bits(algebra, env, f.left), eval_native_bits(algebra, env, f.right)
        )
    assert isinstance(f, IntAnd)
    return algebra.int_and(
        eval_native_bits(algebra, env, f.left), eval_native_bits(algebra, env, f.right)
    )


def evaluate(
    hom: Homomorphism,
    formula: Formula,
    *,
    native_derived: bool = False,
    cache: dict[Formula, Denotation] | None = None,
) -> Denotation:
    """The denotation of the formula under the homomorphism.

    By default derived connectives are expanded to core syntax first;
    with native_derived=True they are computed directly at the set level.
    An optional cache (valid for this homomorphism only) makes repeated
    evaluation over shared subformulas cheap.
    """
    if cache is not None:
        hit = cache.get(formula)
        if hit is not None:
            return hit
    env = hom.bits_env()
    if native_derived:
        bits = eval_native_bits(hom.algebra, env, formula)
    else:
        bits = eval_core_bits(hom.algebra, env, expand(formula))
    out = Denotation(hom.algebra, bits)
    if cache is not None:
        cache[formula] = out
    return out


def eval_native_derived(hom: Homomorphism, tag: DerivedTag, *args: Formula) -> Denotation:
    """Apply one derived connective natively to natively evaluated arguments."""
    return evaluate(hom, Derived(tag, tuple(args)), native_derived=True)


def eval_label(valuation: LabelValuation, label: Label) -> int:
    """Classical evaluation of a label to an element of the algebra."""
    alg = valuation.algebra
    if isinstance(a := label, LAtom):
        try:
            return valuation.assignment[a.index]
        except KeyError:
            raise EvalError(f"unbound label atom p{a.index}") from None
    if isinstance(a, LBot):
        return 0
    if isinstance(a, LNot):
        return alg.complement(eval_label(valuation, a.child))
    if isinstance(a, LOr):
        return eval_label(valuation, a.left) | eval_label(valuation, a.right)
    assert isinstance(a, LAnd)
    return eval_label(valuation, a.left) & eval_label(valuation, a.right)


def satisfies(valuation: LabelValuation, hom: Homomorphism, lf: LabelledFormula) -> bool:
    """True iff the label's value lies in the formula's denotation."""
    if valuation.algebra != hom.algebra:
        raise ValueError("label valuation and homomorphism target different algebras")
    element = eval_label(valuation, lf.label)
    return evaluate(hom, lf.formula).bits >> element & 1 == 1


def compose(hom: Homomorphism, sigma: Mapping[int, Formula]) -> Homomorphism:
    """The homomorphism H∘σ: each variable goes to H's value of its σ-image,
    so eval(compose(H, σ), φ) = eval(H, substitute(φ, σ)) for every formula."""
    domain = set(hom.assignment) | set(sigma)
    assignment = {
        v: evaluate(hom, substitute(Var(v), sigma)) for v in sorted(domain)
    }
    return Homomorphism(hom.algebra, assignment)
