"""Seeded random generators shared across the test modules."""

from __future__ import annotations

import random

from lt.algebra import Algebra, Denotation
from lt.semantics import Homomorphism
from lt.syntax import (
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
    LBot,
    LNot,
    LOr,
    Var,
)

_UNARY_TAGS = (DerivedTag.DOWN, DerivedTag.UP, DerivedTag.DIAMOND, DerivedTag.BOX, DerivedTag.STRICT_NOT)
_NULLARY_TAGS = (DerivedTag.EXT_TOP, DerivedTag.INT_TOP, DerivedTag.NB)


def random_formula(rng: random.Random, depth: int, n_vars: int, derived: bool = True) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        choices = ["var", "bot", "ibot"]
        if derived:
            choices.append("const")
        kind = rng.choice(choices)
        if kind == "var" and n_vars > 0:
            return Var(rng.randrange(n_vars))
        if kind == "const":
            return Derived(rng.choice(_NULLARY_TAGS))
        return ExtBot() if kind == "bot" else IntBot()
    kinds = ["enot", "inot", "eor", "eand", "ior", "iand"]
    if derived:
        kinds += ["dunary", "implies", "ostar"]
    kind = rng.choice(kinds)
    if kind == "enot":
        return ExtNot(random_formula(rng, depth - 1, n_vars, derived))
    if kind == "inot":
        return IntNot(random_formula(rng, depth - 1, n_vars, derived))
    if kind == "dunary":
        return Derived(rng.choice(_UNARY_TAGS), (random_formula(rng, depth - 1, n_vars, derived),))
    left = random_formula(rng, depth - 1, n_vars, derived)
    right = random_formula(rng, depth - 1, n_vars, derived)
    if kind == "eor":
        return ExtOr(left, right)
    if kind == "eand":
        return ExtAnd(left, right)
    if kind == "ior":
        return IntOr(left, right)
    if kind == "iand":
        return IntAnd(left, right)
    if kind == "implies":
        return Derived(DerivedTag.IMPLIES, (left, right))
    return Derived(DerivedTag.CIRCLE_STAR, (left, right))


def random_label(rng: random.Random, depth: int, n_atoms: int) -> Label:
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.15:
            return LBot()
        return LAtom(rng.randrange(n_atoms))
    kind = rng.choice(["not", "or", "and"])
    if kind == "not":
        return LNot(random_label(rng, depth - 1, n_atoms))
    left = random_label(rng, depth - 1, n_atoms)
    right = random_label(rng, depth - 1, n_atoms)
    return LOr(left, right) if kind == "or" else LAnd(left, right)


def random_hom(rng: random.Random, algebra: Algebra, variables) -> Homomorphism:
    return Homomorphism(
        algebra,
        {v: Denotation(algebra, rng.randrange(algebra.full + 1)) for v in variables},
    )


def random_principal_hom(rng: random.Random, algebra: Algebra, variables) -> Homomorphism:
    return Homomorphism(
        algebra,
        {
            v: Denotation(algebra, algebra.principal_ideal(rng.randrange(algebra.size)))
            for v in variables
        },
    )
