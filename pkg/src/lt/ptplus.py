"""Valuational team semantics for the strong propositional team logic PT+.

A valuation over k variables is a k-bit integer; a team is a bitset over
the 2^k valuations; the denotation of a PT+ formula is a bitset over the
2^(2^k) teams.  The fragment allows variables, strict negation applied
to variables only, ibot, nb, the internal disjunction i| and the
external connectives & and | (plus o* as sugar).  Working over k
variables is faithful for entailment among formulas whose variables all
lie below k.

The bridge back to the algebra semantics identifies a team over k
variables with an element of the algebra on 2^k atoms, indexed
identically; the valuation homomorphism sends each variable to the
principal ideal of its set of satisfying valuations, and any
principal-variable homomorphism over a powerset algebra is represented
inside the valuation model by mapping each atom to the valuation that
records which variable denotations contain its singleton.  Every
algebra in this workbench is already a powerset algebra, so the
embedding step of the general representation argument is the identity
and only this map is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .algebra import Algebra, Denotation, iter_bits
from .errors import FragmentError, PrincipalVariableError
from .semantics import Homomorphism
from .syntax import (
    Derived,
    DerivedTag,
    ExtAnd,
    ExtOr,
    Formula,
    IntBot,
    IntOr,
    Var,
    free_vars,
)

MAX_K = 3


@dataclass(frozen=True)
class PTDenotation:
    """A set of teams over k variables, as a bitset indexed by team."""

    k: int
    bits: int

    def teams(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __contains__(self, team: int) -> bool:
        return self.bits >> team & 1 == 1

    def to_lists(self) -> list[list[str]]:
        return [format_team(t, self.k) for t in self.teams()]


def format_valuation(s: int, k: int) -> str:
    return format(s, f"0{k}b") if k else ""


def format_team(team: int, k: int) -> list[str]:
    return [format_valuation(s, k) for s in iter_bits(team)]


def is_pt_formula(formula: Formula) -> bool:
    """True iff the formula lies in the PT+ fragment: variables, strict
    negation on variables only, ibot, nb, i|, &, | and the o* sugar."""
    if isinstance(f := formula, (Var, IntBot)):
        return True
    if isinstance(f, Derived):
        if f.tag is DerivedTag.NB:
            return True
        if f.tag is DerivedTag.STRICT_NOT:
            return isinstance(f.args[0], Var)
        if f.tag is DerivedTag.CIRCLE_STAR:
            return is_pt_formula(f.args[0]) and is_pt_formula(f.args[1])
        return False
    if isinstance(f, (IntOr, ExtAnd, ExtOr)):
        return is_pt_formula(f.left) and is_pt_formula(f.right)
    return False


def _check_pt(formula: Formula, k: int) -> None:
    if not 0 <= k <= MAX_K:
        raise ValueError(f"k must be in 0..{MAX_K}, got {k}")
    if not is_pt_formula(formula):
        raise FragmentError("formula is outside the PT+ fragment")
    high = [v for v in free_vars(formula) if v >= k]
    if high:
        raise FragmentError(f"variable P{min(high)} needs k > {min(high)}")


def pt_eval(formula: Formula, k: int, cache: dict[Formula, int] | None = None) -> PTDenotation:
    """Denotation of a PT+ formula over teams of k-variable valuations.
    The optional cache (valid for this k only) is shared across calls."""
    _check_pt(formula, k)
    if cache is None:
        cache = {}
    return PTDenotation(k, _pt_bits(formula, k, cache))


def _pt_bits(f: Formula, k: int, cache: dict[Formula, int]) -> int:
    hit = cache.get(f)
    if hit is not None:
        return hit
    n_val = 1 << k              # number of valuations
    n_team = 1 << n_val         # number of teams
    if isinstance(f, Var):
        bits = _subteams(_true_team(f.index, k), n_team)
    elif isinstance(f, IntBot):
        bits = 1  # {empty team}
    elif isinstance(f, Derived) and f.tag is DerivedTag.NB:
        bits = ((1 << n_team) - 1) ^ 1  # every non-empty team
    elif isinstance(f, Derived) and f.tag is DerivedTag.STRICT_NOT:
        index = f.args[0].index  # type: ignore[attr-defined]
        bits = _subteams(((1 << n_val) - 1) ^ _true_team(index, k), n_team)
    elif isinstance(f, Derived) and f.tag is DerivedTag.CIRCLE_STAR:
        nb = ((1 << n_team) - 1) ^ 1
        left = _pt_bits(f.args[0], k, cache) & nb
        right = _pt_bits(f.args[1], k, cache) & nb
        bits = _pair_unions(left, right)
    elif isinstance(f, IntOr):
        bits = _pair_unions(_pt_bits(f.left, k, cache), _pt_bits(f.right, k, cache))
    elif isinstance(f, ExtAnd):
        bits = _pt_bits(f.left, k, cache) & _pt_bits(f.right, k, cache)
    else:
        assert isinstance(f, ExtOr)
        bits = _pt_bits(f.left, k, cache) | _pt_bits(f.right, k, cache)
    cache[f] = bits
    return bits


def _true_team(i: int, k: int) -> int:
    """The team of valuations that set variable i to 1."""
    return sum(1 << s for s in range(1 << k) if s >> i & 1)


def _subteams(vmask: int, n_team: int) -> int:
    """Bitset of all teams contained in vmask."""
    bits = 0
    for team in range(n_team):
        if team & vmask == team:
            bits |= 1 << team
    return bits


def _pair_unions(x: int, y: int) -> int:
    """{X ∪ Y | X in x, Y in y} over team bitsets."""
    out = 0
    for a in iter_bits(x):
        for b in iter_bits(y):
            out |= 1 << (a | b)
    return out


def pt_entails(
    premises: list[Formula] | tuple[Formula, ...], conclusion: Formula, k: int
) -> tuple[bool, int | None]:
    """Subset check over PT+ denotations; on failure also the least
    counter-team (a team bitset)."""
    cache: dict[Formula, int] = {}
    n_team = 1 << (1 << k)
    inter = (1 << n_team) - 1
    for p in premises:
        inter &= pt_eval(p, k, cache).bits
    bad = inter & ~pt_eval(conclusion, k, cache).bits
    if bad == 0:
        return True, None
    return False, next(iter_bits(bad))


def build_hv(k: int) -> Homomorphism:
    """The valuation homomorphism at truncation k: over the algebra whose
    atoms are the 2^k valuations, each variable goes to the principal
    ideal of the team of valuations satisfying it."""
    if not 0 <= k <= MAX_K:
        raise ValueError(f"k must be in 0..{MAX_K}, got {k}")
    alg = Algebra(1 << k)
    assignment = {
        i: Denotation(alg, alg.principal_ideal(_true_team(i, k))) for i in range(k)
    }
    return Homomorphism(alg, assignment)


def has_principal_variables(hom: Homomorphism) -> bool:
    """True iff every assigned variable's denotation is a principal ideal."""
    return all(d.is_principal_ideal() for d in hom.assignment.values())


@dataclass(frozen=True)
class FMap:
    """The representation map from a principal-variable homomorphism's
    algebra into the valuation model: each atom goes to the valuation
    recording which variable denotations contain its singleton."""

    algebra: Algebra
    k: int
    valuations: tuple[int, ...]  # per atom index

    def valuation_of(self, atom: int) -> int:
        return self.valuations[atom]

    def lift(self, element: int) -> int:
        """Image of an element (a set of atoms) as a team."""
        team = 0
        for s in iter_bits(element):
            team |= 1 << self.valuations[s]
        return team


def f_map(hom: Homomorphism, k: int) -> FMap:
    """Build the representation map for a principal-variable homomorphism
    whose variables all lie below k."""
    if not 0 <= k <= MAX_K:
        raise ValueError(f"k must be in 0..{MAX_K}, got {k}")
    if any(v >= k for v in hom.assignment):
        raise ValueError("homomorphism assigns a variable at or above k")
    if not has_principal_variables(hom):
        raise PrincipalVariableError(
            "the representation map needs every variable denotation to be a principal ideal"
        )
    alg = hom.algebra
    valuations = []
    for s in range(alg.n):
        singleton = 1 << s
        v = 0
        for i, d in hom.assignment.items():
            if singleton in d:
                v |= 1 << i
        valuations.append(v)
    return FMap(alg, k, tuple(valuations))


@lru_cache(maxsize=None)
def _pt_dag(k: int, depth: int) -> tuple[tuple[Formula, ...], tuple[tuple, ...]]:
    """All PT+ formulas over variables below k up to the given depth, as a
    shared-children list plus an op table referring to children by index,
    so sweeps can evaluate each formula with one operator application."""
    formulas: list[Formula] = []
    ops: list[tuple] = []
    for i in range(k):
        formulas.append(Var(i))
        ops.append(("var", i))
        formulas.append(Derived(DerivedTag.STRICT_NOT, (Var(i),)))
        ops.append(("nvar", i))
    formulas.append(IntBot())
    ops.append(("ibot",))
    formulas.append(Derived(DerivedTag.NB))
    ops.append(("nb",))
    previous = range(len(formulas))
    for _ in range(depth - 1):
        start = len(formulas)
        for li in previous:
            for ri in previous:
                formulas.append(IntOr(formulas[li], formulas[ri]))
                ops.append(("ior", li, ri))
                formulas.append(ExtAnd(formulas[li], formulas[ri]))
                ops.append(("and", li, ri))
                formulas.append(ExtOr(formulas[li], formulas[ri]))
                ops.append(("or", li, ri))
        previous = range(len(formulas))
        assert start <= len(formulas)
    return tuple(formulas), tuple(ops)


def enumerate_pt_formulas(k: int, depth: int) -> tuple[Formula, ...]:
    """Every PT+ formula over variables below k up to the given connective
    depth, children shared, in dependency order (children before parents)."""
    return _pt_dag(k, depth)[0]


def _dag_eval(alg: Algebra, env: Mapping[int, int], ops: tuple[tuple, ...]) -> list[int]:
    """Evaluate every op-table entry to a denotation bitset, in order."""
    nb = alg.ext_not(alg.int_bot())
    values: list[int] = []
    append = values.append
    int_or = alg.int_or
    for op in ops:
        kind = op[0]
        if kind == "ior":
            append(int_or(values[op[1]], values[op[2]]))
        elif kind == "and":
            append(values[op[1]] & values[op[2]])
        elif kind == "or":
            append(values[op[1]] | values[op[2]])
        elif kind == "var":
            append(env[op[1]])
        elif kind == "nvar":
            append(alg.strict_neg(env[op[1]]))
        elif kind == "ibot":
            append(alg.int_bot())
        else:
            append(nb)
    return values


@lru_cache(maxsize=None)
def _hv_dag_values(k: int, depth: int) -> tuple[int, ...]:
    hv = build_hv(k)
    return tuple(_dag_eval(hv.algebra, hv.bits_env(), _pt_dag(k, depth)[1]))


def verify_f_representation(hom: Homomorphism, k: int, depth: int = 3) -> bool:
    """Exhaustively check that membership transfers along the representation
    map: X in H(phi) iff lift(X) in H_V(phi), for every element X and every
    PT+ formula up to the given depth."""
    fmap = f_map(hom, k)
    alg = hom.algebra
    lifts = [fmap.lift(x) for x in range(alg.size)]
    hom_values = _dag_eval(alg, hom.bits_env(), _pt_dag(k, depth)[1])
    hv_values = _hv_dag_values(k, depth)
    pulled: dict[int, int] = {}
    for hbits, hvbits in zip(hom_values, hv_values):
        back = pulled.get(hvbits)
        if back is None:
            back = 0
            for x in range(alg.size):
                back |= (hvbits >> lifts[x] & 1) << x
            pulled[hvbits] = back
        if back != hbits:
            return False
    return True
