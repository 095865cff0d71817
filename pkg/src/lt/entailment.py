"""Entailment checking over finite algebras and countermodel search.

Entailment at a fixed algebra size quantifies over every assignment of
denotations to the free variables; a countermodel is an assignment plus
a witness element lying in the intersection of the premise denotations
but not in the conclusion's.  Enumeration order is canonical (variables
ascending, denotation bitsets as integers ascending), so the reported
countermodel is always the least one and runs are byte-reproducible,
with or without worker parallelism.  Searching all finite sizes is sound
for refutation but cannot certify full entailment: some non-validities
need an infinite (non-complete) algebra.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import Algebra, iter_bits
from .errors import BudgetExceededError
from .semantics import (
    Homomorphism,
    LabelValuation,
    eval_core_bits,
    eval_label,
    evaluate,
    satisfies,
)
from .syntax import (
    Derived,
    DerivedTag,
    ExtNot,
    Formula,
    IntOr,
    LabelledFormula,
    Var,
    expand,
    free_vars,
    label_atoms,
)

DEFAULT_MAX_N = 3
DEFAULT_CAP = 1 << 22
MAX_N = 4

NOTE_FINITE_SCOPE = (
    "exhaustion of all algebras up to max_n does not certify entailment: "
    "some non-entailments are refutable only on an infinite (non-complete) "
    "Boolean algebra"
)


@dataclass(frozen=True)
class Countermodel:
    """A replayable violation: the homomorphism, a witness element in the
    premise intersection but outside the conclusion, and, for labelled
    queries, the label valuation."""

    hom: Homomorphism
    witness: int
    labels: LabelValuation | None = None

    @property
    def algebra(self) -> Algebra:
        return self.hom.algebra

    def to_json_obj(self) -> dict:
        alg = self.algebra
        obj: dict = {
            "n": alg.n,
            "assignment": {
                f"P{v}": d.to_strings() for v, d in sorted(self.hom.assignment.items())
            },
            "witness": alg.format_element(self.witness),
        }
        if self.labels is not None:
            obj["label_assignment"] = {
                f"p{i}": alg.format_element(e)
                for i, e in sorted(self.labels.assignment.items())
            }
        return obj


@dataclass(frozen=True)
class SearchReport:
    """Outcome of an iterative-deepening countermodel search."""

    status: str  # "countermodel" | "exhausted" | "budget_exceeded"
    max_n: int
    completed_n: int  # largest size fully scanned
    countermodel: Countermodel | None = None
    note: str | None = None


def local_entails(hom: Homomorphism, premises: Iterable[Formula], conclusion: Formula) -> bool:
    """Intersection of the premise denotations contained in the conclusion's.
    An empty premise set intersects to the full carrier."""
    return local_counterexample(hom, premises, conclusion) is None


def local_counterexample(
    hom: Homomorphism, premises: Iterable[Formula], conclusion: Formula
) -> int | None:
    """Least witness element violating the local entailment, or None."""
    alg = hom.algebra
    inter = alg.full
    for p in premises:
        inter &= evaluate(hom, p).bits
        if inter == 0:
            return None
    bad = inter & ~evaluate(hom, conclusion).bits
    if bad == 0:
        return None
    return next(iter_bits(bad))


def _denotation_domain(alg: Algebra, class_restriction: str) -> list[int]:
    if class_restriction == "principal_variables":
        return sorted(alg.principal_ideal(a) for a in alg.elements())
    if class_restriction == "all":
        return list(range(alg.full + 1))
    raise ValueError(f"unknown class restriction {class_restriction!r}")


def _decode(index: int, domains: Sequence[Sequence[int]]) -> list[int]:
    # digits of index, first domain most significant
    out = [0] * len(domains)
    for j in range(len(domains) - 1, -1, -1):
        base = len(domains[j])
        out[j] = domains[j][index % base]
        index //= base
    return out


def _scan_algebra(args) -> tuple[int, tuple[int, ...], int] | None:
    n, class_restriction, variables, premises, conclusion, start, stop = args
    alg = Algebra(n)
    domain = _denotation_domain(alg, class_restriction)
    domains = [domain] * len(variables)
    full = alg.full
    for idx in range(start, stop):
        values = _decode(idx, domains)
        env = dict(zip(variables, values))
        inter = full
        for p in premises:
            inter &= eval_core_bits(alg, env, p)
            if inter == 0:
                break
        else:
            bad = inter & ~eval_core_bits(alg, env, conclusion)
            if bad:
                return idx, tuple(values), next(iter_bits(bad))
    return None


def _scan_labelled(args) -> tuple[int, tuple[int, ...], tuple[int, ...], int] | None:
    n, variables, atoms, gamma, conclusion, start, stop = args
    alg = Algebra(n)
    den_domain = list(range(alg.full + 1))
    elem_domain = list(alg.elements())
    domains = [den_domain] * len(variables) + [elem_domain] * len(atoms)
    nv = len(variables)
    for idx in range(start, stop):
        values = _decode(idx, domains)
        env = dict(zip(variables, values[:nv]))
        lenv = dict(zip(atoms, values[nv:]))
        ok = True
        for label, formula in gamma:
            element = _label_bits(alg, lenv, label)
            if eval_core_bits(alg, env, formula) >> element & 1 == 0:
                ok = False
                break
        if not ok:
            continue
        b_label, psi = conclusion
        element = _label_bits(alg, lenv, b_label)
        if eval_core_bits(alg, env, psi) >> element & 1 == 0:
            return idx, tuple(values[:nv]), tuple(values[nv:]), element
    return None


def _label_bits(alg: Algebra, lenv: dict[int, int], label) -> int:
    return eval_label(LabelValuation(alg, lenv), label)


def _run_scan(scan_fn, base_args, total: int, jobs: int):
    if jobs <= 1 or total <= 4096:
        return scan_fn(base_args + (0, total))
    chunk = -(-total // (jobs * 4))
    chunks = [base_args + (s, min(s + chunk, total)) for s in range(0, total, chunk)]
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        futures = [pool.submit(scan_fn, c) for c in chunks]
        # consume in chunk order: the first hit is the global minimum
        for i, future in enumerate(futures):
            result = future.result()
            if result is not None:
                for later in futures[i + 1 :]:
                    later.cancel()
                return result
        return None
    finally:
        pool.shutdown(wait=True, cancel_futures=True)


def _check_budget(total: int, cap: int, n: int) -> None:
    if total > cap:
        raise BudgetExceededError(
            f"{total} homomorphisms to scan at n={n} exceeds the cap of {cap}",
            checked=0,
            total=total,
        )


def algebra_entails(
    n: int,
    premises: Sequence[Formula],
    conclusion: Formula,
    class_restriction: str = "all",
    *,
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
) -> tuple[bool, Countermodel | None]:
    """Decide the entailment at algebra size n by exhaustive enumeration.

    Returns (True, None) or (False, least countermodel).  Variables range
    over all denotations, or only over principal ideals when
    class_restriction="principal_variables".
    """
    if not 0 <= n <= MAX_N:
        raise ValueError(f"algebra size must be in 0..{MAX_N}, got {n}")
    alg = Algebra(n)
    premises_core = tuple(expand(p) for p in premises)
    conclusion_core = expand(conclusion)
    variables = tuple(
        sorted(frozenset().union(*(free_vars(p) for p in premises_core), free_vars(conclusion_core)))
    )
    domain_size = len(_denotation_domain(alg, class_restriction))
    total = domain_size ** len(variables)
    _check_budget(total, cap, n)
    hit = _run_scan(
        _scan_algebra,
        (n, class_restriction, variables, premises_core, conclusion_core),
        total,
        jobs,
    )
    if hit is None:
        return True, None
    _, values, witness = hit
    hom = Homomorphism.from_bits(alg, dict(zip(variables, values)))
    return False, Countermodel(hom, witness)


def labelled_entails(
    n: int,
    gamma: Sequence[LabelledFormula],
    conclusion: LabelledFormula,
    *,
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
) -> tuple[bool, Countermodel | None]:
    """Decide a labelled entailment at algebra size n, quantifying over both
    the variable assignment and the label valuation."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"algebra size must be in 0..{MAX_N}, got {n}")
    alg = Algebra(n)
    gamma_core = tuple((lf.label, expand(lf.formula)) for lf in gamma)
    concl_core = (conclusion.label, expand(conclusion.formula))
    variables = tuple(
        sorted(
            frozenset().union(
                *(free_vars(f) for _, f in gamma_core), free_vars(concl_core[1])
            )
        )
    )
    atoms = tuple(
        sorted(
            frozenset().union(
                *(label_atoms(lbl) for lbl, _ in gamma_core), label_atoms(concl_core[0])
            )
        )
    )
    total = ((alg.full + 1) ** len(variables)) * (alg.size ** len(atoms))
    _check_budget(total, cap, n)
    hit = _run_scan(
        _scan_labelled, (n, variables, atoms, gamma_core, concl_core), total, jobs
    )
    if hit is None:
        return True, None
    _, var_values, atom_values, witness = hit
    hom = Homomorphism.from_bits(alg, dict(zip(variables, var_values)))
    valuation = LabelValuation(alg, dict(zip(atoms, atom_values)))
    return False, Countermodel(hom, witness, labels=valuation)


def find_countermodel(
    premises: Sequence[Formula],
    conclusion: Formula,
    *,
    max_n: int = DEFAULT_MAX_N,
    class_restriction: str = "all",
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
) -> SearchReport:
    """Search algebra sizes 0, 1, ..., max_n for a countermodel."""
    if not 0 <= max_n <= MAX_N:
        raise ValueError(f"max_n must be in 0..{MAX_N}, got {max_n}")
    completed = -1
    for n in range(max_n + 1):
        try:
            entailed, cm = algebra_entails(
                n, premises, conclusion, class_restriction, cap=cap, jobs=jobs
            )
        except BudgetExceededError as exc:
            return SearchReport(
                status="budget_exceeded",
                max_n=max_n,
                completed_n=completed,
                note=str(exc),
            )
        if not entailed:
            assert cm is not None and replay(cm, premises, conclusion)
            return SearchReport(
                status="countermodel", max_n=max_n, completed_n=n, countermodel=cm
            )
        completed = n
    return SearchReport(
        status="exhausted", max_n=max_n, completed_n=completed, note=NOTE_FINITE_SCOPE
    )


def replay(cm: Countermodel, premises: Sequence[Formula], conclusion: Formula) -> bool:
    """Re-evaluate a countermodel: the witness must lie in every premise
    denotation and outside the conclusion's."""
    for p in premises:
        if cm.witness not in evaluate(cm.hom, p):
            return False
    return cm.witness not in evaluate(cm.hom, conclusion)


def replay_labelled(
    cm: Countermodel, gamma: Sequence[LabelledFormula], conclusion: LabelledFormula
) -> bool:
    if cm.labels is None:
        return False
    return all(satisfies(cm.labels, cm.hom, lf) for lf in gamma) and not satisfies(
        cm.labels, cm.hom, conclusion
    )


def pva_axioms(var_indices: Iterable[int]) -> list[Formula]:
    """The principal-variable axioms box(P_i i| ~P_i), one per variable,
    in index order.  Valid under H exactly when every listed variable's
    denotation is a principal ideal."""
    return [
        Derived(
            DerivedTag.BOX,
            (IntOr(Var(i), Derived(DerivedTag.STRICT_NOT, (Var(i),))),),
        )
        for i in sorted(set(var_indices))
    ]


def box_formulas(formulas: Iterable[Formula]) -> list[Formula]:
    return [Derived(DerivedTag.BOX, (f,)) for f in formulas]


def verify_box_internalisation(
    n: int,
    pi: Sequence[Formula],
    premises: Sequence[Formula],
    conclusion: Formula,
    *,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Check, by double enumeration at size n, that prefixing box(pi) to the
    premises is equivalent to restricting to homomorphisms validating pi."""
    boxed_side, _ = algebra_entails(
        n, list(box_formulas(pi)) + list(premises), conclusion, cap=cap
    )

    alg = Algebra(n)
    pi_core = tuple(expand(f) for f in pi)
    premises_core = tuple(expand(p) for p in premises)
    conclusion_core = expand(conclusion)
    variables = tuple(
        sorted(
            frozenset().union(
                *(free_vars(f) for f in pi_core + premises_core),
                free_vars(conclusion_core),
            )
        )
    )
    total = (alg.full + 1) ** len(variables)
    _check_budget(total, cap, n)
    domains = [list(range(alg.full + 1))] * len(variables)
    restricted_side = True
    for idx in range(total):
        env = dict(zip(variables, _decode(idx, domains)))
        if any(eval_core_bits(alg, env, f) != alg.full for f in pi_core):
            continue
        inter = alg.full
        for p in premises_core:
            inter &= eval_core_bits(alg, env, p)
        if inter & ~eval_core_bits(alg, env, conclusion_core):
            restricted_side = False
            break
    return boxed_side == restricted_side


def order_diamond(formula: Formula) -> Formula:
    """Possibility over the algebra's partial order: the downward closure."""
    return Derived(DerivedTag.DOWN, (formula,))


def order_box(formula: Formula) -> Formula:
    """Necessity over the algebra's partial order: !down !phi."""
    return ExtNot(Derived(DerivedTag.DOWN, (ExtNot(formula),)))


def grz_formula(var_index: int = 0) -> Formula:
    """Grzegorczyk's formula over the order modality; valid on an algebra's
    order frame exactly when the algebra is finite."""
    p = Var(var_index)
    imp = lambda a, b: Derived(DerivedTag.IMPLIES, (a, b))
    return imp(order_box(imp(order_box(imp(p, order_box(p))), p)), p)


def default_max_n() -> int:
    """Default search depth, overridable with the LT_MAX_N environment variable."""
    raw = os.environ.get("LT_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"LT_MAX_N must be an integer, got {raw!r}") from exc
    if not 0 <= value <= MAX_N:
        raise ValueError(f"LT_MAX_N must be in 0..{MAX_N}, got {value}")
    return value
