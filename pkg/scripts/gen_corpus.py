#!/usr/bin/env python3
"""Regenerate the proof corpus under corpus/.

Each fixture is a derivation in the JSON format the checker consumes,
with a sibling .assumptions file listing the open assumptions.  The
accepted fixtures (everything except freshness_violation.json) must
check ok; several ship in provable-iff-refutable pairs: from a
derivation of a:phi one gets Gamma, a:!phi |- a:bot by NotE, and back
by RAA.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lt.proofcheck import Assume, Rule, RuleName, check, derivation_to_json
from lt.syntax import (
    ExtAnd,
    ExtBot,
    ExtNot,
    ExtOr,
    IntAnd,
    IntBot,
    IntNot,
    IntOr,
    ITOP_CORE,
    LabelledFormula,
    LAnd,
    LAtom,
    LNot,
    LOr,
    Var,
    equality_label,
    format_labelled,
)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

TOP = ExtNot(ExtBot())
NB = ExtNot(IntBot())
IB = IntBot()


def down(x):
    return IntAnd(x, TOP)


def up(x):
    return IntOr(x, TOP)


def sneg(x):
    return ExtNot(up(ExtAnd(down(x), NB)))


def LF(label, formula):
    return LabelledFormula(label, formula)


def eq_lf(a, b):
    return LF(equality_label(a, b), ITOP_CORE)


def taut(conclusion_label, premises=()):
    return Rule(RuleName.TAUT, LF(conclusion_label, ITOP_CORE), tuple(premises))


def write(name, derivation, gamma):
    result = check(derivation, gamma)
    expectation = "rejected" if name == "freshness_violation" else "accepted"
    if expectation == "accepted" and not result.ok:
        raise SystemExit(f"{name}: expected ok, got {result}")
    if expectation == "rejected" and result.ok:
        raise SystemExit(f"{name}: expected a violation, checked ok")
    CORPUS.mkdir(exist_ok=True)
    with open(CORPUS / f"{name}.json", "w", encoding="utf-8") as fh:
        json.dump(derivation_to_json(derivation), fh, indent=2)
        fh.write("\n")
    with open(CORPUS / f"{name}.assumptions", "w", encoding="utf-8") as fh:
        for lf in gamma:
            fh.write(format_labelled(lf) + "\n")
    print(f"{name}: {'ok' if result.ok else f'{result.reason} at {result.path}'}")


def negation_pair(name, derivation, gamma):
    """Package Gamma, a:!phi |- a:bot from a derivation of Gamma |- a:phi."""
    concl = derivation.conclusion
    neg = Assume("u_neg", LF(concl.label, ExtNot(concl.formula)))
    paired = Rule(RuleName.NOT_E, LF(concl.label, ExtBot()), (derivation, neg))
    write(name, paired, list(gamma) + [neg.formula])


# -- labels used throughout (a=p0, p=p1, q=p2, r=p3, s=p4)
a, p, q, r, s = LAtom(0), LAtom(1), LAtom(2), LAtom(3), LAtom(4)
P0, P1, P7 = Var(0), Var(1), Var(7)


def fig1_body():
    """a : P0 |- a : ~~P0, with every derived connective expanded and the
    combined label steps split into explicit Taut and Sub applications."""
    snp = sneg(P0)
    dsnp_nb = ExtAnd(down(snp), NB)
    upd = up(dsnp_nb)
    goal = ExtNot(upd)  # ~~P0 in core syntax

    x1 = LOr(LAnd(s, r), LAnd(s, q))
    x2 = LAnd(s, LNot(LOr(r, q)))
    w = LOr(x1, x2)
    z = LOr(LAnd(s, r), q)

    g1 = Assume("g1", LF(a, P0))
    u1 = Assume("u1", LF(a, upd))
    u2p = Assume("u2p", LF(p, dsnp_nb))
    u2e = Assume("u2e", eq_lf(a, LOr(p, q)))
    u3s = Assume("u3s", LF(s, snp))
    u3e = Assume("u3e", eq_lf(p, LAnd(s, r)))
    u4 = Assume("u4", LF(x1, IB))
    u5 = Assume("u5", LF(s, ExtBot()))
    u6 = Assume("u6", LF(x2, ExtBot()))

    # x1 : down P0  (via z : P0, then i&I with s : top, then relabel)
    sub_zp = Rule(RuleName.SUB, LF(z, P0), (taut(equality_label(z, a), [u2e, u3e]), g1))
    not_i_s_top = Rule(RuleName.NOT_I, LF(s, TOP), (u5,), (("u5",),))
    iand_y = Rule(RuleName.IAND_I, LF(LAnd(z, s), down(P0)), (sub_zp, not_i_s_top))
    sub_x1_down = Rule(
        RuleName.SUB, LF(x1, down(P0)), (taut(equality_label(x1, LAnd(z, s))), iand_y)
    )

    # x1 : nb  (refute x1 : ibot through the i! rules)
    and_e_p_nb = Rule(RuleName.AND_E_R, LF(p, NB), (u2p,))
    sub_sr_nb = Rule(
        RuleName.SUB, LF(LAnd(s, r), NB), (taut(equality_label(LAnd(s, r), p), [u3e]), and_e_p_nb)
    )
    inot_i = Rule(RuleName.INOT_I, LF(LNot(x1), IntNot(IB)), (u4,))
    taut_not_sr = taut(LNot(LAnd(s, r)), [inot_i])
    inot_e = Rule(RuleName.INOT_E, LF(LNot(LNot(LAnd(s, r))), IB), (taut_not_sr,))
    sub_sr_ib = Rule(
        RuleName.SUB,
        LF(LAnd(s, r), IB),
        (taut(equality_label(LAnd(s, r), LNot(LNot(LAnd(s, r))))), inot_e),
    )
    not_e_sr = Rule(RuleName.NOT_E, LF(LAnd(s, r), ExtBot()), (sub_sr_ib, sub_sr_nb))
    not_i_x1_nb = Rule(RuleName.NOT_I, LF(x1, NB), (not_e_sr,), (("u4",),))

    and_i_x1 = Rule(RuleName.AND_I, LF(x1, ExtAnd(down(P0), NB)), (sub_x1_down, not_i_x1_nb))
    not_i_x2_top = Rule(RuleName.NOT_I, LF(x2, TOP), (u6,), (("u6",),))
    ior_i_w = Rule(RuleName.IOR_I, LF(w, up(ExtAnd(down(P0), NB))), (and_i_x1, not_i_x2_top))
    sub_s_up = Rule(
        RuleName.SUB,
        LF(s, up(ExtAnd(down(P0), NB))),
        (taut(equality_label(s, w), [u2e, u3e]), ior_i_w),
    )
    not_e_s = Rule(RuleName.NOT_E, LF(s, ExtBot()), (sub_s_up, u3s))
    bot_e = Rule(RuleName.BOT_E, LF(a, ExtBot()), (not_e_s,))

    and_e_major = Rule(RuleName.AND_E_L, LF(p, down(snp)), (u2p,))
    iand_e = Rule(
        RuleName.IAND_E,
        LF(a, ExtBot()),
        (and_e_major, bot_e),
        ((), ("u3s", "u3e")),
        (4, 3),  # p-slot = p4 (s), q-slot = p3 (r)
    )
    ior_e = Rule(
        RuleName.IOR_E,
        LF(a, ExtBot()),
        (u1, iand_e),
        ((), ("u2p", "u2e")),
        (1, 2),  # p-slot = p1 (p), q-slot = p2 (q)
    )
    root = Rule(RuleName.NOT_I, LF(a, goal), (ior_e,), (("u1",),))
    return root, [g1.formula]


def freshness_violation():
    """The unsound pseudo-derivation of a : P0 & P1 from a : P0 i& P1 that
    reuses one atom for both components; must be rejected for freshness."""
    g1 = Assume("g1", LF(a, IntAnd(P0, P1)))
    u_p = Assume("u_p", LF(p, P0))
    u_q = Assume("u_q", LF(p, P1))
    u_e = Assume("u_e", eq_lf(a, LAnd(p, p)))
    and_i = Rule(RuleName.AND_I, LF(p, ExtAnd(P0, P1)), (u_p, u_q))
    sub = Rule(
        RuleName.SUB,
        LF(a, ExtAnd(P0, P1)),
        (taut(equality_label(a, p), [u_e]), and_i),
    )
    root = Rule(
        RuleName.IAND_E,
        LF(a, ExtAnd(P0, P1)),
        (g1, sub),
        ((), ("u_p", "u_q", "u_e")),
        (1, 1),  # the same atom twice: not distinct
    )
    return root, [g1.formula]


def and_comm():
    g1 = Assume("g1", LF(a, ExtAnd(P0, P1)))
    left = Rule(RuleName.AND_E_R, LF(a, P1), (g1,))
    right = Rule(RuleName.AND_E_L, LF(a, P0), (g1,))
    root = Rule(RuleName.AND_I, LF(a, ExtAnd(P1, P0)), (left, right))
    return root, [g1.formula]


def or_comm():
    g1 = Assume("g1", LF(a, ExtOr(P0, P1)))
    u1 = Assume("u1", LF(a, P0))
    u2 = Assume("u2", LF(a, P1))
    s1 = Rule(RuleName.OR_I_R, LF(a, ExtOr(P1, P0)), (u1,))
    s2 = Rule(RuleName.OR_I_L, LF(a, ExtOr(P1, P0)), (u2,))
    root = Rule(
        RuleName.OR_E, LF(a, ExtOr(P1, P0)), (g1, s1, s2), ((), ("u1",), ("u2",))
    )
    return root, [g1.formula]


def iand_comm():
    g1 = Assume("g1", LF(a, IntAnd(P0, P1)))
    u_p = Assume("u_p", LF(p, P0))
    u_q = Assume("u_q", LF(q, P1))
    u_e = Assume("u_e", eq_lf(a, LAnd(p, q)))
    iand_i = Rule(RuleName.IAND_I, LF(LAnd(q, p), IntAnd(P1, P0)), (u_q, u_p))
    sub = Rule(
        RuleName.SUB,
        LF(a, IntAnd(P1, P0)),
        (taut(equality_label(a, LAnd(q, p)), [u_e]), iand_i),
    )
    root = Rule(
        RuleName.IAND_E,
        LF(a, IntAnd(P1, P0)),
        (g1, sub),
        ((), ("u_p", "u_q", "u_e")),
        (1, 2),
    )
    return root, [g1.formula]


def ior_comm():
    g1 = Assume("g1", LF(a, IntOr(P0, P1)))
    u_p = Assume("u_p", LF(p, P0))
    u_q = Assume("u_q", LF(q, P1))
    u_e = Assume("u_e", eq_lf(a, LOr(p, q)))
    ior_i = Rule(RuleName.IOR_I, LF(LOr(q, p), IntOr(P1, P0)), (u_q, u_p))
    sub = Rule(
        RuleName.SUB,
        LF(a, IntOr(P1, P0)),
        (taut(equality_label(a, LOr(q, p)), [u_e]), ior_i),
    )
    root = Rule(
        RuleName.IOR_E,
        LF(a, IntOr(P1, P0)),
        (g1, sub),
        ((), ("u_p", "u_q", "u_e")),
        (1, 2),
    )
    return root, [g1.formula]


def inot_roundtrip():
    g1 = Assume("g1", LF(a, IntNot(IntNot(P0))))
    step1 = Rule(RuleName.INOT_E, LF(LNot(a), IntNot(P0)), (g1,))
    step2 = Rule(RuleName.INOT_E, LF(LNot(LNot(a)), P0), (step1,))
    root = Rule(
        RuleName.SUB, LF(a, P0), (taut(equality_label(a, LNot(LNot(a)))), step2)
    )
    return root, [g1.formula]


def raa_double_negation():
    g1 = Assume("g1", LF(a, ExtNot(ExtNot(P0))))
    u1 = Assume("u1", LF(a, ExtNot(P0)))
    not_e = Rule(RuleName.NOT_E, LF(a, ExtBot()), (u1, g1))
    root = Rule(RuleName.RAA, LF(a, P0), (not_e,), (("u1",),))
    return root, [g1.formula]


def ex_falso():
    g1 = Assume("g1", LF(a, ExtBot()))
    root = Rule(RuleName.BOT_E, LF(r, P7), (g1,))
    return root, [g1.formula]


def taut_excluded_middle():
    root = taut(LOr(p, LNot(p)))
    return root, []


def sub_basic():
    g1 = Assume("g1", eq_lf(a, p))
    g2 = Assume("g2", LF(p, P0))
    root = Rule(RuleName.SUB, LF(a, P0), (g1, g2))
    return root, [g1.formula, g2.formula]


def ior_intro():
    g1 = Assume("g1", LF(a, P0))
    g2 = Assume("g2", LF(p, P1))
    root = Rule(RuleName.IOR_I, LF(LOr(a, p), IntOr(P0, P1)), (g1, g2))
    return root, [g1.formula, g2.formula]


def main():
    body, gamma = fig1_body()
    write("fig1", body, gamma)
    negation_pair("fig1_pair", body, gamma)

    body, gamma = freshness_violation()
    write("freshness_violation", body, gamma)

    body, gamma = and_comm()
    write("and_comm", body, gamma)
    negation_pair("and_comm_pair", body, gamma)

    body, gamma = or_comm()
    write("or_comm", body, gamma)
    negation_pair("or_comm_pair", body, gamma)

    body, gamma = iand_comm()
    write("iand_comm", body, gamma)

    body, gamma = ior_comm()
    write("ior_comm", body, gamma)

    body, gamma = inot_roundtrip()
    write("inot_roundtrip", body, gamma)
    negation_pair("inot_roundtrip_pair", body, gamma)

    body, gamma = raa_double_negation()
    write("raa_double_negation", body, gamma)

    body, gamma = ex_falso()
    write("ex_falso", body, gamma)

    body, gamma = taut_excluded_middle()
    write("taut_excluded_middle", body, gamma)

    body, gamma = sub_basic()
    write("sub_basic", body, gamma)

    body, gamma = ior_intro()
    write("ior_intro", body, gamma)


if __name__ == "__main__":
    main()
