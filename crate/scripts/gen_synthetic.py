#!/usr/bin/env python3
"""Regenerate the synthetic fixture corpus used by the smoke and property tests.

Output: crates/core/tests/fixtures/synthetic/part-NN.mrg, 8 files x 25 sentences.
Deterministic (fixed seed); re-running produces identical files.
"""
import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "fixtures", "synthetic")

NPS = [
    "(PRP it)", "(PRP they)", "(PRP she)", "(PRP we)",
    "(NNP Larson)", "(NNP Ms.) (NNP Stevens)", "(NNP Tokyo)",
    "(DT the) (NN maid)", "(DT the) (NN market)", "(DT this) (NN plan)", "(PRP$ her) (NN broker)",
    "(DT a) (NN singer)", "(DT an) (NN analyst)", "(DT some) (NNS traders)", "(CD three) (NNS banks)",
    "(NNS prices)", "(NN order) (NNS imbalances)", "(JJ many) (NNS buyers)",
]
TRANSITIVE = ["approached", "sold", "watched", "called", "helped"]
INTRANSITIVE = ["left", "sang", "rose", "fell", "slept"]
CLAUSAL = ["said", "knew", "realized", "disclosed", "thought"]
ADVERBIALS = [
    ("PP-TMP", "(IN In) (NP (CD 1989))"),
    ("PP-LOC", "(IN in) (NP (NNP Tokyo))"),
    ("ADVP-TMP", "(RB Yesterday)"),
    ("SBAR-TMP", "(IN After) (S (NP-SBJ (DT the) (NN crash)) (VP (VBD ended)))"),
    ("SBAR-PRP", "(IN Because) (S (NP-SBJ (PRP it)) (VP (VBD rained)))"),
]


def np(rng, tag="NP"):
    return "(%s %s)" % (tag, rng.choice(NPS))


def vp_simple(rng):
    if rng.random() < 0.5:
        return "(VP (VBD %s) %s)" % (rng.choice(TRANSITIVE), np(rng))
    return "(VP (VBD %s))" % rng.choice(INTRANSITIVE)


def clause(rng):
    return "(S %s %s)" % (np(rng, "NP-SBJ"), vp_simple(rng))


def sentence(rng):
    kind = rng.randrange(7)
    subj = np(rng, "NP-SBJ")
    if kind == 0:
        body = "%s %s" % (subj, vp_simple(rng))
    elif kind == 1:
        body = "%s (VP (VBD %s) (SBAR (IN that) %s))" % (subj, rng.choice(CLAUSAL), clause(rng))
    elif kind == 2:
        body = "%s (VP (VBD %s) (SBAR (-NONE- 0) %s))" % (subj, rng.choice(CLAUSAL), clause(rng))
    elif kind == 3:
        body = "%s (VP (VBD %s) %s)" % (subj, rng.choice(CLAUSAL), clause(rng))
    elif kind == 4:
        label, inner = rng.choice(ADVERBIALS)
        comma = " (, ,)" if rng.random() < 0.7 else ""
        body = "(%s %s)%s %s %s" % (label, inner, comma, subj, vp_simple(rng))
    elif kind == 5:
        comma = " (, ,)" if rng.random() < 0.5 else ""
        sub = "(S (NP-SBJ %s) (VP (VBD %s) (ADVP-TMP (-NONE- *T*-1))))" % (
            rng.choice(NPS), rng.choice(TRANSITIVE + INTRANSITIVE))
        body = "(SBAR-TMP (WHADVP-1 (WRB When)) %s)%s %s %s" % (sub, comma, subj, vp_simple(rng))
    else:
        rel = "(SBAR (WHNP-1 (WP who)) (S (NP-SBJ (-NONE- *T*-1)) %s))" % vp_simple(rng)
        body = "(NP-SBJ (NP %s) %s) %s" % (rng.choice(NPS), rel, vp_simple(rng))
    return "( (S %s (. .)) )" % body


def main():
    rng = random.Random(1993)
    os.makedirs(OUT, exist_ok=True)
    for part in range(8):
        lines = [sentence(rng) for _ in range(25)]
        with open(os.path.join(OUT, "part-%02d.mrg" % part), "w") as f:
            f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
