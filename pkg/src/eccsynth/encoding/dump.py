"""Debug dump of an encoded instance: DIMACS CNF plus a variable map.

Each mapped variable gets a comment line ``c var <id> <family>[indices]``
so models and cores from external tools can be read back by hand.
"""

from __future__ import annotations

from typing import Dict, List

from ..automaton import bits_to_string
from ..sat.dimacs import write_dimacs
from .context import NONE_VALUE, EncodingContext


def _value_str(value) -> str:
    if value is NONE_VALUE:
        return "-"
    return str(value)


def variable_map(ctx: EncodingContext) -> Dict[int, str]:
    names: Dict[int, str] = {}

    def onehot(family: str, oh, *indices):
        prefix = ",".join(str(i) for i in indices)
        for value, var in zip(oh.values, oh.vars):
            names[var] = f"{family}[{prefix}]={_value_str(value)}"

    for q in ctx.states:
        onehot("ose", ctx.ose[q], q)
        for z in range(ctx.alphabet.num_outputs):
            names[ctx.alg0[q][z]] = f"alg0[{q},{z}]"
            names[ctx.alg1[q][z]] = f"alg1[{q},{z}]"
        for k in range(ctx.K):
            onehot("dest", ctx.dest[q][k], q, k)
            onehot("tie", ctx.tie[q][k], q, k)
    for (q, k, u), var in ctx.theta.items():
        names[var] = f"theta[{q},{k},{bits_to_string(u)}]"
    for (q, e, u), oh in ctx.first_fired.items():
        onehot("firstFired", oh, q, e, bits_to_string(u))
    for (q, e, u), oh in ctx.delta.items():
        onehot("delta", oh, q, e, bits_to_string(u))
    for (q, k), ohs in ctx.nodetype.items():
        for p, oh in enumerate(ohs):
            onehot("nodetype", oh, q, k, p)
    for (q, k), ohs in ctx.termvar.items():
        for p, oh in enumerate(ohs):
            onehot("termvar", oh, q, k, p)
    for (q, k), ohs in ctx.parent.items():
        for p, oh in enumerate(ohs):
            onehot("parent", oh, q, k, p)
    for (q, k), ohs in ctx.child.items():
        for p, oh in enumerate(ohs):
            onehot("child", oh, q, k, p)
    for (q, k, p, u), var in ctx.value.items():
        names[var] = f"value[{q},{k},{p},{bits_to_string(u)}]"
    seen = set()
    for nid, oh in ctx.pos_map.items():
        if id(oh) in seen:  # passive nodes alias their parent's mapping
            continue
        seen.add(id(oh))
        onehot("map", oh, nid)
    for nid, oh in ctx.neg_map.items():
        onehot("negmap", oh, nid)
    return names


def dump_dimacs_with_map(ctx: EncodingContext) -> str:
    num_vars, clauses = ctx.backend.snapshot()
    names = variable_map(ctx)
    comments: List[str] = [f"var {var} {names[var]}" for var in sorted(names)]
    return write_dimacs(num_vars, clauses, comments)
