"""CNF reduction of the synthesis problem and model decoding."""

from __future__ import annotations

from typing import Optional

from ..automaton import Alphabet
from ..sat.backend import SatBackend
from ..scenarios import NegativeTree, PositiveTree
from .cardinality import CardinalityBound, build_totalizer
from .constraints import (
    encode_automaton_structure,
    encode_guard_trees,
    encode_negative_mapping,
    encode_positive_mapping,
    encode_state_bfs,
    encode_tree_bfs,
)
from .context import (
    NODE_AND,
    NODE_NONE,
    NODE_NOT,
    NODE_OR,
    NODE_TERMINAL,
    NONE_VALUE,
    EncodingContext,
    EncodingParams,
)
from .decode import decode_automaton
from .dump import dump_dimacs_with_map


def build_context(backend: SatBackend, alphabet: Alphabet, params: EncodingParams,
                  tree: PositiveTree) -> EncodingContext:
    """Encode the full positive-side reduction onto a fresh backend."""
    ctx = EncodingContext(backend, alphabet, params)
    encode_automaton_structure(ctx)
    if params.with_guards:
        encode_guard_trees(ctx)
        if params.tree_bfs:
            encode_tree_bfs(ctx)
    if params.state_bfs:
        encode_state_bfs(ctx)
    encode_positive_mapping(ctx, tree)
    return ctx


def guard_size_bound(ctx: EncodingContext) -> CardinalityBound:
    """Totalizer over typed-node indicators; bounds the total guard size."""
    bits = build_totalizer(ctx.backend, ctx.typed_node_indicators())
    return CardinalityBound(ctx.backend, bits)


def transition_count_bound(ctx: EncodingContext) -> CardinalityBound:
    """Totalizer over used-transition indicators; bounds the transition count."""
    bits = build_totalizer(ctx.backend, ctx.transition_indicators())
    return CardinalityBound(ctx.backend, bits)


__all__ = [
    "CardinalityBound",
    "EncodingContext",
    "EncodingParams",
    "NONE_VALUE",
    "NODE_AND",
    "NODE_NONE",
    "NODE_NOT",
    "NODE_OR",
    "NODE_TERMINAL",
    "build_context",
    "build_totalizer",
    "decode_automaton",
    "dump_dimacs_with_map",
    "encode_automaton_structure",
    "encode_guard_trees",
    "encode_negative_mapping",
    "encode_positive_mapping",
    "encode_state_bfs",
    "encode_tree_bfs",
    "guard_size_bound",
    "transition_count_bound",
]
