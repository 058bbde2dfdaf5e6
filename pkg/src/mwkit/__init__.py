"""Exact computations in Milnor-Witt K-theory of fields and of curves over them."""

from __future__ import annotations

from .fields import GF, QQ, RR, FunField, Place, Valuation, parse_field, parse_element
from .forms import BilinearForm, GWClass, WittClass, decide_iso, fundamental_ideal_level, parse_form
from .milnor import MilnorElem, km_symbol, km_tame_symbol, parse_milnor
from .mwk import MWElem, MWExpr, TwistedElem, evaluate, forgetful, hyperbolic, mw_symbol, parse_expr
from .residues import residue, residue_value, specialize, transfer_cohomological, transfer_geometric_splitseq
from .gersten import RSComplex, contraction_decompose, degree_lemma, divisor_class, pushforward_point
from .correspondences import AlgebraMap, Correspondence, EtaleAlg, compose, graph, identity, pushforward_corr

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "RR",
    "FunField",
    "Place",
    "Valuation",
    "parse_field",
    "parse_element",
    "BilinearForm",
    "GWClass",
    "WittClass",
    "decide_iso",
    "fundamental_ideal_level",
    "parse_form",
    "MilnorElem",
    "km_symbol",
    "km_tame_symbol",
    "parse_milnor",
    "MWElem",
    "MWExpr",
    "TwistedElem",
    "evaluate",
    "forgetful",
    "hyperbolic",
    "mw_symbol",
    "parse_expr",
    "residue",
    "residue_value",
    "specialize",
    "transfer_cohomological",
    "transfer_geometric_splitseq",
    "RSComplex",
    "contraction_decompose",
    "degree_lemma",
    "divisor_class",
    "pushforward_point",
    "AlgebraMap",
    "Correspondence",
    "EtaleAlg",
    "compose",
    "graph",
    "identity",
    "pushforward_corr",
]
