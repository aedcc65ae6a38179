"""Series-rational pomset languages: expressions, pomset automata, and the
translations between them."""

from .automaton import (CapExceeded, ForkOrder, NotClosed, NotForkAcyclic,
                        PomsetAutomaton, bounded_subpa, fork_order, is_closed,
                        membership, reach, restrict, support)
from .derivatives import (CompiledPA, SyntacticStateSpace, candidate_forks,
                          delta_deriv, expr_to_pa, gamma_deriv)
from .expr import (Expr, congruent, enumerate_language, is_empty,
                   language_width, normalize, nullable, parallel_depth, parse)
from .extraction import PathExprTable, pa_to_expr, path_expr
from .pomset import (LabeledPoset, factorize, par_compose, parse_pomset,
                     seq_compose, size, sp_decompose, width)

__all__ = [
    "bounded_subpa",
    "candidate_forks",
    "CapExceeded",
    "CompiledPA",
    "congruent",
    "delta_deriv",
    "enumerate_language",
    "Expr",
    "expr_to_pa",
    "factorize",
    "fork_order",
    "ForkOrder",
    "gamma_deriv",
    "is_closed",
    "is_empty",
    "LabeledPoset",
    "language_width",
    "membership",
    "normalize",
    "NotClosed",
    "NotForkAcyclic",
    "nullable",
    "par_compose",
    "pa_to_expr",
    "parallel_depth",
    "parse",
    "path_expr",
    "PathExprTable",
    "parse_pomset",
    "PomsetAutomaton",
    "reach",
    "restrict",
    "seq_compose",
    "size",
    "sp_decompose",
    "support",
    "SyntacticStateSpace",
    "width",
]

__version__ = "0.1.0"
