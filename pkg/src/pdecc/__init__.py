"""Exact compatibility conditions for linear PDE systems over Q(x1..xn)."""
from .cc import (CCExpression, CCGeneratorSet, ResolutionReport, SyzygyRelation,
                 cc_at_order, cc_dims, connecting_sequence_dims, exact_sequence_dims,
                 generating_cc, jet_cohomology_dims, long_run_dims, new_generators,
                 resolution, sequence_dims, syzygies)
from .field import Field, MultiPoly, RationalFunction
from .jets import Jet, SourceJet, dim_jet, dim_sym, janet_class
from .parser import SystemFile, load_system, parse_system
from .report import AnalysisReport, emit_report, run_analysis
from .symbol import (delta_matrix, delta_regularize, is_2_acyclic, is_involutive,
                     janet_tabular, spencer_cohomology_dim, symbol)
from .system import (LinearEquation, PDESystem, PreconditionError, fi_test, pp_procedure,
                     project, prolong, solve, spencer_operator)

__version__ = "0.1.0"
