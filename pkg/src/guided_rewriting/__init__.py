"""Guided string rewriting, slice sequences, and closure automata."""

from .automata import Dfa, Nfa, accepts, determinize, enumerate_upto, equivalent
from .closure import (CompressionScheme, GuidedSystem, IdSystem, build_closure_nfa, build_id_closure_nfa,
                      oracle_closure_upto, oracle_id_closure_upto)
from .errors import GuidedRewritingError, ParseError, StateCapExceeded, TheoremInapplicable, ValidationError
from .rewrite import GuidePos, IdStep, RewriteSequence, apply_rewrite_sequence, closure_of_string, id_closure
from .slices import Slice, SliceSequence, rewrites_to_slices, slices_to_rewrites
from .symbols import AdjustmentRelation, Alphabet, GuideSet, lift_equiv, make_adjustment

__version__ = "0.1.0"
