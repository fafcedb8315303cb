"""Exception hierarchy shared by every polybraid module."""

from __future__ import annotations


class PolybraidError(Exception):
    """Base class; the CLI maps these to exit status 1."""

    code = "error"


# polycore
class NonConvergence(PolybraidError):
    code = "non_convergence"


class DegreeTooSmall(PolybraidError):
    code = "degree_too_small"


class ZeroScalar(PolybraidError):
    code = "zero_scalar"


class EmptyMultiset(PolybraidError):
    code = "empty_multiset"


# family
class VertexMismatch(PolybraidError):
    code = "vertex_mismatch"

    def __init__(self, message: str, edges: tuple = ()):
        super().__init__(message)
        self.edges = tuple(edges)


class DegreeMismatch(PolybraidError):
    code = "degree_mismatch"


class BudgetExhausted(PolybraidError):
    code = "budget_exhausted"


class MarginViolation(PolybraidError):
    code = "margin_violation"


class InadequateSampling(PolybraidError):
    code = "inadequate_sampling"


# tracking
class StepTooCoarse(PolybraidError):
    code = "step_too_coarse"


class RepeatedRoot(PolybraidError):
    code = "repeated_root"


class DegenerateProjection(PolybraidError):
    code = "degenerate_projection"


# braid / freegrp
class MixedDegrees(PolybraidError):
    code = "mixed_degrees"


class UnsupportedN(PolybraidError):
    code = "unsupported_n"


class RewriteBudget(PolybraidError):
    code = "rewrite_budget"


class WordBlowup(PolybraidError):
    code = "word_blowup"


class RankMismatch(PolybraidError):
    code = "rank_mismatch"


class NotFolded(PolybraidError):
    code = "not_folded"


# progroup
class IndexOutOfRange(PolybraidError):
    code = "index_out_of_range"


class TargetMismatch(PolybraidError):
    code = "target_mismatch"


# sl2z
class NotUnimodular(PolybraidError):
    code = "not_unimodular"


class ReferenceMismatch(PolybraidError):
    """A derived matrix disagrees with its published value."""

    code = "reference_mismatch"


class IdentityFails(PolybraidError):
    code = "identity_fails"


class EntryBlowup(PolybraidError):
    code = "entry_blowup"


# examples
class BFSBudget(PolybraidError):
    code = "bfs_budget"


# cli
class ParseError(PolybraidError):
    code = "parse_error"


class SchemaError(PolybraidError):
    code = "schema_error"


class EmptyInput(PolybraidError):
    code = "empty_input"
