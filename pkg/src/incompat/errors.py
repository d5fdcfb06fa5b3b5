"""Exception types raised across the package."""

from __future__ import annotations


class IncompatError(Exception):
    """Base class for all package-specific errors."""


class NonHermitian(IncompatError):
    """Matrix violates the Hermiticity tolerance."""


class NoConvergence(IncompatError):
    """Eigenvalue iteration failed to converge."""


class DimMismatch(IncompatError):
    """Operands have incompatible dimensions."""


class PartitionMismatch(IncompatError):
    """Outcome partition does not match the measurement it is applied to."""


class PlanMismatch(IncompatError):
    """Input-mixing or coarse-graining plan is inconsistent with the assemblage."""


class WeightError(IncompatError):
    """Mixing weights are negative or do not sum to one."""


class BadVisibility(IncompatError):
    """Visibility parameter outside [0, 1]."""


class BadRange(IncompatError):
    """Integer argument outside its documented range."""


class TooLarge(IncompatError):
    """Requested enumeration exceeds the configured size cap."""


class SolverFailure(IncompatError):
    """SDP solver did not meet the accuracy contract."""


class InvalidAssemblage(IncompatError):
    """Assemblage violates POVM invariants."""


class NotProjective(IncompatError):
    """Measurement is not projective although the operation requires it."""


class NotRankOneProjective(IncompatError):
    """Measurement is not rank-one projective although the operation requires it."""


class WrongShape(IncompatError):
    """Assemblage has the wrong measurement count, outcome count, or dimension."""


class BadArgs(IncompatError):
    """Arguments outside the operation's documented domain."""


class NotBracketed(IncompatError):
    """Bisection endpoints do not bracket a predicate flip."""


class NonMonotone(IncompatError):
    """Bisection guard detected a non-monotone predicate flip."""


class BadPartition(IncompatError):
    """Partition is not binary where a two-block clubbing is required."""


class ParseError(IncompatError):
    """POVM description file is malformed; message carries the position."""


class ValidationError(IncompatError):
    """Parsed POVM file violates a POVM invariant; message names it."""
