"""Error and warning types shared across the package.

Every domain failure raises a subclass of SolitonLabError so the CLI can map
validation problems to a single exit code.  Indices attached to the soliton
errors refer to positions in the caller's parameter list (0-based).
"""

from __future__ import annotations


class SolitonLabError(Exception):
    """Base class for all domain errors raised by this package."""


class ZeroDenominator(SolitonLabError):
    """A rational map hit a vanishing denominator."""

    def __init__(self, site: int | None = None):
        self.site = site
        where = "" if site is None else f" at site n={site}"
        super().__init__(f"map denominator vanished{where}")


class WindowTooSmall(SolitonLabError):
    """The lattice window has no room for the requested operation."""


class NonPositiveParameter(SolitonLabError):
    """A parameter that must be strictly positive is not."""


class InvalidInterval(SolitonLabError):
    """alpha + beta <= 1: the admissible wavenumber interval is empty."""


class ParamOutOfRange(SolitonLabError):
    """A system parameter lies outside its open interval."""


class POutOfRange(SolitonLabError):
    """A wavenumber lies outside (0, alpha + beta - 1)."""

    def __init__(self, index: int, detail: str = ""):
        self.index = index
        super().__init__(f"soliton {index}: p outside the admissible interval"
                         + (f" ({detail})" if detail else ""))


class GammaSignCondition(SolitonLabError):
    """gamma_i does not have the sign that makes the mode a soliton."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"soliton {index}: gamma must satisfy "
                         "gamma * (p - midpoint) > 0")


class DegenerateP(SolitonLabError):
    """A wavenumber sits exactly on a degenerate point."""

    def __init__(self, index: int, detail: str = "p equals the interval midpoint"):
        self.index = index
        super().__init__(f"soliton {index}: {detail}")


class DenominatorClash(SolitonLabError):
    """Two modes make a matrix denominator vanish."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"solitons {i} and {j}: denominator vanishes for this pair")


class DuplicateP(SolitonLabError):
    """Two modes share a wavenumber."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"solitons {i} and {j}: duplicated wavenumber")


class ZeroTau(SolitonLabError):
    """A tau function vanished at a lattice point, so x or y is undefined there."""

    def __init__(self, t: int, n: int):
        self.point = (t, n)
        super().__init__(f"tau function vanished at (t={t}, n={n})")


class ConstraintViolated(SolitonLabError):
    """A parameter set does not satisfy the constraint required by the check."""


class CapacityViolation(SolitonLabError):
    """A box occupancy lies outside [0, c_box]."""


class NonPositiveEpsilon(SolitonLabError):
    """An ultradiscretization parameter must be strictly positive."""


class EmptyField(SolitonLabError):
    """An operation received an empty field or row."""


class TooFewSamples(SolitonLabError):
    """A track does not carry enough usable samples for the requested fit."""


class InconsistentCapacities(SolitonLabError):
    """States in one history disagree on box or carrier capacity."""


class WrongTrackCount(SolitonLabError):
    """The overtake report needs exactly two tracks."""

    def __init__(self, got: int):
        self.got = got
        super().__init__(f"overtake report needs exactly 2 tracks, got {got}")


class SolitonEscapedWindow(UserWarning):
    """The right window edge is no longer at the background value.

    Raised as a warning, not an error: the evolution stays exact inside the
    window, but content has reached the edge and is being truncated.
    """
