"""Exception and warning types shared across the package."""


class WarpbandError(Exception):
    """Base class for all library errors."""


# -- growth estimation --------------------------------------------------------

class AllZeroError(WarpbandError):
    """Every coefficient of the sequence is zero."""


class WindowEmptyError(WarpbandError):
    """The tail window contains no usable coefficient."""


class NonpositiveOrderError(WarpbandError):
    """Type estimation requires a strictly positive order."""


class NonFiniteError(WarpbandError):
    """An evaluator returned inf or nan on a probe arc."""


# -- bandlimited signals -------------------------------------------------------

class ExponentOverflowError(WarpbandError):
    """|Im z| * bandwidth exceeds the exponent cap for safe synthesis."""


class GridMismatchError(WarpbandError):
    """Two sample sets do not share the same grid."""


class WindowTooShortError(WarpbandError):
    """Signal has not decayed at the window ends; transform refused."""


class WindowDecayWarning(UserWarning):
    """Signal endpoint magnitude above the soft decay threshold."""


class HypothesisWarning(UserWarning):
    """A required measure-bound certificate failed; proceeding anyway."""


# -- warps ---------------------------------------------------------------------

class ConstantWarpError(WarpbandError):
    """Warp map is constant (degree 0)."""


class EmptySupportError(WarpbandError):
    """Multiplier support interval has r > s."""


class NotPolynomialError(WarpbandError):
    """Operation requires a real-coefficient polynomial warp."""


class DegenerateLeadingError(WarpbandError):
    """Cubic criterion requires a nonzero leading coefficient."""


# -- range space ----------------------------------------------------------------

class FactorizationError(WarpbandError):
    """Gram matrix plus ridge is numerically indefinite."""


class NodeMismatchError(WarpbandError):
    """Coefficient nodes do not match the Gram nodes."""


class HypothesisFailedError(WarpbandError):
    """Warp fails the mutual-absolute-continuity certificate."""


class IndistinguishableInputsError(WarpbandError):
    """The two input signals coincide in L2 within tolerance."""


# -- de Branges-Rovnyak ----------------------------------------------------------

class AdmissibilityError(WarpbandError):
    """Structure function fails the upper-half-plane dominance gate."""


class StructureZeroError(WarpbandError):
    """Structure function vanishes on the probe grid."""


class DivergingIntegralError(WarpbandError):
    """Nested-window partial integrals keep growing; integral diverges."""


class HypothesisViolatedError(WarpbandError):
    """Affine parameters violate 0 < |a| <= 1 with a real."""


class NonMonotoneWarpError(WarpbandError):
    """Interval pull-backs require a monotone warp."""


class MeasureGateError(WarpbandError):
    """1/|g|^2 is not integrable on the probe window."""


# -- files / CLI -----------------------------------------------------------------

class FormatError(WarpbandError):
    """File does not match the declared interchange format."""


class UsageError(WarpbandError):
    """Command-line usage error."""
