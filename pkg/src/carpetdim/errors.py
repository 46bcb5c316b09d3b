"""Exception hierarchy.

Validation problems derive from :class:`CarpetError` (a ``ValueError``) and
map to CLI exit status 2; enumeration limits raise :class:`BudgetExceeded`
and map to exit status 3.
"""


class CarpetError(ValueError):
    """Invalid carpet input or an operation outside its domain."""


class EmptyDigitSet(CarpetError):
    pass


class DigitOutOfRange(CarpetError):
    pass


class BaseOrderViolation(CarpetError):
    pass


class DuplicateCell(CarpetError):
    pass


class ParameterOutOfRange(CarpetError):
    pass


class WidthNotLessThanHeight(CarpetError):
    pass


class OverlapViolation(CarpetError):
    pass


class MassViolation(CarpetError):
    pass


class SelfSimilarNotEmbeddable(CarpetError):
    pass


class SelfSimilarUnsupported(CarpetError):
    pass


class NoRoot(CarpetError):
    pass


class OuterMissesCarpet(CarpetError):
    pass


class AmbientMismatch(CarpetError):
    pass


class RegionEmpty(CarpetError):
    pass


class SpecFormatError(CarpetError):
    """Malformed carpet spec file; the message names the file and field."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured work budget."""


class OverflowGuard(BudgetExceeded):
    pass
