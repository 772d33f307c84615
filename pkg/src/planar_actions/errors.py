"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PlanarActionsError(Exception):
    """Base class for every error raised by this package."""


class NotAGroup(PlanarActionsError):
    """A multiplication table fails one of the group axioms."""


class InvalidPermutation(PlanarActionsError):
    pass


class ClosureTooLarge(PlanarActionsError):
    pass


class UnsupportedSpec(PlanarActionsError):
    pass


class CatalogError(PlanarActionsError):
    pass


class ParseError(CatalogError):
    def __init__(self, message: str, position: str | None = None) -> None:
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


class OrderMismatch(CatalogError):
    def __init__(self, declared: int, actual: int, where: str = "") -> None:
        self.declared = declared
        self.actual = actual
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}declared order {declared}, generators give {actual}")


class GenusTooSmall(PlanarActionsError):
    pass


class IndexOutOfRange(PlanarActionsError):
    pass


class IllegalGamma(PlanarActionsError):
    """A braid swap was requested across two different periods."""


class OrbitEscape(PlanarActionsError):
    """A move mapped a generating vector outside the epimorphism set."""


class SchemaError(PlanarActionsError):
    pass
