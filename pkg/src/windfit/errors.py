"""Exception types raised across the package."""

from __future__ import annotations


class WindfitError(Exception):
    """Base class for all package errors."""


class DomainError(WindfitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateDataError(WindfitError, ValueError):
    """The data cannot support the requested summary (too few points, zero spread)."""


class FitDegenerateError(DegenerateDataError):
    """The sample is too small or has no spread to start a likelihood fit."""


class EmptyDatasetError(WindfitError, ValueError):
    """No usable rows or observations remain."""
