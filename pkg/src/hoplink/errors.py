"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or inconsistent input data (bad edges, unreadable files)."""


class StaleCountsError(ValueError):
    """Connector counts were built from a different graph than the one scored."""


class DegenerateTaskError(RuntimeError):
    """An evaluation task cannot be formed (no positives, empty sampling pool)."""
