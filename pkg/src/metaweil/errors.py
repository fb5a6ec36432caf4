import os

DEFAULT_LIMIT = 1_000_000


class LimitExceeded(RuntimeError):
    """An enumeration would exceed the configured guard."""


class NotScalar(ArithmeticError):
    """An operator expected to be a multiple of the identity is not.

    Raised by scalar extraction; upstream it means a sign or ordering
    convention is inconsistent.
    """


class TransversalityError(ValueError):
    pass


def enumeration_limit(limit: int | None = None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get("METAWEIL_LIMIT")
    return int(env) if env else DEFAULT_LIMIT


def guard(count: int, limit: int | None, what: str) -> None:
    lim = enumeration_limit(limit)
    if count > lim:
        raise LimitExceeded(f"{what}: {count} items exceeds limit {lim}")
