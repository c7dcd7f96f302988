"""Shared exception types.

The distinction matters for the CLI exit protocol: a falsified claim is a
scientific finding (exit 1), a usage error is the caller's fault (exit 2),
and an invariant breach means the library itself broke (exit 3).
"""


class UsageError(ValueError):
    """Invalid parameters (coprimality, primality, unsupported family)."""


class ClaimFalsified(RuntimeError):
    """A verified statement failed on a concrete instance."""


class InvariantBreach(RuntimeError):
    """Internal consistency check failed; indicates a bug, not mathematics."""
