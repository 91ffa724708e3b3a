"""Exception types shared across the package."""


class FuzzySenseError(Exception):
    """Base class for all package errors."""


class DomainError(FuzzySenseError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConfigError(FuzzySenseError, ValueError):
    """An experiment configuration violates one or more invariants.

    Carries every violation found, not just the first, so a bad config
    can be fixed in one pass.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {v}" for v in self.violations))
