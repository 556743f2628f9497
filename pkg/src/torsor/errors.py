"""Exception hierarchy. Every domain error carries a machine-readable ``code``."""
from __future__ import annotations


class TorsorError(Exception):
    code = "domain-error"


class UnsupportedBackend(TorsorError):
    code = "unsupported-backend"


class RingMismatch(TorsorError):
    code = "ring-mismatch"


class NotARing(TorsorError):
    code = "not-a-ring"


class TooLarge(TorsorError):
    code = "too-large"


class NotAHomomorphism(TorsorError):
    code = "not-a-homomorphism"


class StabilizationCapExceeded(TorsorError):
    code = "stabilization-cap-exceeded"


class BackendMismatch(TorsorError):
    code = "backend-mismatch"


class NotAMorphism(TorsorError):
    code = "not-a-morphism"


class WindowRequired(TorsorError):
    code = "window-required"


class TruncationWindowInsufficient(TorsorError):
    code = "truncation-window-insufficient"


class InconsistentSupport(TorsorError):
    code = "inconsistent-support"


class NotASemilattice(TorsorError):
    code = "not-a-semilattice"


class InvalidInput(TorsorError):
    code = "invalid-input"
