"""Exception types shared across the package."""


class SamplerStallError(RuntimeError):
    """Rejection sampler exceeded its proposal budget.

    Carries a ``diagnostics`` dict (proposal counts, active indices, window
    radius) so a stalled run can be reported instead of hanging.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class MgfDivergenceError(ValueError):
    """The fading moment generating function diverges at the requested argument."""
