"""Shared error types."""


class CapExceeded(RuntimeError):
    """An input exceeds a configured search cap.

    Carries the cap name so callers (and the CLI) can report which knob to
    override.
    """

    def __init__(self, cap_name: str, limit, actual):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"cap {cap_name}={limit} exceeded (got {actual})")
