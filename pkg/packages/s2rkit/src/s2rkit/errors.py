from typing import Any, Mapping


class S2RError(Exception):
    """Base error. `detail` is user facing, `exit_code` is what the CLI returns."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(S2RError):
    exit_code = 2


class EmbeddabilityError(DomainError):
    def __init__(self, rho: float):
        super().__init__(
            f"Geodesic ball of radius {rho!r} is not embedded: radius must satisfy 0 <= rho < pi."
        )
        self.rho = rho


class NumericError(S2RError):
    exit_code = 1

    def __init__(self, detail: str, diagnostics: Mapping[str, Any] | None = None):
        super().__init__(detail)
        self.diagnostics = dict(diagnostics or {})


class ExportError(S2RError):
    exit_code = 3
