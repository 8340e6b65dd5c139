"""Exception types shared across the package."""

from __future__ import annotations


class TemplateError(Exception):
    """Base class for errors raised by this package."""


class UnknownVertex(TemplateError, KeyError):
    def __init__(self, vertex):
        super().__init__(f"unknown vertex {vertex!r}")
        self.vertex = vertex

    def __str__(self) -> str:
        return self.args[0]


class UnknownTemplate(TemplateError, KeyError):
    def __init__(self, template_id):
        super().__init__(f"unknown template {template_id!r}")
        self.template_id = template_id

    def __str__(self) -> str:
        return self.args[0]


class InvalidTemplate(TemplateError):
    """Raised when an operation needs a valid template and gets violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"invalid template: {lines}{more}")


class SizeLimitExceeded(TemplateError):
    """The instantiation would exceed the requested size limit."""

    def __init__(self, n_vertices: int, n_edges: int, limit: int):
        self.n_vertices = n_vertices
        self.n_edges = n_edges
        self.limit = limit
        super().__init__(
            f"instantiation has {n_vertices} vertices and {n_edges} edges, limit is {limit}"
        )


class BadAddress(TemplateError, ValueError):
    pass


class UnsupportedSiblingSplit(TemplateError):
    """A template that carries sibling edges would have to be split."""


class SourceEqualsSink(TemplateError, ValueError):
    pass
