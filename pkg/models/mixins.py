"""
Model mixins - Reusable model components

Provides the grid-compatibility check shared by every grid-sampled value.
"""

from config.exceptions import GridMismatchError


class GridBoundMixin:
    """
    Mixin for values sampled on a ``PeriodicGrid``

    Expects the host class to carry a ``grid`` attribute.
    """

    def same_grid(self, other) -> bool:
        return self.grid == other.grid

    def require_same_grid(self, other) -> None:
        if not self.same_grid(other):
            raise GridMismatchError(
                f"grid (L={self.grid.half_length:g}, N={self.grid.size}) does not match "
                f"(L={other.grid.half_length:g}, N={other.grid.size})"
            )
