from typing import TYPE_CHECKING, Optional, Protocol, Sequence, runtime_checkable

if TYPE_CHECKING:
    from .symmetry import GroupElement


@runtime_checkable
class IsometryGroup(Protocol):
    """
    A discrete isometry group of S²×ℝ presented as finitely many coset
    representatives times the fiber lattice k*fiber_period.

    fiber_period is None when the group has no fiber translations.
    """

    @property
    def fiber_period(self) -> Optional[float]: ...

    def elements(self) -> Sequence["GroupElement"]: ...
