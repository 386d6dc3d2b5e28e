"""Complex classical flow, boundary-value shooting and caustic location."""
from .shooting import (
    BvpKind,
    BvpProblem,
    CausticLocation,
    SearchBox,
    closed_form_roots,
    continue_family,
    find_all_roots,
    has_closed_form_roots,
    locate_caustic,
    number_state_uu_roots,
    solve_bvp,
)
from .trajectory import TangentMatrix, TrajectoryRecord, integrate

__all__ = [
    "BvpKind",
    "BvpProblem",
    "CausticLocation",
    "SearchBox",
    "TangentMatrix",
    "TrajectoryRecord",
    "closed_form_roots",
    "continue_family",
    "find_all_roots",
    "has_closed_form_roots",
    "integrate",
    "locate_caustic",
    "number_state_uu_roots",
    "solve_bvp",
]
