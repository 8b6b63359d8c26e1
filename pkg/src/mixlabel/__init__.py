"""Mixed internal/external labeling of points with parallel leaders."""

from .geometry import Direction, Point, direction_from_theta
from .model import Infeasible, Instance, Labeling, SolveResult
from .oracle import brute_force
from .solver_general import solve_general
from .solver_left import solve_left
from .sweep import sweep_solve
from .validity import is_valid

__all__ = [
    "Direction",
    "Infeasible",
    "Instance",
    "Labeling",
    "Point",
    "SolveResult",
    "brute_force",
    "direction_from_theta",
    "is_valid",
    "solve_general",
    "solve_left",
    "sweep_solve",
]
