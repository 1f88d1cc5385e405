"""Conservation-law solver built on cell averages plus evolved boundary
point values, with approximate characteristic evolution operators, a
monotone power-law limiter and a reproduction harness for the standard
1D/2D test problems."""

from .core import (BoundaryMode, Grid1D, Grid2D, State1D, State2D,
                   init_state, init_state_2d, locate_cell)
from .models import (InadmissibleStateError, advection, burgers, burgers_2d,
                     full_euler, isentropic_euler, p_system, quartic)
from .reconstruction import (LimiterKind, LimiterMode, NO_LIMITER, Region,
                             build_parabola, classify_cell,
                             eval_reconstruction, power_law_exponent,
                             reconstruct_cell)
from .solver import (Operator, SolverConfig, SolverError, compute_dt,
                     l1_errors, run, run_2d, step, step_2d)

__all__ = [
    "BoundaryMode", "Grid1D", "Grid2D", "State1D", "State2D",
    "init_state", "init_state_2d", "locate_cell",
    "InadmissibleStateError", "advection", "burgers", "burgers_2d",
    "full_euler", "isentropic_euler", "p_system", "quartic",
    "LimiterKind", "LimiterMode", "NO_LIMITER", "Region",
    "build_parabola", "classify_cell", "eval_reconstruction",
    "power_law_exponent", "reconstruct_cell",
    "Operator", "SolverConfig", "SolverError", "compute_dt",
    "l1_errors", "run", "run_2d", "step", "step_2d",
]

__version__ = "0.1.0"
