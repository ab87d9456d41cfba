"""Reoptimisation of teaching-assistant allocations.

A changed instance (blocked TAs, reduced hour caps, locks) is compared with
a previously computed solution; four strategies then repair it, from a
local refill of broken seats to a full recomputation that keeps as many
original assignments as possible.
"""

from .bench import BenchReport, run_bench
from .changes import (BlockOccurrence, BlockSession, BlockWeek, ChangeImpact, Complex,
                      LocalViolations, LockAssignment, LockBeforeWeek, SetMaxSemesterHours,
                      SetMaxWeekHours, TaOverload, Vacuous, apply_changes, classify_change,
                      format_changes, parse_changes)
from .encoder import VarMap, WeightConfig, decode, encode_original, solution_weight
from .errors import *  # noqa: F403
from .generator import GeneratorConfig, generate_instance, generate_scenario, solve_original
from .ilp import (IlpProblem, IlpSolution, LinearConstraint, Objective, ProblemBuilder,
                  Relation, Status, export_lp, solve)
from .instance_io import read_instance, read_solution, write_instance, write_solution
from .model import (Approval, ApprovalRating, CourseModule, Instance, Lock, SessionOccurrence,
                    Solution, TeachingAssistant, TeachingSession, Unavailability,
                    eligible_tas, hours_assigned, validate_solution)
from .oracle import brute_force_min_perturbation, brute_force_optimum
from .reopt import (Assign, EditScript, ReoptResult, ReoptStatus, Strategy, Unassign, diff,
                    reoptimise, reoptimise_all)

__version__ = "0.1.0"
