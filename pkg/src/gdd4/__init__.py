"""Construct, verify, search for and decide existence of 4-GDDs of type 2^t 5^s."""

from .design import Design, dumps, loads
from .feasibility import check_feasible, enumerate_feasible
from .grouptype import GroupType, format_type, parse_type
from .planner import decide, plan
from .realize import PartialResult, construct
from .verifier import verify

__version__ = "0.1.0"

__all__ = [
    "Design", "GroupType", "PartialResult", "check_feasible", "construct", "decide", "dumps",
    "enumerate_feasible", "format_type", "loads", "parse_type", "plan", "verify",
]
