"""Mixed parallel/sequential schemes: balanced partitions of N runs over m copies."""

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .arc import MAX_COMBINATIONS, phase_sum_width, theta
from .errors import InvalidPartitionRequest, TooLarge
from .linalg import as_matrix, eigenphases, ensure_unitary

VALID_TOL = 1e-9
MATERIALIZE_MAX_COPIES = 3
MATERIALIZE_MAX_DIM = 3


@dataclass(frozen=True)
class PartitionPlan:
    total_runs: int
    copies: int
    parts: tuple
    length: int

    def __post_init__(self):
        if sum(self.parts) != self.total_runs or len(self.parts) != self.copies:
            raise InvalidPartitionRequest(f"parts {self.parts} do not split {self.total_runs} over {self.copies} copies")
        if any(k < 1 for k in self.parts) or self.length != max(self.parts):
            raise InvalidPartitionRequest(f"invalid parts {self.parts}")


@dataclass(frozen=True)
class ResourceReport:
    steps: int
    circuits: int
    entangled_width: int


def _check_request(n, m):
    if not (isinstance(n, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise InvalidPartitionRequest("N and m must be integers")
    if m < 1 or m > n:
        raise InvalidPartitionRequest(f"need 1 <= m <= N, got N={n}, m={m}")


def plan_mixed(n, m):
    """The most uniform m-partition of N, parts in non-increasing order."""
    _check_request(n, m)
    n_min = -(-n // m)
    r = n - (n_min - 1) * m
    parts = (n_min,) * r + (n_min - 1,) * (m - r)
    return PartitionPlan(total_runs=int(n), copies=int(m), parts=parts, length=n_min)


def plan_from_parts(parts):
    parts = tuple(sorted((int(k) for k in parts), reverse=True))
    if not parts:
        raise InvalidPartitionRequest("empty partition")
    return PartitionPlan(total_runs=sum(parts), copies=len(parts), parts=parts, length=max(parts))


def plan_theta(u, plan, max_combinations=MAX_COMBINATIONS):
    """Arc width of ``U^{k_1} x ... x U^{k_m}``, from sums of scaled eigenphases."""
    phases = eigenphases(ensure_unitary(u))
    return phase_sum_width([k * phases for k in plan.parts], max_combinations)


def validate_plan(u, plan, max_combinations=MAX_COMBINATIONS):
    """True when the plan's product operator has arc width at least pi, i.e. separates U from I."""
    return plan_theta(u, plan, max_combinations) >= np.pi - VALID_TOL


def materialized_plan_theta(u, plan):
    """Same quantity as :func:`plan_theta` but from the explicit tensor-product matrix.

    Guarded to ``m <= 3`` copies and ``d <= 3``.
    """
    m = as_matrix(ensure_unitary(u))
    if plan.copies > MATERIALIZE_MAX_COPIES or m.shape[0] > MATERIALIZE_MAX_DIM:
        raise TooLarge("materialized mixed schemes are limited to m <= 3 and d <= 3")
    blocks = [np.linalg.matrix_power(m, k) for k in plan.parts]
    return theta(reduce(np.kron, blocks))


def resource_report(n, m):
    _check_request(n, m)
    return ResourceReport(steps=math.ceil(n / m), circuits=int(m), entangled_width=int(m) if m > 1 else 0)
