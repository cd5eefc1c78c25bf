"""End-to-end protection drills: provision, encode, fail paths, recover.

A scenario couples a deployable instance with a code whose k matches the
provisioned path count.  Each payload block maps one field symbol onto
each working path; failing a path erases its symbol position in every
block.  With at most t failures and an MDS code every block must come
back exactly; more than t failures is reported as expected-unrecoverable
rather than raised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codec import DataBlock, NpcCode, encode, encode_blocks, recover, recover_blocks
from .feasibility import (
    FeasibilityReport,
    InfeasibleInstanceError,
    ProtectionInstance,
    check_feasibility,
)
from .graph import DisjointPathSet

__all__ = [
    "BatchStats",
    "ExplicitFailures",
    "RandomFailures",
    "Scenario",
    "TrialReport",
    "batch",
    "path_labels",
    "run",
    "run_node_failure",
]


@dataclass(frozen=True)
class ExplicitFailures:
    paths: tuple[str, ...]


@dataclass(frozen=True)
class RandomFailures:
    count: int
    seed: int = 0


@dataclass(frozen=True)
class Scenario:
    instance: ProtectionInstance
    code: NpcCode
    payload: np.ndarray
    failure_model: ExplicitFailures | RandomFailures
    relaxed: bool = False


@dataclass(frozen=True)
class TrialReport:
    provisioned: DisjointPathSet
    failed_paths: tuple[str, ...]
    recovered: bool
    mismatches: int
    capacity_exceeded: bool = False

    @property
    def status(self) -> str:
        if self.recovered:
            return "recovered"
        return "capacity exceeded" if self.capacity_exceeded else "mismatch"


@dataclass(frozen=True)
class BatchStats:
    trials: int
    recovered: int
    recovery_rate: float | None


def path_labels(k: int) -> list[str]:
    """Working paths are labelled L1..Lk, matching codeword positions 1..k."""
    return [f"L{i + 1}" for i in range(k)]


def _payload_matrix(payload, code: NpcCode) -> np.ndarray:
    if isinstance(payload, np.ndarray):
        mat = np.asarray(payload)
    else:
        rows = []
        for block in payload:
            rows.append(block.values() if isinstance(block, DataBlock) else list(block))
        mat = np.asarray(rows, dtype=np.int64)
    if mat.ndim != 2 or mat.shape[1] != code.data_len:
        raise ValueError(f"payload must be (blocks, {code.data_len}) symbols")
    if mat.shape[0] == 0:
        raise ValueError("payload must contain at least one block")
    order = code.field.order
    if int(mat.min()) < 0 or int(mat.max()) >= order:
        raise ValueError(f"payload symbols must lie in [0, {order})")
    return mat.astype(np.uint8 if order <= 256 else np.uint32)


def _provision(sc: Scenario) -> tuple[DisjointPathSet, FeasibilityReport]:
    report = check_feasibility(sc.instance, relaxed=sc.relaxed)
    if not report.feasible:
        raise InfeasibleInstanceError(report)
    paths = report.paths
    if len(paths) != sc.code.k:
        raise ValueError(
            f"code protects k={sc.code.k} paths but instance provisions {len(paths)}"
        )
    return paths, report

def _failed_labels(sc: Scenario, labels: list[str]) -> tuple[str, ...]:
    model = sc.failure_model
    if isinstance(model, ExplicitFailures):
        unknown = set(model.paths) - set(labels)
        if unknown:
            raise ValueError(f"unknown path labels {sorted(unknown)}")
        return tuple(l for l in labels if l in set(model.paths))
    if isinstance(model, RandomFailures):
        if model.count > len(labels):
            raise ValueError("cannot fail more paths than provisioned")
        rng = random.Random(model.seed)
        picked = rng.sample(labels, model.count)
        return tuple(l for l in labels if l in set(picked))
    raise TypeError(f"unknown failure model {model!r}")


def _execute(sc: Scenario, provisioned: DisjointPathSet, failed: tuple[str, ...]) -> TrialReport:
    code = sc.code
    labels = path_labels(code.k)
    positions = [labels.index(l) for l in failed]
    data = _payload_matrix(sc.payload, code)
    if len(failed) > code.t:
        return TrialReport(provisioned, failed, False, data.shape[0], capacity_exceeded=True)
    if code.field.has_tables:
        sent = encode_blocks(code, data)
        received = sent.copy()
        received[:, positions] = 0
        out = recover_blocks(code, received, positions)
        mismatches = int(np.count_nonzero((out != data).any(axis=1)))
    else:
        mismatches = 0
        f = code.field
        for row in data:
            cw = encode(code, DataBlock.of(f, [int(x) for x in row]))
            got = recover(code, cw.with_erasures(positions))
            if got.values() != [int(x) for x in row]:
                mismatches += 1
    return TrialReport(provisioned, failed, mismatches == 0, mismatches)


def run(sc: Scenario) -> TrialReport:
    """Provision, inject path failures, recover every payload block."""
    provisioned, _ = _provision(sc)
    failed = _failed_labels(sc, path_labels(sc.code.k))
    return _execute(sc, provisioned, failed)


def run_node_failure(sc: Scenario, node: str) -> TrialReport:
    """Model a relay failure as the failure of every path crossing it."""
    inst = sc.instance
    inst.graph._require_node(node)
    if node in inst.sources or node in inst.receivers:
        raise ValueError(f"{node!r} is a terminal; node failures model relays only")
    provisioned, _ = _provision(sc)
    labels = path_labels(sc.code.k)
    failed = tuple(
        label for label, p in zip(labels, provisioned) if node in p.nodes
    )
    return _execute(sc, provisioned, failed)


def batch(scenarios: Sequence[Scenario]) -> BatchStats:
    """Run scenarios independently and aggregate the recovery rate."""
    reports = [run(sc) for sc in scenarios]
    if not reports:
        return BatchStats(0, 0, None)
    recovered = sum(1 for r in reports if r.recovered)
    return BatchStats(len(reports), recovered, recovered / len(reports))
