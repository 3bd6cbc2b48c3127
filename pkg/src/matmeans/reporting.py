"""Slack accounting for inequality chains and per-case reports.

A chain passes when every consecutive link holds within a relative
tolerance. Scalar links report the normalized forward difference
``(v[i+1] - v[i]) / scale`` with ``scale = max(1, max |v|)``; operator links
report the smallest eigenvalue of the difference normalized by
``max(1, ||X_i||_2, ||X_{i+1}||_2)``. A link fails when its slack drops
below ``-rel_tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import HermitianMatrix
from .means import OperatorChain
from .scalar import ScalarChain

CSV_HEADER = "case,instances,skipped,failures,min_slack,max_gap"


@dataclass(frozen=True)
class ChainReport:
    """Aggregated verification outcome for one registered case.

    ``min_slack`` is the most negative normalized margin seen over all links
    and instances; ``max_gap`` is the largest end-to-end gap (a tightness
    measure); ``link_quantiles`` holds (q10, q50, q90) of the normalized
    slack per link position.
    """

    name: str
    instances: int
    skipped: int
    failures: int
    min_slack: float
    max_gap: float
    link_quantiles: tuple[tuple[float, float, float], ...]
    notes: str = ""

    def csv_row(self) -> str:
        return ",".join(
            [
                self.name,
                str(self.instances),
                str(self.skipped),
                str(self.failures),
                f"{self.min_slack:.17g}",
                f"{self.max_gap:.17g}",
            ]
        )

    def summary_line(self) -> str:
        status = "ok" if self.failures == 0 else "FAIL"
        line = (
            f"{self.name:<28s} {status:>4s}  instances={self.instances:<5d} "
            f"skipped={self.skipped:<4d} failures={self.failures:<4d} "
            f"min_slack={self.min_slack: .3e} max_gap={self.max_gap:.3e}"
        )
        if self.notes:
            line += f"  [{self.notes}]"
        return line


def scalar_chain_slacks(chain: ScalarChain) -> np.ndarray:
    """Normalized forward differences of a scalar chain."""
    v = np.asarray(chain.values, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(v))))
    return np.diff(v) / scale


def operator_chain_slacks(chain: OperatorChain) -> np.ndarray:
    """Normalized Loewner witnesses for consecutive links of an operator chain."""
    slacks = []
    for x, y in zip(chain.matrices, chain.matrices[1:]):
        diff = HermitianMatrix(y.a - x.a)
        witness = float(diff.eig.eigenvalues[0])
        scale = max(1.0, x.spectral_norm, y.spectral_norm)
        slacks.append(witness / scale)
    return np.asarray(slacks)


def chain_slacks(chain) -> np.ndarray:
    if isinstance(chain, ScalarChain):
        return scalar_chain_slacks(chain)
    if isinstance(chain, OperatorChain):
        return operator_chain_slacks(chain)
    raise DomainError(f"not a chain: {type(chain).__name__}")


def chain_passes(chain, rel_tol: float) -> bool:
    return bool(np.min(chain_slacks(chain)) >= -rel_tol)


def chain_gap(chain) -> float:
    """End-to-end gap: plain difference for scalar chains, the largest
    eigenvalue of (last - first) for operator chains."""
    if isinstance(chain, ScalarChain):
        return float(chain.values[-1] - chain.values[0])
    if isinstance(chain, OperatorChain):
        diff = HermitianMatrix(chain.matrices[-1].a - chain.matrices[0].a)
        return float(diff.eig.eigenvalues[-1])
    raise DomainError(f"not a chain: {type(chain).__name__}")


def _quantiles(columns: list[list[float]]) -> tuple[tuple[float, float, float], ...]:
    out = []
    for col in columns:
        arr = np.asarray(col)
        q10, q50, q90 = np.quantile(arr, [0.1, 0.5, 0.9])
        out.append((float(q10), float(q50), float(q90)))
    return tuple(out)


def aggregate_report(
    name: str,
    slack_rows: list[np.ndarray],
    gaps: list[float],
    rel_tol: float,
    skipped: int = 0,
    notes: str = "",
) -> ChainReport:
    """Fold per-instance slack vectors into a ChainReport.

    An instance fails when its smallest link slack is below ``-rel_tol``.
    Rows may have different lengths (margin-style cases); quantiles are taken
    per link position over the instances that reach it.
    """
    if not slack_rows:
        raise DomainError(f"case {name} produced no instances")
    failures = 0
    min_slack = np.inf
    width = max(len(r) for r in slack_rows)
    columns: list[list[float]] = [[] for _ in range(width)]
    for row in slack_rows:
        m = float(np.min(row))
        min_slack = min(min_slack, m)
        if m < -rel_tol:
            failures += 1
        for k, s in enumerate(row):
            columns[k].append(float(s))
    return ChainReport(
        name=name,
        instances=len(slack_rows),
        skipped=skipped,
        failures=failures,
        min_slack=float(min_slack),
        max_gap=float(max(gaps)) if gaps else 0.0,
        link_quantiles=_quantiles(columns),
        notes=notes,
    )


def reports_to_csv(reports) -> str:
    """CSV with one row per case; 17 significant digits, '.' decimal."""
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in reports)
    return "\n".join(lines) + "\n"
