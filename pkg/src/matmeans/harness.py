"""Randomized verification harness for every inequality chain in the package.

Each registered case pairs a seeded instance generator with an evaluator
producing either an inequality chain (checked link by link) or a vector of
normalized margins (checked against ``-rel_tol``). Instances draw their
randomness from a stream keyed by ``hash(seed, case name, instance index)``,
so runs are deterministic, order-insensitive, and individual instances can
be replayed. Precondition failures (for cases with hypotheses) resample
rather than fail, with the skip count bounded and reported.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import means, norms, scalar
from .errors import DomainError
from .linalg import HermitianMatrix, SpdMatrix, matrix_to_json, random_spd
from .reporting import (
    ChainReport,
    aggregate_report,
    chain_gap,
    chain_slacks,
    reports_to_csv,
)

__all__ = [
    "CaseConfig",
    "Built",
    "Resample",
    "case_names",
    "case_description",
    "build_instance",
    "run_case",
    "run_suite",
    "sweep",
    "reports_to_csv",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20240811
MAX_FAILURE_FILES_PER_CASE = 25
_RESAMPLE_FACTOR = 100


@dataclass(frozen=True)
class CaseConfig:
    """Knobs shared by every case; cases override defaults, callers override cases.

    ``nu_range`` is the magnitude range of the weight: the nonnegative branch
    draws nu in [lo, hi], the other branch draws nu in [-1-hi, -1-lo].
    """

    instances: int = 200
    seed: int = DEFAULT_SEED
    dim_min: int = 2
    dim_max: int = 8
    cond_max: float = 100.0
    nu_range: tuple[float, float] = (0.0, 8.0)
    depth_min: int = 1
    depth_max: int = 8
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.instances < 1:
            raise DomainError("instances must be >= 1")
        if self.rel_tol < 0.0:
            raise DomainError("rel_tol must be >= 0")
        if not (1 <= self.dim_min <= self.dim_max):
            raise DomainError(f"bad dimension range {self.dim_min}..{self.dim_max}")
        if self.cond_max < 1.0:
            raise DomainError("cond_max must be >= 1")
        if not (0.0 <= self.nu_range[0] <= self.nu_range[1]):
            raise DomainError(f"bad weight magnitude range {self.nu_range}")
        if not (1 <= self.depth_min <= self.depth_max <= 32):
            raise DomainError(f"bad depth range {self.depth_min}..{self.depth_max}")


class Resample(Exception):
    """Raised by a builder when a hypothesis fails for the drawn instance."""


@dataclass
class Built:
    """One evaluated instance: a chain or a margins vector, plus replay data.

    Margin-style cases report normalized margins directly (pass at
    ``>= -rel_tol``); their "gap" is the largest margin, standing in for the
    end-to-end chain gap as the tightness measure.
    """

    chain: object | None = None
    margins: np.ndarray | None = None
    refined: object | None = None  # float or HermitianMatrix
    base: object | None = None
    payload: dict = field(default_factory=dict)

    def slack_row(self) -> np.ndarray:
        if self.margins is not None:
            return np.atleast_1d(np.asarray(self.margins, dtype=np.float64))
        return chain_slacks(self.chain)

    def gap(self) -> float:
        if self.margins is not None:
            return float(np.max(self.margins))
        return chain_gap(self.chain)


@dataclass(frozen=True)
class CaseDef:
    name: str
    build: Callable[[np.random.Generator, CaseConfig, dict], Built]
    overrides: dict
    sweep_params: tuple[str, ...]
    description: str


REGISTRY: dict[str, CaseDef] = {}


def _register(name, *, overrides=None, sweep=(), description=""):
    def deco(fn):
        REGISTRY[name] = CaseDef(name, fn, dict(overrides or {}), tuple(sweep), description)
        return fn

    return deco


def case_names() -> tuple[str, ...]:
    return tuple(REGISTRY)


def case_description(name: str) -> str:
    return _case(name).description


def _case(name: str) -> CaseDef:
    try:
        return REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown case {name!r}; known: {', '.join(REGISTRY)}") from None


def _config_for(case: CaseDef, cfg: CaseConfig | None, overrides: dict) -> CaseConfig:
    base = replace(CaseConfig(), **case.overrides) if cfg is None else cfg
    return replace(base, **overrides) if overrides else base


def instance_rng(seed: int, case_name: str, index: int) -> np.random.Generator:
    """Independent, platform-stable stream for one instance of one case."""
    digest = hashlib.blake2b(
        f"{seed}:{case_name}:{index}".encode(), digest_size=8
    ).digest()
    return np.random.default_rng(int.from_bytes(digest, "little"))


# ---------------------------------------------------------------------------
# Draw helpers. Builders draw every parameter unconditionally and only then
# apply ``forced`` overrides, so the stream position is identical for a given
# (seed, case, index) no matter which parameter a sweep pins.

def _draw_nu(rng, cfg, forced, branch) -> float:
    lo, hi = cfg.nu_range
    mag = float(rng.uniform(lo, hi))
    if branch == 0:
        branch = 1 if rng.integers(2) == 0 else -1
    nu = mag if branch > 0 else -1.0 - mag
    return float(forced.get("nu", nu))


def _draw_depth(rng, cfg, forced) -> int:
    d = int(rng.integers(cfg.depth_min, cfg.depth_max + 1))
    return int(forced.get("depth", d))


def _draw_dim(rng, cfg, cap=None) -> int:
    hi = cfg.dim_max if cap is None else min(cfg.dim_max, cap)
    return int(rng.integers(cfg.dim_min, hi + 1))


def _loguniform(rng, lo, hi) -> float:
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def _ordered_scalars(rng, lo=1e-3, hi=1e3) -> tuple[float, float]:
    x = _loguniform(rng, lo, hi)
    y = _loguniform(rng, lo, hi)
    while y == x:  # pragma: no cover - measure zero
        y = _loguniform(rng, lo, hi)
    return min(x, y), max(x, y)


def _spd_pair(rng, cfg, forced, cap=None) -> tuple[SpdMatrix, SpdMatrix, float, int]:
    n = _draw_dim(rng, cfg, cap)
    cond = float(forced.get("cond", cfg.cond_max))
    return random_spd(n, cond, rng), random_spd(n, cond, rng), cond, n


def _ordered_spd_pair(rng, cfg, forced, cap=None):
    """A pair with A <= B by construction (B = A + SPD)."""
    a, s, cond, n = _spd_pair(rng, cfg, forced, cap)
    return a, SpdMatrix(a.a + s.a), cond, n


def _gaussian(rng, n) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _pick_kind(rng) -> norms.NormKind:
    return norms.DEFAULT_NORM_KINDS[int(rng.integers(len(norms.DEFAULT_NORM_KINDS)))]


def _pair_payload(a, b, **extra) -> dict:
    payload = {"a": matrix_to_json(a), "b": matrix_to_json(b)}
    payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# Scalar cases.

def _convex_builder(anchor):
    def build(rng, cfg, forced):
        fname, f = scalar.CONVEX_CATALOG[int(rng.integers(len(scalar.CONVEX_CATALOG)))]
        a = float(rng.uniform(-5.0, 5.0))
        b = float(rng.uniform(-5.0, 5.0))
        while abs(b - a) < 1e-3:
            b = float(rng.uniform(-5.0, 5.0))
        a, b = min(a, b), max(a, b)
        nu = _draw_nu(rng, cfg, forced, branch=0)
        depth = _draw_depth(rng, cfg, forced)
        chain = scalar.convex_refined_chain(f, a, b, nu, depth, anchor=anchor)
        return Built(
            chain=chain,
            refined=chain.value("refined"),
            base=chain.value("secant"),
            payload={"f": fname, "a": a, "b": b, "nu": nu, "depth": depth},
        )

    return build


_register(
    "convex_refined_a",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="refined secant bound, midpoint ladder anchored at a",
)(_convex_builder("a"))

_register(
    "convex_refined_b",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="refined secant bound, midpoint ladder anchored at b",
)(_convex_builder("b"))


def _logconvex_builder(anchor):
    branch = 1 if anchor == "a" else -1

    def build(rng, cfg, forced):
        fname, f = scalar.LOGCONVEX_CATALOG[
            int(rng.integers(len(scalar.LOGCONVEX_CATALOG)))
        ]
        a = float(rng.uniform(-5.0, 5.0))
        b = float(rng.uniform(-5.0, 5.0))
        while abs(b - a) < 1e-3:
            b = float(rng.uniform(-5.0, 5.0))
        a, b = min(a, b), max(a, b)
        nu = _draw_nu(rng, cfg, forced, branch=branch)
        depth = _draw_depth(rng, cfg, forced)
        chain = scalar.logconvex_refined_chain(f, a, b, nu, depth, anchor=anchor)
        return Built(
            chain=chain,
            refined=chain.value("refined"),
            base=chain.value("power"),
            payload={"f": fname, "a": a, "b": b, "nu": nu, "depth": depth},
        )

    return build


_register(
    "logconvex_refined_a",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="multiplicative log-convex refinement, nonnegative weights",
)(_logconvex_builder("a"))

_register(
    "logconvex_refined_b",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="multiplicative log-convex refinement, weights <= -1",
)(_logconvex_builder("b"))


def _young_builder(branch):
    def build(rng, cfg, forced):
        x = _loguniform(rng, 1e-3, 1e3)
        y = _loguniform(rng, 1e-3, 1e3)
        nu = _draw_nu(rng, cfg, forced, branch=branch)
        depth = _draw_depth(rng, cfg, forced)
        chain = scalar.young_reverse_chain(x, y, nu, depth)
        return Built(
            chain=chain,
            refined=chain.value("refined"),
            base=chain.value("arith"),
            payload={"x": x, "y": y, "nu": nu, "depth": depth},
        )

    return build


_register(
    "young_reverse_pos",
    overrides={"instances": 1000, "rel_tol": 1e-10},
    sweep=("nu", "depth"),
    description="reverse Young refinement, nu >= 0",
)(_young_builder(1))

_register(
    "young_reverse_neg",
    overrides={"instances": 1000, "rel_tol": 1e-10},
    sweep=("nu", "depth"),
    description="reverse Young refinement, nu <= -1",
)(_young_builder(-1))


@_register(
    "young_squared",
    overrides={"instances": 1000, "rel_tol": 1e-10},
    sweep=("nu", "depth"),
    description="squared reverse Young refinement, both weight branches",
)
def _build_young_squared(rng, cfg, forced):
    x = _loguniform(rng, 1e-3, 1e3)
    y = _loguniform(rng, 1e-3, 1e3)
    nu = _draw_nu(rng, cfg, forced, branch=0)
    depth = _draw_depth(rng, cfg, forced)
    chain = scalar.young_squared_chain(x, y, nu, depth)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=((1.0 + nu) * x - nu * y) ** 2,
        payload={"x": x, "y": y, "nu": nu, "depth": depth},
    )


@_register(
    "young_refined_t",
    overrides={"instances": 1000, "rel_tol": 1e-10},
    sweep=("depth",),
    description="forward Young refinement in the interpolation parameter t",
)
def _build_young_refined_t(rng, cfg, forced):
    x = _loguniform(rng, 1e-3, 1e3)
    y = _loguniform(rng, 1e-3, 1e3)
    t = 1.0 - float(rng.uniform(0.0, 1.0))  # in (0, 1]
    depth = _draw_depth(rng, cfg, forced)
    chain = scalar.young_refinement_chain(x, y, t, depth)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=scalar.geom_mean(x, y, 1.0 - t),
        payload={"x": x, "y": y, "t": t, "depth": depth},
    )


@_register(
    "young_collapse_depth1",
    overrides={"instances": 1000, "rel_tol": 0.0},
    description="depth-1 reverse Young equals its closed two-term form (1e-12)",
)
def _build_young_collapse(rng, cfg, forced):
    x = _loguniform(rng, 1e-3, 1e3)
    y = _loguniform(rng, 1e-3, 1e3)
    nu = _draw_nu(rng, cfg, forced, branch=0)
    chain = scalar.young_reverse_chain(x, y, nu, 1)
    base = (1.0 + nu) * x - nu * y
    if nu >= 0.0:
        closed = base + nu * (math.sqrt(x) - math.sqrt(y)) ** 2
    else:
        closed = base - (1.0 + nu) * (math.sqrt(y) - math.sqrt(x)) ** 2
    tol = 1e-12 * max(1.0, abs(closed), abs(chain.values[-1]))
    margin = (tol - abs(chain.value("refined") - closed)) / tol
    return Built(margins=np.array([margin]), payload={"x": x, "y": y, "nu": nu})


@_register(
    "harmonic_reverse",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="refined reverse arithmetic-harmonic inequality, 0 < x < y",
)
def _build_harmonic_reverse(rng, cfg, forced):
    x, y = _ordered_scalars(rng)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = scalar.harmonic_reverse_chain(x, y, nu, depth)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=chain.value("arith"),
        payload={"x": x, "y": y, "nu": nu, "depth": depth},
    )


@_register(
    "harmonic_geometric",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    sweep=("nu", "depth"),
    description="refined reverse geometric-harmonic inequality, 0 < x < y",
)
def _build_harmonic_geometric(rng, cfg, forced):
    x, y = _ordered_scalars(rng)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = scalar.harmonic_geometric_chain(x, y, nu, depth)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=chain.value("geom"),
        payload={"x": x, "y": y, "nu": nu, "depth": depth},
    )


@_register(
    "kantorovich_scalar",
    overrides={"instances": 1000, "rel_tol": 1e-9},
    description="Kantorovich-weighted reverse geometric-harmonic bound",
)
def _build_kantorovich_scalar(rng, cfg, forced):
    x, y = _ordered_scalars(rng)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    chain = scalar.kantorovich_chain(x, y, nu)
    return Built(chain=chain, payload={"x": x, "y": y, "nu": nu})


@_register(
    "harmonic_curvature",
    overrides={"instances": 500, "rel_tol": 0.0},
    description="second derivative of v -> x !_v y matches 2xy(x-y)^2/(v(x-y)+y)^3",
)
def _build_harmonic_curvature(rng, cfg, forced):
    x = _loguniform(rng, 0.5, 2.0)
    y = x * float(rng.uniform(1.5, 4.0))
    nu = float(rng.uniform(-2.9, 0.9))
    h = 1e-3
    f = lambda v: scalar.harm_mean(x, y, v)
    fd = (f(nu + h) - 2.0 * f(nu) + f(nu - h)) / h ** 2
    exact = 2.0 * x * (x - y) ** 2 * y / (nu * (x - y) + y) ** 3
    rel_err = abs(fd - exact) / abs(exact)
    return Built(
        margins=np.array([(1e-4 - rel_err) / 1e-4]),
        payload={"x": x, "y": y, "nu": nu},
    )


# ---------------------------------------------------------------------------
# Operator cases.

def _operator_reverse_builder(branch):
    def build(rng, cfg, forced):
        a, b, cond, n = _spd_pair(rng, cfg, forced)
        nu = _draw_nu(rng, cfg, forced, branch=branch)
        depth = _draw_depth(rng, cfg, forced)
        chain = means.operator_reverse_chain(a, b, nu, depth)
        return Built(
            chain=chain,
            refined=chain.matrix("refined"),
            base=chain.matrix("arith"),
            payload=_pair_payload(a, b, nu=nu, depth=depth, cond=cond, n=n),
        )

    return build


_register(
    "operator_reverse_pos",
    sweep=("nu", "depth", "cond"),
    description="operator reverse Young refinement, nu >= 0",
)(_operator_reverse_builder(1))

_register(
    "operator_reverse_neg",
    sweep=("nu", "depth", "cond"),
    description="operator reverse Young refinement, nu <= -1",
)(_operator_reverse_builder(-1))


def _operator_squared_builder(branch, base_label):
    def build(rng, cfg, forced):
        a, b, cond, n = _spd_pair(rng, cfg, forced)
        nu = _draw_nu(rng, cfg, forced, branch=branch)
        depth = _draw_depth(rng, cfg, forced)
        chain = means.operator_squared_chain(a, b, nu, depth)
        return Built(
            chain=chain,
            refined=chain.matrix("refined"),
            base=chain.matrix(base_label),
            payload=_pair_payload(a, b, nu=nu, depth=depth, cond=cond, n=n),
        )

    return build


_register(
    "operator_squared_pos",
    sweep=("nu", "depth", "cond"),
    description="squared operator reverse Young refinement, nu >= 0",
)(_operator_squared_builder(1, "scaled_arith"))

_register(
    "operator_squared_neg",
    sweep=("nu", "depth", "cond"),
    description="squared operator refinement, nu <= -1 (B A^{-1} B form)",
)(_operator_squared_builder(-1, "scaled_b"))


@_register(
    "harmonic_operator",
    sweep=("nu", "depth", "cond"),
    description="refined reverse arithmetic-harmonic operator inequality, A <= B",
)
def _build_harmonic_operator(rng, cfg, forced):
    a, b, cond, n = _ordered_spd_pair(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = means.harmonic_operator_chain(a, b, nu, depth)
    return Built(
        chain=chain,
        refined=chain.matrix("refined"),
        base=chain.matrix("arith"),
        payload=_pair_payload(a, b, nu=nu, depth=depth, cond=cond, n=n),
    )


@_register(
    "kantorovich_operator",
    sweep=("nu",),
    description=(
        "Kantorovich operator bound, A <= B; hypothesis read on the Hermitian "
        "part of B^{-1}A + A^{-1}B, failures skipped"
    ),
)
def _build_kantorovich_operator(rng, cfg, forced):
    a, b, cond, n = _ordered_spd_pair(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    holds, witness = means.kantorovich_hypothesis(a, b)
    if not holds:
        raise Resample(f"hypothesis witness {witness:.3e}")
    chain = means.kantorovich_operator_chain(a, b, nu)
    return Built(chain=chain, payload=_pair_payload(a, b, nu=nu, cond=cond, n=n))


def _trace_builder(chain_fn, base_label):
    def build(rng, cfg, forced):
        a, b, cond, n = _spd_pair(rng, cfg, forced)
        nu = _draw_nu(rng, cfg, forced, branch=1)
        depth = _draw_depth(rng, cfg, forced)
        chain = chain_fn(a, b, nu, depth)
        return Built(
            chain=chain,
            refined=chain.value("refined"),
            base=chain.value(base_label),
            payload=_pair_payload(a, b, nu=nu, depth=depth, cond=cond, n=n),
        )

    return build


_register(
    "trace_additive",
    overrides={"rel_tol": 1e-9},
    sweep=("nu", "depth", "cond"),
    description="additive trace refinement chain",
)(_trace_builder(means.trace_additive_chain, "arith"))

_register(
    "trace_multiplicative",
    overrides={"rel_tol": 1e-9},
    sweep=("nu", "depth", "cond"),
    description="multiplicative trace refinement chain",
)(_trace_builder(means.trace_multiplicative_chain, "power"))


@_register(
    "trace_depth1",
    overrides={"rel_tol": 1e-9},
    sweep=("nu",),
    description="depth-1 trace specializations and the Schatten-1 comparison",
)
def _build_trace_depth1(rng, cfg, forced):
    a, b, cond, n = _spd_pair(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    chain = means.trace_depth1_chain(a, b, nu)
    return Built(chain=chain, payload=_pair_payload(a, b, nu=nu, cond=cond, n=n))


# ---------------------------------------------------------------------------
# Norm cases (dimension capped at 6, all five norm kinds in rotation).

def _norm_case_inputs(rng, cfg, forced):
    a, b, cond, n = _spd_pair(rng, cfg, forced, cap=6)
    x = _gaussian(rng, n)
    kind = _pick_kind(rng)
    return a, b, x, kind, cond, n


def _norm_reverse_builder(branch):
    def build(rng, cfg, forced):
        a, b, x, kind, cond, n = _norm_case_inputs(rng, cfg, forced)
        nu = _draw_nu(rng, cfg, forced, branch=branch)
        depth = _draw_depth(rng, cfg, forced)
        chain = norms.norm_reverse_chain(a, b, x, nu, depth, kind)
        return Built(
            chain=chain,
            refined=chain.value("refined"),
            base=chain.value("power"),
            payload=_pair_payload(
                a, b, x=matrix_to_json(x), nu=nu, depth=depth, kind=str(kind), n=n
            ),
        )

    return build


_register(
    "norm_reverse_pos",
    overrides={"instances": 500},
    sweep=("nu", "depth", "cond"),
    description="norm-functional reverse refinement, nu >= 0",
)(_norm_reverse_builder(1))

_register(
    "norm_reverse_neg",
    overrides={"instances": 500},
    sweep=("nu", "depth", "cond"),
    description="norm-functional reverse refinement, nu <= -1",
)(_norm_reverse_builder(-1))


@_register(
    "norm_heinz_power",
    overrides={"instances": 500},
    sweep=("nu", "depth", "cond"),
    description="two-sided power refinement ||A^{1+nu} X B^{1+nu}||",
)
def _build_norm_heinz_power(rng, cfg, forced):
    a, b, x, kind, cond, n = _norm_case_inputs(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = norms.norm_heinz_chain(a, b, x, nu, depth, kind)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=chain.value("power"),
        payload=_pair_payload(
            a, b, x=matrix_to_json(x), nu=nu, depth=depth, kind=str(kind), n=n
        ),
    )


@_register(
    "norm_combined",
    overrides={"instances": 500},
    sweep=("nu", "depth", "cond"),
    description="five-term chain joining scalar and norm-functional refinements",
)
def _build_norm_combined(rng, cfg, forced):
    a, b, x, kind, cond, n = _norm_case_inputs(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = norms.combined_norm_chain(a, b, x, nu, depth, kind)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=chain.value("power"),
        payload=_pair_payload(
            a, b, x=matrix_to_json(x), nu=nu, depth=depth, kind=str(kind), n=n
        ),
    )


@_register(
    "norm_collapse_depth1",
    overrides={"instances": 500},
    description="depth-1 corollaries ||AX||^{1+2nu} and ||AXB||^{1+2nu}",
)
def _build_norm_collapse(rng, cfg, forced):
    a, b, x, kind, cond, n = _norm_case_inputs(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    half = norms.norm_functional(a, b, x, 0.5, kind)
    lhs1 = math.exp((1.0 + 2.0 * nu) * math.log(norms.ui_norm(a.a @ x, kind)))
    rhs1 = math.exp(
        math.log(norms.norm_functional(a, b, x, -nu, kind)) + 2.0 * nu * math.log(half)
    )
    g0 = norms.ui_norm(a.a @ x @ b.a, kind)
    g_end = norms.ui_norm(a.power(1.0 + nu).a @ x @ b.power(1.0 + nu).a, kind)
    lhs2 = math.exp((1.0 + 2.0 * nu) * math.log(g0))
    rhs2 = math.exp(math.log(g_end) + 2.0 * nu * math.log(half))
    m1 = (rhs1 - lhs1) / max(1.0, lhs1, rhs1)
    m2 = (rhs2 - lhs2) / max(1.0, lhs2, rhs2)
    return Built(
        margins=np.array([m1, m2]),
        payload=_pair_payload(a, b, x=matrix_to_json(x), nu=nu, kind=str(kind)),
    )


@_register(
    "norm_logconvexity",
    overrides={"instances": 500, "rel_tol": 1e-9},
    description="log-convexity of v -> ||A^{1-v} X B^v|| on random combinations",
)
def _build_norm_logconvexity(rng, cfg, forced):
    a, b, x, kind, cond, n = _norm_case_inputs(rng, cfg, forced)
    v1, v2 = rng.uniform(-2.0, 3.0, size=2)
    alpha = float(rng.uniform(0.0, 1.0))
    fa = norms.norm_functional(a, b, x, float(v1), kind)
    fb = norms.norm_functional(a, b, x, float(v2), kind)
    fm = norms.norm_functional(a, b, x, float(alpha * v1 + (1 - alpha) * v2), kind)
    bound = math.exp(alpha * math.log(fa) + (1 - alpha) * math.log(fb))
    margin = (bound - fm) / max(1.0, bound, fm)
    return Built(
        margins=np.array([margin]),
        payload=_pair_payload(
            a, b, x=matrix_to_json(x), v1=float(v1), v2=float(v2), alpha=alpha
        ),
    )


# ---------------------------------------------------------------------------
# Heinz cases.

def _heinz_inputs(rng, cfg, forced):
    a, b, cond, n = _spd_pair(rng, cfg, forced, cap=6)
    x = _gaussian(rng, n)
    kind = _pick_kind(rng)
    return a, b, x, kind, n


@_register(
    "heinz_symmetry",
    overrides={"instances": 500, "rel_tol": 0.0},
    description="Heinz functional symmetry f(nu) = f(1-nu) to 1e-10",
)
def _build_heinz_symmetry(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    nu = float(rng.uniform(-3.0, 4.0))
    d = abs(
        norms.heinz_norm(a, b, x, nu, kind) - norms.heinz_norm(a, b, x, 1.0 - nu, kind)
    )
    return Built(margins=np.array([(1e-10 - d) / 1e-10]), payload={"nu": nu, "n": n})


@_register(
    "heinz_midpoint_convexity",
    overrides={"instances": 500},
    description="midpoint convexity of the Heinz functional on [-3, 4]",
)
def _build_heinz_midpoint(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    v1, v2 = rng.uniform(-3.0, 4.0, size=2)
    mid = norms.heinz_norm(a, b, x, float((v1 + v2) / 2.0), kind)
    avg = (
        norms.heinz_norm(a, b, x, float(v1), kind)
        + norms.heinz_norm(a, b, x, float(v2), kind)
    ) / 2.0
    margin = (avg - mid) / max(1.0, avg, mid)
    return Built(
        margins=np.array([margin]),
        payload=_pair_payload(a, b, x=matrix_to_json(x), v1=float(v1), v2=float(v2)),
    )


@_register(
    "heinz_monotonicity",
    overrides={"instances": 50},
    description="Heinz functional nonincreasing on [-3, 1/2], nondecreasing on [1/2, 4]",
)
def _build_heinz_monotonicity(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    grid = np.linspace(-3.0, 4.0, 81)
    vals = np.array([norms.heinz_norm(a, b, x, float(v), kind) for v in grid])
    scale = max(1.0, float(vals.max()))
    split = int(np.argmin(np.abs(grid - 0.5)))
    down = (vals[:split] - vals[1 : split + 1]) / scale
    up = (vals[split + 1 :] - vals[split:-1]) / scale
    return Built(
        margins=np.concatenate([down, up]),
        payload=_pair_payload(a, b, x=matrix_to_json(x), kind=str(kind)),
    )


@_register(
    "heinz_reverse",
    overrides={"nu_range": (0.0, 4.0)},
    sweep=("nu", "depth", "cond"),
    description="reversed Heinz inequality with dyadic refinement",
)
def _build_heinz_reverse(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    nu = _draw_nu(rng, cfg, forced, branch=1)
    depth = _draw_depth(rng, cfg, forced)
    chain = norms.heinz_reverse_chain(a, b, x, nu, depth, kind)
    return Built(
        chain=chain,
        refined=chain.value("refined"),
        base=chain.value("sum_norm"),
        payload=_pair_payload(
            a, b, x=matrix_to_json(x), nu=nu, depth=depth, kind=str(kind)
        ),
    )


@_register(
    "heinz_reverse_outside",
    overrides={"instances": 200},
    description="||AX + XB|| <= f(nu) for weights outside [0, 1]",
)
def _build_heinz_outside(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    if rng.integers(2) == 0:
        nu = -float(rng.uniform(0.01, 3.0))
    else:
        nu = 1.0 + float(rng.uniform(0.01, 3.0))
    f0 = norms.heinz_norm(a, b, x, 0.0, kind)
    fv = norms.heinz_norm(a, b, x, nu, kind)
    return Built(
        margins=np.array([(fv - f0) / max(1.0, f0, fv)]),
        payload=_pair_payload(a, b, x=matrix_to_json(x), nu=nu, kind=str(kind)),
    )


@_register(
    "heinz_pq",
    overrides={"instances": 200},
    description="power-difference comparison for 0 < q < p",
)
def _build_heinz_pq(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    p = float(rng.uniform(0.2, 3.0))
    q = p * float(rng.uniform(0.05, 0.95))
    chain = norms.heinz_pq_chain(a, b, x, p, q, kind)
    return Built(
        chain=chain,
        payload=_pair_payload(a, b, x=matrix_to_json(x), p=p, q=q, kind=str(kind)),
    )


@_register(
    "heinz_interpolated",
    overrides={"instances": 200},
    description="interpolated power-difference comparison for 0 < r < q < p",
)
def _build_heinz_interpolated(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    p = float(rng.uniform(0.2, 3.0))
    q = p * float(rng.uniform(0.05, 0.95))
    r = q * float(rng.uniform(0.02, 0.98))
    chain = norms.heinz_interpolated_chain(a, b, x, p, q, r, kind)
    return Built(
        chain=chain,
        payload=_pair_payload(a, b, x=matrix_to_json(x), p=p, q=q, r=r, kind=str(kind)),
    )


@_register(
    "heinz_interpolated_grid",
    overrides={"instances": 200},
    description="interpolated Heinz value nonincreasing in r on [0, q]",
)
def _build_heinz_interp_grid(rng, cfg, forced):
    a, b, x, kind, n = _heinz_inputs(rng, cfg, forced)
    p = float(rng.uniform(0.2, 3.0))
    q = p * float(rng.uniform(0.05, 0.95))
    rs = np.linspace(0.0, q, 9)
    vals = norms.heinz_interpolation_values(a, b, x, p, q, rs, kind)
    scale = max(1.0, float(np.max(vals)))
    margins = (vals[:-1] - vals[1:]) / scale
    return Built(
        margins=margins,
        payload=_pair_payload(a, b, x=matrix_to_json(x), p=p, q=q, kind=str(kind)),
    )


# ---------------------------------------------------------------------------
# Execution.

def build_instance(
    name: str, index: int, cfg: CaseConfig | None = None, forced: dict | None = None, **overrides
) -> Built:
    """Build one instance of a case (may raise Resample for hypothesis cases)."""
    case = _case(name)
    cfg = _config_for(case, cfg, overrides)
    rng = instance_rng(cfg.seed, name, index)
    return case.build(rng, cfg, dict(forced or {}))


def _write_failure(directory: Path, name: str, index: int, built: Built, row, cfg) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    data = {
        "case": name,
        "instance": index,
        "seed": cfg.seed,
        "rel_tol": cfg.rel_tol,
        "slacks": [float(s) for s in row],
        "params": built.payload,
    }
    (directory / f"{name}-{index:05d}.json").write_text(json.dumps(data, indent=1))


def run_case(
    name: str,
    cfg: CaseConfig | None = None,
    failures_dir: str | Path | None = None,
    **overrides,
) -> ChainReport:
    """Run one registered case and aggregate its slack statistics.

    Deterministic for a fixed config: every instance derives its own RNG
    stream from (seed, case, index). Instances whose hypotheses fail are
    resampled (counted as skipped), with at most 100x the requested
    instance count before erroring. Failing instances are serialized to
    ``failures_dir`` when given, capped per case.
    """
    case = _case(name)
    cfg = _config_for(case, cfg, overrides)
    rows: list[np.ndarray] = []
    gaps: list[float] = []
    skipped = 0
    written = 0
    index = 0
    while len(rows) < cfg.instances:
        if skipped > _RESAMPLE_FACTOR * cfg.instances:
            raise RuntimeError(
                f"case {name}: resampling exceeded {_RESAMPLE_FACTOR}x instance budget"
            )
        rng = instance_rng(cfg.seed, name, index)
        this_index = index
        index += 1
        try:
            built = case.build(rng, cfg, {})
        except Resample:
            skipped += 1
            continue
        row = built.slack_row()
        rows.append(row)
        gaps.append(built.gap())
        if float(np.min(row)) < -cfg.rel_tol and failures_dir is not None:
            if written < MAX_FAILURE_FILES_PER_CASE:
                _write_failure(Path(failures_dir), name, this_index, built, row, cfg)
                written += 1
    return aggregate_report(
        name, rows, gaps, cfg.rel_tol, skipped=skipped, notes=case.description
    )


def run_suite(
    names=None,
    cfg: CaseConfig | None = None,
    failures_dir: str | Path | None = None,
    progress: Callable[[ChainReport], None] | None = None,
    **overrides,
) -> list[ChainReport]:
    """Run every registered case (or the given subset) in registration order."""
    selected = case_names() if names is None else tuple(names)
    for name in selected:
        _case(name)  # validate before any work
    reports = []
    for name in selected:
        report = run_case(name, cfg=cfg, failures_dir=failures_dir, **overrides)
        if progress is not None:
            progress(report)
        reports.append(report)
    return reports


@dataclass(frozen=True)
class SweepRow:
    value: float
    mean_gap: float
    mean_gain: float


def _gain(built: Built) -> float:
    if built.refined is None or built.base is None:
        return 0.0
    if isinstance(built.refined, HermitianMatrix):
        return float(np.trace(built.refined.a - built.base.a).real)
    return float(built.refined - built.base)


def sweep(
    name: str,
    param: str,
    grid,
    cfg: CaseConfig | None = None,
    **overrides,
) -> list[SweepRow]:
    """Re-evaluate a case while pinning one parameter to each grid value.

    Instances keep their identity across the grid (same per-index draws with
    only ``param`` overridden), so columns are directly comparable. Returns
    one row per grid value with the mean end-to-end gap and mean refinement
    gain (refined bound minus unrefined bound; trace difference for operator
    chains).
    """
    case = _case(name)
    if param not in case.sweep_params:
        raise DomainError(
            f"case {name!r} does not sweep {param!r}; supported: {case.sweep_params}"
        )
    cfg = _config_for(case, cfg, overrides)
    out = []
    for value in grid:
        forced = {param: int(value) if param == "depth" else float(value)}
        gaps = []
        gains = []
        index = 0
        produced = 0
        skipped = 0
        while produced < cfg.instances:
            if skipped > _RESAMPLE_FACTOR * cfg.instances:
                raise RuntimeError(f"case {name}: sweep resampling budget exceeded")
            rng = instance_rng(cfg.seed, name, index)
            index += 1
            try:
                built = case.build(rng, cfg, dict(forced))
            except Resample:
                skipped += 1
                continue
            gaps.append(built.gap())
            gains.append(_gain(built))
            produced += 1
        out.append(
            SweepRow(float(value), float(np.mean(gaps)), float(np.mean(gains)))
        )
    return out
