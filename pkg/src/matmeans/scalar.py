"""Scalar means, convexity refinements, and reverse-inequality chains.

The central objects are ascending chains of real numbers: each operation
returns a ``ScalarChain`` whose consecutive values realize a proved
inequality, with a dyadic refinement term sandwiched between a classical
bound and its target. Weights ``nu`` live in the two admissible branches
``nu >= 0`` and ``nu <= -1``; the refinement depth counts dyadic levels and
is capped at 32 so the coefficients 2**j stay exactly representable.

All powers x**p * y**q are evaluated as exp(p*log x + q*log y) to avoid
overflow at large weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError

RealFunction = Callable[[float], float]

MAX_REFINE_DEPTH = 32

#: Fixed catalog of convex test functions f: R -> R used by the harness.
#: ``neg_log_shifted`` is convex on (-100, oo), which contains every point
#: the default generators can produce.
CONVEX_CATALOG: tuple[tuple[str, RealFunction], ...] = (
    ("square", lambda t: t * t),
    ("exp", math.exp),
    ("abs_cubed", lambda t: abs(t) ** 3),
    ("relu_squared", lambda t: max(t, 0.0) ** 2),
    ("neg_log_shifted", lambda t: -math.log(t + 100.0)),
)

#: Fixed catalog of positive log-convex test functions with values that stay
#: finite on |t| <= 85 (the widest range the default generators reach).
LOGCONVEX_CATALOG: tuple[tuple[str, RealFunction], ...] = (
    ("exp", math.exp),
    ("cosh", math.cosh),
    ("exp_square_64", lambda t: math.exp(t * t / 64.0)),
    ("exp_abs", lambda t: math.exp(abs(t))),
)


@dataclass(frozen=True)
class ScalarChain:
    """Labeled values whose claimed ordering is values[0] <= ... <= values[-1]."""

    labels: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.values) or len(self.values) < 2:
            raise DomainError("chain needs matching labels/values, length >= 2")
        if not all(math.isfinite(v) for v in self.values):
            raise DomainError(f"chain values must be finite: {self.values}")

    def value(self, label: str) -> float:
        return self.values[self.labels.index(label)]

    @property
    def span(self) -> float:
        """End-to-end gap, a tightness measure."""
        return self.values[-1] - self.values[0]


def _feval(f: RealFunction, t: float) -> float:
    v = float(f(t))
    if not math.isfinite(v):
        raise DomainError(f"function evaluated to a non-finite value at t={t}")
    return v


def _positive(name: str, *vals: float) -> None:
    for v in vals:
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} requires strictly positive finite arguments")


def weight_branch(nu: float) -> int:
    """Classify a weight: +1 for nu >= 0, -1 for nu <= -1.

    Weights in the open gap (-1, 0) are outside every reversed inequality
    here and raise DomainError.
    """
    if nu >= 0.0:
        return 1
    if nu <= -1.0:
        return -1
    raise DomainError(f"weight nu={nu} must satisfy nu >= 0 or nu <= -1")


def _check_depth(depth: int) -> int:
    if not (1 <= int(depth) <= MAX_REFINE_DEPTH):
        raise DomainError(f"depth must be in 1..{MAX_REFINE_DEPTH}, got {depth}")
    return int(depth)


def line_through(f: RealFunction, a: float, b: float, x: float) -> float:
    """Value at ``x`` of the line through (a, f(a)) and (b, f(b)); requires a < b.

    For convex f the graph lies below this line on [a, b] and above it
    outside (a, b).
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    fa, fb = _feval(f, a), _feval(f, b)
    return ((b - x) * fa + (x - a) * fb) / (b - a)


def _dyadic_points_toward(a: float, b: float, depth: int):
    """Midpoint ladder m_j = ((2^j - 1) a + b) / 2^j converging to ``a``; m_0 = b."""
    pts = [b]
    for j in range(1, depth + 1):
        pts.append(((2.0 ** j - 1.0) * a + b) / 2.0 ** j)
    return pts


def convex_refined_chain(
    f: RealFunction, a: float, b: float, nu: float, depth: int, anchor: str = "a"
) -> ScalarChain:
    """Refined secant bound for a convex function outside the chord interval.

    For convex f, a < b and admissible ``nu``, the secant extrapolation
    ``(1+nu) f(a) - nu f(b)`` bounds ``f((1+nu) a - nu b)`` from below. The
    refined bound adds the telescoping dyadic midpoint gaps

        sum_{j=1..depth} 2^j w [ (f(e) + f(m_{j-1}))/2 - f(m_j) ]

    with the midpoint ladder anchored at ``a`` (weight w = nu, sharper for
    nu >= 0) or at ``b`` (weight w = -(1+nu), sharper for nu <= -1). The
    returned chain is ascending in both branches: the weaker of
    {secant, refined} comes first, the extrapolated value f((1+nu)a - nu b)
    last.
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    branch = weight_branch(nu)
    depth = _check_depth(depth)
    fa, fb = _feval(f, a), _feval(f, b)
    secant = (1.0 + nu) * fa - nu * fb
    if anchor == "a":
        pts = _dyadic_points_toward(a, b, depth)
        base, weight = fa, nu
        refined_first = branch < 0
    elif anchor == "b":
        pts = _dyadic_points_toward(b, a, depth)
        base, weight = fb, -(1.0 + nu)
        refined_first = branch > 0
    else:
        raise DomainError(f"anchor must be 'a' or 'b', got {anchor!r}")
    fpts = [_feval(f, p) for p in pts]
    total = 0.0
    for j in range(1, depth + 1):
        total += 2.0 ** j * weight * ((base + fpts[j - 1]) / 2.0 - fpts[j])
    refined = secant + total
    target = _feval(f, (1.0 + nu) * a - nu * b)
    if refined_first:
        return ScalarChain(("refined", "secant", "target"), (refined, secant, target))
    return ScalarChain(("secant", "refined", "target"), (secant, refined, target))


def logconvex_refined_chain(
    f: RealFunction, a: float, b: float, nu: float, depth: int, anchor: str = "a"
) -> ScalarChain:
    """Multiplicative refinement for positive log-convex functions.

    Chain: f(a)^{1+nu} f(b)^{-nu}  <=  same * prod_j factor_j  <=
    f((1+nu) a - nu b), where each factor
    sqrt(f(e) f(m_{j-1})) / f(m_j) >= 1 by log-convexity. ``anchor='a'``
    requires nu >= 0; ``anchor='b'`` requires nu <= -1 and uses exponents
    -2^j (1+nu). Products are accumulated in the log domain.
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    depth = _check_depth(depth)
    if anchor == "a":
        if nu < 0.0:
            raise DomainError("anchor 'a' requires nu >= 0")
        pts = _dyadic_points_toward(a, b, depth)
        base_pt, weight = a, nu
    elif anchor == "b":
        if nu > -1.0:
            raise DomainError("anchor 'b' requires nu <= -1")
        pts = _dyadic_points_toward(b, a, depth)
        base_pt, weight = b, -(1.0 + nu)
    else:
        raise DomainError(f"anchor must be 'a' or 'b', got {anchor!r}")
    fa, fb = _feval(f, a), _feval(f, b)
    fbase = _feval(f, base_pt)
    fpts = [_feval(f, p) for p in pts]
    _positive("log-convex chain", fa, fb, fbase, *fpts)
    log_power = (1.0 + nu) * math.log(fa) - nu * math.log(fb)
    log_prod = 0.0
    for j in range(1, depth + 1):
        log_prod += 2.0 ** j * weight * (
            0.5 * (math.log(fbase) + math.log(fpts[j - 1])) - math.log(fpts[j])
        )
    target = _feval(f, (1.0 + nu) * a - nu * b)
    return ScalarChain(
        ("power", "refined", "target"),
        (math.exp(log_power), math.exp(log_power + log_prod), target),
    )


# ---------------------------------------------------------------------------
# Weighted scalar means.

def arith_mean(x: float, y: float, nu: float) -> float:
    """(1 - nu) x + nu y."""
    _positive("arith_mean", x, y)
    return (1.0 - nu) * x + nu * y


def geom_mean(x: float, y: float, nu: float) -> float:
    """x^{1-nu} y^{nu}, evaluated as exp((1-nu) log x + nu log y)."""
    _positive("geom_mean", x, y)
    return math.exp((1.0 - nu) * math.log(x) + nu * math.log(y))


def harm_mean(x: float, y: float, nu: float) -> float:
    """((1-nu)/x + nu/y)^{-1}; requires a positive resolvent.

    The resolvent is automatically positive for 0 <= nu <= 1, and for
    nu <= 0 whenever x < y.
    """
    _positive("harm_mean", x, y)
    d = (1.0 - nu) / x + nu / y
    if d <= 0.0:
        raise DomainError(f"harmonic resolvent not positive: {d}")
    return 1.0 / d


# ---------------------------------------------------------------------------
# Reverse Young family.

def young_reverse_chain(x: float, y: float, nu: float, depth: int) -> ScalarChain:
    """Refined reversal of the weighted arithmetic-geometric mean inequality.

    Ascending chain [(1+nu)x - nu y, refined, x^{1+nu} y^{-nu}]. For
    nu >= 0 the refinement adds 2^{j-1} nu (sqrt(x) - (x^{2^{j-1}-1} y)^{1/2^j})^2;
    for nu <= -1 it adds -2^{j-1}(1+nu) (sqrt(y) - (x y^{2^{j-1}-1})^{1/2^j})^2.
    """
    _positive("young_reverse_chain", x, y)
    branch = weight_branch(nu)
    depth = _check_depth(depth)
    lx, ly = math.log(x), math.log(y)
    base = (1.0 + nu) * x - nu * y
    total = 0.0
    for j in range(1, depth + 1):
        p = 2.0 ** j
        if branch > 0:
            root = math.exp(((2.0 ** (j - 1) - 1.0) * lx + ly) / p)
            total += 2.0 ** (j - 1) * nu * (math.sqrt(x) - root) ** 2
        else:
            root = math.exp((lx + (2.0 ** (j - 1) - 1.0) * ly) / p)
            total -= 2.0 ** (j - 1) * (1.0 + nu) * (math.sqrt(y) - root) ** 2
    target = math.exp((1.0 + nu) * lx - nu * ly)
    return ScalarChain(("arith", "refined", "geom"), (base, base + total, target))


def young_squared_chain(x: float, y: float, nu: float, depth: int) -> ScalarChain:
    """Squared version of the reverse Young refinement (two-element chain).

    nu >= 0:  ((1+nu)x - nu y)^2 + sum_j 2^j nu (x - (x^{2^j-1} y)^{1/2^j})^2
              <= (x^{1+nu} y^{-nu})^2 + nu^2 (x-y)^2
    nu <= -1: mirrored with -2^j (1+nu) (y - (x y^{2^j-1})^{1/2^j})^2 on the
              left and (1+nu)^2 (x-y)^2 on the right.
    """
    _positive("young_squared_chain", x, y)
    branch = weight_branch(nu)
    depth = _check_depth(depth)
    lx, ly = math.log(x), math.log(y)
    lhs = ((1.0 + nu) * x - nu * y) ** 2
    for j in range(1, depth + 1):
        p = 2.0 ** j
        if branch > 0:
            root = math.exp(((p - 1.0) * lx + ly) / p)
            lhs += p * nu * (x - root) ** 2
        else:
            root = math.exp((lx + (p - 1.0) * ly) / p)
            lhs -= p * (1.0 + nu) * (y - root) ** 2
    geom_sq = math.exp(2.0 * ((1.0 + nu) * lx - nu * ly))
    extra = (nu if branch > 0 else (1.0 + nu)) ** 2 * (x - y) ** 2
    return ScalarChain(("refined", "target"), (lhs, geom_sq + extra))


def young_refinement_chain(x: float, y: float, t: float, depth: int) -> ScalarChain:
    """Refinement of the forward Young inequality x^t y^{1-t} <= t x + (1-t) y.

    Two-element ascending chain [refined left side, t x + (1-t) y] for
    0 < t <= 1. The j >= 2 part of the dyadic sum is empty at depth 1.
    """
    _positive("young_refinement_chain", x, y)
    if not (0.0 < t <= 1.0):
        raise DomainError(f"need 0 < t <= 1, got t={t}")
    depth = _check_depth(depth)
    lx, ly = math.log(x), math.log(y)
    g = math.exp(t * lx + (1.0 - t) * ly)
    s = 0.0
    for j in range(2, depth + 1):
        s += 2.0 ** (j - 1) * (1.0 - math.exp(t * (ly - lx) / 2.0 ** j)) ** 2
    lhs = g * (1.0 + (1.0 - t) * s)
    lhs += (1.0 - t) * y * (1.0 - math.exp(0.5 * t * (lx - ly))) ** 2
    return ScalarChain(("refined", "arith"), (lhs, t * x + (1.0 - t) * y))


# ---------------------------------------------------------------------------
# Harmonic mean family (0 < x < y throughout).

def _check_ordered(x: float, y: float) -> None:
    _positive("harmonic family", x, y)
    if not x < y:
        raise DomainError(f"need 0 < x < y, got x={x}, y={y}")


def harmonic_reverse_chain(x: float, y: float, nu: float, depth: int) -> ScalarChain:
    """Refined reverse arithmetic-harmonic inequality for extended weights.

    Ascending chain [(1+nu)x - nu y, refined, harm_mean(x, y, -nu)] for
    0 < x < y and nu >= 0, where the refinement adds the dyadic midpoint
    gaps of v |-> harm_mean(x, y, v), which is convex on (-oo, 1]:

        sum_j 2^j nu [ (x + harm(2^{1-j}))/2 - harm(2^{-j}) ].
    """
    _check_ordered(x, y)
    if nu < 0.0:
        raise DomainError("harmonic_reverse_chain requires nu >= 0")
    depth = _check_depth(depth)
    base = (1.0 + nu) * x - nu * y
    total = 0.0
    for j in range(1, depth + 1):
        prev = harm_mean(x, y, 2.0 ** (1 - j))
        cur = harm_mean(x, y, 2.0 ** (-j))
        total += 2.0 ** j * nu * ((x + prev) / 2.0 - cur)
    target = harm_mean(x, y, -nu)
    return ScalarChain(("arith", "refined", "harm"), (base, base + total, target))


def harmonic_geometric_chain(x: float, y: float, nu: float, depth: int) -> ScalarChain:
    """Refined reverse geometric-harmonic inequality for extended weights.

    Ascending chain [x^{1+nu} y^{-nu}, same * prod_j factor_j^{2^j nu},
    harm_mean(x, y, -nu)] with factor_j = sqrt(x * harm(2^{1-j})) / harm(2^{-j}),
    each >= 1 by log-convexity of v |-> harm_mean(x, y, v) on (-oo, 1].
    """
    _check_ordered(x, y)
    if nu < 0.0:
        raise DomainError("harmonic_geometric_chain requires nu >= 0")
    depth = _check_depth(depth)
    lx, ly = math.log(x), math.log(y)
    log_geom = (1.0 + nu) * lx - nu * ly
    log_prod = 0.0
    for j in range(1, depth + 1):
        prev = harm_mean(x, y, 2.0 ** (1 - j))
        cur = harm_mean(x, y, 2.0 ** (-j))
        log_prod += 2.0 ** j * nu * (0.5 * (lx + math.log(prev)) - math.log(cur))
    target = harm_mean(x, y, -nu)
    return ScalarChain(
        ("geom", "refined", "harm"),
        (math.exp(log_geom), math.exp(log_geom + log_prod), target),
    )


def kantorovich_constant(t: float) -> float:
    """K(t) = (t+1)^2 / (4t) for t > 0; K(1) = 1 and K(t) = K(1/t)."""
    if not t > 0.0:
        raise DomainError(f"Kantorovich constant needs t > 0, got {t}")
    return (t + 1.0) ** 2 / (4.0 * t)


def kantorovich_chain(x: float, y: float, nu: float) -> ScalarChain:
    """Kantorovich-weighted reverse geometric-harmonic bound.

    Two-element ascending chain
    [x^{1+nu} y^{-nu} * K(y/x)^nu, harm_mean(x, y, -nu)] for 0 < x < y,
    nu >= 0. Equals the depth-1 harmonic_geometric_chain middle term because
    ((x + y) / (2 sqrt(x y)))^2 = K(y/x).
    """
    _check_ordered(x, y)
    if nu < 0.0:
        raise DomainError("kantorovich_chain requires nu >= 0")
    lx, ly = math.log(x), math.log(y)
    lhs = math.exp((1.0 + nu) * lx - nu * ly + nu * math.log(kantorovich_constant(y / x)))
    return ScalarChain(("geom_kantorovich", "harm"), (lhs, harm_mean(x, y, -nu)))


def catalog_functions(names: Sequence[str] | None = None, log_convex: bool = False):
    """Return (name, f) pairs from the fixed test-function catalogs."""
    table = LOGCONVEX_CATALOG if log_convex else CONVEX_CATALOG
    if names is None:
        return table
    lookup = dict(table)
    return tuple((name, lookup[name]) for name in names)
