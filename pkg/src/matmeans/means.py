"""Weighted operator means on positive definite matrices and their chains.

The three classical means extend to matrices through congruence and spectral
calculus:

    A nabla_v B = (1-v) A + v B
    A #_v B     = A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}
    A !_v B     = ((1-v) A^{-1} + v B^{-1})^{-1}

with extended weights (v outside [0, 1]) permitted whenever the expressions
stay positive definite. Every chain below is constructed through the scalar
transfer route: the underlying scalar inequality holds on the spectrum of
X = A^{-1/2} B A^{-1/2}, is applied spectrally to X, and is transported back
by congruence with A^{1/2}. Composing the public mean functions directly
gives the same matrices up to round-off; the tests cross-check both routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import (
    HermitianMatrix,
    LOEWNER_REL_TOL,
    SpdMatrix,
    loewner_leq,
)
from .scalar import MAX_REFINE_DEPTH, ScalarChain, weight_branch


@dataclass(frozen=True)
class OperatorChain:
    """Labeled Hermitian matrices claimed ascending in the Loewner order."""

    labels: tuple[str, ...]
    matrices: tuple[HermitianMatrix, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.matrices) or len(self.matrices) < 2:
            raise DomainError("chain needs matching labels/matrices, length >= 2")
        dims = {m.n for m in self.matrices}
        if len(dims) != 1:
            raise DomainError(f"chain matrices must share a dimension, got {dims}")

    @property
    def n(self) -> int:
        return self.matrices[0].n

    def matrix(self, label: str) -> HermitianMatrix:
        return self.matrices[self.labels.index(label)]


def _as_spd(m) -> SpdMatrix:
    return m if isinstance(m, SpdMatrix) else SpdMatrix(m)


def _check_depth(depth: int) -> int:
    if not (1 <= int(depth) <= MAX_REFINE_DEPTH):
        raise DomainError(f"depth must be in 1..{MAX_REFINE_DEPTH}, got {depth}")
    return int(depth)


class _Transfer:
    """Spectral transfer context for a positive definite pair (A, B).

    Holds the eigendecomposition of X = A^{-1/2} B A^{-1/2} and pushes scalar
    functions of X back through congruence: push(f) = A^{1/2} f(X) A^{1/2}.
    """

    def __init__(self, a: SpdMatrix, b: SpdMatrix):
        if a.n != b.n:
            raise DomainError(f"dimension mismatch: {a.n} vs {b.n}")
        self.a = a
        self.b = b
        self.root = a.power(0.5).a
        inv_root = a.power(-0.5).a
        self.x = SpdMatrix(inv_root @ b.a @ inv_root)
        self.w = self.x.eig.eigenvalues
        self.q = self.x.eig.eigenvectors

    def push(self, vals: np.ndarray) -> HermitianMatrix:
        inner = (self.q * np.asarray(vals, dtype=np.float64)) @ self.q.conj().T
        return HermitianMatrix(self.root @ inner @ self.root)

    def push_spd(self, vals: np.ndarray) -> SpdMatrix:
        if np.min(vals) <= 0.0:
            raise DomainError("transferred spectrum must stay positive")
        inner = (self.q * np.asarray(vals, dtype=np.float64)) @ self.q.conj().T
        return SpdMatrix(self.root @ inner @ self.root)


def arithmetic_mean(a, b, nu: float) -> HermitianMatrix:
    """(1 - nu) A + nu B; may be indefinite for extended weights."""
    a, b = _as_spd(a), _as_spd(b)
    return HermitianMatrix((1.0 - nu) * a.a + nu * b.a)


def geometric_mean(a, b, nu: float) -> SpdMatrix:
    """A #_nu B for any real nu; always positive definite on SPD input."""
    t = _Transfer(_as_spd(a), _as_spd(b))
    return t.push_spd(t.w ** nu)


def harmonic_mean(a, b, nu: float) -> SpdMatrix:
    """A !_nu B; raises DomainError when the resolvent is not positive definite."""
    a, b = _as_spd(a), _as_spd(b)
    resolvent = HermitianMatrix((1.0 - nu) * a.power(-1.0).a + nu * b.power(-1.0).a)
    w = resolvent.eig.eigenvalues
    if w[0] <= 0.0:
        raise DomainError(
            f"harmonic resolvent not positive definite (lambda_min = {w[0]:.6e})"
        )
    return SpdMatrix(resolvent.a).power(-1.0)


def _require_loewner_leq(a: SpdMatrix, b: SpdMatrix) -> None:
    verdict = loewner_leq(a, b, LOEWNER_REL_TOL)
    if not verdict.holds:
        raise DomainError(
            f"precondition A <= B fails (witness {verdict.witness_eigenvalue:.3e})"
        )


def operator_reverse_chain(a, b, nu: float, depth: int) -> OperatorChain:
    """Operator version of the reverse Young refinement.

    Ascending (Loewner) chain [A nabla_{-nu} B, refined, A #_{-nu} B]. For
    nu >= 0 the refinement adds sum_j 2^{j-1} nu (A - 2 A#_{2^-j}B + A#_{2^{1-j}}B);
    for nu <= -1 it adds -sum_j 2^{j-1}(1+nu) (B - 2 A#_{1-2^-j}B + A#_{1-2^{1-j}}B).
    """
    branch = weight_branch(nu)
    depth = _check_depth(depth)
    t = _Transfer(_as_spd(a), _as_spd(b))
    w = t.w
    base = (1.0 + nu) - nu * w
    total = np.zeros_like(w)
    for j in range(1, depth + 1):
        if branch > 0:
            total += 2.0 ** (j - 1) * nu * (1.0 - 2.0 * w ** (2.0 ** -j) + w ** (2.0 ** (1 - j)))
        else:
            total -= 2.0 ** (j - 1) * (1.0 + nu) * (
                w - 2.0 * w ** (1.0 - 2.0 ** -j) + w ** (1.0 - 2.0 ** (1 - j))
            )
    return OperatorChain(
        ("arith", "refined", "geom"),
        (t.push(base), t.push(base + total), t.push(w ** (-nu))),
    )


def operator_squared_chain(a, b, nu: float, depth: int) -> OperatorChain:
    """Operator version of the squared reverse Young refinement.

    nu >= 0 branch (ascending):

        (1+nu)(A nabla_{-nu} B)
        <= same + sum_j 2^j nu (A + A#_{2^{1-j}}B - 2 A#_{2^-j}B)
        <= A#_{-2nu}B + nu^2 (A - B) + nu B

    nu <= -1 branch (ascending): with S_j = B A^{-1} B - 2 A#_{2-2^-j}B
    + A#_{2-2^{1-j}}B,

        2(1+nu) B <= 2(1+nu) (B - sum_j 2^{j-1} S_j)
                  <= A#_{-2nu}B + (1+2nu) B A^{-1} B.
    """
    branch = weight_branch(nu)
    depth = _check_depth(depth)
    t = _Transfer(_as_spd(a), _as_spd(b))
    w = t.w
    if branch > 0:
        base = (1.0 + nu) * ((1.0 + nu) - nu * w)
        total = np.zeros_like(w)
        for j in range(1, depth + 1):
            total += 2.0 ** j * nu * (1.0 + w ** (2.0 ** (1 - j)) - 2.0 * w ** (2.0 ** -j))
        target = w ** (-2.0 * nu) + nu ** 2 * (1.0 - w) + nu * w
        labels = ("scaled_arith", "refined", "target")
    else:
        base = 2.0 * (1.0 + nu) * w
        total = np.zeros_like(w)
        for j in range(1, depth + 1):
            s_j = w ** 2 - 2.0 * w ** (2.0 - 2.0 ** -j) + w ** (2.0 - 2.0 ** (1 - j))
            total -= 2.0 * (1.0 + nu) * 2.0 ** (j - 1) * s_j
        target = w ** (-2.0 * nu) + (1.0 + 2.0 * nu) * w ** 2
        labels = ("scaled_b", "refined", "target")
    return OperatorChain(
        labels, (t.push(base), t.push(base + total), t.push(target))
    )


def harmonic_operator_chain(a, b, nu: float, depth: int) -> OperatorChain:
    """Refined reverse arithmetic-harmonic operator inequality; needs A <= B.

    Ascending chain [A nabla_{-nu} B, refined, A !_{-nu} B] for nu >= 0 with
    refinement sum_j 2^j nu (A nabla (A !_{2^{1-j}} B) - A !_{2^-j} B).
    """
    a, b = _as_spd(a), _as_spd(b)
    if nu < 0.0:
        raise DomainError("harmonic_operator_chain requires nu >= 0")
    depth = _check_depth(depth)
    _require_loewner_leq(a, b)
    t = _Transfer(a, b)
    w = t.w

    def h(v):
        d = (1.0 - v) + v / w
        if np.min(d) <= 0.0:
            raise DomainError("harmonic resolvent not positive on the spectrum")
        return 1.0 / d

    base = (1.0 + nu) - nu * w
    total = np.zeros_like(w)
    for j in range(1, depth + 1):
        total += 2.0 ** j * nu * ((1.0 + h(2.0 ** (1 - j))) / 2.0 - h(2.0 ** -j))
    return OperatorChain(
        ("arith", "refined", "harm"),
        (t.push(base), t.push(base + total), t.push(h(-nu))),
    )


def kantorovich_hypothesis(a, b, rel_tol: float = 1e-10) -> tuple[bool, float]:
    """Check positivity of the Hermitian part of B^{-1}A + A^{-1}B.

    The product itself is not Hermitian in general, so positivity is read on
    its Hermitian part; returns (holds, smallest eigenvalue of that part).
    """
    a, b = _as_spd(a), _as_spd(b)
    m = b.power(-1.0).a @ a.a + a.power(-1.0).a @ b.a
    part = HermitianMatrix((m + m.conj().T) / 2.0)
    witness = float(part.eig.eigenvalues[0])
    return witness >= -rel_tol * max(1.0, part.spectral_norm), witness


def kantorovich_operator_chain(a, b, nu: float) -> OperatorChain:
    """Kantorovich-weighted reverse geometric-harmonic operator bound; A <= B.

    Two-element ascending chain [L, A !_{-nu} B] where L is the Hermitian
    congruence form of (A #_{-nu} B) ((B^{-1}A + 2I + A^{-1}B)/4)^{nu}:
    with X = A^{-1/2} B A^{-1/2},

        L = A^{1/2} ((I + X^{-1})/2)^{2 nu} A^{1/2}.

    ``kantorovich_operator_product`` returns the literal (non-Hermitian)
    product, which equals L up to similarity bookkeeping.
    """
    a, b = _as_spd(a), _as_spd(b)
    if nu < 0.0:
        raise DomainError("kantorovich_operator_chain requires nu >= 0")
    _require_loewner_leq(a, b)
    t = _Transfer(a, b)
    w = t.w
    lo = ((1.0 + 1.0 / w) / 2.0) ** (2.0 * nu)
    d = (1.0 + nu) - nu / w
    if np.min(d) <= 0.0:
        raise DomainError("harmonic resolvent not positive on the spectrum")
    return OperatorChain(
        ("geom_kantorovich", "harm"), (t.push(lo), t.push(1.0 / d))
    )


def kantorovich_operator_product(a, b, nu: float):
    """The literal product (A #_{-nu} B) ((B^{-1}A + 2I + A^{-1}B)/4)^{nu}.

    The middle factor is similar to the positive definite matrix
    (X + X^{-1} + 2I)/4 via A^{1/2}, so its real power is defined by that
    similarity. Returns the resulting (generally non-Hermitian) array.
    """
    a, b = _as_spd(a), _as_spd(b)
    t = _Transfer(a, b)
    inner_vals = (t.w + 1.0 / t.w + 2.0) / 4.0
    inner_pow = (t.q * inner_vals ** nu) @ t.q.conj().T
    inv_root = a.power(-0.5).a
    middle_pow = inv_root @ inner_pow @ t.root
    return geometric_mean(a, b, -nu).a @ middle_pow


# ---------------------------------------------------------------------------
# Trace chains.

def _tr(m: np.ndarray) -> float:
    return float(np.trace(m).real)


def trace_additive_chain(a, b, nu: float, depth: int) -> ScalarChain:
    """Additive trace refinement chain for nu >= 0.

    [tr((1+nu)A - nu B),
     same + sum_j 2^{j-1} nu tr(A + A^{1-2^{1-j}} B^{2^{1-j}} - 2 A^{1-2^-j} B^{2^-j}),
     tr(A^{1+nu} B^{-nu})].
    """
    a, b = _as_spd(a), _as_spd(b)
    if nu < 0.0:
        raise DomainError("trace_additive_chain requires nu >= 0")
    depth = _check_depth(depth)
    base = (1.0 + nu) * _tr(a.a) - nu * _tr(b.a)
    total = 0.0
    for j in range(1, depth + 1):
        s = 2.0 ** (1 - j)
        half = 2.0 ** -j
        total += 2.0 ** (j - 1) * nu * (
            _tr(a.a)
            + _tr(a.power(1.0 - s).a @ b.power(s).a)
            - 2.0 * _tr(a.power(1.0 - half).a @ b.power(half).a)
        )
    target = _tr(a.power(1.0 + nu).a @ b.power(-nu).a)
    return ScalarChain(("arith", "refined", "target"), (base, base + total, target))


def trace_multiplicative_chain(a, b, nu: float, depth: int) -> ScalarChain:
    """Multiplicative trace refinement chain for nu >= 0.

    Built from log-convexity of v |-> tr(A^{1-v} B^v); the product factors
    sqrt(tr(A) tr(A^{1-2^{1-j}} B^{2^{1-j}})) / tr(A^{1-2^-j} B^{2^-j}) are
    all >= 1 and are accumulated in the log domain.
    """
    a, b = _as_spd(a), _as_spd(b)
    if nu < 0.0:
        raise DomainError("trace_multiplicative_chain requires nu >= 0")
    depth = _check_depth(depth)

    def f(v: float) -> float:
        return _tr(a.power(1.0 - v).a @ b.power(v).a)

    log_ta, log_tb = np.log(_tr(a.a)), np.log(_tr(b.a))
    log_power = (1.0 + nu) * log_ta - nu * log_tb
    log_prod = 0.0
    for j in range(1, depth + 1):
        log_prod += 2.0 ** j * nu * (
            0.5 * (log_ta + np.log(f(2.0 ** (1 - j)))) - np.log(f(2.0 ** -j))
        )
    return ScalarChain(
        ("power", "refined", "target"),
        (float(np.exp(log_power)), float(np.exp(log_power + log_prod)), f(-nu)),
    )


def trace_depth1_chain(a, b, nu: float) -> ScalarChain:
    """Depth-1 trace specializations, merged into one ascending chain.

    [tr((1+nu)A - nu B) + nu (sqrt(tr A) - sqrt(tr B))^2,
     tr((1+nu)A - nu B) + nu tr(A + B - 2 sqrt(A) sqrt(B)),
     tr(A^{1+nu} B^{-nu}),
     tr|A^{1+nu} B^{-nu}|]

    The first step holds because tr(sqrt(A) sqrt(B)) <= sqrt(tr A tr B), the
    second is the depth-1 additive chain, and the last is the triangle
    inequality for the trace against the Schatten-1 norm of the product.
    """
    a, b = _as_spd(a), _as_spd(b)
    if nu < 0.0:
        raise DomainError("trace_depth1_chain requires nu >= 0")
    base = (1.0 + nu) * _tr(a.a) - nu * _tr(b.a)
    v0 = base + nu * (np.sqrt(_tr(a.a)) - np.sqrt(_tr(b.a))) ** 2
    cross = _tr(a.power(0.5).a @ b.power(0.5).a)
    v1 = base + nu * (_tr(a.a) + _tr(b.a) - 2.0 * cross)
    prod = a.power(1.0 + nu).a @ b.power(-nu).a
    v2 = float(np.trace(prod).real)
    gram = HermitianMatrix(prod.conj().T @ prod)
    sigma = np.sqrt(np.maximum(gram.eig.eigenvalues, 0.0))
    v3 = float(np.sum(sigma))
    return ScalarChain(
        ("trace_split", "sqrt_cross", "trace_power", "abs_trace_power"),
        (float(v0), float(v1), v2, v3),
    )
