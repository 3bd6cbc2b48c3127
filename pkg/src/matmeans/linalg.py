"""Complex Hermitian and positive definite matrix types with spectral calculus.

Everything downstream (operator means, unitarily invariant norms, the
verification harness) is built on the small toolkit in this module:

* value types ``ComplexMatrix`` -> ``HermitianMatrix`` -> ``SpdMatrix`` that
  validate their defining property at construction,
* a cyclic Jacobi eigensolver for complex Hermitian matrices,
* spectral functions ``apply_spectral`` / ``spd_pow``,
* the semidefinite (Loewner) order check ``loewner_leq``,
* seeded random SPD and unitary generation.

All types are immutable after construction, all functions are pure, and the
only randomness is explicit (seed in, value out), so everything here is safe
to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConvergenceError, DomainError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

# Construction tolerances.
HERMITIAN_DEFECT_TOL = 1e-12
# Jacobi convergence: off-diagonal Frobenius norm below this multiple of ||H||_F.
JACOBI_TOL_FACTOR = 1e-13
JACOBI_MAX_SWEEPS = 100
# Default relative tolerance for the Loewner order check.
LOEWNER_REL_TOL = 1e-9


def _jacobi_sweeps_impl(h, q, tol, max_sweeps):
    """Cyclic Jacobi sweeps on the Hermitian matrix ``h`` (in place).

    Accumulates the unitary transform into ``q``. Returns the number of
    sweeps used, or -1 if the off-diagonal mass is still above ``tol``
    after ``max_sweeps`` sweeps.
    """
    n = h.shape[0]
    for sweep in range(max_sweeps):
        off2 = 0.0
        for p in range(n - 1):
            for r in range(p + 1, n):
                off2 += abs(h[p, r]) ** 2
        if (2.0 * off2) ** 0.5 <= tol:
            return sweep
        for p in range(n - 1):
            for r in range(p + 1, n):
                hpr = h[p, r]
                apr = abs(hpr)
                if apr < 1e-300:
                    continue
                # Factor out the phase so the 2x2 subproblem is real symmetric.
                phase = hpr / apr
                app = h[p, p].real
                arr = h[r, r].real
                tau = (arr - app) / (2.0 * apr)
                if tau >= 0.0:
                    t = 1.0 / (tau + (1.0 + tau * tau) ** 0.5)
                else:
                    t = -1.0 / (-tau + (1.0 + tau * tau) ** 0.5)
                c = 1.0 / (1.0 + t * t) ** 0.5
                s = t * c * phase
                sc = np.conj(s)
                for i in range(n):
                    hip = h[i, p]
                    hir = h[i, r]
                    h[i, p] = c * hip - sc * hir
                    h[i, r] = s * hip + c * hir
                for i in range(n):
                    hpi = h[p, i]
                    hri = h[r, i]
                    h[p, i] = c * hpi - s * hri
                    h[r, i] = sc * hpi + c * hri
                h[p, r] = 0.0
                h[r, p] = 0.0
                for i in range(n):
                    qip = q[i, p]
                    qir = q[i, r]
                    q[i, p] = c * qip - sc * qir
                    q[i, r] = s * qip + c * qir
    return -1


if njit is not None:
    _jacobi_sweeps = njit(cache=True)(_jacobi_sweeps_impl)
else:  # pragma: no cover - exercised only when numba is unavailable
    _jacobi_sweeps = _jacobi_sweeps_impl


def _eigh_array(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector columns of Hermitian ``h``."""
    n = h.shape[0]
    work = np.array(h, dtype=np.complex128)
    q = np.eye(n, dtype=np.complex128)
    norm = float(np.linalg.norm(work))
    sweeps = _jacobi_sweeps(work, q, JACOBI_TOL_FACTOR * norm, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})"
        )
    w = np.real(np.diag(work))
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(q[:, order])


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral factorization H = Q diag(w) Q* with ``eigenvalues`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


class ComplexMatrix:
    """Immutable square complex matrix with finite entries."""

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        self._a = _freeze(a.copy())

    @property
    def a(self) -> np.ndarray:
        """The underlying (read-only) complex128 array."""
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


class HermitianMatrix(ComplexMatrix):
    """A matrix with H = H* up to round-off; symmetrized at construction.

    Construction fails if the Hermitian defect exceeds
    ``HERMITIAN_DEFECT_TOL * (1 + max |entry|)``; below that the entries are
    replaced by (H + H*)/2 so round-off never accumulates across operations.
    """

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        scale = 1.0 + float(np.max(np.abs(a)))
        if not np.isfinite(scale) or defect > HERMITIAN_DEFECT_TOL * scale:
            raise DomainError(
                f"matrix is not Hermitian: defect {defect:.3e} exceeds tolerance"
            )
        super().__init__((a + a.conj().T) / 2.0)

    @cached_property
    def eig(self) -> EigenDecomposition:
        """Eigendecomposition, computed once and cached (the type is immutable)."""
        w, q = _eigh_array(self._a)
        return EigenDecomposition(_freeze(w), _freeze(q))

    @cached_property
    def spectral_norm(self) -> float:
        w = self.eig.eigenvalues
        return float(max(abs(w[0]), abs(w[-1])))

    def _attach_eig(self, w: np.ndarray, q: np.ndarray) -> None:
        # Private fast path: record a decomposition known by construction.
        self.__dict__["eig"] = EigenDecomposition(_freeze(w), _freeze(q))


class SpdMatrix(HermitianMatrix):
    """Hermitian matrix with strictly positive spectrum."""

    def __init__(self, entries):
        super().__init__(entries)
        if self.eig.eigenvalues[0] <= 0.0:
            raise DomainError(
                f"matrix is not positive definite: lambda_min = {self.eig.eigenvalues[0]:.6e}"
            )

    @classmethod
    def _assemble(cls, w: np.ndarray, q: np.ndarray) -> "SpdMatrix":
        """Build Q diag(w) Q* from a known factorization, skipping the solver."""
        if np.min(w) <= 0.0:
            raise DomainError("assembled spectrum must be strictly positive")
        order = np.argsort(w, kind="stable")
        w = np.ascontiguousarray(np.asarray(w, dtype=np.float64)[order])
        q = np.ascontiguousarray(np.asarray(q, dtype=np.complex128)[:, order])
        m = (q * w) @ q.conj().T
        obj = cls.__new__(cls)
        ComplexMatrix.__init__(obj, (m + m.conj().T) / 2.0)
        obj._attach_eig(w, q)
        return obj

    def power(self, t: float) -> "SpdMatrix":
        """Real matrix power through the cached eigendecomposition."""
        if t == 0.0:
            n = self.n
            return SpdMatrix._assemble(np.ones(n), np.eye(n, dtype=np.complex128))
        w = self.eig.eigenvalues ** t
        return SpdMatrix._assemble(w, self.eig.eigenvectors)


@dataclass(frozen=True)
class LoewnerVerdict:
    """Outcome of a semidefinite order comparison X <= Y.

    ``witness_eigenvalue`` is the smallest eigenvalue of Y - X; the verdict
    holds exactly when it is >= -tolerance_used.
    """

    holds: bool
    witness_eigenvalue: float
    tolerance_used: float


def jacobi_eigh(h) -> EigenDecomposition:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Parameters
    ----------
    h : HermitianMatrix or array_like
        The matrix to factor. Arrays are validated/symmetrized first.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending, eigenvector columns unitary. Deterministic
        for identical input.

    Raises
    ------
    ConvergenceError
        If the off-diagonal norm has not dropped below
        ``JACOBI_TOL_FACTOR * ||H||_F`` after ``JACOBI_MAX_SWEEPS`` sweeps.
    """
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    return h.eig


def apply_spectral(h, phi) -> HermitianMatrix:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    Returns Q diag(phi(w_i)) Q*. This is the bridge by which a scalar
    inequality that holds on the spectrum of ``h`` transfers to the
    semidefinite order: if f >= g pointwise on the eigenvalues then
    ``apply_spectral(h, f) >= apply_spectral(h, g)``.

    ``phi`` is called once per eigenvalue and must return a finite float.
    """
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)
    dec = h.eig
    try:
        vals = np.array([float(phi(w)) for w in dec.eigenvalues])
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise DomainError(f"spectral function undefined on the spectrum: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise DomainError("spectral function returned a non-finite value")
    q = dec.eigenvectors
    m = (q * vals) @ q.conj().T
    out = HermitianMatrix(m)
    order = np.argsort(vals, kind="stable")
    out._attach_eig(vals[order], np.ascontiguousarray(q[:, order]))
    return out


def spd_pow(a: SpdMatrix, t: float) -> SpdMatrix:
    """A**t for positive definite ``a`` and real ``t`` (A**0 = I, A**1 = A)."""
    if not isinstance(a, SpdMatrix):
        a = SpdMatrix(a)
    return a.power(float(t))


def loewner_leq(x, y, rel_tol: float = LOEWNER_REL_TOL) -> LoewnerVerdict:
    """Decide X <= Y in the semidefinite order, with a relative tolerance.

    The comparison is ``lambda_min(Y - X) >= -rel_tol * max(1, ||X||_2, ||Y||_2)``.
    The scale-relative tolerance absorbs the round-off that inequality chains
    accumulate through repeated spectral function evaluations.
    """
    if not isinstance(x, HermitianMatrix):
        x = HermitianMatrix(x)
    if not isinstance(y, HermitianMatrix):
        y = HermitianMatrix(y)
    if x.n != y.n:
        raise DomainError(f"dimension mismatch: {x.n} vs {y.n}")
    diff = HermitianMatrix(y.a - x.a)
    witness = float(diff.eig.eigenvalues[0])
    tol = rel_tol * max(1.0, x.spectral_norm, y.spectral_norm)
    return LoewnerVerdict(holds=witness >= -tol, witness_eigenvalue=witness, tolerance_used=tol)


def _mgs_unitary(g: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of ``g`` by modified Gram-Schmidt."""
    q = np.array(g, dtype=np.complex128)
    n = q.shape[0]
    for k in range(n):
        for i in range(k):
            q[:, k] -= (q[:, i].conj() @ q[:, k]) * q[:, i]
        nrm = np.linalg.norm(q[:, k])
        if nrm < 1e-12:
            raise ArithmeticError("rank-deficient Gaussian draw")
        q[:, k] /= nrm
    return q


def random_unitary(n: int, seed) -> np.ndarray:
    """Seeded approximately-Haar unitary from a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    while True:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        try:
            return _mgs_unitary(g)
        except ArithmeticError:  # pragma: no cover - probability ~ 0
            continue


def random_spd(n: int, cond_max: float, seed) -> SpdMatrix:
    """Seeded random positive definite matrix with bounded condition number.

    Draws a unitary Q by modified Gram-Schmidt of a complex Gaussian matrix
    and eigenvalues log-uniform in [1/sqrt(cond_max), sqrt(cond_max)], so the
    spectral condition number never exceeds ``cond_max``. Deterministic per
    seed; ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise DomainError("dimension must be >= 1")
    if cond_max < 1.0:
        raise DomainError("cond_max must be >= 1")
    rng = np.random.default_rng(seed)
    q = random_unitary(n, rng)
    half = 0.5 * np.log(cond_max)
    lam = np.exp(rng.uniform(-half, half, size=n))
    return SpdMatrix._assemble(lam, q)


def random_hermitian(n: int, seed) -> HermitianMatrix:
    """Seeded random Hermitian matrix (symmetrized complex Gaussian)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix((g + g.conj().T) / 2.0)


# ---------------------------------------------------------------------------
# Elementary matrix operations (plumbing shared by the other modules).

def _arr(x) -> np.ndarray:
    return x.a if isinstance(x, ComplexMatrix) else np.asarray(x, dtype=np.complex128)


def multiply(x, y) -> ComplexMatrix:
    return ComplexMatrix(_arr(x) @ _arr(y))


def adjoint(x) -> ComplexMatrix:
    return ComplexMatrix(_arr(x).conj().T)


def add(x, y) -> ComplexMatrix:
    return ComplexMatrix(_arr(x) + _arr(y))


def scale(x, c) -> ComplexMatrix:
    return ComplexMatrix(c * _arr(x))


def trace(x) -> complex:
    return complex(np.trace(_arr(x)))


def frobenius_norm(x) -> float:
    return float(np.linalg.norm(_arr(x)))


# ---------------------------------------------------------------------------
# JSON wire format: {"n": int, "re": [[...]], "im": [[...]]}, row-major;
# "im" may be omitted for real matrices.

def matrix_to_json(m) -> dict:
    """Serialize a matrix to the JSON wire format used by the CLI."""
    a = _arr(m)
    out = {"n": int(a.shape[0]), "re": a.real.tolist()}
    if np.any(a.imag != 0.0):
        out["im"] = a.imag.tolist()
    return out


def matrix_from_json(obj: dict) -> ComplexMatrix:
    """Parse the JSON wire format; raises DomainError on malformed input."""
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise DomainError('matrix JSON must contain "n" and "re"')
    n = int(obj["n"])
    re = np.asarray(obj["re"], dtype=np.float64)
    if re.shape != (n, n):
        raise DomainError(f'"re" must be {n}x{n}, got shape {re.shape}')
    if "im" in obj:
        im = np.asarray(obj["im"], dtype=np.float64)
        if im.shape != (n, n):
            raise DomainError(f'"im" must be {n}x{n}, got shape {im.shape}')
        return ComplexMatrix(re + 1j * im)
    return ComplexMatrix(re.astype(np.complex128))
