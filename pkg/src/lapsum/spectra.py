"""Dense symmetric eigensolving, Laplacians, quotient matrices and interlacing.

Matrices are plain ``numpy`` float arrays; :func:`symmetric` enforces exact
symmetry on input. Spectra are always reported in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import Graph, GraphError, Subset
from .rng import SplitMix64

ZERO_SCALE = 1e-9
TOL_SCALE = 1e-8
JACOBI_OFF_SCALE = 1e-12
JACOBI_MAX_SWEEPS = 100
EIGENSOLVERS = ("lapack", "jacobi")


class ConvergenceError(ArithmeticError):
    pass


_default_solver = "lapack"


def set_default_eigensolver(method: str) -> None:
    """Select ``"lapack"`` (numpy ``eigh``) or ``"jacobi"`` for every spectrum computed here."""
    global _default_solver
    if method not in EIGENSOLVERS:
        raise ValueError(f"unknown eigensolver {method!r}; choose from {EIGENSOLVERS}")
    _default_solver = method


def default_eigensolver() -> str:
    return _default_solver


_tol_scale = TOL_SCALE


def set_tolerance_scale(scale: float) -> None:
    """Change the factor in ``tolerance``; affects every comparison made afterwards."""
    global _tol_scale
    if not scale > 0:
        raise ValueError(f"tolerance scale must be positive, got {scale}")
    _tol_scale = float(scale)


def tolerance_scale() -> float:
    return _tol_scale


def symmetric(a) -> np.ndarray:
    """Copy of ``a`` as float array with ``a[i, j] == a[j, i]`` bit-exactly."""
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return (a + a.T) / 2


def frobenius(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(a * a)))


# ---------------------------------------------------------------- eigensolvers


def jacobi_eigh(a: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns ``(values, vectors)`` with eigenvalues descending and
    eigenvectors in the matching columns. Converged when the off-diagonal
    Frobenius norm drops below ``1e-12 * (1 + ||a||_F)``.
    """
    a = symmetric(a)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_OFF_SCALE * (1.0 + frobenius(a))
    for _ in range(max_sweeps + 1):
        off = frobenius(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigh_desc(a: np.ndarray, method: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    method = method or _default_solver
    if method == "jacobi":
        return jacobi_eigh(a)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}; choose from {EIGENSOLVERS}")
    w, v = np.linalg.eigh(symmetric(a))
    return w[::-1].copy(), v[:, ::-1].copy()


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Descending eigenvalues; ``raw`` keeps the unclamped solver output."""

    values: np.ndarray
    zero_tol: float = 0.0
    raw: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def top(self, m: int) -> float:
        """Sum of the ``m`` largest eigenvalues."""
        return float(np.sum(self.values[:m]))

    def bottom(self, m: int) -> float:
        """Sum of the ``m`` smallest eigenvalues."""
        return float(np.sum(self.values[len(self.values) - m:])) if m else 0.0

    def tolist(self) -> list[float]:
        return [float(x) for x in self.values]


def eigenvalues_sym(a, method: str | None = None, clamp_zero: bool = False) -> Spectrum:
    """Full spectrum of a symmetric matrix.

    With ``clamp_zero`` any eigenvalue within ``1e-9 * (1 + ||a||_F)`` of
    zero is reported as exactly 0, which is what Laplacian spectra want.
    """
    a = symmetric(a)
    if a.shape[0] == 0:
        raise ValueError("matrix of order 0")
    method = method or _default_solver
    if method == "lapack":
        w = np.linalg.eigvalsh(a)[::-1].copy()
    else:
        w, _ = eigh_desc(a, method)
    zero_tol = ZERO_SCALE * (1.0 + frobenius(a))
    if not clamp_zero:
        return Spectrum(w, zero_tol, w)
    clamped = np.where(np.abs(w) <= zero_tol, 0.0, w)
    return Spectrum(clamped, zero_tol, w)


def eigenpair_max(a, method: str | None = None) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector for it."""
    w, v = eigh_desc(symmetric(a), method)
    vec = v[:, 0]
    return float(w[0]), vec / np.linalg.norm(vec)


# ---------------------------------------------------------------- Laplacians


def laplacian(g: Graph) -> np.ndarray:
    lap = -g.adjacency_matrix()
    lap[np.diag_indices(g.n)] = g.degrees
    return lap


def laplacian_norm(g: Graph) -> float:
    """Frobenius norm of L, from degrees alone."""
    return float(np.sqrt(sum(d * d + d for d in g.degrees)))


def tolerance(g: Graph, scale: float | None = None) -> float:
    """Comparison tolerance ``scale * (1 + ||L||_F)`` for ``g``."""
    return (_tol_scale if scale is None else scale) * (1.0 + laplacian_norm(g))


def laplacian_spectrum(g: Graph, method: str | None = None) -> Spectrum:
    """Clamped Laplacian spectrum of ``g``, memoised per graph and solver."""
    return _laplacian_spectrum(g, method or _default_solver)


@lru_cache(maxsize=8192)
def _laplacian_spectrum(g: Graph, method: str) -> Spectrum:
    return eigenvalues_sym(laplacian(g), method=method, clamp_zero=True)


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class Partition:
    classes: tuple[Subset, ...]

    def __post_init__(self):
        for c in self.classes:
            if not c:
                raise GraphError("partition has an empty class")

    @classmethod
    def of(cls, classes: Iterable[Iterable[int]], n: int | None = None) -> Partition:
        cl = tuple(tuple(sorted(c)) for c in classes)
        p = cls(cl)
        if n is not None:
            p.check_order(n)
        return p

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(tuple((v,) for v in range(n)))

    @classmethod
    def split_off(cls, u: Subset, n: int) -> Partition:
        """Each vertex of ``u`` alone, then the complement as one class."""
        rest = tuple(v for v in range(n) if v not in set(u))
        return cls(tuple((v,) for v in u) + ((rest,) if rest else ()))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def order(self) -> int:
        return sum(self.sizes)

    def check_order(self, n: int) -> None:
        seen = sorted(v for c in self.classes for v in c)
        if seen != list(range(n)):
            raise GraphError(f"classes do not partition range({n})")

    def characteristic(self) -> np.ndarray:
        c = np.zeros((self.order, len(self.classes)))
        for j, cls_ in enumerate(self.classes):
            c[list(cls_), j] = 1.0
        return c


@dataclass(frozen=True)
class QuotientMatrix:
    """``b`` holds average block row sums; ``sym`` is its symmetric similar form."""

    b: np.ndarray
    sym: np.ndarray

    def spectrum(self, method: str | None = None) -> Spectrum:
        return eigenvalues_sym(self.sym, method=method)


def _block_sums(a: np.ndarray, p: Partition) -> np.ndarray:
    idx = [list(c) for c in p.classes]
    k = len(idx)
    s = np.empty((k, k))
    for i in range(k):
        rows = a[idx[i], :]
        for j in range(k):
            s[i, j] = rows[:, idx[j]].sum()
    return s


def quotient(a, p: Partition) -> QuotientMatrix:
    a = np.asarray(a, dtype=float)
    p.check_order(a.shape[0])
    sizes = np.array(p.sizes, dtype=float)
    if all(s == 1 for s in p.sizes) and list(p.classes) == [(v,) for v in range(a.shape[0])]:
        return QuotientMatrix(a.copy(), a.copy())
    s = _block_sums(a, p)
    b = s / sizes[:, None]
    root = np.sqrt(sizes)
    sym = s / np.outer(root, root)
    return QuotientMatrix(b, (sym + sym.T) / 2)


# ---------------------------------------------------------------- interlacing


@dataclass(frozen=True)
class InterlacingReport:
    holds: bool
    upper_slack: tuple[float, ...]
    lower_slack: tuple[float, ...]
    tight: bool
    tight_split_k: int | None


def check_interlacing(big: Sequence[float], small: Sequence[float], tol: float) -> InterlacingReport:
    """Check ``big[i] >= small[i] >= big[n-m+i]`` for descending sequences."""
    lam = [float(x) for x in big]
    mu = [float(x) for x in small]
    n, m = len(lam), len(mu)
    if m > n:
        raise ValueError(f"cannot interlace {m} values into {n}")
    upper = tuple(lam[i] - mu[i] for i in range(m))
    lower = tuple(mu[i] - lam[n - m + i] for i in range(m))
    holds = all(x >= -tol for x in upper + lower)
    split = None
    for k in range(m, -1, -1):
        if all(x <= tol for x in upper[:k]) and all(x <= tol for x in lower[k:]):
            split = k
            break
    return InterlacingReport(holds, upper, lower, split is not None, split)


# ---------------------------------------------------------------- equitability


class Witness(NamedTuple):
    vertex: int
    target_class: int


class EquitabilityResult(NamedTuple):
    ok: bool
    witness: Witness | None


def is_almost_equitable(g: Graph, p: Partition) -> EquitabilityResult:
    """True iff every vertex of class ``i`` has the same neighbour count in class ``j``, all ``i != j``."""
    p.check_order(g.n)
    masks = [sum(1 << v for v in c) for c in p.classes]
    for i, ci in enumerate(p.classes):
        for j, mj in enumerate(masks):
            if i == j:
                continue
            counts = [bin(g.rows[v] & mj).count("1") for v in ci]
            for v, c in zip(ci, counts):
                if c != counts[0]:
                    return EquitabilityResult(False, Witness(v, j))
    return EquitabilityResult(True, None)


def is_equitable(a, p: Partition, tol: float = 0.0) -> bool:
    """Every block ``A[U_i, U_j]`` has constant row sums (within ``tol``)."""
    a = np.asarray(a, dtype=float)
    p.check_order(a.shape[0])
    idx = [list(c) for c in p.classes]
    for ri in idx:
        for cj in idx:
            sums = a[np.ix_(ri, cj)].sum(axis=1)
            if sums.max() - sums.min() > tol:
                return False
    return True


@dataclass(frozen=True)
class EquitableSpectrumReport:
    quotient_spectrum: tuple[float, ...]
    complement_spectrum: tuple[float, ...]
    quotient_in_spectrum: bool
    eigenvectors_split: bool
    shift_invariant: bool

    @property
    def ok(self) -> bool:
        return self.quotient_in_spectrum and self.eigenvectors_split and self.shift_invariant


def _sub_multiset(small: Sequence[float], big: Sequence[float], tol: float) -> bool:
    pool = sorted(big)
    for x in sorted(small):
        hit = next((k for k, y in enumerate(pool) if abs(x - y) <= tol), None)
        if hit is None:
            return False
        pool.pop(hit)
    return True


def verify_equitable_spectrum(a, p: Partition, seed: int = 0, tol: float | None = None) -> EquitableSpectrumReport:
    """Check the spectral consequences of an equitable partition of ``a``.

    (i) the quotient spectrum is a sub-multiset of the spectrum of ``a``;
    (ii) ``a`` maps the span of the class indicators, and its orthogonal
    complement, into themselves, and the two restricted spectra together
    make up the spectrum of ``a``; (iii) adding ``c_ij * J`` to every block
    leaves the eigenpairs on the complement untouched.
    """
    a = symmetric(a)
    n = a.shape[0]
    if tol is None:
        tol = TOL_SCALE * (1.0 + frobenius(a))
    if not is_equitable(a, p, tol):
        raise ValueError("partition is not equitable for this matrix")
    full = eigenvalues_sym(a).values
    q = quotient(a, p)
    mu = eigenvalues_sym(q.sym).values

    s = p.characteristic() / np.sqrt(np.array(p.sizes, dtype=float))
    k = s.shape[1]
    # orthonormal basis for the complement of span(S)
    basis, _ = np.linalg.qr(np.hstack([s, np.eye(n)]))
    t = basis[:, k:n]
    split_ok = bool(np.abs(a @ s - s @ (s.T @ a @ s)).max() <= tol) if k else True
    if n > k:
        rest = t.T @ a @ t
        theta, y = eigh_desc(rest)
        split_ok = split_ok and bool(np.abs(a @ t - t @ rest).max() <= tol)
        merged = np.sort(np.concatenate([mu, theta]))[::-1]
        split_ok = split_ok and bool(np.abs(merged - full).max() <= tol)

        rng = SplitMix64(seed)
        shifted = a.copy()
        idx = [list(c) for c in p.classes]
        for i in range(len(idx)):
            for j in range(i, len(idx)):
                c = rng.random() * 2.0 - 1.0
                shifted[np.ix_(idx[i], idx[j])] += c
                if i != j:
                    shifted[np.ix_(idx[j], idx[i])] += c
        x = t @ y
        resid = shifted @ x - x * theta
        shift_ok = bool(np.abs(resid).max() <= tol * (1.0 + frobenius(shifted)))
    else:
        theta = np.array([])
        shift_ok = True
    return EquitableSpectrumReport(
        quotient_spectrum=tuple(float(x) for x in mu),
        complement_spectrum=tuple(float(x) for x in theta),
        quotient_in_spectrum=_sub_multiset(mu, full, tol),
        eigenvectors_split=split_ok,
        shift_invariant=shift_ok,
    )

