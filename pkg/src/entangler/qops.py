"""Operator algebra on small composite Hilbert spaces.

Everything is a dense complex matrix tagged with a :class:`SpaceLayout`
(the ordered tensor factors it acts on).  Dimensions here never exceed a
few dozen, so no sparse machinery is used anywhere.

Basis conventions (fixed project-wide):

* each qubit factor is ordered ``(|u>, |d>)`` where ``|u>`` is the state
  annihilated by the lowering operator and ``|d>`` the one it lowers, so
  the two-qubit basis order is ``(uu, ud, du, dd)``;
* Fock factors are ordered ``|0>, |1>, ...`` up to the truncation;
* composite indices follow numpy's Kronecker convention: factor 0 is the
  most significant index.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import LayoutError


class SpaceLayout:
    """Ordered tensor-factor dimensions of a composite Hilbert space."""

    __slots__ = ("factor_dims",)

    def __init__(self, factor_dims: Iterable[int]):
        dims = tuple(int(d) for d in factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise LayoutError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("SpaceLayout is immutable")

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims))

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpaceLayout) and self.factor_dims == other.factor_dims

    def __hash__(self) -> int:
        return hash(self.factor_dims)

    def __repr__(self) -> str:
        return f"SpaceLayout({list(self.factor_dims)})"


TWO_QUBITS = SpaceLayout([2, 2])


def _as_matrix(x) -> np.ndarray:
    m = x.matrix if isinstance(x, Operator) else np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LayoutError(f"expected a square matrix, got shape {m.shape}")
    return m


class Operator:
    """A complex square matrix acting on a declared layout.

    Not assumed Hermitian (jump operators are not); use
    :func:`hermiticity_defect` to check candidate Hamiltonians.
    Instances are immutable: the stored matrix is a read-only copy.
    """

    __slots__ = ("layout", "matrix")

    def __init__(self, layout: SpaceLayout, matrix):
        m = np.array(matrix, dtype=complex, copy=True)
        if m.ndim != 2 or m.shape != (layout.dim, layout.dim):
            raise LayoutError(
                f"matrix shape {m.shape} does not match layout dimension {layout.dim}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    def dag(self) -> "Operator":
        return Operator(self.layout, self.matrix.conj().T)

    def _check_same_layout(self, other: "Operator"):
        if self.layout != other.layout:
            raise LayoutError(f"layout mismatch: {self.layout} vs {other.layout}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix - other.matrix)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix @ other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.layout, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.layout, -self.matrix)

    def __repr__(self) -> str:
        return f"Operator(layout={self.layout}, dim={self.layout.dim})"


class DensityMatrix:
    """A physical state: unit trace, Hermitian, positive semidefinite.

    Tolerances are arguments because freshly constructed states are held
    to tighter bounds than states coming out of a time integrator.
    """

    __slots__ = ("layout", "matrix")

    def __init__(
        self,
        layout: SpaceLayout,
        matrix,
        *,
        trace_tol: float = 1e-9,
        herm_tol: float = 1e-12,
        psd_tol: float = 1e-9,
        validate: bool = True,
    ):
        m = np.array(matrix, dtype=complex, copy=True)
        if m.shape != (layout.dim, layout.dim):
            raise LayoutError(
                f"matrix shape {m.shape} does not match layout dimension {layout.dim}"
            )
        if validate:
            tr = np.trace(m)
            if abs(tr - 1.0) > trace_tol:
                raise ValueError(f"trace {tr} deviates from 1 by more than {trace_tol}")
            herm = hermiticity_defect(m)
            if herm > herm_tol:
                raise ValueError(f"hermiticity defect {herm:.3e} exceeds {herm_tol}")
            lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
            if lo < -psd_tol:
                raise ValueError(f"negative eigenvalue {lo:.3e} below -{psd_tol}")
        m.setflags(write=False)
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @classmethod
    def from_ket(cls, layout: SpaceLayout, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).reshape(-1)
        if v.shape != (layout.dim,):
            raise LayoutError(f"ket length {v.shape[0]} does not match layout {layout}")
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot build a state from the zero vector")
        v = v / n
        return cls(layout, np.outer(v, v.conj()))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self) -> str:
        return f"DensityMatrix(layout={self.layout})"


def hermiticity_defect(matrix) -> float:
    """Largest-magnitude entry of M - M†; 0 for an exactly Hermitian matrix."""
    m = _as_matrix(matrix)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def tensor(layout: SpaceLayout, factors: Mapping[int, object]) -> Operator:
    """Embed single-factor operators into the full layout.

    ``factors`` maps factor index -> matrix (or single-factor Operator) on
    that factor; unlisted factors get the identity.  ``tensor(layout, {})``
    is the identity on the whole space.
    """
    pieces = []
    for i, d in enumerate(layout.factor_dims):
        if i in factors:
            m = _as_matrix(factors[i])
            if m.shape != (d, d):
                raise LayoutError(
                    f"factor {i} has dimension {d}, got operator of shape {m.shape}"
                )
            pieces.append(m)
        else:
            pieces.append(np.eye(d, dtype=complex))
    for k in factors:
        if not 0 <= int(k) < layout.n_factors:
            raise LayoutError(f"factor index {k} out of range for {layout}")
    full = pieces[0]
    for p in pieces[1:]:
        full = np.kron(full, p)
    return Operator(layout, full)


_SIGMA_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def sigma_lower(atom_index: int, layout: SpaceLayout) -> Operator:
    """Lowering operator on one qubit factor: takes |d> to |u>, kills |u>."""
    if not 0 <= atom_index < layout.n_factors:
        raise LayoutError(f"atom index {atom_index} out of range for {layout}")
    if layout.factor_dims[atom_index] != 2:
        raise LayoutError(
            f"factor {atom_index} has dimension {layout.factor_dims[atom_index]}, "
            "need a qubit"
        )
    return tensor(layout, {atom_index: _SIGMA_LOWER})


def annihilator(fock_dim: int) -> Operator:
    """Truncated bosonic annihilation operator, <n-1|b|n> = sqrt(n)."""
    if fock_dim < 2:
        raise LayoutError(f"fock_dim must be >= 2, got {fock_dim}")
    b = np.diag(np.sqrt(np.arange(1, fock_dim, dtype=float)), k=1).astype(complex)
    return Operator(SpaceLayout([fock_dim]), b)


def collective_lowering(g1: float, g2: float, g_ref: float, layout: SpaceLayout) -> Operator:
    """Weighted sum of the two atomic lowering operators, (g1*s1 + g2*s2)/g_ref.

    Acts on factors 0 and 1 of ``layout`` (identity on any cavity factor).
    """
    if g_ref <= 0:
        raise ValueError(f"g_ref must be positive, got {g_ref}")
    s1 = sigma_lower(0, layout)
    s2 = sigma_lower(1, layout)
    return (g1 / g_ref) * s1 + (g2 / g_ref) * s2


def dissipator(a: Operator, rho: DensityMatrix) -> np.ndarray:
    """Lindblad dissipation term a rho a† - (a†a rho + rho a†a)/2."""
    if a.layout != rho.layout:
        raise LayoutError(f"layout mismatch: {a.layout} vs {rho.layout}")
    return apply_dissipator(a.matrix, rho.matrix)


def apply_dissipator(a: np.ndarray, rho: np.ndarray) -> np.ndarray:
    ad = a.conj().T
    ada = ad @ a
    return a @ rho @ ad - 0.5 * (ada @ rho + rho @ ada)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out all factors not in ``keep``; preserves the total trace."""
    keep_list = sorted(set(int(k) for k in keep))
    dims = rho.layout.factor_dims
    n = len(dims)
    if not keep_list:
        raise LayoutError("keep set must be non-empty")
    if any(k < 0 or k >= n for k in keep_list):
        raise LayoutError(f"keep indices {keep_list} out of range for {rho.layout}")
    t = rho.matrix.reshape(dims + dims)
    # contract row/column indices of every traced factor, highest axis first
    for k in sorted(set(range(n)) - set(keep_list), reverse=True):
        t = np.trace(t, axis1=k, axis2=k + (t.ndim // 2))
    d_keep = int(np.prod([dims[k] for k in keep_list]))
    reduced = t.reshape(d_keep, d_keep)
    return DensityMatrix(
        SpaceLayout([dims[k] for k in keep_list]),
        reduced,
        trace_tol=1e-6,
        herm_tol=1e-8,
        psd_tol=1e-6,
    )


def basis_ket(layout: SpaceLayout, indices: Iterable[int]) -> np.ndarray:
    """Computational basis vector |i0 i1 ...> on the layout."""
    idx = tuple(int(i) for i in indices)
    if len(idx) != layout.n_factors:
        raise LayoutError(f"need {layout.n_factors} indices, got {len(idx)}")
    flat = 0
    for i, d in zip(idx, layout.factor_dims):
        if not 0 <= i < d:
            raise LayoutError(f"basis index {i} out of range for factor of dim {d}")
        flat = flat * d + i
    v = np.zeros(layout.dim, dtype=complex)
    v[flat] = 1.0
    return v


def singlet_ket() -> np.ndarray:
    """(|ud> - |du>)/sqrt(2), the maximally entangled two-qubit target."""
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
