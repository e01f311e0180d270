"""Dense multipartite states with labelled subsystems and their entropies.

All entropies are in bits.  Convert to q-ary units by dividing by log2(q)
at the reporting boundary.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionBudgetExceeded,
    InvalidState,
    NonHermitianInput,
    OverlappingBlocks,
    UnknownLabel,
)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10
MAX_DIM = 2**14
MAX_SUBSETS = 10**6

System = tuple[str, int]


def _check_systems(systems: Sequence[System]) -> tuple[System, ...]:
    systems = tuple((str(lbl), int(dim)) for lbl, dim in systems)
    labels = [lbl for lbl, _ in systems]
    if len(set(labels)) != len(labels):
        raise InvalidState(f"duplicate labels in {labels}")
    if any(dim < 1 for _, dim in systems):
        raise InvalidState("subsystem dimensions must be positive")
    return systems


def _total_dim(systems: Sequence[System]) -> int:
    return math.prod(dim for _, dim in systems)


@dataclass(frozen=True, eq=False)
class TensorState:
    """Normalized pure state vector on an ordered list of (label, dim) systems."""

    amplitudes: np.ndarray
    systems: tuple[System, ...]

    def __post_init__(self):
        systems = _check_systems(self.systems)
        object.__setattr__(self, "systems", systems)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != _total_dim(systems):
            raise InvalidState(f"{amps.size} amplitudes for total dimension {_total_dim(systems)}")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm {np.linalg.norm(amps)} is not 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes, systems: Sequence[System]) -> TensorState:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps), tuple(systems))

    @property
    def labels(self) -> list[str]:
        return [lbl for lbl, _ in self.systems]

    @property
    def dims(self) -> list[int]:
        return [dim for _, dim in self.systems]

    def relabel(self, mapping: dict[str, str]) -> TensorState:
        return TensorState(self.amplitudes, tuple((mapping.get(l, l), d) for l, d in self.systems))

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.systems)

    def tensor(self, other: TensorState) -> TensorState:
        return TensorState(np.kron(self.amplitudes, other.amplitudes), self.systems + other.systems)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix on labelled systems."""

    matrix: np.ndarray
    systems: tuple[System, ...]

    def __post_init__(self):
        systems = _check_systems(self.systems)
        object.__setattr__(self, "systems", systems)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = _total_dim(systems)
        if mat.shape != (dim, dim):
            raise InvalidState(f"matrix shape {mat.shape} does not match dimension {dim}")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise NonHermitianInput("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {np.trace(mat).real} is not 1")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def maximally_mixed(cls, systems: Sequence[System]) -> DensityMatrix:
        dim = _total_dim(systems)
        return cls(np.eye(dim) / dim, tuple(systems))

    @property
    def labels(self) -> list[str]:
        return [lbl for lbl, _ in self.systems]

    @property
    def dims(self) -> list[int]:
        return [dim for _, dim in self.systems]

    def spectrum(self) -> np.ndarray:
        return spectrum(self)


@dataclass(frozen=True)
class EntropyReport:
    value: float
    block: tuple[str, ...]
    given: tuple[str, ...] | None = None

    def in_units_of(self, q: int) -> float:
        return self.value / math.log2(q)


def _resolve(systems: Sequence[System], labels: Iterable[str]) -> list[int]:
    index = {lbl: i for i, (lbl, _) in enumerate(systems)}
    positions = []
    for lbl in labels:
        if lbl not in index:
            raise UnknownLabel(lbl)
        positions.append(index[lbl])
    return sorted(set(positions))


def partial_trace(state: TensorState | DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Marginal on the systems in ``keep``, preserving their original order."""
    keep_idx = _resolve(state.systems, keep)
    systems = state.systems
    dims = [d for _, d in systems]
    kept = tuple(systems[i] for i in keep_idx)
    dk = _total_dim(kept)
    traced = [i for i in range(len(systems)) if i not in keep_idx]
    if isinstance(state, TensorState):
        psi = state.amplitudes.reshape(dims)
        mat = np.transpose(psi, keep_idx + traced).reshape(dk, -1)
        rho = mat @ mat.conj().T
    else:
        n = len(systems)
        tensor = state.matrix.reshape(dims + dims)
        bra = keep_idx + traced
        ket = [n + i for i in keep_idx] + [n + i for i in traced]
        tensor = np.transpose(tensor, bra + ket)
        dt = _total_dim([systems[i] for i in traced])
        rho = np.einsum("ajbj->ab", tensor.reshape(dk, dt, dk, dt))
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho, kept)


def spectrum(dm: DensityMatrix) -> np.ndarray:
    """Eigenvalues with the small negative ones produced by eigensolvers clamped to 0."""
    mat = dm.matrix
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise NonHermitianInput("entropy requires a Hermitian matrix")
    evals = np.linalg.eigvalsh(mat)
    if evals.size and evals.min() < -NEGATIVITY_TOL:
        raise InvalidState(f"eigenvalue {evals.min():.3e} is negative")
    return np.clip(evals, 0.0, 1.0)


def entropy(dm: DensityMatrix) -> float:
    """von Neumann entropy in bits, with 0 log 0 = 0."""
    evals = spectrum(dm)
    evals = evals[evals > 0]
    return float(-np.sum(evals * np.log2(evals))) + 0.0


def block_entropy(state: TensorState | DensityMatrix, block: Iterable[str]) -> float:
    block = list(block)
    if not block:
        return 0.0
    return entropy(partial_trace(state, block))


def _disjoint(a: Iterable[str], b: Iterable[str]) -> tuple[list[str], list[str]]:
    a, b = list(a), list(b)
    overlap = set(a) & set(b)
    if overlap:
        raise OverlappingBlocks(f"blocks share {sorted(overlap)}")
    return a, b


def conditional_entropy(
    state: TensorState | DensityMatrix, block: Iterable[str], given: Iterable[str]
) -> float:
    """S(block | given) = S(block given) - S(given)."""
    block, given = _disjoint(block, given)
    return block_entropy(state, block + given) - block_entropy(state, given)


def mutual_information(
    state: TensorState | DensityMatrix, a: Iterable[str], b: Iterable[str]
) -> float:
    a, b = _disjoint(a, b)
    return block_entropy(state, a) + block_entropy(state, b) - block_entropy(state, a + b)


def entropy_report(
    state: TensorState | DensityMatrix, block: Iterable[str], given: Iterable[str] | None = None
) -> EntropyReport:
    block = tuple(block)
    if given is None:
        return EntropyReport(block_entropy(state, block), block)
    given = tuple(given)
    return EntropyReport(conditional_entropy(state, block, given), block, given)


def subsets(labels: Sequence[str], size: int) -> list[tuple[str, ...]]:
    """Lexicographic size-``size`` subsets, refusing combinatorial blow-up."""
    if math.comb(len(labels), size) > MAX_SUBSETS:
        raise BudgetExceeded(f"C({len(labels)}, {size}) subsets exceed {MAX_SUBSETS}")
    return list(itertools.combinations(labels, size))


def avg_block_entropy(
    state: TensorState | DensityMatrix,
    block_size: int,
    systems: Sequence[str] | None = None,
    given: Sequence[str] = (),
) -> float:
    """Per-system average entropy of a uniformly random block of ``block_size`` systems.

    ``systems`` defaults to every label of ``state``.  With ``given`` the
    conditional entropy S(X_J | given) is averaged instead.
    """
    systems = list(state.labels if systems is None else systems)
    if not 1 <= block_size <= len(systems):
        raise ValueError(f"block size {block_size} outside 1..{len(systems)}")
    total = 0.0
    blocks = subsets(systems, block_size)
    for blk in blocks:
        if given:
            total += conditional_entropy(state, blk, given)
        else:
            total += block_entropy(state, blk)
    return total / len(blocks) / block_size


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _default_systems(dims: Sequence[int], prefix: str = "X") -> tuple[System, ...]:
    return tuple((f"{prefix}{i + 1}", int(d)) for i, d in enumerate(dims))


def random_pure_state(dims: Sequence[int], seed=None, labels: Sequence[str] | None = None) -> TensorState:
    """Haar-random pure state: normalized complex Gaussian amplitudes."""
    dim = math.prod(dims)
    if dim > MAX_DIM:
        raise DimensionBudgetExceeded(f"dimension {dim} exceeds {MAX_DIM}")
    rng = _rng(seed)
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    systems = _default_systems(dims) if labels is None else tuple(zip(labels, dims))
    return TensorState.normalized(amps, systems)


def random_density(
    dims: Sequence[int], ancilla_dim: int, seed=None, labels: Sequence[str] | None = None
) -> DensityMatrix:
    """Marginal of a random pure state on ``dims`` plus an ancilla of ``ancilla_dim``."""
    dim = math.prod(dims) * ancilla_dim
    if dim > MAX_DIM:
        raise DimensionBudgetExceeded(f"dimension {dim} exceeds {MAX_DIM}")
    systems = _default_systems(dims) if labels is None else tuple(zip(labels, dims))
    if "__anc__" in dict(systems):
        raise InvalidState("reserved label")
    rng = _rng(seed)
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    big = TensorState.normalized(amps, systems + (("__anc__", ancilla_dim),))
    return partial_trace(big, [lbl for lbl, _ in systems])


def random_unitary(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bell_state(dim: int = 2, labels: tuple[str, str] = ("A", "B")) -> TensorState:
    amps = np.eye(dim).reshape(-1) / math.sqrt(dim)
    return TensorState(amps, ((labels[0], dim), (labels[1], dim)))


def ghz_state(n: int, dim: int = 2, prefix: str = "X") -> TensorState:
    amps = np.zeros(dim**n, dtype=complex)
    for i in range(dim):
        amps[sum(i * dim**j for j in range(n))] = 1
    return TensorState.normalized(amps, _default_systems([dim] * n, prefix))


def product_state(dims: Sequence[int], prefix: str = "X") -> TensorState:
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[0] = 1
    return TensorState(amps, _default_systems(dims, prefix))


def trace_distance(a: DensityMatrix | np.ndarray, b: DensityMatrix | np.ndarray) -> float:
    ma = a.matrix if isinstance(a, DensityMatrix) else a
    mb = b.matrix if isinstance(b, DensityMatrix) else b
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(ma - mb))))
