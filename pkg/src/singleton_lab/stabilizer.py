"""Qudit stabilizer codes over prime q, realized densely.

Pauli words are ``tau^phase * X^x Z^z`` with ``tau = exp(i pi / q)``, so the
phase lives in Z_{2q} and the qubit ``Y = i X Z`` is representable.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import gf
from .errors import (
    DependentGenerators,
    DimensionBudgetExceeded,
    EnumerationBudgetExceeded,
    InvalidState,
    NonCommutingGenerators,
)
from .qstate import TensorState

MAX_CODE_DIM = 2**12
MAX_KL_WORDS = 10**6
KL_TOL = 1e-9


@dataclass(frozen=True)
class PauliWord:
    q: int
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z exponent vectors differ in length")
        object.__setattr__(self, "x", tuple(int(v) % self.q for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % self.q for v in self.z))
        object.__setattr__(self, "phase", int(self.phase) % (2 * self.q))

    @classmethod
    def parse(cls, text: str, q: int) -> PauliWord:
        """Read ``XZZXI``-style letters (Y allowed for q=2) or ``xdigits|zdigits``."""
        text = text.strip()
        if "|" in text:
            xs, zs = text.split("|")
            return cls(q, tuple(int(c) for c in xs), tuple(int(c) for c in zs))
        x, z, phase = [], [], 0
        for ch in text.upper():
            if ch == "I":
                x.append(0), z.append(0)
            elif ch == "X":
                x.append(1), z.append(0)
            elif ch == "Z":
                x.append(0), z.append(1)
            elif ch == "Y" and q == 2:
                x.append(1), z.append(1)
                phase += 1
            else:
                raise ValueError(f"cannot read Pauli letter {ch!r} for q={q}")
        return cls(q, tuple(x), tuple(z), phase)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def symplectic(self, other: PauliWord) -> int:
        return (
            sum(a * b for a, b in zip(self.x, other.z)) - sum(a * b for a, b in zip(self.z, other.x))
        ) % self.q

    def commutes_with(self, other: PauliWord) -> bool:
        return self.symplectic(other) == 0

    def label(self) -> str:
        if self.q == 2:
            letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
            return "".join(letters[p] for p in zip(self.x, self.z))
        return "".join(map(str, self.x)) + "|" + "".join(map(str, self.z))

    def __str__(self) -> str:
        return self.label()

    def matrix(self) -> np.ndarray:
        q = self.q
        omega = np.exp(2j * np.pi / q)
        shift = np.roll(np.eye(q), 1, axis=0)
        clock = np.diag(omega ** np.arange(q))
        out = np.array([[np.exp(1j * np.pi * self.phase / q)]])
        for a, b in zip(self.x, self.z):
            out = np.kron(out, np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b))
        return out

    def apply(self, vecs: np.ndarray) -> np.ndarray:
        """Act on the columns of a (q^n, K) array without building the matrix."""
        q, n = self.q, self.n
        cols = vecs.shape[1] if vecs.ndim == 2 else 1
        t = np.asarray(vecs, dtype=complex).reshape((q,) * n + (cols,))
        omega = np.exp(2j * np.pi / q)
        for site, (a, b) in enumerate(zip(self.x, self.z)):
            if b:
                shape = [1] * (n + 1)
                shape[site] = q
                t = t * (omega ** (b * np.arange(q))).reshape(shape)
            if a:
                t = np.roll(t, a, axis=site)
        t = t * np.exp(1j * np.pi * self.phase / q)
        return t.reshape(vecs.shape)


def identity_word(q: int, n: int) -> PauliWord:
    return PauliWord(q, (0,) * n, (0,) * n)


def words_of_weight(q: int, n: int, weight: int) -> Iterator[PauliWord]:
    """Non-identity-on-support words of exact weight, support then exponents lexicographic."""
    local = [(a, b) for a in range(q) for b in range(q) if (a, b) != (0, 0)]
    for support in itertools.combinations(range(n), weight):
        for ops in itertools.product(local, repeat=weight):
            x, z = [0] * n, [0] * n
            for site, (a, b) in zip(support, ops):
                x[site], z[site] = a, b
            yield PauliWord(q, tuple(x), tuple(z))


@dataclass(frozen=True)
class StabilizerCode:
    q: int
    n: int
    generators: tuple[PauliWord, ...]
    name: str = ""

    def __post_init__(self):
        if not gf.is_prime(self.q):
            raise ValueError("stabilizer codes here need prime q")
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.q != self.q or g.n != self.n:
                raise ValueError(f"generator {g} does not act on {self.n} qudits of dimension {self.q}")
        for g, h in itertools.combinations(gens, 2):
            if not g.commutes_with(h):
                raise NonCommutingGenerators(f"{g} and {h} do not commute")
        field = gf.make_field(self.q)
        if gf.rank(field, [g.x + g.z for g in gens]) != len(gens):
            raise DependentGenerators("generators are not independent")

    @classmethod
    def from_strings(cls, q: int, generators: Sequence[str], n: int | None = None, name: str = ""):
        words = tuple(PauliWord.parse(g, q) for g in generators)
        if n is None:
            if not words:
                raise ValueError("n is required when there are no generators")
            n = words[0].n
        return cls(q, n, words, name)

    @property
    def k(self) -> int:
        return self.n - len(self.generators)

    @property
    def dimension(self) -> int:
        return self.q**self.k


def _check_budget(code: StabilizerCode) -> None:
    if code.q**code.n > MAX_CODE_DIM:
        raise DimensionBudgetExceeded(f"{code.q}^{code.n} exceeds {MAX_CODE_DIM}")


def build_projector(code: StabilizerCode) -> np.ndarray:
    """Dense projector onto the joint +1 eigenspace of the generators."""
    _check_budget(code)
    dim = code.q**code.n
    proj = np.eye(dim, dtype=complex)
    for g in code.generators:
        term, power = np.zeros_like(proj), proj
        for _ in range(code.q):
            term += power
            power = g.apply(power)
        if np.max(np.abs(power - proj)) > KL_TOL:
            raise InvalidState(f"generator {g} does not have order q; fix its phase")
        proj = term / code.q
    if np.max(np.abs(proj @ proj - proj)) > KL_TOL or abs(np.trace(proj).real - code.dimension) > KL_TOL:
        raise InvalidState("generators do not define a projector of rank q^k")
    return proj


def code_basis(code: StabilizerCode) -> np.ndarray:
    """Orthonormal basis of the code space as columns of a (q^n, q^k) array."""
    proj = build_projector(code)
    evals, evecs = np.linalg.eigh(proj)
    basis = evecs[:, evals > 0.5]
    if basis.shape[1] != code.dimension:
        raise InvalidState("projector rank mismatch")
    return basis


def x_labels(n: int) -> list[str]:
    return [f"X{i + 1}" for i in range(n)]


def purified_code_state(code: StabilizerCode) -> TensorState:
    """Maximally entangled state between a reference R and the code space.

    Systems are ordered R, X1, ..., Xn; the X marginal is Pi / q^k.
    """
    basis = code_basis(code)
    kdim = basis.shape[1]
    amps = basis.T.reshape(-1) / math.sqrt(kdim)
    systems = (("R", kdim),) + tuple((lbl, code.q) for lbl in x_labels(code.n))
    return TensorState.normalized(amps, systems)


@dataclass(frozen=True)
class KLVerdict:
    d: int
    distance_at_least: bool
    pure: bool
    witness: PauliWord | None
    words_checked: int


def count_words(q: int, n: int, max_weight: int) -> int:
    return sum(math.comb(n, w) * (q * q - 1) ** w for w in range(1, max_weight + 1))


def knill_laflamme_check(code: StabilizerCode, d: int, tol: float = KL_TOL) -> KLVerdict:
    """Brute-force test of P E P = c_E P over all words of weight 1..d-1.

    ``pure`` additionally requires every c_E to vanish.  The witness is the
    first word breaking the distance condition, or failing that the first
    word with nonzero c_E.
    """
    max_weight = min(d - 1, code.n)
    total = count_words(code.q, code.n, max_weight)
    if total > MAX_KL_WORDS:
        raise EnumerationBudgetExceeded(f"{total} Pauli words exceed {MAX_KL_WORDS}")
    basis = code_basis(code)
    kdim = basis.shape[1]
    ok, pure = True, True
    dist_witness = pure_witness = None
    for w in range(1, max_weight + 1):
        for word in words_of_weight(code.q, code.n, w):
            m = basis.conj().T @ word.apply(basis)
            c = np.trace(m) / kdim
            if np.max(np.abs(m - c * np.eye(kdim))) > tol:
                ok = False
                dist_witness = word
                break
            if abs(c) > tol and pure_witness is None:
                pure_witness = word
        if not ok:
            break
    pure = ok and pure_witness is None
    witness = dist_witness if not ok else pure_witness
    return KLVerdict(d, ok, pure, witness, total)


def code_distance(code: StabilizerCode, max_d: int | None = None) -> int | None:
    """Largest d with distance >= d by brute force; None when every d passes (K = 1)."""
    limit = code.n + 1 if max_d is None else max_d
    for d in range(2, limit + 1):
        if not knill_laflamme_check(code, d).distance_at_least:
            return d - 1
    return None if code.dimension == 1 else limit


# --- named corpus --------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    code: StabilizerCode
    distance: int | None  # None: every erasure pattern is correctable (K = 1)
    pure_upto: int
    source: str

    def expected_distance_ok(self, d: int) -> bool:
        return self.distance is None or d <= self.distance

    def expected_pure(self, d: int) -> bool:
        return self.expected_distance_ok(d) and d <= self.pure_upto


def parse_corpus(text: str) -> dict[str, CorpusEntry]:
    """Lines: ``name q n generators distance pure_upto source``.

    Generators are comma separated, ``-`` for none; distance ``inf`` marks
    one-dimensional codes.
    """
    corpus: dict[str, CorpusEntry] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, q, n, gens, dist, pure_upto, *source = line.split()
        q, n = int(q), int(n)
        gen_list = [] if gens == "-" else gens.split(",")
        code = StabilizerCode.from_strings(q, gen_list, n=n, name=name)
        corpus[name] = CorpusEntry(
            code, None if dist == "inf" else int(dist), int(pure_upto), " ".join(source)
        )
    return corpus


def load_corpus() -> dict[str, CorpusEntry]:
    text = resources.files("singleton_lab").joinpath("data/stabilizer_corpus.txt").read_text()
    return parse_corpus(text)


def named_code(name: str) -> StabilizerCode:
    corpus = load_corpus()
    if name not in corpus:
        raise KeyError(f"unknown code {name!r}; known: {', '.join(sorted(corpus))}")
    return corpus[name].code
