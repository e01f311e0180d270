"""Numerical checks of the entropy inequalities behind the bounds, erasure
correctability of explicit states, and bookkeeping simulations of the
classical-MDS constructions.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import gf
from .bounds import rate_region, region_contains
from .errors import (
    BadBlockSizes,
    NotCorrectable,
    ParityMismatch,
    PurityBridgeFailed,
    StateNotPure,
)
from .qstate import (
    DensityMatrix,
    TensorState,
    block_entropy,
    conditional_entropy,
    partial_trace,
    random_density,
    subsets,
    trace_distance,
)

EQ_TOL = 1e-9
FUZZ_TOL = 1e-8


# --- subset-averaged entropy inequalities -------------------------------------------

@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def _average(state, systems, size, given) -> float:
    blocks = subsets(systems, size)
    if given:
        return sum(conditional_entropy(state, b, given) for b in blocks) / len(blocks)
    return sum(block_entropy(state, b) for b in blocks) / len(blocks)


def _block_sizes(n: int, m: int, mu: int) -> None:
    if not 1 <= mu < m <= n:
        raise BadBlockSizes(f"need 1 <= mu < m <= n, got mu={mu}, m={m}, n={n}")


def check_lemma1(
    state: DensityMatrix | TensorState, m: int, mu: int, systems: list[str] | None = None
) -> LemmaCheck:
    """E_{|I|=m} S(X_I) <= (m/mu) E_{|J|=mu} S(X_J), averages over all subsets."""
    systems = list(state.labels if systems is None else systems)
    _block_sizes(len(systems), m, mu)
    lhs = _average(state, systems, m, ())
    rhs = m / mu * _average(state, systems, mu, ())
    return LemmaCheck(lhs, rhs)


def check_lemma2(
    state: DensityMatrix | TensorState,
    m: int,
    mu: int,
    given: str | list[str],
    systems: list[str] | None = None,
) -> LemmaCheck:
    """Conditional version: E S(X_I|Y) <= (m/mu) E S(X_J|Y)."""
    given = [given] if isinstance(given, str) else list(given)
    if systems is None:
        systems = [lbl for lbl in state.labels if lbl not in given]
    _block_sizes(len(systems), m, mu)
    lhs = _average(state, systems, m, given)
    rhs = m / mu * _average(state, systems, mu, given)
    return LemmaCheck(lhs, rhs)


def check_ssa(state: DensityMatrix | TensorState, a: str, b: str, c: str) -> LemmaCheck:
    """S(ABC) + S(B) <= S(AB) + S(BC)."""
    lhs = block_entropy(state, [a, b, c]) + block_entropy(state, [b])
    rhs = block_entropy(state, [a, b]) + block_entropy(state, [b, c])
    return LemmaCheck(lhs, rhs)


@dataclass
class Violation:
    seed: int
    dims: tuple[int, ...]
    blocks: tuple[int, int]
    margin: float


@dataclass
class FuzzReport:
    lemma: str
    trials: int
    worst_margin: float
    violations: list[Violation] = field(default_factory=list)
    elapsed: float = 0.0
    master_seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        if math.isinf(self.worst_margin):
            out["worst_margin"] = None
        return out


def _random_dims(rng: np.random.Generator, budget: int, lo: int, hi: int) -> list[int]:
    n = int(rng.integers(lo, hi + 1))
    dims = [int(rng.choice([2, 3])) for _ in range(n)]
    while math.prod(dims) > budget and max(dims) > 2:
        dims[dims.index(max(dims))] = 2
    while math.prod(dims) > budget and len(dims) > lo:
        dims.pop()
    return dims


def fuzz_trial(lemma: str, trial_seed: int, dim_budget: int = 512):
    """One reproducible trial; returns (dims, (m, mu), LemmaCheck)."""
    rng = np.random.default_rng(trial_seed)
    ancilla = int(rng.choice([1, 2, 3, 4, 8]))
    if lemma == "1":
        dims = _random_dims(rng, dim_budget, 2, 4)
        dm = random_density(dims, ancilla, seed=rng)
        m = int(rng.integers(2, len(dims) + 1))
        mu = int(rng.integers(1, m))
        return tuple(dims), (m, mu), check_lemma1(dm, m, mu)
    if lemma == "2":
        ydim = int(rng.choice([1, 2, 3, 4]))
        dims = _random_dims(rng, dim_budget // ydim, 2, 4)
        labels = [f"X{i + 1}" for i in range(len(dims))] + ["Y"]
        dm = random_density(dims + [ydim], ancilla, seed=rng, labels=labels)
        m = int(rng.integers(2, len(dims) + 1))
        mu = int(rng.integers(1, m))
        return tuple(dims + [ydim]), (m, mu), check_lemma2(dm, m, mu, "Y")
    if lemma == "ssa":
        dims = [int(rng.choice([2, 3])) for _ in range(3)]
        dm = random_density(dims, ancilla, seed=rng)
        return tuple(dims), (0, 0), check_ssa(dm, "X1", "X2", "X3")
    raise ValueError(f"unknown lemma {lemma!r}; use 1, 2 or ssa")


def fuzz(lemma: str, trials: int, dim_budget: int = 512, seed: int = 0, tol: float = FUZZ_TOL) -> FuzzReport:
    """Random mixed-state campaign; deterministic in ``seed``.

    Each trial draws its own seed from the master seed so any violation can be
    replayed with :func:`fuzz_trial`.
    """
    lemma = str(lemma)
    start = time.perf_counter()
    report = FuzzReport(lemma, trials, math.inf, master_seed=seed)
    if trials <= 0:
        return report
    children = np.random.SeedSequence(seed).spawn(trials)
    for child in children:
        trial_seed = int(child.generate_state(1, dtype=np.uint64)[0])
        dims, blocks, result = fuzz_trial(lemma, trial_seed, dim_budget)
        report.worst_margin = min(report.worst_margin, result.margin)
        if result.margin < -tol:
            report.violations.append(Violation(trial_seed, dims, blocks, result.margin))
    report.elapsed = time.perf_counter() - start
    return report


# --- erasure correctability of explicit states -------------------------------------

@dataclass
class PartitionRecord:
    erased: tuple[str, ...]
    mutual_information: float  # I(R : X_J)
    s_erased: float  # S(X_J)
    s_ref_erased: float  # S(R X_J)
    s_decoder: float  # S(X_I B_in)


@dataclass
class DecouplingReport:
    d: int
    n: int
    partitions: list[PartitionRecord]
    s_ref: float
    sigma_bar: float | None
    sigma_bar_bar: float | None
    tol: float = EQ_TOL

    @property
    def worst(self) -> PartitionRecord | None:
        return max(self.partitions, key=lambda p: p.mutual_information, default=None)

    @property
    def correctable(self) -> bool:
        worst = self.worst
        return worst is None or worst.mutual_information <= self.tol


def _x_labels(state, reference: str, bin_labels) -> list[str]:
    skip = {reference, *bin_labels}
    return [lbl for lbl in state.labels if lbl not in skip]


def _require_pure(state) -> None:
    if isinstance(state, DensityMatrix):
        purity = float(np.real(np.trace(state.matrix @ state.matrix)))
        if abs(purity - 1.0) > EQ_TOL:
            raise StateNotPure(f"tr rho^2 = {purity:.12f}; purify with an explicit ancilla")


def check_decoupling(
    state: TensorState | DensityMatrix,
    d: int,
    reference: str = "R",
    bin_labels: list[str] | tuple[str, ...] = (),
    x_labels: list[str] | None = None,
    tol: float = EQ_TOL,
) -> DecouplingReport:
    """I(R : X_J) for every erasure pattern J of size d-1, lexicographic order."""
    _require_pure(state)
    xs = _x_labels(state, reference, bin_labels) if x_labels is None else list(x_labels)
    n = len(xs)
    if not 1 <= d <= n + 1:
        raise ValueError(f"need 1 <= d <= n+1 = {n + 1}")
    s_ref = block_entropy(state, [reference])
    parts = []
    for erased in (subsets(xs, d - 1) if d > 1 else []):
        kept = [x for x in xs if x not in erased] + list(bin_labels)
        s_j = block_entropy(state, erased)
        s_rj = block_entropy(state, [reference, *erased])
        parts.append(PartitionRecord(erased, s_ref + s_j - s_rj, s_j, s_rj, block_entropy(state, kept)))
    sigma_bar = sum(p.s_erased for p in parts) / len(parts) / (d - 1) if parts else None
    sigma_bar_bar = None
    if n - d + 1 >= 1:
        blocks = subsets(xs, n - d + 1)
        sigma_bar_bar = sum(block_entropy(state, b) for b in blocks) / len(blocks) / (n - d + 1)
    return DecouplingReport(d, n, parts, s_ref, sigma_bar, sigma_bar_bar, tol)


@dataclass
class SingletonReport:
    n: int
    d: int
    s_ref: float
    sigma_bar: float | None
    rhs: float
    chain: float  # E S(X_I) - E S(X_J), |I| = n-d+1, |J| = d-1
    qmds_tight: bool
    max_marginal_distance: float | None = None

    @property
    def slack(self) -> float:
        return self.rhs - self.s_ref

    @property
    def satisfied(self) -> bool:
        return self.slack >= -EQ_TOL

    @property
    def tight(self) -> bool:
        return abs(self.slack) <= EQ_TOL


def check_entropic_singleton(
    state: TensorState | DensityMatrix, d: int, reference: str = "R"
) -> SingletonReport:
    """S(R) <= max(0, n-2d+2) * sigma_bar on a state correcting d-1 erasures.

    The intermediate chain bound S(R) <= E S(X_I) - E S(X_J) is reported too
    and serves as the right-hand side when d = 1.

    When the bound is met with S(R) > 0 every (d-1)-marginal must be
    maximally mixed; that is checked too and reported as a trace distance.
    """
    dec = check_decoupling(state, d, reference)
    if not dec.correctable:
        worst = dec.worst
        raise NotCorrectable(f"I(R:{','.join(worst.erased)}) = {worst.mutual_information:.3e}")
    n = dec.n
    xs = _x_labels(state, reference, ())
    chain = _average(state, xs, n - d + 1, ()) if d <= n else 0.0
    chain -= _average(state, xs, d - 1, ()) if d > 1 else 0.0
    if d == 1:
        # no (d-1)-blocks, so sigma_bar is undefined; the chain itself is S(X_[n])
        sigma_bar, rhs = None, chain
    else:
        sigma_bar = dec.sigma_bar
        rhs = max(0, n - 2 * d + 2) * sigma_bar
    report = SingletonReport(n, d, dec.s_ref, sigma_bar, rhs, chain, False)
    if report.tight and dec.s_ref > EQ_TOL and d > 1:
        report.qmds_tight = True
        dims = dict(state.systems)
        worst = 0.0
        for block in subsets(xs, d - 1):
            marginal = partial_trace(state, block)
            dim = math.prod(dims[b] for b in block)
            worst = max(worst, trace_distance(marginal.matrix, np.eye(dim) / dim))
        report.max_marginal_distance = worst
        log_q = math.log2(dims[xs[0]])
        if abs(sigma_bar - log_q) > EQ_TOL or worst > 1e-8:
            raise PurityBridgeFailed(
                f"tight state has sigma_bar={sigma_bar} and marginal distance {worst:.3e}"
            )
    return report


# --- classical-MDS protocol bookkeeping -------------------------------------------

@dataclass
class ProtocolTranscript:
    scheme: str
    q: int
    n: int
    d: int
    k: Fraction
    ebits_consumed: Fraction
    message_in: tuple[int, ...]
    message_out: tuple[int, ...]
    erased: tuple[int, ...]
    steps: list[str] = field(default_factory=list)

    @property
    def fidelity(self) -> float:
        return 1.0 if self.message_in == self.message_out else 0.0

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return self.ebits_consumed / self.n, self.k / self.n

    @property
    def in_region(self) -> bool:
        return region_contains(rate_region(Fraction(self.d - 1, self.n)), *self.point)

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme, "q": self.q, "n": self.n, "d": self.d,
            "k": str(self.k), "c": str(self.ebits_consumed),
            "message_in": list(self.message_in), "message_out": list(self.message_out),
            "erased": list(self.erased), "fidelity": self.fidelity, "steps": self.steps,
        }


def simulate_densecoding_mds(
    q: int, n: int, d: int, message, erasures
) -> ProtocolTranscript:
    """Dense coding turns each qudit into a q^2-ary classical symbol; an RS
    code over GF(q^2) survives d-1 erasures; the decoded symbols are the
    classical halves of n-d+1 teleported qudits.

    Consumes n + (n-d+1) maximally entangled qudit pairs to send k = n-d+1 qudits.
    """
    p, m = gf.prime_power(q)
    big = gf.make_field(p, 2 * m)
    k = n - d + 1
    code = gf.reed_solomon(big, n, k)
    message = tuple(int(s) for s in message)
    erased = tuple(sorted(erasures))
    steps = [f"encode {k} symbols of GF({q}^2) with RS[{n},{k}]"]
    word = code.encode(message)
    pairs = [(big.digits(s)[:m], big.digits(s)[m:]) for s in word]
    steps.append(f"dense-code {n} qudits as X^a Z^b on shared pairs: {pairs}")
    received = [None if j in erased else s for j, s in enumerate(word)]
    steps.append(f"erase positions {list(erased)}")
    decoded = gf.erasure_decode(code, received, erased)
    steps.append(f"classical-decode -> {list(decoded)}")
    steps.append(f"teleport {k} qudits using the decoded corrections and {k} more pairs")
    return ProtocolTranscript(
        "densecoding", q, n, d, Fraction(k), Fraction(n + k), message, decoded, erased, steps
    )


def simulate_mds_point(q: int, n: int, d: int, message=None, erasures=None) -> ProtocolTranscript:
    """RS[n, n-d+1] over GF(q) carries the 2k correction dits for teleporting
    k = (n-d+1)/2 qudits, consuming c = k pairs.
    """
    if 2 * (d - 1) < n:
        raise ValueError("the MDS point needs d-1 >= n/2")
    if (n - d + 1) % 2:
        raise ParityMismatch(f"n-d+1 = {n - d + 1} is odd")
    field_ = gf.field_of_order(q)
    length = n - d + 1
    k = length // 2
    code = gf.reed_solomon(field_, n, length)
    message = tuple(range(length)) if message is None else tuple(int(s) for s in message)
    message = tuple(s % q for s in message)
    erased = tuple(range(d - 1)) if erasures is None else tuple(sorted(erasures))
    steps = [f"encode {length} correction dits for {k} teleported qudits with RS[{n},{length}] over GF({q})"]
    word = code.encode(message)
    received = [None if j in erased else s for j, s in enumerate(word)]
    steps.append(f"erase positions {list(erased)}")
    decoded = gf.erasure_decode(code, received, erased)
    steps.append(f"classical-decode -> {list(decoded)}")
    steps.append(f"teleport {k} qudits consuming {k} pairs")
    return ProtocolTranscript(
        "mdspoint", q, n, d, Fraction(k), Fraction(k), message, decoded, erased, steps
    )


@dataclass
class CampaignReport:
    scheme: str
    q: int
    n: int
    d: int
    k: Fraction
    c: Fraction
    runs: int
    failures: int
    patterns: int
    in_region: bool

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.in_region

    def to_dict(self) -> dict:
        out = asdict(self)
        out["k"], out["c"], out["ok"] = str(self.k), str(self.c), self.ok
        return out


def protocol_campaign(scheme: str, q: int, n: int, d: int, max_messages: int = 4096, seed: int = 0) -> CampaignReport:
    """Every erasure pattern of size d-1 against every message (or a seeded sample)."""
    if scheme == "densecoding":
        alphabet, length, sim = q * q, n - d + 1, simulate_densecoding_mds
    elif scheme == "mdspoint":
        alphabet, length, sim = q, n - d + 1, simulate_mds_point
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    if alphabet**length <= max_messages:
        messages = list(itertools.product(range(alphabet), repeat=length))
    else:
        rng = np.random.default_rng(seed)
        messages = [tuple(int(v) for v in rng.integers(0, alphabet, length)) for _ in range(max_messages)]
    patterns = list(itertools.combinations(range(n), d - 1))
    runs = failures = 0
    last = None
    for pattern in patterns:
        for msg in messages:
            last = sim(q, n, d, msg, pattern)
            runs += 1
            failures += last.fidelity < 1.0
    return CampaignReport(
        scheme, q, n, d, last.k, last.ebits_consumed, runs, failures, len(patterns), last.in_region
    )
