"""Propagation rules on code parameters, closure over a code database, and a
state-level certificate for turning a pure code into an entanglement-assisted one.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from .bounds import CodeParams, classify
from .errors import (
    CTooLarge,
    DecouplingFailed,
    DimensionBudgetExceeded,
    DTooSmall,
    KTooSmall,
    NotMaximallyMixedOnBin,
    NotPure,
    SoundnessViolation,
)
from .qstate import MAX_DIM, TensorState, mutual_information, partial_trace, trace_distance
from .stabilizer import StabilizerCode, knill_laflamme_check, purified_code_state, x_labels

EXISTENCE = ("constructed", "cited", "derived", "nonexistent")
CERT_TOL = 1e-9


@dataclass(frozen=True)
class CodeRecord:
    params: CodeParams
    existence: str
    trail: tuple[tuple[str, CodeParams], ...] = ()

    def __post_init__(self):
        if self.existence not in EXISTENCE:
            raise ValueError(f"existence must be one of {EXISTENCE}")


# --- rules ---------------------------------------------------------------------

def rule_trade_k_for_c(p: CodeParams) -> CodeParams:
    """[[n,k,d;c]] -> [[n,k-1,d;c-1]]: send one maximally entangled pair in place of a qudit."""
    if p.k < 1:
        raise KTooSmall(f"{p} has k < 1")
    return p.with_(k=p.k - 1, c=p.c - 1, pure=None, source="")


def _require_pure_unassisted(p: CodeParams) -> None:
    if p.pure is not True:
        raise NotPure(f"{p} is not flagged pure")
    if p.c != 0:
        raise NotPure(f"{p} is entanglement assisted; the rule needs an unassisted code")


def rule_pure_shorten(p: CodeParams, c: int) -> CodeParams:
    """Pure [[n,k,d]] -> [[n-c,k,d;c]] for 0 < c < d, handing c qudits to the receiver."""
    _require_pure_unassisted(p)
    if c >= p.d:
        raise CTooLarge(f"c={c} must be smaller than d={p.d}")
    if c < 0 or p.n - c < 1:
        raise CTooLarge(f"c={c} leaves no transmitted qudits")
    return p.with_(n=p.n - c, c=Fraction(c), pure=None, source="")


def rule_rains_lengthen(p: CodeParams) -> CodeParams:
    """Pure [[n,k,d]] -> [[n-1,k+1,d-1]], stated for pure unassisted codes."""
    _require_pure_unassisted(p)
    if p.d < 2:
        raise DTooSmall(f"{p} has d < 2")
    if p.n < 2:
        raise DTooSmall(f"{p} has n < 2")
    return p.with_(n=p.n - 1, k=p.k + 1, d=p.d - 1, pure=True, source="")


def rule_naive_shorten(p: CodeParams, c: int) -> CodeParams:
    """Deliberately unsound [[n,k,d]] -> [[n-c,k+c,d;c]]; exists to exercise closure checks."""
    _require_pure_unassisted(p)
    if c >= p.d:
        raise CTooLarge(f"c={c} must be smaller than d={p.d}")
    return p.with_(n=p.n - c, k=p.k + c, c=Fraction(c), pure=None, source="")


def _expand_trade(p: CodeParams) -> list[tuple[str, CodeParams]]:
    return [("trade_k_for_c", rule_trade_k_for_c(p))] if p.k >= 1 else []


def _expand_shorten(p: CodeParams) -> list[tuple[str, CodeParams]]:
    if p.pure is not True or p.c != 0:
        return []
    return [("pure_shorten", rule_pure_shorten(p, c)) for c in range(1, min(p.d, p.n))]


def _expand_rains(p: CodeParams) -> list[tuple[str, CodeParams]]:
    if p.pure is not True or p.c != 0 or p.d < 2 or p.n < 2 or p.k + 1 > p.n - 1:
        return []
    return [("rains_lengthen", rule_rains_lengthen(p))]


def _expand_naive(p: CodeParams) -> list[tuple[str, CodeParams]]:
    if p.pure is not True or p.c != 0:
        return []
    out = []
    for c in range(1, min(p.d, p.n)):
        try:
            out.append(("naive_shorten", rule_naive_shorten(p, c)))
        except ValueError:
            pass
    return out


DEFAULT_RULES = (_expand_trade, _expand_shorten, _expand_rains)


def closure(
    db: Iterable[CodeRecord], max_steps: int = 64, unsound: bool = False
) -> list[CodeRecord]:
    """Apply every rule until nothing new appears (or ``max_steps`` rounds pass).

    Each derived record is re-classified; a bound violation raises
    SoundnessViolation with the derivation trail.  Records are deduplicated
    on (n, k, d, c, q, pure) and returned sorted by parameters.
    """
    expanders = DEFAULT_RULES + ((_expand_naive,) if unsound else ())
    seen: dict[tuple, CodeRecord] = {}
    facts: list[CodeRecord] = []
    frontier: list[CodeRecord] = []
    for rec in db:
        if rec.existence == "nonexistent":
            facts.append(rec)
            continue
        key = rec.params.key + (rec.params.pure,)
        if key not in seen:
            seen[key] = rec
            frontier.append(rec)
    for _ in range(max_steps):
        if not frontier:
            break
        new: list[CodeRecord] = []
        for rec in frontier:
            for expand in expanders:
                for rule_id, child in expand(rec.params):
                    derived = CodeRecord(child, "derived", ((rule_id, rec.params),) + rec.trail)
                    verdict = classify(child)
                    if not verdict.admissible:
                        raise SoundnessViolation(derived, verdict.violating)
                    key = child.key + (child.pure,)
                    if key not in seen:
                        seen[key] = derived
                        new.append(derived)
        frontier = new
    return sorted(list(seen.values()) + facts, key=_sort_key)


def _sort_key(rec: CodeRecord) -> tuple:
    p = rec.params
    return (p.q, p.n, p.k, p.d, p.c, str(p.pure), rec.existence)


_REPLAY = {
    "trade_k_for_c": lambda parent, child: rule_trade_k_for_c(parent),
    "pure_shorten": lambda parent, child: rule_pure_shorten(parent, parent.n - child.n),
    "rains_lengthen": lambda parent, child: rule_rains_lengthen(parent),
    "naive_shorten": lambda parent, child: rule_naive_shorten(parent, parent.n - child.n),
}


def replay(record: CodeRecord) -> bool:
    """Re-run the derivation trail from its root and compare with the stored params."""
    steps = list(reversed(record.trail))
    targets = [parent for _, parent in steps[1:]] + [record.params]
    for (rule_id, parent), target in zip(steps, targets):
        if _REPLAY[rule_id](parent, target).key != target.key:
            return False
    return True


# --- database file ---------------------------------------------------------------

def _parse_pure(token: str) -> bool | None:
    token = token.lower()
    if token in ("1", "true", "yes", "pure"):
        return True
    if token in ("0", "false", "no", "impure"):
        return False
    if token in ("?", "-", "unknown", "none"):
        return None
    raise ValueError(f"cannot read purity flag {token!r}")


def _format_pure(flag: bool | None) -> str:
    return {True: "pure", False: "impure", None: "?"}[flag]


def parse_database(text: str) -> list[CodeRecord]:
    """Whitespace separated ``n k d c q pure existence source...`` lines; ``#`` starts a comment."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 7:
            raise ValueError(f"line {lineno}: expected at least 7 fields, got {len(fields)}")
        n, k, d, c, q, pure, existence, *source = fields
        params = CodeParams(
            int(n), Fraction(k), int(d), Fraction(c), int(q), _parse_pure(pure), " ".join(source)
        )
        records.append(CodeRecord(params, existence))
    return records


def format_record(rec: CodeRecord) -> str:
    p = rec.params
    source = p.source
    if rec.trail:
        rule_id, parent = rec.trail[0]
        source = f"{rule_id}<-{parent}"
    return f"{p.n} {p.k} {p.d} {p.c} {p.q} {_format_pure(p.pure)} {rec.existence} {source}".rstrip()


def format_database(records: Iterable[CodeRecord]) -> str:
    return "".join(format_record(r) + "\n" for r in records)


def load_database(path=None) -> list[CodeRecord]:
    if path is None:
        text = resources.files("singleton_lab").joinpath("data/codes.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_database(text)


def nonexistent(records: Iterable[CodeRecord]) -> list[CodeParams]:
    return [r.params for r in records if r.existence == "nonexistent"]


def nonexistence_match(params: CodeParams, records: Iterable[CodeRecord]) -> CodeRecord | None:
    """Database nonexistence fact with the same (n, k, d, c, q), if any.

    A derived net-c tuple can coincide with a nonexistent unassisted code
    while being realized with c_in = c_f > 0; this is reported, never inferred.
    """
    for r in records:
        if r.existence == "nonexistent" and r.params.key == params.key:
            return r
    return None


# --- state-level certificate --------------------------------------------------------

@dataclass
class EAWitness:
    """Purified code state with the last c systems handed to the receiver as B_in."""

    state: TensorState
    params: CodeParams
    bin_labels: list[str]
    x_labels: list[str]
    bin_deviation: float
    decoupling: dict[tuple[str, ...], float] = field(default_factory=dict)
    vacuous: bool = False

    @property
    def worst(self) -> tuple[tuple[str, ...], float] | None:
        if not self.decoupling:
            return None
        return max(self.decoupling.items(), key=lambda kv: kv[1])


def theorem5_execute(
    code: StabilizerCode, c: int, d: int, require_pure: bool = True, tol: float = CERT_TOL
) -> EAWitness:
    """Certify the [[n-c, k, d; c]] code obtained from a pure [[n, k, d]] code.

    The last c qudits of the purified code state become the receiver's
    half of the initial entanglement.  Certification checks that this half
    is maximally mixed and that every (d-1)-block of the remaining qudits
    is decoupled from the reference R.
    """
    if c >= d:
        raise CTooLarge(f"c={c} must be smaller than d={d}")
    if c < 0 or c >= code.n:
        raise CTooLarge(f"c={c} leaves no transmitted qudits")
    if code.q ** (code.n + code.k) > MAX_DIM:
        raise DimensionBudgetExceeded(f"{code.q}^{code.n + code.k} exceeds {MAX_DIM}")
    if require_pure:
        verdict = knill_laflamme_check(code, d)
        if not verdict.distance_at_least:
            raise NotPure(f"distance of {code.name or 'code'} is below {d} (witness {verdict.witness})")
        if not verdict.pure:
            raise NotPure(f"{code.name or 'code'} is not pure at distance {d} (witness {verdict.witness})")

    xs = x_labels(code.n)
    kept, handed = xs[: code.n - c], xs[code.n - c :]
    bin_labels = [f"B{i + 1}" for i in range(c)]
    state = purified_code_state(code).relabel(dict(zip(handed, bin_labels)))

    if c:
        marginal = partial_trace(state, bin_labels)
        dim = code.q**c
        deviation = trace_distance(marginal.matrix, np.eye(dim) / dim)
    else:
        deviation = 0.0
    if deviation > tol:
        raise NotMaximallyMixedOnBin(deviation)

    params = CodeParams(code.n - c, code.k, d, c, code.q, source=f"from {code.name or 'code'}, c={c}")
    witness = EAWitness(state, params, bin_labels, kept, deviation)
    if d - 1 > len(kept) or d - 1 == 0:
        witness.vacuous = True
        return witness
    for block in itertools.combinations(kept, d - 1):
        witness.decoupling[block] = mutual_information(state, ["R"], list(block))
    block, worst = witness.worst
    if worst > tol:
        raise DecouplingFailed(block, worst)
    return witness
