"""Core domain types for streaming erasure-code experiments.

Packets are identified by 1-based stream indices.  A block coding scheme is
a vector ``x = [x_1, ..., x_d]`` with ``sum(x) == d``: in every block of
``d`` slots the sender transmits ``x_i`` random linear combinations of the
``i`` lowest-index packets the receiver has not yet seen, narrowest first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import generator

#: Largest block length for which exhaustive scheme enumeration is supported.
MAX_ENUM_D = 12


# ---------------------------------------------------------------------------
# erasure traces


@dataclass(frozen=True)
class ErasureTrace:
    """Per-user slot outcomes; ``True`` marks a successful slot.

    Rows are users, columns are 1-based slots.  Traces produced by
    :func:`sample_trace` are i.i.d. Bernoulli per user and independent
    across users.
    """

    outcomes: np.ndarray
    p: tuple[float, ...]

    def __post_init__(self):
        out = np.asarray(self.outcomes, dtype=bool)
        object.__setattr__(self, "outcomes", out)
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        if out.ndim != 2:
            raise ValueError("outcomes must be a (users, slots) array")
        if out.shape[0] != len(self.p):
            raise ValueError("one success probability per user required")
        if out.shape[0] not in (1, 2):
            raise ValueError("only one- and two-user traces are supported")
        if out.shape[1] < 1:
            raise ValueError("trace must cover at least one slot")
        out.setflags(write=False)

    @property
    def n_users(self) -> int:
        return self.outcomes.shape[0]

    @property
    def n_slots(self) -> int:
        return self.outcomes.shape[1]

    def success_rate(self, user: int = 0) -> float:
        return float(self.outcomes[user].mean())


def sample_trace(p_list: Sequence[float], n_slots: int, seed: int) -> ErasureTrace:
    """Sample an i.i.d. erasure trace, deterministically for a fixed seed."""
    ps = tuple(float(p) for p in p_list)
    if len(ps) not in (1, 2):
        raise ValueError("p_list must contain one or two probabilities")
    for p in ps:
        if not 0.0 < p < 1.0:
            raise ValueError(f"success probability must lie strictly in (0, 1), got {p}")
    if n_slots < 1:
        raise ValueError("n_slots must be at least 1")
    rng = generator(seed)
    outcomes = rng.random((len(ps), int(n_slots))) < np.asarray(ps)[:, None]
    return ErasureTrace(outcomes, ps)


# ---------------------------------------------------------------------------
# block coding schemes


@dataclass(frozen=True)
class SchemeVector:
    """A time-invariant block scheme ``x`` with ``sum(x) == len(x)``."""

    x: tuple[int, ...]

    def __post_init__(self):
        xs = tuple(int(v) for v in self.x)
        object.__setattr__(self, "x", xs)
        if not xs:
            raise ValueError("scheme vector must not be empty")
        if any(v < 0 for v in xs):
            raise ValueError("scheme entries must be non-negative")
        if sum(xs) != len(xs):
            raise ValueError(f"scheme entries must sum to the block length {len(xs)}, got {sum(xs)}")

    @property
    def d(self) -> int:
        """Block length in slots."""
        return len(self.x)

    def widths(self) -> tuple[int, ...]:
        """Per-slot combination widths in transmission order (ascending)."""
        return tuple(i for i, xi in enumerate(self.x, start=1) for _ in range(xi))

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.x) + "]"

    @classmethod
    def parse(cls, text: str) -> "SchemeVector":
        """Parse the text form ``"[1,0,3,0]"`` (bit-exact round trip)."""
        t = text.strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise ValueError(f"scheme vector text must look like [1,0,3,0], got {text!r}")
        parts = [s.strip() for s in t[1:-1].split(",")]
        try:
            return cls(tuple(int(s) for s in parts))
        except ValueError as e:
            raise ValueError(f"unparsable scheme vector {text!r}: {e}") from None


def as_scheme(x: "SchemeVector | str | Sequence[int]") -> SchemeVector:
    """Coerce strings or integer sequences to :class:`SchemeVector`."""
    if isinstance(x, SchemeVector):
        return x
    if isinstance(x, str):
        return SchemeVector.parse(x)
    return SchemeVector(tuple(x))


def proposed_scheme(a: int, d: int) -> SchemeVector:
    """The a-of-d family member: ``x_1 = a`` and ``x_{d-a+1} = d-a``.

    Sends the first unseen packet ``a`` times, then ``d - a`` combinations of
    the first ``d - a + 1`` unseen packets.
    """
    if not 1 <= a <= d:
        raise ValueError(f"need 1 <= a <= d, got a={a}, d={d}")
    x = [0] * d
    x[0] = a
    if a < d:
        x[d - a] += d - a
    return SchemeVector(tuple(x))


def canonicalize_scheme(x: SchemeVector) -> SchemeVector:
    """Reduce ``x`` to the canonical representative of its equivalence class.

    When ``x_1 >= 1``, replacing any ``x_i = 0, x_{i+1} = w >= 1`` by
    ``x_i = 1, x_{i+1} = w - 1`` preserves the per-block decoding probability
    and the innovation count.  The rewrite is applied left-to-right until a
    fixed point; canonicalization is idempotent.
    """
    v = list(x.x)
    if v[0] >= 1:
        changed = True
        while changed:
            changed = False
            for i in range(1, len(v) - 1):
                if v[i] == 0 and v[i + 1] >= 1:
                    v[i] = 1
                    v[i + 1] -= 1
                    changed = True
                    break
    return SchemeVector(tuple(v))


def _compositions_first_positive(d: int) -> Iterable[tuple[int, ...]]:
    """All x with x_1 >= 1, non-negative entries, length d, sum d."""
    for first in range(1, d + 1):
        rest = d - first
        # compositions of `rest` into d-1 non-negative parts via divider positions
        if d == 1:
            yield (first,)
            continue
        n, k = rest, d - 1
        for dividers in itertools.combinations(range(n + k - 1), k - 1):
            parts = []
            prev = -1
            for pos in dividers:
                parts.append(pos - prev - 1)
                prev = pos
            parts.append(n + k - 2 - prev)
            yield (first, *parts)


def enumerate_schemes(d: int) -> list[SchemeVector]:
    """Canonical representatives of all block schemes of length ``d``.

    Schemes with ``x_1 = 0`` waste the leading slot on a combination that can
    never decode anything by itself and are strictly dominated, so the
    enumeration restricts to ``x_1 >= 1``; the remaining vectors are reduced
    to canonical form and deduplicated.
    """
    if not 1 <= d <= MAX_ENUM_D:
        raise ValueError(f"enumeration supports 1 <= d <= {MAX_ENUM_D}, got {d}")
    canon: dict[tuple[int, ...], SchemeVector] = {}
    for comp in _compositions_first_positive(d):
        c = canonicalize_scheme(SchemeVector(comp))
        canon.setdefault(c.x, c)
    return [canon[key] for key in sorted(canon, reverse=True)]


# ---------------------------------------------------------------------------
# coded combinations and trade-off points


@dataclass(frozen=True)
class CodedCombo:
    """One transmitted linear combination over a prime field.

    ``support`` holds the included packet indices in increasing order and
    ``coeffs`` one nonzero field element per index.
    """

    support: tuple[int, ...]
    coeffs: tuple[int, ...]
    slot: int = 0

    def __post_init__(self):
        sup = tuple(int(i) for i in self.support)
        cf = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "coeffs", cf)
        if not sup:
            raise ValueError("combination support must not be empty")
        if len(sup) != len(cf):
            raise ValueError("one coefficient per support index required")
        if any(i < 1 for i in sup) or any(sup[k] >= sup[k + 1] for k in range(len(sup) - 1)):
            raise ValueError("support must be strictly increasing positive indices")
        if any(c == 0 for c in cf):
            raise ValueError("coefficients must be nonzero")


@dataclass(frozen=True)
class TradeoffPoint:
    """A (throughput, inter-delivery exponent) pair.

    ``tau`` is dimensionless in [0, 1]; ``lam`` is the exponent in nats per
    slot.  Estimated points carry a confidence-interval halfwidth.
    """

    tau: float
    lam: float
    kind: str = "analytic"
    ci_halfwidth: float | None = None
    note: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tau", float(self.tau))
        lam = float(self.lam)
        if -1e-12 <= lam < 0.0:
            lam = 0.0
        object.__setattr__(self, "lam", lam)
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")
        if lam < 0.0:
            raise ValueError(f"exponent must be non-negative, got {lam}")
        if self.kind not in ("analytic", "estimated"):
            raise ValueError(f"kind must be 'analytic' or 'estimated', got {self.kind!r}")


# ---------------------------------------------------------------------------
# two-user channel parameters


@dataclass(frozen=True)
class TwoUserParams:
    """Success probabilities and priority weights for two-user multicast.

    ``q1``/``q2`` are the probabilities of favouring user 1/user 2 with its
    required packet when that user is the lagger.  The derived quantities
    a, b, c, dd are the probabilities of the four joint erasure patterns
    (both succeed, only user 1, only user 2, both erased).
    """

    p1: float
    p2: float
    q1: float = 0.0
    q2: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie strictly in (0, 1), got {v}")
        for name in ("q1", "q2"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def a(self) -> float:
        return self.p1 * self.p2

    @property
    def b(self) -> float:
        return self.p1 * (1.0 - self.p2)

    @property
    def c(self) -> float:
        return (1.0 - self.p1) * self.p2

    @property
    def dd(self) -> float:
        return (1.0 - self.p1) * (1.0 - self.p2)

    @property
    def dbar(self) -> float:
        return 1.0 - self.dd
