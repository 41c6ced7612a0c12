"""Closed-form and exhaustive-enumeration trade-off evaluation.

Covers immediate-feedback retransmission, no-feedback full-rank codes,
arbitrary block schemes under d-slot feedback (per-block renewal model),
the a-of-d code family, randomized mixtures, and upper convex envelopes.
All exponents are natural logarithms, in nats per slot.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decoder import prefix_decodable_count, prefix_rank
from .model import SchemeVector, TradeoffPoint, as_scheme, enumerate_schemes, proposed_scheme

#: Block lengths above this would need more than 2^24 pattern groups.
MAX_BLOCK_D = 24
_MAX_PATTERN_GROUPS = 1 << 24

_HULL_EPS = 1e-12


def binary_divergence(r: float, p: float) -> float:
    """Binary information divergence D(r || p) in nats; D(0 || p) = -ln(1-p)."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"rate must lie in [0, 1), got {r}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie strictly in (0, 1), got {p}")
    if r == 0.0:
        return -math.log1p(-p)
    return r * math.log(r / p) + (1.0 - r) * math.log((1.0 - r) / (1.0 - p))


def arq_tradeoff(p: float) -> TradeoffPoint:
    """Immediate-feedback retransmission: (p, -ln(1-p)), optimal in both axes."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie strictly in (0, 1), got {p}")
    return TradeoffPoint(p, -math.log1p(-p))


def no_feedback_tradeoff(r: float, p: float) -> TradeoffPoint:
    """Full-rank coding without feedback at packet-injection rate r.

    Yields (r, D(r || p)) for r < p; at or above the channel capacity the
    exponent collapses to zero and the point is flagged.
    """
    if r >= p:
        return TradeoffPoint(r, 0.0, note="rate at or above channel success probability")
    return TradeoffPoint(r, binary_divergence(r, p))


@dataclass(frozen=True)
class BlockSchemeResult:
    """Per-block statistics and the trade-off point of a block scheme."""

    scheme: SchemeVector
    p: float
    tau: float
    lam: float
    p_d: float
    e_s_d: float

    @property
    def point(self) -> TradeoffPoint:
        return TradeoffPoint(self.tau, self.lam)


def block_scheme_tradeoff(x: "SchemeVector | str | Sequence[int]", p: float) -> BlockSchemeResult:
    """Evaluate a block scheme by exhausting all erasure patterns of one block.

    Patterns are grouped by how many combinations of each width arrive; each
    group is weighted by its exact binomial multiplicity, so sums carry no
    enumeration error beyond final rounding.  ``p_d`` is the probability of
    decoding the first unseen packet from the block's own receptions, and
    ``e_s_d`` the expected number of innovative receptions; the exponent is
    computed from the complementary mass to avoid cancellation.
    """
    sv = as_scheme(x)
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie strictly in (0, 1), got {p}")
    d = sv.d
    if d > MAX_BLOCK_D:
        raise ValueError(f"exhaustive evaluation supports d <= {MAX_BLOCK_D}, got {d}")
    parts = [(i, xi) for i, xi in enumerate(sv.x, start=1) if xi]
    n_groups = math.prod(xi + 1 for _, xi in parts)
    if n_groups > _MAX_PATTERN_GROUPS:
        raise ValueError(f"scheme needs {n_groups} pattern groups, above the enumeration bound")
    q = 1.0 - p
    e_terms: list[float] = []
    dec_terms: list[float] = []
    undec_terms: list[float] = []
    for counts in itertools.product(*(range(xi + 1) for _, xi in parts)):
        k = sum(counts)
        mult = math.prod(math.comb(xi, ki) for (_, xi), ki in zip(parts, counts))
        widths = [w for (w, _), ki in zip(parts, counts) for _ in range(ki)]
        prob = mult * p**k * q ** (d - k)
        e_terms.append(prob * prefix_rank(widths))
        if prefix_decodable_count(widths) >= 1:
            dec_terms.append(prob)
        else:
            undec_terms.append(prob)
    p_d = math.fsum(dec_terms)
    q_d = math.fsum(undec_terms)
    e_s_d = math.fsum(e_terms)
    return BlockSchemeResult(sv, p, e_s_d / d, -math.log(q_d) / d, p_d, e_s_d)


def proposed_code_tradeoff(a: int, d: int, p: float) -> TradeoffPoint:
    """Closed form for the a-of-d family: ((1-(1-p)^a + (d-a)p)/d, -(a/d)ln(1-p))."""
    if not 1 <= a <= d:
        raise ValueError(f"need 1 <= a <= d, got a={a}, d={d}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie strictly in (0, 1), got {p}")
    q = 1.0 - p
    tau = (1.0 - q**a + (d - a) * p) / d
    lam = -(a / d) * math.log(q)
    return TradeoffPoint(tau, lam)


def mixture_tradeoff(
    components: Sequence[tuple["SchemeVector | str | Sequence[int]", float]], p: float
) -> TradeoffPoint:
    """Trade-off of a per-block randomization between schemes of equal length.

    Picking scheme i independently per block with weight mu_i achieves the
    convex combination of the component points.
    """
    if not components:
        raise ValueError("mixture needs at least one component")
    schemes = [as_scheme(x) for x, _ in components]
    weights = [float(w) for _, w in components]
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be non-negative")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    if len({s.d for s in schemes}) != 1:
        raise ValueError("mixture components must share the block length")
    pts = [block_scheme_tradeoff(s, p) for s in schemes]
    tau = math.fsum(w * r.tau for w, r in zip(weights, pts))
    lam = math.fsum(w * r.lam for w, r in zip(weights, pts))
    return TradeoffPoint(tau, lam)


def upper_hull(points: Sequence[TradeoffPoint]) -> list[TradeoffPoint]:
    """Vertices of the upper-left convex envelope, sorted by tau ascending.

    For each throughput the envelope keeps the maximal achievable exponent;
    collinear interior points are excluded and exact duplicates removed.
    Points dominated in both coordinates do not appear.
    """
    if not points:
        raise ValueError("need at least one point")
    pts = sorted(points, key=lambda t: (t.tau, -t.lam))
    # collapse near-identical tau, keeping the larger exponent
    filtered: list[TradeoffPoint] = []
    for pt in pts:
        if filtered and abs(pt.tau - filtered[-1].tau) <= _HULL_EPS:
            continue
        filtered.append(pt)
    chain: list[TradeoffPoint] = []
    for pt in filtered:
        while len(chain) >= 2:
            ax, ay = chain[-2].tau, chain[-2].lam
            bx, by = chain[-1].tau, chain[-1].lam
            cross = (bx - ax) * (pt.lam - by) - (by - ay) * (pt.tau - bx)
            if cross >= -_HULL_EPS:
                chain.pop()
            else:
                break
        chain.append(pt)
    # drop vertices dominated by the exponent peak
    top = max(range(len(chain)), key=lambda i: chain[i].lam)
    return chain[top:]


@dataclass(frozen=True)
class HullCheck:
    """Hull verification outcome for one block length."""

    d: int
    passed: bool
    hull: tuple[TradeoffPoint, ...]
    family: tuple[TradeoffPoint, ...]
    detail: str


@dataclass(frozen=True)
class OptimalityReport:
    """Result of checking that the a-of-d family spans the d=2,3 envelopes."""

    p: float
    checks: tuple[HullCheck, ...]
    x120_closed_form_error: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and self.x120_closed_form_error <= 1e-12


def _points_match(av: Sequence[TradeoffPoint], bv: Sequence[TradeoffPoint]) -> bool:
    if len(av) != len(bv):
        return False
    return all(
        abs(x.tau - y.tau) <= _HULL_EPS and abs(x.lam - y.lam) <= _HULL_EPS
        for x, y in zip(av, bv)
    )


def verify_d23_optimality(p: float) -> OptimalityReport:
    """Check that for d=2 and d=3 the a-of-d family spans the upper envelope.

    All canonical schemes are evaluated exhaustively; the envelope must
    consist exactly of the family points, with the lone non-family d=3
    scheme [1,2,0] strictly below.  That scheme's point is also compared to
    its closed form ((3p - p^3)/3, -ln((1-p)^2 (1+p))/3).
    """
    checks = []
    for d in (2, 3):
        results = {sv.x: block_scheme_tradeoff(sv, p) for sv in enumerate_schemes(d)}
        hull = upper_hull([r.point for r in results.values()])
        family = [block_scheme_tradeoff(proposed_scheme(a, d), p).point for a in range(d, 0, -1)]
        ok = _points_match(hull, family)
        detail = "hull spanned by a-family" if ok else "hull differs from a-family"
        checks.append(HullCheck(d, ok, tuple(hull), tuple(family), detail))
    r120 = block_scheme_tradeoff(SchemeVector((1, 2, 0)), p)
    tau_ref = (3.0 * p - p**3) / 3.0
    lam_ref = -math.log((1.0 - p) ** 2 * (1.0 + p)) / 3.0
    err = max(abs(r120.tau - tau_ref), abs(r120.lam - lam_ref))
    return OptimalityReport(p, tuple(checks), err)
