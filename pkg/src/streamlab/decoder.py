"""Decoding of prefix-supported linear combinations.

Two routes are provided and must agree: fast combinatorial width rules for
generic coefficients, and an exact Gaussian-elimination receiver over the
prime field GF(2^31 - 1).  The width of a combination is its support size
over a common unseen-packet ordering; supports are nested prefixes of that
ordering, so rank questions reduce to bipartite matching on widths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import CodedCombo

FIELD_PRIME = 2**31 - 1


class DependentComboError(RuntimeError):
    """A structurally independent combination reduced to zero.

    With uniform nonzero coefficients over GF(2^31 - 1) this happens with
    probability below 2^-30 per combination; it is treated as a defect
    signal rather than silently absorbed.
    """


def prefix_rank(widths: Iterable[int]) -> int:
    """Generic rank of prefix-supported combinations with the given widths.

    Greedy pivot matching on ascending widths: a combination of width ``w``
    contributes a new pivot iff ``w >= rank + 1``.
    """
    r = 0
    for w in sorted(widths):
        if w >= r + 1:
            r += 1
    return r


def prefix_decodable_count(widths: Iterable[int]) -> int:
    """Largest m such that packets 1..m of the unseen ordering are determined.

    Coordinates 1..m are all determined exactly when the row space meets the
    span of the first m coordinates in full dimension m.  By rank-nullity
    that intersection has dimension ``rank(all) - rank(projections beyond
    m)``, and the projection of a width-w > m combination is again
    prefix-supported with width ``w - m``.
    """
    ws = sorted(widths)
    if not ws:
        return 0
    total = prefix_rank(ws)
    for m in range(ws[-1], 0, -1):
        if total - prefix_rank([w - m for w in ws if w > m]) == m:
            return m
    return 0


def seen_positions(widths: Iterable[int]) -> list[int]:
    """Positions of the unseen ordering covered by the received combinations.

    Position m is covered when the received span holds a vector supported on
    packets 1..m with a nonzero m-th coordinate, i.e. when the dimension of
    the span's intersection with the first m coordinates grows at m.  The
    sender needs no further combinations introducing a covered position:
    it decodes once everything below it does.  Exactly ``prefix_rank``
    positions are covered, which keeps per-block innovation accounting
    consistent when covered positions are dropped from the next block.
    """
    ws = sorted(widths)
    if not ws:
        return []
    total = prefix_rank(ws)
    out = []
    prev = 0
    for m in range(1, ws[-1] + 1):
        cur = total - prefix_rank([w - m for w in ws if w > m])
        if cur > prev:
            out.append(m)
        prev = cur
    return out


# ---------------------------------------------------------------------------
# exact elimination over GF(2^31 - 1)


def _inv(a: int) -> int:
    return pow(a, FIELD_PRIME - 2, FIELD_PRIME)


def _reduce(row: dict[int, int], pivots: dict[int, dict[int, int]]) -> dict[int, int]:
    """Eliminate every pivot coordinate present in ``row`` (in place)."""
    while True:
        hit = -1
        for j in row:
            if j in pivots:
                hit = j
                break
        if hit < 0:
            return row
        f = row.pop(hit)
        for j, c in pivots[hit].items():
            if j == hit:
                continue
            nv = (row.get(j, 0) - f * c) % FIELD_PRIME
            if nv:
                row[j] = nv
            else:
                row.pop(j, None)


def _insert(row: dict[int, int], pivots: dict[int, dict[int, int]]) -> list[int]:
    """Insert a reduced nonzero row, keep full RREF, return new singleton pivots."""
    p = min(row)
    inv = _inv(row[p])
    row = {j: (c * inv) % FIELD_PRIME for j, c in row.items()}
    singles = []
    for q, qrow in pivots.items():
        f = qrow.get(p)
        if f:
            for j, c in row.items():
                nv = (qrow.get(j, 0) - f * c) % FIELD_PRIME
                if nv:
                    qrow[j] = nv
                else:
                    qrow.pop(j, None)
            if len(qrow) == 1:
                singles.append(q)
    pivots[p] = row
    if len(row) == 1:
        singles.append(p)
    return singles


def generic_rank(
    combos: Sequence[CodedCombo], unknowns: Iterable[int] | None = None
) -> tuple[int, frozenset[int]]:
    """Rank and determined coordinates of a set of coded combinations.

    Runs exact Gaussian elimination over GF(2^31 - 1).  A coordinate is
    determined when its value is pinned by the system, i.e. it ends up as a
    singleton row of the reduced echelon form.
    """
    allowed = None if unknowns is None else set(unknowns)
    pivots: dict[int, dict[int, int]] = {}
    for combo in combos:
        if allowed is not None and not set(combo.support) <= allowed:
            raise ValueError("combination support outside the unknown set")
        row = _reduce(dict(zip(combo.support, combo.coeffs)), pivots)
        if row:
            _insert(row, pivots)
    determined = frozenset(p for p, row in pivots.items() if len(row) == 1)
    return len(pivots), determined


class ReceiverState:
    """Exact streaming receiver: buffers undecoded combinations across blocks.

    Owned by a single simulation trial; methods mutate in place.  ``seen``
    tracks reception-time seen marks (the feedback the transmitter reads at
    block boundaries), ``decoded`` the determined packet indices, and
    ``delivered_prefix`` the largest m with packets 1..m decoded.
    """

    __slots__ = ("decoded", "delivered_prefix", "rows", "seen")

    def __init__(self):
        self.decoded: set[int] = set()
        self.delivered_prefix: int = 0
        self.rows: dict[int, dict[int, int]] = {}
        self.seen: set[int] = set()

    def ingest_raw(self, support: Sequence[int], coeffs: Sequence[int]) -> int:
        """Absorb one received combination; return packets delivered in order."""
        row = {i: c for i, c in zip(support, coeffs) if i not in self.decoded}
        if not row:
            return 0
        _reduce(row, self.rows)
        if not row:
            raise DependentComboError(
                f"combination over {tuple(support)} reduced to zero; "
                "independence was structurally guaranteed"
            )
        for p in _insert(row, self.rows):
            del self.rows[p]
            self.decoded.add(p)
        before = self.delivered_prefix
        while self.delivered_prefix + 1 in self.decoded:
            self.delivered_prefix += 1
        return self.delivered_prefix - before

    def drop_buffer(self) -> None:
        """Forget undecoded combinations (per-block renewal semantics)."""
        self.rows.clear()


def receiver_ingest(
    state: ReceiverState, combo: CodedCombo, received: bool
) -> tuple[ReceiverState, int]:
    """Feed one slot into the receiver; erased slots change nothing.

    Returns the (updated) state and the number of packets delivered in order
    by this slot.
    """
    if not received:
        return state, 0
    delivered = state.ingest_raw(combo.support, combo.coeffs)
    return state, delivered


def mark_seen(state: ReceiverState, combo: CodedCombo) -> set[int]:
    """Mark the highest-index packet of a received combination as seen."""
    state.seen.add(combo.support[-1])
    return state.seen
