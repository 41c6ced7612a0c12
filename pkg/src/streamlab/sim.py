"""Packet-level Monte Carlo simulation of point-to-point streaming.

Transmitter schemes: immediate-feedback retransmission (ARQ), no-feedback
full-rank coding at a fixed injection rate, block schemes under d-slot
feedback, and per-block randomized mixtures.  Block receivers run exact
finite-field elimination and keep undecoded combinations across blocks;
feedback reaches the transmitter only at block boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decoder import ReceiverState, prefix_decodable_count, seen_positions, FIELD_PRIME
from .model import SchemeVector, as_scheme
from .rng import generator

_TRIAL_SLOT_CAP = 500_000
_MIN_FIT_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# scheme specifications


@dataclass(frozen=True)
class Arq:
    """Retransmit the lowest-index undelivered packet every slot (d = 1)."""


@dataclass(frozen=True)
class FullRank:
    """No feedback; slot n carries a combination of packets 1..ceil(rate*n)."""

    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"rate must lie strictly in (0, 1), got {self.rate}")


@dataclass(frozen=True)
class Block:
    """A time-invariant block scheme under d-slot block-wise feedback."""

    x: SchemeVector

    def __post_init__(self):
        object.__setattr__(self, "x", as_scheme(self.x))


@dataclass(frozen=True)
class Mixture:
    """Per block, draw scheme i with weight i; all components share d."""

    components: tuple[SchemeVector, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(as_scheme(x) for x in self.components)
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", ws)
        if not comps or len(comps) != len(ws):
            raise ValueError("one weight per component required")
        if any(w < 0 for w in ws) or abs(math.fsum(ws) - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        if len({c.d for c in comps}) != 1:
            raise ValueError("mixture components must share the block length")


Scheme = Arq | FullRank | Block | Mixture


def parse_scheme_spec(text: str, rate: float | None = None) -> Scheme:
    """CLI-facing scheme parser: 'arq', 'fullrank' (with rate), or '[1,0,3,0]'."""
    t = text.strip().lower()
    if t == "arq":
        return Arq()
    if t == "fullrank":
        if rate is None:
            raise ValueError("fullrank scheme needs an injection rate")
        return FullRank(rate)
    return Block(SchemeVector.parse(text))


def _scheme_d(scheme: Scheme) -> float:
    if isinstance(scheme, Arq):
        return 1
    if isinstance(scheme, FullRank):
        return math.inf
    if isinstance(scheme, Block):
        return scheme.x.d
    return scheme.components[0].d


@dataclass(frozen=True)
class SimConfig:
    """One point-to-point experiment: scheme, channel, sizes, master seed.

    ``n_slots`` drives the long throughput run; ``trials`` is the number of
    restarted first-delivery samples collected for the exponent fit.
    ``d`` may be omitted and is inferred from the scheme (math.inf marks the
    no-feedback case).
    """

    scheme: Scheme
    p: float
    n_slots: int
    trials: int = 0
    seed: int = 0
    d: float | None = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"success probability must lie strictly in (0, 1), got {self.p}")
        if self.n_slots < 1:
            raise ValueError("n_slots must be at least 1")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        inferred = _scheme_d(self.scheme)
        if self.d is None:
            object.__setattr__(self, "d", inferred)
        elif self.d != inferred:
            raise ValueError(f"d={self.d} contradicts the scheme's feedback period {inferred}")
        if isinstance(self.scheme, (Block, Mixture)) and self.n_slots % int(inferred):
            raise ValueError("n_slots must be a multiple of the block length")


@dataclass(frozen=True)
class SimMetrics:
    """Measured throughput and inter-delivery statistics for one config."""

    config: SimConfig
    delivered_total: int
    tau_hat: float
    tau_ci: float
    inter_delivery_times: np.ndarray
    t1_samples: np.ndarray | None
    lambda_hat: float | None
    lambda_ci: float | None
    discrepancy_freq: float | None = None

    def to_json_dict(self) -> dict:
        cfg = self.config
        return {
            "scheme": _scheme_label(cfg.scheme),
            "p": cfg.p,
            "d": None if cfg.d == math.inf else cfg.d,
            "n_slots": cfg.n_slots,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "delivered_total": self.delivered_total,
            "tau_hat": self.tau_hat,
            "tau_ci": self.tau_ci,
            "lambda_hat": self.lambda_hat,
            "lambda_ci": self.lambda_ci,
            "n_samples": 0 if self.t1_samples is None else int(self.t1_samples.size),
            "discrepancy_freq": self.discrepancy_freq,
        }


def _scheme_label(scheme: Scheme) -> str:
    if isinstance(scheme, Arq):
        return "arq"
    if isinstance(scheme, FullRank):
        return f"fullrank r={scheme.rate:.12g}"
    if isinstance(scheme, Block):
        return str(scheme.x)
    parts = "+".join(f"{w:.12g}*{x}" for x, w in zip(scheme.components, scheme.weights))
    return f"mixture {parts}"


# ---------------------------------------------------------------------------
# buffered draws


class _Bits:
    __slots__ = ("rng", "p", "chunk", "buf", "pos")

    def __init__(self, rng: np.random.Generator, p: float, chunk: int = 1 << 16):
        self.rng = rng
        self.p = p
        self.chunk = chunk
        self.buf = (rng.random(chunk) < p).tolist()
        self.pos = 0

    def take(self) -> bool:
        pos = self.pos
        if pos >= self.chunk:
            self.buf = (self.rng.random(self.chunk) < self.p).tolist()
            pos = 0
        self.pos = pos + 1
        return self.buf[pos]


class _Coeffs:
    __slots__ = ("rng", "chunk", "buf", "pos")

    def __init__(self, rng: np.random.Generator, chunk: int = 1 << 16):
        self.rng = rng
        self.chunk = chunk
        self.buf = rng.integers(1, FIELD_PRIME, size=chunk, dtype=np.int64).tolist()
        self.pos = 0

    def take(self, k: int) -> tuple[int, ...]:
        pos = self.pos
        if pos + k > self.chunk:
            self.buf = self.rng.integers(1, FIELD_PRIME, size=self.chunk, dtype=np.int64).tolist()
            pos = 0
        self.pos = pos + k
        return tuple(self.buf[pos : pos + k])


# ---------------------------------------------------------------------------
# block transmitter/receiver loops


class _BlockRun:
    """Shared machinery for block-scheme runs with boundary-only feedback."""

    __slots__ = ("widths_by_scheme", "maxw", "bits", "coeffs", "mix", "cumw",
                 "state", "unseen", "next_new", "slot", "block_widths")

    def __init__(self, schemes: Sequence[SchemeVector], weights: Sequence[float] | None,
                 p: float, seed: int, key: int):
        self.widths_by_scheme = [s.widths() for s in schemes]
        self.maxw = max(w[-1] for w in self.widths_by_scheme)
        self.bits = _Bits(generator(seed, key, 0), p)
        self.coeffs = _Coeffs(generator(seed, key, 1))
        self.mix = generator(seed, key, 2) if weights is not None else None
        self.cumw = None if weights is None else np.cumsum(weights)
        self.reset()

    def reset(self):
        self.state = ReceiverState()
        self.unseen: list[int] = []
        self.next_new = 1
        self.slot = 0
        self.block_widths: list[int] = []

    def _pick_widths(self) -> tuple[int, ...]:
        if self.mix is None:
            return self.widths_by_scheme[0]
        idx = int(np.searchsorted(self.cumw, self.mix.random(), side="right"))
        return self.widths_by_scheme[min(idx, len(self.widths_by_scheme) - 1)]

    def run_block(self, on_delivery) -> None:
        """Simulate one block; call ``on_delivery(slot, burst)`` per event."""
        st = self.state
        if st.seen:
            self.unseen = [u for u in self.unseen if u not in st.seen]
            st.seen.clear()
        while len(self.unseen) < self.maxw:
            self.unseen.append(self.next_new)
            self.next_new += 1
        widths = self._pick_widths()
        received = self.block_widths
        received.clear()
        for w in widths:
            self.slot += 1
            if self.bits.take():
                got = st.ingest_raw(self.unseen[:w], self.coeffs.take(w))
                received.append(w)
                if got and on_delivery is not None:
                    on_delivery(self.slot, got)
        for pos in seen_positions(received):
            st.seen.add(self.unseen[pos - 1])


def _block_long_run(schemes, weights, p, n_slots, seed):
    d = schemes[0].d
    run = _BlockRun(schemes, weights, p, seed, 0)
    events: list[int] = []

    def on_delivery(slot, burst):
        events.append(slot)

    for _ in range(n_slots // d):
        run.run_block(on_delivery)
    return run.state.delivered_prefix, np.asarray(events, dtype=np.int64)


def _block_restart_times(schemes, weights, p, trials, seed, ks):
    """Restarted runs: for each trial, slots at which the prefix reaches each k."""
    ks = sorted(ks)
    out = {k: np.empty(trials, dtype=np.int64) for k in ks}
    run = _BlockRun(schemes, weights, p, seed, 1)
    for t in range(trials):
        run.reset()
        pending = list(ks)

        def on_delivery(slot, burst, pending=pending, t=t):
            while pending and run.state.delivered_prefix >= pending[0]:
                out[pending.pop(0)][t] = slot

        while pending:
            run.run_block(on_delivery)
            if run.slot > _TRIAL_SLOT_CAP:
                raise RuntimeError(f"trial exceeded {_TRIAL_SLOT_CAP} slots without delivery")
    return out


# ---------------------------------------------------------------------------
# ARQ and full-rank runners


def _arq_long_run(p, n_slots, seed):
    bits = generator(seed, 0, 0).random(n_slots) < p
    events = np.nonzero(bits)[0].astype(np.int64) + 1
    return int(events.size), events


def _first_success_times(p, trials, seed, k: int = 1):
    """Slots of the k-th success in restarted Bernoulli streams (exact)."""
    rng = generator(seed, 1, k)
    width = max(64, int(k / p + 60.0 / -math.log1p(-p)))
    times = np.zeros(trials, dtype=np.int64)
    todo = np.arange(trials)
    offset = 0
    need = np.full(trials, k, dtype=np.int64)
    while todo.size:
        block = rng.random((todo.size, width)) < p
        counts = block.cumsum(axis=1)
        found = counts >= need[todo, None]
        hit = found.any(axis=1)
        idx = found.argmax(axis=1)
        times[todo[hit]] = offset + idx[hit] + 1
        need[todo[~hit]] -= counts[~hit, -1]
        todo = todo[~hit]
        offset += width
    return times


def _fullrank_v(rate: float, n: int) -> int:
    return math.ceil(rate * n - 1e-12)


def _fullrank_long_run(rate, p, n_slots, seed):
    bits = generator(seed, 0, 0).random(n_slots) < p
    recv = np.nonzero(bits)[0] + 1
    rank = 0
    prefix = 0
    events: list[int] = []
    for n in recv.tolist():
        w = _fullrank_v(rate, n)
        if w >= rank + 1:
            rank += 1
        if rank == w and w > prefix:
            prefix = w
            events.append(n)
    return prefix, np.asarray(events, dtype=np.int64)


def _fullrank_restart_times(rate, p, trials, seed, ks):
    ks = sorted(ks)
    out = {k: np.empty(trials, dtype=np.int64) for k in ks}
    bits = _Bits(generator(seed, 1, 0), p)
    for t in range(trials):
        rank = 0
        prefix = 0
        n = 0
        pending = list(ks)
        while pending:
            n += 1
            if n > _TRIAL_SLOT_CAP:
                raise RuntimeError(f"trial exceeded {_TRIAL_SLOT_CAP} slots without delivery")
            if bits.take():
                w = _fullrank_v(rate, n)
                if w >= rank + 1:
                    rank += 1
                if rank == w and w > prefix:
                    prefix = w
                    while pending and prefix >= pending[0]:
                        out[pending.pop(0)][t] = n
    return out


def _restart_times(config: SimConfig, trials: int, ks: Sequence[int]):
    scheme = config.scheme
    if isinstance(scheme, Arq):
        return {k: _first_success_times(config.p, trials, config.seed, k) for k in ks}
    if isinstance(scheme, FullRank):
        return _fullrank_restart_times(scheme.rate, config.p, trials, config.seed, ks)
    if isinstance(scheme, Block):
        return _block_restart_times([scheme.x], None, config.p, trials, config.seed, ks)
    return _block_restart_times(
        list(scheme.components), list(scheme.weights), config.p, trials, config.seed, ks
    )


# ---------------------------------------------------------------------------
# public operations


def run_p2p(config: SimConfig) -> SimMetrics:
    """Run the long throughput simulation plus restarted first-delivery trials.

    The throughput run records every in-order delivery event; restarted
    trials (``config.trials`` of them) sample the first inter-delivery time
    from an empty state, which feeds the exponent fit when at least 10^4
    samples are available.  Bit-identical output for identical configs.
    """
    scheme = config.scheme
    if isinstance(scheme, Arq):
        delivered, events = _arq_long_run(config.p, config.n_slots, config.seed)
    elif isinstance(scheme, FullRank):
        delivered, events = _fullrank_long_run(scheme.rate, config.p, config.n_slots, config.seed)
    elif isinstance(scheme, Block):
        delivered, events = _block_long_run([scheme.x], None, config.p, config.n_slots, config.seed)
    else:
        delivered, events = _block_long_run(
            list(scheme.components), list(scheme.weights), config.p, config.n_slots, config.seed
        )
    inter = np.diff(events, prepend=0).astype(np.int64) if events.size else np.empty(0, np.int64)
    tau_hat = delivered / config.n_slots
    tau_ci = 4.0 * math.sqrt(max(tau_hat * (1.0 - tau_hat), 1e-12) / config.n_slots)

    t1 = lam = ci = None
    if config.trials > 0:
        t1 = _restart_times(config, config.trials, [1])[1]
        if t1.size >= _MIN_FIT_SAMPLES:
            lam, ci = estimate_exponent(t1, seed=config.seed)
    return SimMetrics(
        config=config,
        delivered_total=delivered,
        tau_hat=tau_hat,
        tau_ci=tau_ci,
        inter_delivery_times=inter,
        t1_samples=t1,
        lambda_hat=lam,
        lambda_ci=ci,
    )


def estimate_exponent(
    samples: Sequence[int],
    window: tuple[float, float] = (0.5, 0.99),
    n_boot: int = 200,
    seed: int = 0,
) -> tuple[float, float]:
    """Least-squares tail-exponent fit of ln Pr(T > n) between window quantiles.

    Returns ``(lambda_hat, ci_halfwidth)`` where the halfwidth comes from a
    200-resample multinomial bootstrap over the empirical distribution.
    """
    s = np.asarray(samples, dtype=np.int64)
    if s.size < _MIN_FIT_SAMPLES:
        raise ValueError(f"need at least {_MIN_FIT_SAMPLES} samples, got {s.size}")
    if s.min() == s.max():
        raise ValueError("degenerate samples: all values equal")
    lo_q, hi_q = window
    if not 0.0 <= lo_q < hi_q <= 1.0:
        raise ValueError(f"invalid quantile window {window}")
    lo = float(np.quantile(s, lo_q))
    hi = float(np.quantile(s, hi_q))
    grid = np.arange(math.floor(lo), math.ceil(hi) + 1, dtype=np.int64)
    vals, counts = np.unique(s, return_counts=True)
    csum = np.concatenate([[0], np.cumsum(counts)])

    def fit(cum) -> float:
        surv = 1.0 - cum[np.searchsorted(vals, grid, side="right")] / s.size
        mask = surv > 0
        if mask.sum() < 3:
            return math.nan
        return -np.polyfit(grid[mask], np.log(surv[mask]), 1)[0]

    lam = fit(csum)
    if math.isnan(lam):
        raise ValueError("window too narrow for a tail fit")
    rng = generator(seed, 9)
    probs = counts / s.size
    boots = np.empty(n_boot)
    for b in range(n_boot):
        boots[b] = fit(np.concatenate([[0], np.cumsum(rng.multinomial(s.size, probs))]))
    lo_b, hi_b = np.nanpercentile(boots, [2.5, 97.5])
    return float(lam), float((hi_b - lo_b) / 2.0)


@dataclass(frozen=True)
class SmoothnessEntry:
    k: int
    gamma_hat: float
    gamma_ci: float
    ratio: float


@dataclass(frozen=True)
class SmoothnessReport:
    """Decay of per-packet in-order delay versus the inter-delivery exponent."""

    config: SimConfig
    lambda_hat: float
    lambda_ci: float
    entries: tuple[SmoothnessEntry, ...]


def smoothness_vs_interdelivery(
    config: SimConfig,
    k_list: Sequence[int],
    window: tuple[float, float] = (0.5, 0.99),
    dk_window: tuple[float, float] | None = None,
) -> SmoothnessReport:
    """Compare the tail decay of packet-k delays with the first-delivery fit.

    For each requested k the in-order delay of packet k is sampled over
    restarted trials and its survival tail fitted over ``dk_window``
    (further out than the first-delivery window by default, past the bulk
    of the k-fold delay distribution).
    """
    if max(k_list) > 50:
        raise ValueError("k values above 50 need more trials than this harness runs")
    if config.trials < _MIN_FIT_SAMPLES:
        raise ValueError("need at least 1e4 trials for tail fits")
    t1 = _restart_times(config, config.trials, [1])[1]
    lam, lam_ci = estimate_exponent(t1, window=window, seed=config.seed)
    dk_window = dk_window or (0.9, 0.999)
    times = _restart_times(config, config.trials, sorted(set(k_list)))
    entries = []
    for k in sorted(set(k_list)):
        g, gci = estimate_exponent(times[k], window=dk_window, seed=config.seed)
        entries.append(SmoothnessEntry(k, g, gci, g / lam))
    return SmoothnessReport(config, lam, lam_ci, tuple(entries))


@dataclass(frozen=True)
class ProbeReport:
    """Renewal-model check at first-delivery events.

    ``freq_violation`` counts trials whose first delivery was not decodable
    from the current block's receptions alone (the per-block model's own
    event); ``freq_bank_assist`` counts trials where buffered combinations
    from earlier blocks enlarged the first delivery burst.
    """

    scheme: SchemeVector
    p: float
    trials: int
    freq_violation: float
    freq_bank_assist: float
    mean_t1: float


def renewal_discrepancy_probe(
    x: "SchemeVector | str | Sequence[int]", p: float, trials: int, seed: int = 0
) -> ProbeReport:
    """Measure how often first deliveries stray from the per-block model."""
    sv = as_scheme(x)
    run = _BlockRun([sv], None, p, seed, 2)
    violations = 0
    assists = 0
    t1_total = 0
    for _ in range(trials):
        run.reset()
        st = run.state
        done = False
        while not done:
            decodable_before = 0
            decoded_before = len(st.decoded)
            base_widths = run.block_widths

            # run one block manually to inspect per-slot decodability
            if st.seen:
                run.unseen = [u for u in run.unseen if u not in st.seen]
                st.seen.clear()
            while len(run.unseen) < run.maxw:
                run.unseen.append(run.next_new)
                run.next_new += 1
            widths = run.widths_by_scheme[0]
            received: list[int] = []
            for w in widths:
                run.slot += 1
                if run.bits.take():
                    decoded_before = len(st.decoded)
                    got = st.ingest_raw(run.unseen[:w], run.coeffs.take(w))
                    received.append(w)
                    if got:
                        m_star = prefix_decodable_count(received)
                        if m_star == 0:
                            violations += 1
                        fresh = len(st.decoded) - decoded_before
                        if fresh > m_star - decodable_before:
                            assists += 1
                        t1_total += run.slot
                        done = True
                        break
                    decodable_before = prefix_decodable_count(received)
            if not done:
                for pos in seen_positions(received):
                    st.seen.add(run.unseen[pos - 1])
            if run.slot > _TRIAL_SLOT_CAP:
                raise RuntimeError("probe trial ran too long")
    return ProbeReport(
        scheme=sv,
        p=p,
        trials=trials,
        freq_violation=violations / trials,
        freq_bank_assist=assists / trials,
        mean_t1=t1_total / trials,
    )
