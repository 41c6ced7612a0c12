"""Two-user coded multicast with immediate feedback.

The source transmits, in every slot, one of the two required packets or
their XOR (priority-(q1, q2) rule).  In-order decoding progress follows a
two-sided Markov chain over the gap difference between the users, with
"advantage" side states in which the lagger already holds the leader's
required packet and an XOR serves both.  This module provides the exact
packet-level simulator, the chain's closed-form stationary solution and
spectral delay exponents, and independent numeric oracles (truncated-chain
solve, absorbing-matrix eigenvalues) used to verify the closed forms.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .model import TwoUserParams
from .rng import generator


class StabilityError(ValueError):
    """The gap chain is not positive recurrent for these parameters."""


class ModelViolationError(AssertionError):
    """A simulated transition left the edge set of the decoding chain."""


# ---------------------------------------------------------------------------
# code structure (what the source sends)


@dataclass(frozen=True)
class Transmission:
    """One slot's payload: a single required packet or an XOR of the two."""

    kind: str  # "packet" | "xor"
    packets: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("packet", "xor"):
            raise ValueError(f"kind must be 'packet' or 'xor', got {self.kind!r}")
        if self.kind == "packet" and len(self.packets) != 1:
            raise ValueError("a packet transmission carries exactly one index")
        if self.kind == "xor" and len(self.packets) != 2:
            raise ValueError("an xor transmission carries exactly two indices")


@dataclass(frozen=True)
class TwoUserState:
    """Decoding state of both users.

    ``prefix1``/``prefix2`` are delivered prefixes; ``extra1``/``extra2``
    hold decoded packets beyond the prefix.  Required indices, the chain
    coordinate (gap difference) and the advantage flag are all derived from
    the decoded sets.
    """

    prefix1: int = 0
    prefix2: int = 0
    extra1: frozenset[int] = frozenset()
    extra2: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("extra1", "extra2"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.prefix1 + 1 in self.extra1 or self.prefix2 + 1 in self.extra2:
            raise ValueError("extras must lie beyond the required packet")

    @property
    def r1(self) -> int:
        return self.prefix1 + 1

    @property
    def r2(self) -> int:
        return self.prefix2 + 1

    @property
    def r_max(self) -> int:
        return max(self.r1, self.r2)

    def gaps(self, user: int) -> int:
        """Packets below r_max the user has not decoded."""
        prefix = self.prefix1 if user == 1 else self.prefix2
        extra = self.extra1 if user == 1 else self.extra2
        r_max = self.r_max
        return (r_max - 1 - prefix) - sum(1 for i in extra if i < r_max)

    @property
    def chain_coordinate(self) -> int:
        """gaps(U2) - gaps(U1); positive when U1 leads."""
        return self.gaps(2) - self.gaps(1)

    @property
    def advantage(self) -> bool:
        """True when the lagger has decoded the leader's required packet."""
        if self.r1 == self.r2:
            return False
        if self.r1 > self.r2:
            return self.r1 in self.extra2
        return self.r2 in self.extra1


def _decide(tie: bool, adv: bool, q_lagger: float, u: float) -> int:
    """Transmission rule: 0 = common packet, 1 = r_min, 2 = r_max, 3 = xor."""
    if tie:
        return 0
    if adv:
        return 3
    return 1 if u < q_lagger else 2


def choose_transmission(state: TwoUserState, q1: float, q2: float, u: float) -> Transmission:
    """Pick the slot's transmission under the priority-(q1, q2) rule.

    With distinct required packets, the lagger's packet is sent with its
    priority probability unless the lagger already holds the leader's
    required packet, in which case the XOR serves both users at once.
    ``u`` is the uniform draw resolving the priority coin.
    """
    r1, r2 = state.r1, state.r2
    if r1 == r2:
        return Transmission("packet", (r1,))
    r_min, r_max = min(r1, r2), max(r1, r2)
    q_lagger = q1 if r1 < r2 else q2
    code = _decide(False, state.advantage, q_lagger, u)
    if code == 3:
        return Transmission("xor", (r_min, r_max))
    return Transmission("packet", (r_min,) if code == 1 else (r_max,))


# ---------------------------------------------------------------------------
# chain edge table (used to verify the simulator and to build the oracle)


def chain_step(i: int, adv: bool, kind: int, e1: bool, e2: bool) -> tuple[int, bool]:
    """Next chain state given the transmission kind and the erasure pattern.

    ``kind`` uses the :func:`_decide` encoding.  States are (i, adv) with
    i = gaps(U2) - gaps(U1); advantage states exist only for |i| >= 1.
    """
    if i == 0:
        if kind != 0:
            raise ModelViolationError("state 0 must transmit the common required packet")
        if e1 and e2:
            return 0, False
        if e1:
            return 1, False
        if e2:
            return -1, False
        return 0, False
    lead = 1 if i > 0 else -1  # +1: U1 leads, U2 lags
    m = abs(i)
    if adv:
        if kind != 3:
            raise ModelViolationError("advantage states must transmit the xor")
        e_lead = e1 if lead > 0 else e2
        e_lag = e2 if lead > 0 else e1
        if e_lead and e_lag:
            return lead * (m - 1), False
        if e_lead:
            return lead * m, False
        if e_lag:
            if m == 1:
                return -lead, False
            return lead * (m - 1), True
        return lead * m, True
    if kind == 1:  # lagger's required packet
        e_lag = e2 if lead > 0 else e1
        if e_lag:
            return lead * (m - 1), False
        return lead * m, False
    if kind == 2:  # leader's required packet
        e_lead = e1 if lead > 0 else e2
        e_lag = e2 if lead > 0 else e1
        if e_lead and e_lag:
            return lead * m, False
        if e_lead:
            return lead * (m + 1), False
        if e_lag:
            return lead * m, True
        return lead * m, False
    raise ModelViolationError(f"transmission kind {kind} invalid outside state 0")


def _kind_probs(i: int, adv: bool, params: TwoUserParams) -> list[tuple[int, float]]:
    if i == 0:
        return [(0, 1.0)]
    if adv:
        return [(3, 1.0)]
    q = params.q2 if i > 0 else params.q1
    out = []
    if q > 0.0:
        out.append((1, q))
    if q < 1.0:
        out.append((2, 1.0 - q))
    return out


def truncated_stationary(
    params: TwoUserParams, n_states: int = 200
) -> tuple[list[tuple[int, bool]], np.ndarray]:
    """Numeric stationary distribution of the chain truncated to |i| <= n_states.

    Outward transitions at the boundary are redirected to self-loops; for
    geometrically decaying chains the truncation error is a tail mass of
    order rho**n_states.  Serves as an independent oracle for the closed
    forms.
    """
    states: list[tuple[int, bool]] = [(0, False)]
    for m in range(1, n_states + 1):
        states.append((m, False))
        states.append((-m, False))
        states.append((m, True))
        states.append((-m, True))
    index = {s: k for k, s in enumerate(states)}
    n = len(states)
    a, b, c, dd = params.a, params.b, params.c, params.dd
    pat = [(True, True, a), (True, False, b), (False, True, c), (False, False, dd)]
    P = np.zeros((n, n))
    for (i, adv), k in index.items():
        for kind, kp in _kind_probs(i, adv, params):
            for e1, e2, ep in pat:
                j, jadv = chain_step(i, adv, kind, e1, e2)
                tgt = index.get((j, jadv), k)  # boundary overflow -> self
                P[k, tgt] += kp * ep
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(A, rhs)
    return states, pi


# ---------------------------------------------------------------------------
# closed-form stationary solution and delay exponents


def _tail_root(a3: float, a2: float, a1: float, a0: float) -> float:
    """Smaller positive root of a3 x^3 + a2 x^2 + a1 x + a0 besides the root 1.

    The cubic always has 1 as a root (the coefficients sum to zero); the
    remaining quadratic is solved in a cancellation-free form that also
    covers the degenerate a3 = 0 case, where the recurrence drops an order.
    """
    ssum = a3 + a2 + a1 + a0
    if abs(ssum) > 1e-9:
        raise ValueError(f"characteristic coefficients must sum to 0, got {ssum}")
    B = a3 + a2
    C = a3 + a2 + a1  # equals -a0
    disc = B * B - 4.0 * a3 * C
    if disc < 0.0:
        raise ValueError(f"negative discriminant {disc}; invalid chain parameters")
    denom = -B + math.sqrt(disc)
    if denom <= 0.0:
        raise ValueError("root bracketing failed; invalid chain parameters")
    return 2.0 * C / denom


def _alphas(params: TwoUserParams) -> tuple[float, float, float, float]:
    a, b, c = params.a, params.b, params.c
    q2 = params.q2
    dbar = params.dbar
    a3 = c * (a + c) * q2
    a2 = -c * dbar + b * c * q2 - (a + c) * q2 * dbar
    a1 = dbar * (dbar - b * q2 - a * (1.0 - q2))
    a0 = -dbar * b * (1.0 - q2)
    return a3, a2, a1, a0


def _betas(params: TwoUserParams) -> tuple[float, float, float, float]:
    # mirror side: b and c interchanged, q2 -> q1
    mirrored = TwoUserParams(params.p2, params.p1, params.q2, params.q1)
    return _alphas(mirrored)


@dataclass(frozen=True)
class RootInfo:
    """Geometric tail ratios of the two chain sides and their stability."""

    params: TwoUserParams
    alphas: tuple[float, float, float, float]
    betas: tuple[float, float, float, float]
    rho: float
    mu: float

    @property
    def stable_right(self) -> bool:
        return self.rho < 1.0

    @property
    def stable_left(self) -> bool:
        return self.mu < 1.0


def priority_q_roots(params: TwoUserParams) -> RootInfo:
    """Tail ratios rho (right side, U2 lagging) and mu (left side, U1 lagging).

    Each side is stable exactly when its ratio is below 1.  With q = 0 on a
    side the characteristic cubic degenerates to a quadratic and the ratio
    reduces to the one-way value b/c (or c/b).
    """
    alphas = _alphas(params)
    betas = _betas(params)
    return RootInfo(params, alphas, betas, _tail_root(*alphas), _tail_root(*betas))


def xi2_user2(params: TwoUserParams) -> float:
    """Second eigenvalue of user 2's absorbing delay chain, in closed form."""
    a, b, c, dd = params.a, params.b, params.c, params.dd
    q1, q2 = params.q1, params.q2
    left = dd + q1 * c + (1.0 - q1) * b
    s = 2.0 * dd + (1.0 - q2) * a + b
    inner = s * s - 4.0 * (dd * (b + dd) + (1.0 - q2) * (dd * a - b * c))
    if inner < 0.0:
        raise ValueError(f"negative discriminant {inner} in delay eigenvalue")
    return max(left, 0.5 * (s + math.sqrt(inner)))


def xi2_user1(params: TwoUserParams) -> float:
    """Second eigenvalue of user 1's absorbing delay chain (mirrored roles)."""
    return xi2_user2(TwoUserParams(params.p2, params.p1, params.q2, params.q1))


def fixed_priority_absorbing_matrix(params: TwoUserParams) -> np.ndarray:
    """5x5 absorbing chain for the secondary user's inter-delivery time.

    States: 0, fused lagging states I, fused advantage states I', -1, and
    the absorbing delivery state F, under full priority to user 1.
    """
    a, b, c, dd = params.a, params.b, params.c, params.dd
    return np.array(
        [
            [dd, b, 0.0, 0.0, a + c],
            [0.0, a + b + dd, c, 0.0, 0.0],
            [0.0, b, dd, 0.0, a + c],
            [a + b, 0.0, 0.0, c + dd, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )


def priority_absorbing_matrix(params: TwoUserParams, user: int = 2) -> np.ndarray:
    """5x5 absorbing delay chain for one user under priority-(q1, q2) coding."""
    if user == 1:
        return priority_absorbing_matrix(
            TwoUserParams(params.p2, params.p1, params.q2, params.q1), user=2
        )
    a, b, c, dd = params.a, params.b, params.c, params.dd
    q1, q2 = params.q1, params.q2
    q1b, q2b = 1.0 - q1, 1.0 - q2
    return np.array(
        [
            [dd, b, 0.0, 0.0, a + c],
            [0.0, q2b * a + b + dd, c * q2b, 0.0, q2 * (a + c)],
            [0.0, b, dd, 0.0, a + c],
            [q1 * (a + b), 0.0, 0.0, dd + q1 * c + q1b * b, q1b * (a + c)],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )


@dataclass(frozen=True)
class ChainSolution:
    """Closed-form stationary distribution and per-user trade-offs.

    The stationary mass is geometric on each side: pi_i = pi1 * rho**(i-1)
    for i >= 1 and mirrored with mu on the left; advantage states carry a
    constant per-side ratio.  Throughputs are None when the analysis does
    not apply (an unstable side with a positive priority weight).
    """

    params: TwoUserParams
    rho: float
    mu: float
    adv_ratio_right: float
    adv_ratio_left: float
    pi0: float | None
    pi1: float | None
    pi_m1: float | None
    stable_right: bool
    stable_left: bool
    tau1: float | None
    tau2: float | None
    lambda1: float
    lambda2: float
    xi2_1: float
    xi2_2: float

    @property
    def solvable(self) -> bool:
        return self.pi0 is not None

    def pi(self, i: int, adv: bool = False) -> float:
        """Stationary probability of chain state (i, adv)."""
        if not self.solvable:
            raise StabilityError("chain has no stationary distribution for these parameters")
        if i == 0:
            if adv:
                raise ValueError("state 0 has no advantage variant")
            return self.pi0
        if i > 0:
            base = self.pi1 * self.rho ** (i - 1)
            return base * self.adv_ratio_right if adv else base
        base = self.pi_m1 * self.mu ** (-i - 1)
        return base * self.adv_ratio_left if adv else base


def priority_q_solution(params: TwoUserParams) -> ChainSolution:
    """Solve the priority-(q1, q2) chain in closed form.

    Tail ratios come from the characteristic recurrences; the three boundary
    balance equations pin pi1 and pi_{-1} against pi0 (the third equation is
    redundant and used as a consistency check), and normalization fixes the
    scale.  Delay exponents are the negative log of the absorbing-chain
    second eigenvalues and are available regardless of stability.
    """
    roots = priority_q_roots(params)
    a, b, c = params.a, params.b, params.c
    q1, q2 = params.q1, params.q2
    dbar = params.dbar
    rho, mu = roots.rho, roots.mu
    x2_1, x2_2 = xi2_user1(params), xi2_user2(params)
    lam1, lam2 = -math.log(x2_1), -math.log(x2_2)
    s_r = (1.0 - q2) * c / (dbar - c * rho)
    s_l = (1.0 - q1) * b / (dbar - b * mu)

    pi0 = pi1 = pi_m1 = None
    tau1 = p1_only = None
    if roots.stable_right and roots.stable_left:
        # balance at +1: K_r*pi1 - b*s_l*pi_m1 = b*pi0
        # balance at -1: -c*s_r*pi1 + K_l*pi_m1 = c*pi0
        k_r = dbar - (1.0 - q2) * a - q2 * b - q2 * (a + c) * rho - s_r * (b + a * rho)
        k_l = dbar - (1.0 - q1) * a - q1 * c - q1 * (a + b) * mu - s_l * (c + a * mu)
        det = k_r * k_l - (b * s_l) * (c * s_r)
        u1 = (b * k_l + b * s_l * c) / det  # pi1 / pi0
        u2 = (c * k_r + c * s_r * b) / det  # pi_m1 / pi0
        # consistency: balance at state 0 must hold
        res = (dbar - a) - (a * (s_r * u1 + s_l * u2) + q1 * (a + b) * u2 + q2 * (a + c) * u1)
        if abs(res) > 1e-9:
            raise RuntimeError(f"boundary equations inconsistent, residual {res}")
        total = 1.0 + (1.0 + s_r) * u1 / (1.0 - rho) + (1.0 + s_l) * u2 / (1.0 - mu)
        pi0 = 1.0 / total
        pi1 = u1 * pi0
        pi_m1 = u2 * pi0

    if q2 == 0.0:
        tau1 = params.p1
    elif roots.stable_right and pi1 is not None:
        tau1 = params.p1 * (1.0 - q2 * pi1 / (1.0 - rho))
    if q1 == 0.0:
        tau2 = params.p2
    elif roots.stable_left and pi_m1 is not None:
        tau2 = params.p2 * (1.0 - q1 * pi_m1 / (1.0 - mu))
    else:
        tau2 = None

    return ChainSolution(
        params=params,
        rho=rho,
        mu=mu,
        adv_ratio_right=s_r,
        adv_ratio_left=s_l,
        pi0=pi0,
        pi1=pi1,
        pi_m1=pi_m1,
        stable_right=roots.stable_right,
        stable_left=roots.stable_left,
        tau1=tau1,
        tau2=tau2,
        lambda1=lam1,
        lambda2=lam2,
        xi2_1=x2_1,
        xi2_2=x2_2,
    )


def fixed_priority_stationary(p1: float, p2: float) -> ChainSolution:
    """Stationary solution when user 1 always has priority ((q1, q2) = (1, 0)).

    Positive recurrence requires p1 < p2: the lagging side then thins
    geometrically with ratio b/c and advantage states carry the constant
    ratio c/(a+c).  Computed directly from those recursions (independently
    of the general solver, which must agree).
    """
    params = TwoUserParams(p1, p2, 1.0, 0.0)
    a, b, c = params.a, params.b, params.c
    if b >= c:
        raise StabilityError(
            f"fixed priority needs p1 < p2 for a stationary chain, got p1={p1}, p2={p2}"
        )
    rho = b / c
    s_r = c / (a + c)
    u1 = b / c  # pi1/pi0
    u2 = c * (a + b + c) / ((a + b) * (a + c))  # pi_m1/pi0
    total = u2 + 1.0 + (1.0 + s_r) * u1 / (1.0 - rho)
    pi0 = 1.0 / total
    x2_2 = xi2_user2(params)
    return ChainSolution(
        params=params,
        rho=rho,
        mu=0.0,
        adv_ratio_right=s_r,
        adv_ratio_left=0.0,
        pi0=pi0,
        pi1=u1 * pi0,
        pi_m1=u2 * pi0,
        stable_right=True,
        stable_left=True,
        tau1=p1,
        tau2=p2 * (1.0 - u2 * pi0),
        lambda1=-math.log1p(-p1),
        lambda2=-math.log(x2_2),
        xi2_1=1.0 - p1,
        xi2_2=x2_2,
    )


def fixed_priority_tradeoff(p1: float, p2: float) -> tuple[float, float, float | None, float]:
    """(tau1, lambda1, tau2, lambda2) with full priority to user 1.

    The primary user keeps its single-user optimum.  The secondary user's
    throughput equals p1 when p2 > p1 and is not evaluable otherwise
    (returned as None); its exponent is defined for any parameters.
    """
    params = TwoUserParams(p1, p2, 1.0, 0.0)
    tau2 = p1 if p2 > p1 else None
    return p1, -math.log1p(-p1), tau2, -math.log(xi2_user2(params))


# ---------------------------------------------------------------------------
# packet-level simulation


@dataclass(frozen=True)
class TwoUserSimMetrics:
    """Per-user delivery metrics and chain occupancy from one simulation run."""

    params: TwoUserParams
    n_slots: int
    seed: int
    delivered: tuple[int, int]
    tau_hat: tuple[float, float]
    tau_ci: tuple[float, float]
    inter_delivery: tuple[np.ndarray, np.ndarray]
    occupancy: dict[tuple[int, bool], int]

    def occupancy_freq(self, i: int, adv: bool = False) -> float:
        return self.occupancy.get((i, adv), 0) / self.n_slots


def simulate_two_user(
    params: TwoUserParams,
    n_slots: int,
    seed: int,
    verify_model: bool = True,
) -> TwoUserSimMetrics:
    """Slot-level simulation of priority-(q1, q2) coding over two channels.

    Erasures are independent across users and slots.  The decoded sets are
    tracked exactly: the lagger's undecoded positions below the leader's
    required index form a queue that fills strictly in order under this code
    structure, so each state is a few integers.  Every slot the chain
    coordinate is recomputed from that bookkeeping and, when
    ``verify_model`` is set, checked against the chain edge prediction; any
    mismatch raises :class:`ModelViolationError`.
    """
    if n_slots < 1:
        raise ValueError("n_slots must be at least 1")
    q1, q2 = params.q1, params.q2
    rng = generator(seed, 0)

    tie = True
    leader = 0  # 1 or 2 when not tie
    r_lead = 1  # leader's required index (common required index when tie)
    gaps: deque[int] = deque()
    adv = False

    delivered = [0, 0, 0]  # index by user, 1-based
    last_event = [0, 0, 0]
    occupancy: dict[tuple[int, bool], int] = {}
    t_lists: list[list[int]] = [[], [], []]

    chunk = 1 << 16
    pos = chunk
    e1buf = e2buf = ubuf = None
    for slot in range(1, n_slots + 1):
        if pos >= chunk:
            e1buf = rng.random(chunk) < params.p1
            e2buf = rng.random(chunk) < params.p2
            ubuf = rng.random(chunk)
            pos = 0
        e1 = bool(e1buf[pos])
        e2 = bool(e2buf[pos])
        u = float(ubuf[pos])
        pos += 1

        i_pre = 0 if tie else (len(gaps) if leader == 1 else -len(gaps))
        adv_pre = adv
        key = (i_pre, adv_pre)
        occupancy[key] = occupancy.get(key, 0) + 1

        lagger = 0 if tie else 3 - leader
        q_lagger = 0.0 if tie else (q1 if lagger == 1 else q2)
        kind = _decide(tie, adv, q_lagger, u)

        if tie:
            if e1:
                delivered[1] += 1
                t_lists[1].append(slot - last_event[1])
                last_event[1] = slot
            if e2:
                delivered[2] += 1
                t_lists[2].append(slot - last_event[2])
                last_event[2] = slot
            if e1 and e2:
                r_lead += 1
            elif e1 or e2:
                leader = 1 if e1 else 2
                tie = False
                adv = False
                gaps.append(r_lead)
                r_lead += 1
        else:
            e_lead = e1 if leader == 1 else e2
            e_lag = e2 if leader == 1 else e1
            if kind == 1:  # lagger's required packet gaps[0]
                if e_lag:
                    g = gaps.popleft()
                    if gaps:
                        batch = gaps[0] - g
                    else:
                        batch = r_lead - g
                        tie, leader, adv = True, 0, False
                    delivered[lagger] += batch
                    t_lists[lagger].append(slot - last_event[lagger])
                    last_event[lagger] = slot
            elif kind == 2:  # leader's required packet r_lead
                if e_lead:
                    delivered[leader] += 1
                    t_lists[leader].append(slot - last_event[leader])
                    last_event[leader] = slot
                    if not e_lag:
                        gaps.append(r_lead)
                    r_lead += 1
                elif e_lag:
                    adv = True
            else:  # xor of (gaps[0], r_lead); lagger holds r_lead
                r_old = r_lead
                if e_lead:
                    delivered[leader] += 1
                    t_lists[leader].append(slot - last_event[leader])
                    last_event[leader] = slot
                    r_lead += 1
                    adv = False
                if e_lag:
                    g = gaps.popleft()
                    if gaps:
                        batch = gaps[0] - g
                    else:
                        batch = r_old - g + 1  # delivers through the held packet
                        if e_lead:
                            tie, leader, adv = True, 0, False
                        else:
                            # role swap: the old lagger moves one ahead
                            leader = lagger
                            gaps.append(r_old)
                            r_lead = r_old + 1
                            adv = False
                    delivered[lagger] += batch
                    t_lists[lagger].append(slot - last_event[lagger])
                    last_event[lagger] = slot

        if verify_model:
            i_post = 0 if tie else (len(gaps) if leader == 1 else -len(gaps))
            predicted = chain_step(i_pre, adv_pre, kind, e1, e2)
            if predicted != (i_post, adv):
                raise ModelViolationError(
                    f"slot {slot}: observed {(i_post, adv)}, chain predicts {predicted} "
                    f"from {(i_pre, adv_pre)} kind={kind} e=({e1},{e2})"
                )

    n = float(n_slots)
    tau1, tau2 = delivered[1] / n, delivered[2] / n
    ci = tuple(4.0 * math.sqrt(max(t * (1.0 - t), 1e-12) / n) for t in (tau1, tau2))
    return TwoUserSimMetrics(
        params=params,
        n_slots=n_slots,
        seed=seed,
        delivered=(delivered[1], delivered[2]),
        tau_hat=(tau1, tau2),
        tau_ci=ci,
        inter_delivery=(
            np.asarray(t_lists[1], dtype=np.int64),
            np.asarray(t_lists[2], dtype=np.int64),
        ),
        occupancy=occupancy,
    )
