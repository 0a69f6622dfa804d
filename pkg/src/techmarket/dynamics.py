"""Per-firm Monte Carlo update, intervention logic, and sweep assembly.

One sweep visits every firm alive at its start exactly once, in a uniformly
random order. Each visit runs the update cycle:

1. If more than n_min firms are alive, roll for survival. A firm whose roll
   fails may still be rescued by the government with probability q, provided
   the active policy covers its current technology segment. A bankrupted
   firm leaves its site and its share is split equally among the survivors.
2. Under the passive variant a rescued firm ends its step; under the active
   variant it carries on like any survivor.
3. A surviving firm picks one of its 4 von Neumann neighbor sites. If the
   site is empty it moves there. At the new location: with no occupied Moore
   site at all, it imperfectly copies the frontier (external diffusion);
   otherwise it looks at one randomly chosen Moore site and interacts with
   the firm found there, or does nothing if that site is empty (a chance
   meeting, so interactions become improbable at low concentration). If the
   originally picked site is occupied the firm stays put and interacts with
   the occupant.
4. An interaction merges the pair with probability b (partner absorbed,
   technology max kept, shares pooled); otherwise the pair tries to found a
   spin-off on one of the actor's 8 Moore sites, which succeeds only if the
   picked site is free.

Firms absorbed mid-sweep are skipped; spin-offs born mid-sweep first act in
the next sweep. After the visits, shares are renormalized (drift beyond 1%
is a model-integrity failure), the sweep counter advances, and the frontier
value for the new sweep is cached.

Draw order per firm visit (all from the replica stream): survival roll r1;
rescue roll q_rnd only when the roll failed and the policy covers the firm's
segment; direction u (always, for any acting firm); then either the copy
noise r2 (diffusion, only with an empty Moore ring) or the meeting-site pick
u; then, when a partner was found or the move was blocked, the merge coin u
and the spin-off site u when the coin came up spin-off. Threshold draws
(r1, q_rnd, merge coin) use (0, 1] so q=0 can never rescue and q=1 always
does.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import NamedTuple, Optional

from .errors import IntegrityError
from .market import (
    MarketState,
    Segment,
    classify_segment,
    sigma_g_from_sums,
    survival_probability,
)
from .params import PolicyKind, SimParams, VariantKind
from .rng import open_unit, rand_index, shuffle_in_place

#: Allowed pre-correction drift of sum(shares) from 1 at a sweep boundary.
RENORM_TOLERANCE = 1e-2

_POLICY_SEGMENT = {
    PolicyKind.LOW_TECH: Segment.LOW,
    PolicyKind.MEDIUM_TECH: Segment.MEDIUM,
    PolicyKind.HIGH_TECH: Segment.HIGH,
}


class EventKind(IntEnum):
    SURVIVED = 0
    BANKRUPTED = 1
    RESCUED = 2
    MOVED_COPIED_FRONTIER = 3
    MOVED_NO_DIFFUSION = 4
    MERGED = 5
    SPIN_OFF = 6
    SPIN_OFF_BLOCKED = 7
    IDLE = 8


class EventRecord(NamedTuple):
    """Terminal outcome of one per-firm step.

    partner: absorbed firm for MERGED, interaction partner for SPIN_OFF /
    SPIN_OFF_BLOCKED. child: id of a newly founded spin-off. rescued: the
    intervention fired during this step (always True for kind RESCUED; may
    accompany an action kind under the active variant).
    """

    kind: EventKind
    firm: int
    sweep: int
    partner: Optional[int] = None
    child: Optional[int] = None
    rescued: bool = False


class BankruptcyOutcome(Enum):
    SURVIVES = "survives"
    RESCUED = "rescued"
    BANKRUPTS = "bankrupts"


@dataclass(slots=True)
class SweepStats:
    """Observables measured at the start of a sweep plus that sweep's event
    tallies and the pre-correction normalization error at its end."""

    t: int
    n_firms: int
    mean_tech: float
    ratio: float
    renorm_error: float
    counts: dict[EventKind, int]
    rescued: int  # rescue interventions fired (both variants)


def external_diffusion(tech: float, frontier: float, r2: float) -> float:
    """Imperfect copy of the frontier: tech + r2 * (frontier - tech),
    strictly between tech and frontier for r2 in (0, 1).

    r2 within one ulp of 1 can round the sum up to the frontier itself;
    the result is clamped to keep technology strictly below the frontier.
    """
    out = tech + r2 * (frontier - tech)
    return out if out < frontier else math.nextafter(frontier, tech)


def redistribute_shares_equal(market: MarketState, departing_share: float) -> None:
    """Split a departed firm's share equally among all remaining firms."""
    survivors = market.firms
    if not survivors:
        raise ValueError("no surviving firms to absorb the departing share")
    delta = departing_share / len(survivors)
    for f in survivors.values():
        f.share += delta
    market.weighted_sum += delta * market.tech_sum


def renormalize_shares(market: MarketState,
                       tolerance: float = RENORM_TOLERANCE) -> float:
    """Rescale all shares so they sum to exactly 1; returns the
    pre-correction error |sum - 1|. Error above ``tolerance`` means the
    dynamics corrupted the shares and raises IntegrityError."""
    total = market.total_share()
    if total <= 0.0:
        raise ValueError("total share must be positive")
    err = abs(total - 1.0)
    if err > tolerance:
        raise IntegrityError(
            f"share normalization error {err:.3e} exceeds tolerance "
            f"{tolerance:g} at sweep {market.sweep}"
        )
    for f in market.firms.values():
        f.share /= total
    market.weighted_sum /= total
    return err


def attempt_bankruptcy(market: MarketState, firm_id: int, params: SimParams,
                       rng: random.Random) -> BankruptcyOutcome:
    """Survival roll with possible government rescue.

    Draws r1 on (0, 1]; r1 <= p is survival. On a failed roll, a rescue roll
    q_rnd is drawn only if the policy covers the firm's current segment
    (egalitarian covers every firm); q_rnd <= q rescues, otherwise the firm
    bankrupts, leaves its site, and its share is redistributed equally.
    """
    firm = market.firms[firm_id]
    mean = market.weighted_sum
    p = survival_probability(firm.tech, mean, market.frontier_value, params.s)
    r1 = 1.0 - rng.random()
    if r1 <= p:
        return BankruptcyOutcome.SURVIVES
    policy = params.policy
    if policy is PolicyKind.EGALITARIAN:
        covered = True
    else:
        segment = classify_segment(firm.tech, mean, sigma_g_from_sums(market))
        covered = _POLICY_SEGMENT[policy] is segment
    if covered:
        q_rnd = 1.0 - rng.random()
        if q_rnd <= params.q:
            return BankruptcyOutcome.RESCUED
    share = firm.share
    market.remove_firm(firm)
    redistribute_shares_equal(market, share)
    return BankruptcyOutcome.BANKRUPTS


def interact(market: MarketState, firm_i: int, firm_j: int, params: SimParams,
             rng: random.Random) -> EventRecord:
    """Merge or spin-off between firm i (the actor) and neighbor j.

    With probability b firm j is absorbed: i keeps max(A_i, A_j) and gains
    j's share. Otherwise a spin-off site is picked uniformly among i's 8
    Moore sites; if free, a new firm appears there with max(A_i, A_j) and
    share omega_s * (omega_i + omega_j), deducted proportionally from both
    parents. A blocked spin-off changes nothing. Total share is conserved
    in every branch.
    """
    if firm_i == firm_j:
        raise ValueError("a firm cannot interact with itself")
    firms = market.firms
    i = firms[firm_i]
    j = firms[firm_j]
    u = 1.0 - rng.random()
    if u <= params.b:
        share_j = j.share
        tech_j = j.tech
        market.remove_firm(j)
        if tech_j > i.tech:
            market.set_tech(i, tech_j)
        i.share += share_j
        market.weighted_sum += share_j * i.tech
        return EventRecord(EventKind.MERGED, firm_i, market.sweep, partner=firm_j)
    k = market.lattice.moore8[i.site][rand_index(8, rng)]
    if market.lattice.occupancy[k] >= 0:
        return EventRecord(EventKind.SPIN_OFF_BLOCKED, firm_i, market.sweep,
                           partner=firm_j)
    d_i = i.share * params.omega_s
    d_j = j.share * params.omega_s
    i.share -= d_i
    j.share -= d_j
    market.weighted_sum -= d_i * i.tech + d_j * j.tech
    tech_k = i.tech if i.tech >= j.tech else j.tech
    child = market.add_firm(tech_k, d_i + d_j, k)
    return EventRecord(EventKind.SPIN_OFF, firm_i, market.sweep,
                       partner=firm_j, child=child.id)


def firm_update(market: MarketState, firm_id: int, params: SimParams,
                rng: random.Random) -> EventRecord:
    """One full update step for a single live firm; see the module docstring
    for the cycle and the draw order."""
    firms = market.firms
    firm = firms.get(firm_id)
    if firm is None:
        raise KeyError(f"firm {firm_id} is not alive")
    rescued = False
    if len(firms) > params.n_min:
        outcome = attempt_bankruptcy(market, firm_id, params, rng)
        if outcome is BankruptcyOutcome.BANKRUPTS:
            return EventRecord(EventKind.BANKRUPTED, firm_id, market.sweep)
        if outcome is BankruptcyOutcome.RESCUED:
            if params.variant is VariantKind.PASSIVE_AFTER_RESCUE:
                return EventRecord(EventKind.RESCUED, firm_id, market.sweep,
                                   rescued=True)
            rescued = True
    lattice = market.lattice
    occ = lattice.occupancy
    target = lattice.vn4[firm.site][rand_index(4, rng)]
    occupant = occ[target]
    if occupant < 0:
        occ[firm.site] = -1
        occ[target] = firm_id
        firm.site = target
        hood = lattice.moore8[target]
        for s in hood:
            if occ[s] >= 0:
                break
        else:
            r2 = open_unit(rng)
            market.set_tech(
                firm, external_diffusion(firm.tech, market.frontier_value, r2))
            return EventRecord(EventKind.MOVED_COPIED_FRONTIER, firm_id,
                               market.sweep, rescued=rescued)
        partner = occ[hood[rand_index(8, rng)]]
        if partner < 0:  # looked at an empty site: no meeting this step
            return EventRecord(EventKind.MOVED_NO_DIFFUSION, firm_id,
                               market.sweep, rescued=rescued)
        event = interact(market, firm_id, partner, params, rng)
    else:
        event = interact(market, firm_id, occupant, params, rng)
    return event._replace(rescued=True) if rescued else event


def sweep(market: MarketState, params: SimParams, rng: random.Random,
          events: Optional[list[EventRecord]] = None) -> SweepStats:
    """Advance the market by one sweep and return its statistics.

    Measures N, the weighted mean technology and its ratio to the frontier
    from the state at sweep start, then updates each firm alive at the start
    once in random order, renormalizes shares, and advances the clock and
    the cached frontier. Pass ``events`` to collect every EventRecord.
    """
    market.resync_sums()
    n_start = len(market.firms)
    mean_start = market.weighted_sum
    ratio_start = mean_start / market.frontier_value
    order = list(market.firms)
    shuffle_in_place(order, rng)
    counts = [0] * len(EventKind)
    rescued_total = 0
    firms = market.firms
    for fid in order:
        if fid not in firms:  # absorbed by a merge earlier in this sweep
            continue
        event = firm_update(market, fid, params, rng)
        counts[event.kind] += 1
        if event.rescued:
            rescued_total += 1
        if events is not None:
            events.append(event)
    err = renormalize_shares(market)
    stats = SweepStats(
        t=market.sweep,
        n_firms=n_start,
        mean_tech=mean_start,
        ratio=ratio_start,
        renorm_error=err,
        counts={kind: counts[kind] for kind in EventKind},
        rescued=rescued_total,
    )
    market.sweep += 1
    market.frontier_value = math.exp(params.sigma * market.sweep)
    return stats
