"""Pairwise decision rules over strength tallies, and their distortion bounds.

Five rules are implemented. All of them decide an ordered pair (P, Q) by a
weighted vote and break exact ties toward the lexicographically smaller
candidate id.

rule1 (single threshold tau >= 1): a voter is strong only when its strength
    strictly exceeds tau; a report equal to tau stays weak. Strong voters
    weigh (tau+1)/(tau-1) when tau >= 1+sqrt(2), else tau; weak voters weigh 1.
rule2 (single threshold tau > 1): same strict comparison, but strong voters
    always weigh (tau+1)/(tau-1). Coincides with rule1 for tau >= 1+sqrt(2).
rule3 (single threshold tau >= 1): a voter counts (weight 1) iff its strength
    is at least tau (inclusive); everyone else is ignored.
rule4 (general scheme tau_1 < ... < tau_m): bucket weights derived from the
    scheme's worst ratio term; see rule4_delta and rule4_weights.
rule5 (exact strengths): per-voter weight (sqrt(2)*s - 1)/(s + 1) when
    s > sqrt(2), else s - 1; the two branches agree at s = sqrt(2) and the
    weight tends to sqrt(2) as s -> +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .metric_core import MetricInstance
from .tallies import (INCLUSIVE, STRICT, ExactProfile, PairwiseTally,
                      ThresholdScheme, bucket_profile, exact_profile)

SQRT2 = math.sqrt(2.0)

RULE_KINDS = ("rule1", "rule2", "rule3", "rule4", "rule5")


class InvalidThreshold(ValueError):
    """A rule got a threshold outside its admissible range."""


class SchemeMismatch(ValueError):
    """A tally was built under a different scheme or boundary mode than the rule expects."""


@dataclass(frozen=True)
class Rule:
    kind: str
    tau: float | None = None
    scheme: ThresholdScheme | None = None

    def label(self) -> str:
        if self.kind in ("rule1", "rule2", "rule3"):
            return f"{self.kind}[tau={self.tau:g}]"
        if self.kind == "rule4":
            return "rule4[taus=" + ";".join(f"{t:g}" for t in self.scheme.taus) + "]"
        return "rule5"


def make_rule(kind: str, tau: float | None = None, taus=None) -> Rule:
    if kind not in RULE_KINDS:
        raise ValueError(f"unknown rule kind {kind!r}")
    if kind in ("rule1", "rule2", "rule3"):
        if tau is None:
            raise InvalidThreshold(f"{kind} needs a threshold")
        tau = float(tau)
        if kind == "rule2":
            if not tau > 1.0:
                raise InvalidThreshold(f"rule2 needs tau > 1, got {tau}")
        elif not tau >= 1.0:
            raise InvalidThreshold(f"{kind} needs tau >= 1, got {tau}")
        return Rule(kind, tau=tau)
    if kind == "rule4":
        if taus is None:
            raise InvalidThreshold("rule4 needs a threshold scheme")
        scheme = taus if isinstance(taus, ThresholdScheme) else ThresholdScheme(tuple(taus))
        return Rule(kind, scheme=scheme)
    if tau is not None or taus is not None:
        raise InvalidThreshold("rule5 takes no thresholds")
    return Rule(kind)


@dataclass(frozen=True)
class PairwiseDecision:
    winner: str
    p_score: float
    q_score: float
    tie: bool


def _resolve(pair: tuple[str, str], p_score: float, q_score: float) -> PairwiseDecision:
    if p_score > q_score:
        return PairwiseDecision(pair[0], p_score, q_score, False)
    if q_score > p_score:
        return PairwiseDecision(pair[1], p_score, q_score, False)
    return PairwiseDecision(min(pair), p_score, q_score, True)


def _single_threshold_scheme(tau: float) -> tuple[float, ...]:
    return (1.0,) if tau == 1.0 else (1.0, tau)


def _require(tally: PairwiseTally, taus: tuple[float, ...], boundary: str, rule: str) -> None:
    if tally.scheme.taus != taus:
        raise SchemeMismatch(f"{rule} expects scheme {taus}, tally has {tally.scheme.taus}")
    if tally.boundary != boundary and tally.scheme.taus != (1.0,):
        raise SchemeMismatch(f"{rule} expects {boundary} boundary, tally used {tally.boundary}")


def rule1_decide(tally: PairwiseTally, tau: float) -> PairwiseDecision:
    """Single-threshold rule with capped strong weight; 2-bounded for every tau."""
    if not tau >= 1.0:
        raise InvalidThreshold(f"rule1 needs tau >= 1, got {tau}")
    _require(tally, _single_threshold_scheme(tau), STRICT, "rule1")
    if tau == 1.0:
        return _resolve(tally.pair, float(tally.a_counts[0]), float(tally.b_counts[0]))
    strong = (tau + 1.0) / (tau - 1.0) if tau >= 1.0 + SQRT2 else tau
    p = tally.a_counts[0] + strong * tally.a_counts[1]
    q = tally.b_counts[0] + strong * tally.b_counts[1]
    return _resolve(tally.pair, p, q)


def rule2_decide(tally: PairwiseTally, tau: float) -> PairwiseDecision:
    """Single-threshold rule with uncapped strong weight (tau+1)/(tau-1); not 2-bounded."""
    if not tau > 1.0:
        raise InvalidThreshold(f"rule2 needs tau > 1, got {tau}")
    _require(tally, _single_threshold_scheme(tau), STRICT, "rule2")
    strong = (tau + 1.0) / (tau - 1.0)
    p = tally.a_counts[0] + strong * tally.a_counts[1]
    q = tally.b_counts[0] + strong * tally.b_counts[1]
    return _resolve(tally.pair, p, q)


def rule3_decide(tally: PairwiseTally, tau: float) -> PairwiseDecision:
    """Count only voters whose strength reaches tau (inclusive); plain majority of those."""
    if not tau >= 1.0:
        raise InvalidThreshold(f"rule3 needs tau >= 1, got {tau}")
    _require(tally, (float(tau),), INCLUSIVE, "rule3")
    return _resolve(tally.pair, float(tally.a_counts[0]), float(tally.b_counts[0]))


def rule4_delta(scheme: ThresholdScheme) -> float:
    """Worst ratio term of a scheme: the rule4 two-candidate distortion bound.

    max over l in 0..m of (tau_l*tau_{l+1} + 2*tau_{l+1} - 1)/(tau_l*tau_{l+1} + 1),
    which collapses to tau_1 at l = 0 and to (tau_m + 2)/tau_m at l = m.
    """
    taus = scheme.taus
    best = taus[0]
    for lo, hi in zip(taus, taus[1:]):
        best = max(best, (lo * hi + 2.0 * hi - 1.0) / (lo * hi + 1.0))
    return max(best, (taus[-1] + 2.0) / taus[-1])


def _rule4_pivot(scheme: ThresholdScheme, ds: float) -> int:
    """Largest k with tau_k <= ds (ties on equality resolve to the larger k)."""
    k = 0
    for l, t in enumerate(scheme.taus, start=1):
        if t <= ds:
            k = l
    if k == 0:
        raise InvalidThreshold(f"no pivot: bound {ds} below tau_1 = {scheme.taus[0]}")
    return k


def rule4_weights(scheme: ThresholdScheme) -> tuple[list[float], float, int]:
    ds = rule4_delta(scheme)
    k = _rule4_pivot(scheme, ds)
    weights = []
    for l in range(1, scheme.m + 1):
        tl, tnext = scheme.tau(l), scheme.tau(l + 1)
        if l < k:
            w = (ds + 1.0) * (tl * tnext - 1.0) / ((tl + 1.0) * (tnext + 1.0))
        else:
            head = 1.0 if math.isinf(tnext) else (tnext - ds) / (tnext - 1.0)
            w = head + (ds * tl - 1.0) / (tl + 1.0)
        weights.append(w)
    return weights, ds, k


def rule4_decide(tally: PairwiseTally, scheme: ThresholdScheme) -> PairwiseDecision:
    """General-scheme weighted majority; equivalent to picking the side whose
    feasibility inequality holds by the larger slack (see condition1_holds)."""
    _require(tally, scheme.taus, INCLUSIVE, "rule4")
    weights, _, _ = rule4_weights(scheme)
    p = math.fsum(w * a for w, a in zip(weights, tally.a_counts))
    q = math.fsum(w * b for w, b in zip(weights, tally.b_counts))
    if __debug__:
        diff = _condition1_diff(tally, tally.pair[0]) - _condition1_diff(tally, tally.pair[1])
        scale = max(1.0, abs(p), abs(q))
        assert abs((p - q) - diff) <= 1e-9 * scale, (p, q, diff)
    return _resolve(tally.pair, p, q)


def _condition1_diff(tally: PairwiseTally, side: str) -> float:
    """Slack (rhs - lhs) of the feasibility inequality for one side of the pair."""
    if side == tally.pair[0]:
        mine, theirs = tally.a_counts, tally.b_counts
    elif side == tally.pair[1]:
        mine, theirs = tally.b_counts, tally.a_counts
    else:
        raise ValueError(f"{side!r} is not in the pair {tally.pair}")
    scheme = tally.scheme
    _, ds, k = rule4_weights(scheme)
    terms = []
    for l in range(1, scheme.m + 1):
        tl, tnext = scheme.tau(l), scheme.tau(l + 1)
        terms.append((ds * tl - 1.0) / (tl + 1.0) * mine[l - 1])
        if l < k:
            terms.append((ds - tnext) / (tnext + 1.0) * theirs[l - 1])
        else:
            head = 1.0 if math.isinf(tnext) else (tnext - ds) / (tnext - 1.0)
            terms.append(-head * theirs[l - 1])
    return math.fsum(terms)


def condition1_holds(tally: PairwiseTally, side: str, tol: float = 1e-9) -> bool:
    """Whether a side's feasibility inequality holds (within tol); at least one
    side of any tally always does."""
    return _condition1_diff(tally, side) >= -tol


def rule5_weight(strength: float) -> float:
    if math.isinf(strength):
        return SQRT2
    if strength > SQRT2:
        return (SQRT2 * strength - 1.0) / (strength + 1.0)
    return strength - 1.0


def rule5_decide(profile: ExactProfile) -> PairwiseDecision:
    """Exact-strength weighted majority; (1+sqrt(2))-bounded."""
    p = math.fsum(rule5_weight(s) for s in profile.a_strengths)
    q = math.fsum(rule5_weight(s) for s in profile.b_strengths)
    return _resolve(profile.pair, p, q)


def decide_profile(profile: ExactProfile, rule: Rule) -> PairwiseDecision:
    """Decide a pair from its exact profile, revealing only what the rule may see."""
    if rule.kind == "rule5":
        return rule5_decide(profile)
    if rule.kind == "rule1":
        scheme = ThresholdScheme(_single_threshold_scheme(rule.tau))
        return rule1_decide(bucket_profile(profile, scheme, STRICT), rule.tau)
    if rule.kind == "rule2":
        scheme = ThresholdScheme(_single_threshold_scheme(rule.tau))
        return rule2_decide(bucket_profile(profile, scheme, STRICT), rule.tau)
    if rule.kind == "rule3":
        scheme = ThresholdScheme((rule.tau,))
        return rule3_decide(bucket_profile(profile, scheme, INCLUSIVE), rule.tau)
    if rule.kind == "rule4":
        return rule4_decide(bucket_profile(profile, rule.scheme, INCLUSIVE), rule.scheme)
    raise ValueError(f"unknown rule kind {rule.kind!r}")


def decide_pair(inst: MetricInstance, p: str, q: str, rule: Rule) -> PairwiseDecision:
    """Decide an ordered candidate pair of an instance under a rule."""
    return decide_profile(exact_profile(inst, p, q), rule)


def bound_value(rule: Rule, num_candidates: int = 2) -> float:
    """Worst-case distortion bound for a rule.

    Two candidates: rule1/rule2 max{(tau+2)/tau, (3*tau-1)/(tau+1)}; rule3
    max{(tau+2)/tau, tau}; rule4 the scheme's worst ratio term; rule5 sqrt(2).
    Three or more candidates (winner from the uncovered set): rule1 takes
    min{b+2, b^2} of its two-candidate bound b, rule3/rule4 square theirs,
    rule5 gives 2. rule2 admits no bound beyond two candidates.
    """
    if num_candidates < 2:
        raise ValueError("bounds are defined for two or more candidates")
    two = num_candidates == 2
    if rule.kind in ("rule1", "rule2"):
        tau = rule.tau
        if rule.kind == "rule2" and not tau > 1.0:
            raise InvalidThreshold(f"rule2 needs tau > 1, got {tau}")
        if not tau >= 1.0:
            raise InvalidThreshold(f"{rule.kind} needs tau >= 1, got {tau}")
        b = max((tau + 2.0) / tau, (3.0 * tau - 1.0) / (tau + 1.0))
        if two:
            return b
        if rule.kind == "rule2":
            raise ValueError("rule2 has no distortion bound beyond two candidates")
        return min(b + 2.0, b * b)
    if rule.kind == "rule3":
        if not rule.tau >= 1.0:
            raise InvalidThreshold(f"rule3 needs tau >= 1, got {rule.tau}")
        b = max((rule.tau + 2.0) / rule.tau, rule.tau)
        return b if two else b * b
    if rule.kind == "rule4":
        b = rule4_delta(rule.scheme)
        return b if two else b * b
    if rule.kind == "rule5":
        return SQRT2 if two else 2.0
    raise ValueError(f"unknown rule kind {rule.kind!r}")
