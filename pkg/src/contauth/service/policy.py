"""Reaction policy: prioritized score-range rules per device criticality tier.

A rule set must cover the whole aggregate range [0, 1] for every declared
tier; boundary ownership is explicit through the inclusivity flags. Lower
priority numbers win when rules overlap.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigurationError

ACTIONS = ("allow", "reauthenticate", "lock")
WILDCARD_TIER = "*"


@dataclass(frozen=True)
class PolicyRule:
    rule_id: str
    tier: str
    min_score: float
    max_score: float
    min_inclusive: bool
    max_inclusive: bool
    action: str
    priority: int

    def matches(self, aggregate: float, tier: str) -> bool:
        if self.tier != WILDCARD_TIER and self.tier != tier:
            return False
        above = aggregate > self.min_score or (self.min_inclusive and aggregate == self.min_score)
        below = aggregate < self.max_score or (self.max_inclusive and aggregate == self.max_score)
        return above and below


def validate_rules(rules: list[PolicyRule], tiers: list[str]) -> None:
    """Raise ConfigurationError on bad rules or on a coverage gap (named)."""
    if not rules:
        raise ConfigurationError("rule set is empty")
    priorities = [r.priority for r in rules]
    if len(set(priorities)) != len(priorities):
        raise ConfigurationError("rule priorities must be unique")
    for r in rules:
        if r.action not in ACTIONS:
            raise ConfigurationError(f"rule {r.rule_id}: unknown action {r.action!r}")
        if not (0.0 <= r.min_score <= r.max_score <= 1.0):
            raise ConfigurationError(f"rule {r.rule_id}: bad range [{r.min_score}, {r.max_score}]")
    for tier in tiers:
        gap = _coverage_gap(rules, tier)
        if gap is not None:
            lo, hi = gap
            raise ConfigurationError(f"tier {tier!r}: rules leave ({lo}, {hi}) uncovered")


def _coverage_gap(rules: list[PolicyRule], tier: str) -> tuple[float, float] | None:
    applicable = [r for r in rules if r.tier in (WILDCARD_TIER, tier)]

    def covered(p: float) -> bool:
        return any(r.matches(p, tier) for r in applicable)

    bounds = sorted({0.0, 1.0} | {r.min_score for r in applicable} | {r.max_score for r in applicable})
    for b in bounds:
        if 0.0 <= b <= 1.0 and not covered(b):
            return (b, b)
    for lo, hi in zip(bounds, bounds[1:]):
        if hi <= 0.0 or lo >= 1.0:
            continue
        if not covered((lo + hi) / 2.0):
            return (lo, hi)
    return None


def apply_policy(aggregate: float, tier: str, rules: list[PolicyRule]) -> PolicyRule:
    """Highest-priority (lowest number) matching rule."""
    matching = [r for r in rules if r.matches(aggregate, tier)]
    if not matching:
        raise ConfigurationError(
            f"no rule matches aggregate {aggregate} for tier {tier!r} (invalid rule set)"
        )
    return min(matching, key=lambda r: r.priority)


def default_rules() -> list[PolicyRule]:
    return [
        PolicyRule("allow-high", WILDCARD_TIER, 0.9, 1.0, True, True, "allow", 1),
        PolicyRule("reauth-mid", WILDCARD_TIER, 0.5, 0.9, True, False, "reauthenticate", 2),
        PolicyRule("lock-low", WILDCARD_TIER, 0.0, 0.5, True, False, "lock", 3),
    ]
