"""Core domain types: doctors, bids, instances, outcomes.

The instance file format is UTF-8 JSON with all money and quality values as
decimal strings; `validate_instance` canonicalizes raw parsed data into the
immutable `Instance` used by every mechanism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .graph import EcId, GraphError, SocialGraph
from .money import Money, MoneyError, format_money, parse_money

__all__ = [
    "QualityParams",
    "QualityWeights",
    "EcProfile",
    "BidProfile",
    "Instance",
    "Outcome",
    "ValidationError",
    "compute_quality",
    "quality_value",
    "quality_contribution",
    "validate_instance",
    "instance_violations",
    "load_instance",
    "dump_instance",
    "load_bids",
    "truthful_bids",
]


class ValidationError(ValueError):
    """Carries the full list of validation violations for an instance."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class QualityParams:
    """Raw per-doctor quality components, each a non-negative rational."""

    qualification: Fraction
    success_rate: Fraction
    experience: Fraction
    hospital_score: Fraction


@dataclass(frozen=True)
class QualityWeights:
    """Convex weights over the four quality components (sum exactly 1)."""

    w1: Fraction
    w2: Fraction
    w3: Fraction
    w4: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w1, self.w2, self.w3, self.w4)


@dataclass(frozen=True)
class EcProfile:
    """One doctor: true costs plus quality. quality_params is None when the
    instance supplies the scalar quality directly."""

    id: EcId
    adapter_cost: Money
    consult_cost: Money
    quality: Fraction
    quality_params: QualityParams | None = None


@dataclass(frozen=True)
class BidProfile:
    """Declared costs, possibly different from the true ones."""

    adapter_bids: Mapping[EcId, Money]
    consult_bids: Mapping[EcId, Money]


@dataclass(frozen=True)
class Instance:
    graph: SocialGraph
    profiles: tuple[EcProfile, ...]
    weights: QualityWeights
    hospital_budget: Money
    patient_budget: Money
    _by_id: Mapping[EcId, EcProfile] = field(
        init=False, default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {p.id: p for p in self.profiles})

    @property
    def ids(self) -> tuple[EcId, ...]:
        return tuple(p.id for p in self.profiles)

    def profile(self, ec: EcId) -> EcProfile:
        try:
            return self._by_id[ec]
        except KeyError:
            raise ValidationError([f"unknown doctor id {ec}"]) from None

    def with_budgets(self, hospital_budget: Money, patient_budget: Money) -> "Instance":
        return replace(
            self, hospital_budget=hospital_budget, patient_budget=patient_budget
        )


@dataclass(frozen=True)
class Outcome:
    """Result of one fold: winners in selection order plus payments.

    `payments` is None for allocation-only results. `informed` and
    `candidate_set` are fold-1 fields (who got informed, and winners plus
    informed). `sorted_order` is a fold-2 field (the ratio-sorted scan
    order, needed by the fold-2 pricing rule).
    """

    winners: tuple[EcId, ...]
    payments: Mapping[EcId, Money] | None = None
    total_payment: Money | None = None
    informed: frozenset[EcId] | None = None
    candidate_set: frozenset[EcId] | None = None
    sorted_order: tuple[EcId, ...] | None = None


def compute_quality(params: QualityParams, weights: QualityWeights) -> Fraction:
    """Weighted sum of the four quality components, exact."""
    w1, w2, w3, w4 = weights.as_tuple()
    return (
        w1 * params.qualification
        + w2 * params.success_rate
        + w3 * params.experience
        + w4 * params.hospital_score
    )


def quality_value(subset: Iterable[EcId], instance: Instance) -> Fraction:
    """Total quality of a doctor set (additive)."""
    return sum((instance.profile(ec).quality for ec in set(subset)), Fraction(0))


def quality_contribution(candidate: EcId, selected: Iterable[EcId], instance: Instance) -> Fraction:
    """Quality gain from adding `candidate`; equals its own quality since
    the quality function is additive."""
    selected_set = set(selected)
    if candidate in selected_set:
        raise ValidationError([f"doctor {candidate} already selected"])
    return instance.profile(candidate).quality


def _parse_quality(node_id: Any, raw: Any, weights: QualityWeights, violations: list[str]):
    """Returns (quality, params or None); appends to violations on error."""
    if isinstance(raw, str):
        try:
            q = parse_money(raw)
        except MoneyError as exc:
            violations.append(f"node {node_id}: bad quality: {exc}")
            return Fraction(0), None
        return q, None
    if isinstance(raw, dict):
        comps = {}
        for key in ("q", "sr", "e", "h"):
            if key not in raw:
                violations.append(f"node {node_id}: quality object missing {key!r}")
                return Fraction(0), None
            try:
                comps[key] = parse_money(str(raw[key]))
            except MoneyError as exc:
                violations.append(f"node {node_id}: bad quality component {key}: {exc}")
                return Fraction(0), None
        params = QualityParams(
            qualification=comps["q"],
            success_rate=comps["sr"],
            experience=comps["e"],
            hospital_score=comps["h"],
        )
        return compute_quality(params, weights), params
    violations.append(f"node {node_id}: quality must be a decimal string or an object")
    return Fraction(0), None


def instance_violations(raw: Any) -> list[str]:
    """All validation violations for raw parsed instance data (empty = valid)."""
    try:
        _build_instance(raw)
    except ValidationError as exc:
        return exc.violations
    return []


def validate_instance(raw: Any) -> Instance:
    """Canonicalize raw parsed data into an Instance.

    Raises ValidationError listing every violation found (duplicate or
    non-contiguous ids, dangling neighbor references, non-positive costs,
    weight sum != 1, negative budgets, malformed fields).
    """
    return _build_instance(raw)


def _build_instance(raw: Any) -> Instance:
    violations: list[str] = []
    if not isinstance(raw, dict):
        raise ValidationError(["instance must be a JSON object"])

    weights = QualityWeights(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))
    raw_weights = raw.get("weights")
    if not isinstance(raw_weights, list) or len(raw_weights) != 4:
        violations.append("weights: expected an array of 4 decimal strings")
    else:
        try:
            ws = [parse_money(str(w)) for w in raw_weights]
            if any(w < 0 or w > 1 for w in ws):
                violations.append("weights: each weight must lie in [0,1]")
            elif sum(ws) != 1:
                violations.append("weights: must sum to exactly 1")
            else:
                weights = QualityWeights(*ws)
        except MoneyError as exc:
            violations.append(f"weights: {exc}")

    budgets: dict[str, Money] = {}
    for key in ("hospital_budget", "patient_budget"):
        budgets[key] = Fraction(0)
        if key not in raw:
            violations.append(f"{key}: missing")
            continue
        try:
            budgets[key] = parse_money(str(raw[key]))
        except MoneyError as exc:
            violations.append(f"{key}: {exc}")

    nodes = raw.get("nodes")
    if not isinstance(nodes, list):
        violations.append("nodes: expected an array")
        raise ValidationError(violations)

    seen: set[int] = set()
    profiles: list[EcProfile] = []
    neighbor_lists: dict[EcId, list[EcId]] = {}
    for pos, node in enumerate(nodes):
        if not isinstance(node, dict):
            violations.append(f"nodes[{pos}]: expected an object")
            continue
        node_id = node.get("id")
        if not isinstance(node_id, int) or isinstance(node_id, bool) or node_id < 1:
            violations.append(f"nodes[{pos}]: id must be a positive integer")
            continue
        if node_id in seen:
            violations.append(f"node {node_id}: duplicate id")
            continue
        seen.add(node_id)

        costs: dict[str, Money] = {}
        for key in ("adapter_cost", "consult_cost"):
            costs[key] = Fraction(1)
            if key not in node:
                violations.append(f"node {node_id}: {key} missing")
                continue
            try:
                value = parse_money(str(node[key]), allow_negative=True)
            except MoneyError as exc:
                violations.append(f"node {node_id}: {key}: {exc}")
                continue
            if value <= 0:
                violations.append(f"node {node_id}: non-positive cost {key}")
                continue
            costs[key] = value

        quality, params = _parse_quality(node_id, node.get("quality"), weights, violations)

        nbrs = node.get("neighbors", [])
        if not isinstance(nbrs, list) or any(
            not isinstance(u, int) or isinstance(u, bool) for u in nbrs
        ):
            violations.append(f"node {node_id}: neighbors must be an array of ids")
            nbrs = []
        neighbor_lists[node_id] = list(nbrs)

        profiles.append(
            EcProfile(
                id=node_id,
                adapter_cost=costs["adapter_cost"],
                consult_cost=costs["consult_cost"],
                quality=quality,
                quality_params=params,
            )
        )

    m = len(nodes)
    if seen and seen != set(range(1, m + 1)):
        violations.append(f"ids must be contiguous 1..{m}")

    graph = SocialGraph(frozenset(), {})
    if not violations:
        try:
            graph = SocialGraph.from_neighbor_lists(neighbor_lists)
        except GraphError as exc:
            violations.append(str(exc))

    if violations:
        raise ValidationError(violations)

    profiles.sort(key=lambda p: p.id)
    return Instance(
        graph=graph,
        profiles=tuple(profiles),
        weights=weights,
        hospital_budget=budgets["hospital_budget"],
        patient_budget=budgets["patient_budget"],
    )


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError([f"bad JSON in {path}: {exc}"]) from exc
    return validate_instance(raw)


def dump_instance(instance: Instance, path: str) -> None:
    """Write the canonical JSON form (stable field order, trailing newline)."""
    doc = {
        "weights": [format_money(w) for w in instance.weights.as_tuple()],
        "hospital_budget": format_money(instance.hospital_budget),
        "patient_budget": format_money(instance.patient_budget),
        "nodes": [
            {
                "id": p.id,
                "neighbors": sorted(instance.graph.neighbors(p.id)),
                "adapter_cost": format_money(p.adapter_cost),
                "consult_cost": format_money(p.consult_cost),
                "quality": (
                    format_money(p.quality)
                    if p.quality_params is None
                    else {
                        "q": format_money(p.quality_params.qualification),
                        "sr": format_money(p.quality_params.success_rate),
                        "e": format_money(p.quality_params.experience),
                        "h": format_money(p.quality_params.hospital_score),
                    }
                ),
            }
            for p in instance.profiles
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def truthful_bids(instance: Instance) -> BidProfile:
    """The bid profile where every doctor declares its true costs."""
    return BidProfile(
        adapter_bids={p.id: p.adapter_cost for p in instance.profiles},
        consult_bids={p.id: p.consult_cost for p in instance.profiles},
    )


def load_bids(path: str, instance: Instance) -> BidProfile:
    """Load a bid-override file; ids not mentioned default to true costs.

    Format: {"adapter_bids": {"3": "2.5", ...}, "consult_bids": {...}},
    both maps optional.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError([f"bad JSON in {path}: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ValidationError(["bid file must be a JSON object"])
    base = truthful_bids(instance)
    adapter = dict(base.adapter_bids)
    consult = dict(base.consult_bids)
    violations: list[str] = []
    for key, target in (("adapter_bids", adapter), ("consult_bids", consult)):
        overrides = raw.get(key, {})
        if not isinstance(overrides, dict):
            violations.append(f"{key}: expected an object")
            continue
        for id_text, bid_text in overrides.items():
            try:
                ec = int(id_text)
            except ValueError:
                violations.append(f"{key}: bad id {id_text!r}")
                continue
            if ec not in target:
                violations.append(f"{key}: unknown doctor id {ec}")
                continue
            try:
                bid = parse_money(str(bid_text), allow_negative=True)
            except MoneyError as exc:
                violations.append(f"{key}[{ec}]: {exc}")
                continue
            if bid <= 0:
                violations.append(f"{key}[{ec}]: non-positive bid")
                continue
            target[ec] = bid
    if violations:
        raise ValidationError(violations)
    return BidProfile(adapter_bids=adapter, consult_bids=consult)
