"""
Contextuality scenarios and their witness functionals.

A scenario lists measurements with their outcome counts, the contexts in which
they are jointly implemented, a linear witness functional F over per-context
joint outcome probabilities, and the measurements whose source pairings enter
the Corr average.

Outcomes are integers 0..k-1. For binary measurements the conventional +1/-1
labels map as +1 -> 0 and -1 -> 1.
"""

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .exceptions import ScenarioParseError, ScenarioValidationError
from .utils import format_fraction, parse_fraction


@dataclass(frozen=True)
class Measurement:
    """A measurement equivalence class with ``outcome_count`` outcomes."""

    id: str
    outcome_count: int


@dataclass(frozen=True)
class Context:
    """An ordered set of jointly implementable measurements."""

    member_ids: tuple[str, ...]


@dataclass(frozen=True)
class FunctionalTerm:
    """One coefficient of F, attached to a joint outcome of a context."""

    context: int
    outcome: tuple[int, ...]
    coeff: Fraction


@dataclass(frozen=True)
class WitnessFunctional:
    """Linear functional F = offset + sum of coeff * pr(outcome | context)."""

    terms: tuple[FunctionalTerm, ...]
    offset: Fraction = Fraction(0)


@dataclass(frozen=True)
class Violation:
    """A single invariant violation reported by validate()."""

    code: str
    message: str


@dataclass(frozen=True)
class Scenario:
    """Measurements, contexts, witness functional and Corr pairing."""

    measurements: tuple[Measurement, ...]
    contexts: tuple[Context, ...]
    functional: WitnessFunctional
    corr_pairing: tuple[str, ...]

    def measurement(self, measurement_id: str) -> Measurement:
        """Look up a measurement by id."""
        for m in self.measurements:
            if m.id == measurement_id:
                return m
        raise KeyError(f"Unknown measurement: {measurement_id}")

    def outcome_counts(self, context_index: int) -> tuple[int, ...]:
        """Outcome counts of the members of one context, in member order."""
        return tuple(
            self.measurement(mid).outcome_count
            for mid in self.contexts[context_index].member_ids
        )

    def joint_outcomes(self, context_index: int) -> list[tuple[int, ...]]:
        """Joint outcome tuples of a context in itertools.product order."""
        return list(itertools.product(*(range(k) for k in self.outcome_counts(context_index))))

    def contexts_containing(self, measurement_id: str) -> list[int]:
        """Indices of the contexts that contain a measurement."""
        return [i for i, c in enumerate(self.contexts) if measurement_id in c.member_ids]


def sign_label(outcome: int) -> int:
    """Map a binary outcome index to its +1/-1 label (0 -> +1, 1 -> -1)."""
    if outcome not in (0, 1):
        raise ValueError(f"Binary outcome expected, got {outcome}")
    return 1 - 2 * outcome


def outcome_index(label: int) -> int:
    """Inverse of sign_label."""
    if label not in (1, -1):
        raise ValueError(f"Label must be +1 or -1, got {label}")
    return (1 - label) // 2


def build_cycle(n: int) -> Scenario:
    """
    Build the n-cycle scenario for any n >= 3.

    Measurements M1..Mn are binary, adjacent pairs (Mi, Mi+1 mod n) form the
    contexts, and F averages the probability of anticorrelated outcomes over
    the n contexts.

    Args:
        n: Number of measurements in the cycle

    Returns:
        Scenario

    Raises:
        ValueError: If n is not an integer >= 3
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise ValueError(f"Cycle length must be an integer >= 3, got {n!r}")

    ids = [f"M{i}" for i in range(1, n + 1)]
    measurements = tuple(Measurement(mid, 2) for mid in ids)
    contexts = tuple(Context((ids[i], ids[(i + 1) % n])) for i in range(n))
    weight = Fraction(1, n)
    terms = tuple(
        FunctionalTerm(i, outcome, weight) for i in range(n) for outcome in ((0, 1), (1, 0))
    )
    return Scenario(
        measurements=measurements,
        contexts=contexts,
        functional=WitnessFunctional(terms=terms, offset=Fraction(0)),
        corr_pairing=tuple(ids),
    )


def build_n_cycle(n: int) -> Scenario:
    """
    Build the odd n-cycle scenario underlying the KCBS-type statistical proofs.

    Example:
        >>> s = build_n_cycle(5)
        >>> len(s.contexts), len(s.functional.terms)
        (5, 10)

    Raises:
        ValueError: If n is even or smaller than 3
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise ValueError(f"n-cycle requires an odd integer n >= 3, got {n!r}")
    return build_cycle(n)


def validate(s: Scenario) -> list[Violation]:
    """
    Check every scenario invariant.

    Args:
        s: Scenario to check

    Returns:
        List of violations; empty when the scenario is valid
    """
    violations: list[Violation] = []
    counts: dict[str, int] = {}

    for m in s.measurements:
        if m.id in counts:
            violations.append(
                Violation("duplicate_measurement_id", f"Measurement id '{m.id}' is repeated")
            )
        if isinstance(m.outcome_count, bool) or not isinstance(m.outcome_count, int) or (
            m.outcome_count < 2
        ):
            violations.append(
                Violation(
                    "outcome_count_too_small",
                    f"Measurement '{m.id}' has {m.outcome_count!r} outcomes (need >= 2)",
                )
            )
        counts.setdefault(m.id, m.outcome_count)

    used: set[str] = set()
    valid_contexts: dict[int, tuple[int, ...]] = {}
    for index, context in enumerate(s.contexts):
        members = context.member_ids
        if not members:
            violations.append(Violation("empty_context", f"Context {index} has no members"))
            continue
        if len(set(members)) != len(members):
            violations.append(
                Violation("duplicate_context_member", f"Context {index} repeats a member")
            )
        unknown = [mid for mid in members if mid not in counts]
        for mid in unknown:
            violations.append(
                Violation(
                    "unknown_context_member",
                    f"Context {index} references unknown measurement '{mid}'",
                )
            )
        used.update(members)
        if not unknown:
            valid_contexts[index] = tuple(counts[mid] for mid in members)

    for mid in counts:
        if mid not in used:
            violations.append(
                Violation("unused_measurement", f"Measurement '{mid}' is in no context")
            )

    if not s.corr_pairing:
        violations.append(Violation("empty_corr_pairing", "corr_pairing is empty"))
    seen_pairing: set[str] = set()
    for mid in s.corr_pairing:
        if mid not in counts:
            violations.append(
                Violation(
                    "unknown_corr_measurement", f"corr_pairing references unknown '{mid}'"
                )
            )
        if mid in seen_pairing:
            violations.append(
                Violation("duplicate_corr_measurement", f"corr_pairing repeats '{mid}'")
            )
        seen_pairing.add(mid)

    seen_terms: set[tuple[int, tuple[int, ...]]] = set()
    for term in s.functional.terms:
        if not 0 <= term.context < len(s.contexts):
            violations.append(
                Violation(
                    "functional_context_out_of_range",
                    f"Functional term refers to context {term.context}",
                )
            )
            continue
        key = (term.context, tuple(term.outcome))
        if key in seen_terms:
            violations.append(
                Violation(
                    "duplicate_functional_term",
                    f"Functional term for context {term.context}, outcome {term.outcome} "
                    "is repeated",
                )
            )
        seen_terms.add(key)
        member_counts = valid_contexts.get(term.context)
        if member_counts is None:
            continue
        if len(term.outcome) != len(member_counts) or any(
            not 0 <= o < k for o, k in zip(term.outcome, member_counts)
        ):
            violations.append(
                Violation(
                    "functional_outcome_invalid",
                    f"Outcome {term.outcome} is not a joint outcome of context {term.context}",
                )
            )

    return violations


def ensure_valid(s: Scenario) -> Scenario:
    """Return ``s`` unchanged, or raise ScenarioValidationError listing every violation."""
    violations = validate(s)
    if violations:
        raise ScenarioValidationError(violations)
    return s


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    """Plain-data form of a scenario, keys in file-schema order."""
    return {
        "measurements": [{"id": m.id, "outcomes": m.outcome_count} for m in s.measurements],
        "contexts": [list(c.member_ids) for c in s.contexts],
        "functional": {
            "offset": format_fraction(s.functional.offset),
            "terms": [
                {
                    "context": t.context,
                    "outcome": list(t.outcome),
                    "coeff": format_fraction(t.coeff),
                }
                for t in s.functional.terms
            ],
        },
        "corr_pairing": list(s.corr_pairing),
    }


def serialize_scenario(s: Scenario) -> str:
    """Serialize a scenario to the JSON file format."""
    return json.dumps(scenario_to_dict(s), indent=2, ensure_ascii=False) + "\n"


def _require(container: Any, key: str, kind: Union[type, tuple], field: str) -> Any:
    if not isinstance(container, dict) or key not in container:
        raise ScenarioParseError("Missing required key", field=field)
    value = container[key]
    kinds = kind if isinstance(kind, tuple) else (kind,)
    if isinstance(value, bool) or not isinstance(value, kinds):
        expected = " or ".join(k.__name__ for k in kinds)
        raise ScenarioParseError(
            f"Expected {expected}, got {type(value).__name__}", field=field
        )
    return value


def _fraction_field(value: Any, field: str) -> Fraction:
    try:
        return parse_fraction(value)
    except ValueError as e:
        raise ScenarioParseError(str(e), field=field) from None


def scenario_from_dict(data: Any) -> Scenario:
    """Build a scenario from plain data, reporting the offending field on error."""
    if not isinstance(data, dict):
        raise ScenarioParseError("Top-level value must be an object", field="$")

    measurements = []
    for i, entry in enumerate(_require(data, "measurements", list, "measurements")):
        path = f"measurements[{i}]"
        measurements.append(
            Measurement(
                id=_require(entry, "id", str, f"{path}.id"),
                outcome_count=_require(entry, "outcomes", int, f"{path}.outcomes"),
            )
        )

    contexts = []
    for i, members in enumerate(_require(data, "contexts", list, "contexts")):
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            raise ScenarioParseError("Context must be a list of ids", field=f"contexts[{i}]")
        contexts.append(Context(tuple(members)))

    functional = _require(data, "functional", dict, "functional")
    offset = _fraction_field(
        _require(functional, "offset", (str, int), "functional.offset"), "functional.offset"
    )
    terms = []
    for i, entry in enumerate(_require(functional, "terms", list, "functional.terms")):
        path = f"functional.terms[{i}]"
        outcome = _require(entry, "outcome", list, f"{path}.outcome")
        if not all(isinstance(o, int) and not isinstance(o, bool) for o in outcome):
            raise ScenarioParseError("Outcome entries must be integers", field=f"{path}.outcome")
        terms.append(
            FunctionalTerm(
                context=_require(entry, "context", int, f"{path}.context"),
                outcome=tuple(outcome),
                coeff=_fraction_field(
                    _require(entry, "coeff", (str, int), f"{path}.coeff"), f"{path}.coeff"
                ),
            )
        )

    pairing = _require(data, "corr_pairing", list, "corr_pairing")
    if not all(isinstance(m, str) for m in pairing):
        raise ScenarioParseError("corr_pairing must list measurement ids", field="corr_pairing")

    return Scenario(
        measurements=tuple(measurements),
        contexts=tuple(contexts),
        functional=WitnessFunctional(terms=tuple(terms), offset=offset),
        corr_pairing=tuple(pairing),
    )


def load_scenario(text: str) -> Scenario:
    """
    Parse and validate a serialized scenario.

    Args:
        text: JSON text in the scenario file format

    Returns:
        Validated Scenario

    Raises:
        ScenarioParseError: Malformed JSON (with line/column) or wrong shape (with field)
        ScenarioValidationError: Well-formed scenario violating an invariant
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(e.msg, line=e.lineno, column=e.colno) from None
    return ensure_valid(scenario_from_dict(data))


def read_scenario(path: Union[str, Path]) -> Scenario:
    """Load a scenario file (UTF-8)."""
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def write_scenario(s: Scenario, path: Union[str, Path]) -> None:
    """Write a scenario file (UTF-8)."""
    Path(path).write_text(serialize_scenario(s), encoding="utf-8")
