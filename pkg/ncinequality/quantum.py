"""
Finite-dimensional quantum realizations of contextuality scenarios.

This module provides:
- measurement, context POVM and source ensemble containers (numpy arrays)
- the qutrit KCBS construction for odd n-cycles
- joint POVMs for compatible measurements
- evaluation of (Corr, R, p*) by the Born rule
- operational-equivalence checks and depolarizing noise
- translation of three-outcome cycles into four-outcome context POVMs
- a JSON dump format for realizations

Outcome 0 of a binary measurement is the projector branch (+1 label).
"""

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NamedTuple, Optional, Sequence, Union

import numpy as np

from .exceptions import IncompatibleMeasurementsError, RealizationError, TranslationError
from .logger import get_logger
from .scenario import Scenario
from .utils import round_float

STRUCTURAL_TOLERANCE = 1e-10
COMPARISON_TOLERANCE = 1e-12


def _as_operator(matrix: Any) -> np.ndarray:
    op = np.asarray(matrix, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise RealizationError(f"Operator must be a square matrix, got shape {op.shape}")
    return op


def _max_abs(op: np.ndarray) -> float:
    return float(np.max(np.abs(op))) if op.size else 0.0


def is_hermitian(op: np.ndarray, tol: float = STRUCTURAL_TOLERANCE) -> bool:
    return _max_abs(op - op.conj().T) <= tol


def min_eigenvalue(op: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``op``."""
    return float(np.linalg.eigvalsh((op + op.conj().T) / 2)[0])


def is_psd(op: np.ndarray, tol: float = STRUCTURAL_TOLERANCE) -> bool:
    return is_hermitian(op, tol) and min_eigenvalue(op) >= -tol


def _check_effects(effects: Sequence[np.ndarray], label: str, tol: float) -> None:
    if not effects:
        raise RealizationError(f"{label} has no effects")
    dim = effects[0].shape[0]
    for i, e in enumerate(effects):
        if e.shape != (dim, dim):
            raise RealizationError(
                f"{label}: effect {i} has shape {e.shape}, expected {(dim, dim)}"
            )
        if not is_psd(e, tol):
            raise RealizationError(f"{label}: effect {i} is not positive semidefinite")
    if _max_abs(sum(effects) - np.eye(dim)) > tol:
        raise RealizationError(f"{label}: effects do not sum to the identity")


@dataclass(frozen=True, eq=False)
class QuantumMeasurement:
    """A POVM with one effect per outcome."""

    measurement_id: str
    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        effects = tuple(_as_operator(e) for e in self.effects)
        _check_effects(effects, f"Measurement '{self.measurement_id}'", STRUCTURAL_TOLERANCE)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def outcome_count(self) -> int:
        return len(self.effects)


@dataclass(frozen=True, eq=False)
class ContextPOVM:
    """Joint POVM of a context; effects are listed in itertools.product order."""

    member_ids: tuple[str, ...]
    outcome_counts: tuple[int, ...]
    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "member_ids", tuple(self.member_ids))
        object.__setattr__(self, "outcome_counts", tuple(self.outcome_counts))
        effects = tuple(_as_operator(e) for e in self.effects)
        expected = int(np.prod(self.outcome_counts)) if self.outcome_counts else 0
        if len(self.member_ids) != len(self.outcome_counts) or len(effects) != expected:
            raise RealizationError(
                f"Context {list(self.member_ids)}: {len(effects)} effects do not match "
                f"outcome counts {list(self.outcome_counts)}"
            )
        _check_effects(effects, f"Context {list(self.member_ids)}", STRUCTURAL_TOLERANCE)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def joint_outcomes(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(k) for k in self.outcome_counts)))

    def effect(self, outcome: Sequence[int]) -> np.ndarray:
        """Effect of one joint outcome."""
        return self.effects[self.joint_outcomes.index(tuple(outcome))]

    def marginal(self, position: int) -> list[np.ndarray]:
        """Effects of the member at ``position`` obtained by coarse-graining."""
        sums = [
            np.zeros((self.dim, self.dim), dtype=complex)
            for _ in range(self.outcome_counts[position])
        ]
        for outcome, e in zip(self.joint_outcomes, self.effects):
            sums[outcome[position]] = sums[outcome[position]] + e
        return sums


@dataclass(frozen=True, eq=False)
class SourceEnsemble:
    """A source: branch ``s`` is emitted with probability p and prepares a state."""

    source_id: str
    branches: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        branches = tuple((float(p), _as_operator(rho)) for p, rho in self.branches)
        label = f"Source '{self.source_id}'"
        if not branches:
            raise RealizationError(f"{label} has no branches")
        if any(p < 0 for p, _ in branches):
            raise RealizationError(f"{label}: negative branch probability")
        if abs(sum(p for p, _ in branches) - 1) > COMPARISON_TOLERANCE:
            raise RealizationError(f"{label}: branch probabilities do not sum to 1")
        for i, (_, rho) in enumerate(branches):
            if abs(np.trace(rho) - 1) > STRUCTURAL_TOLERANCE:
                raise RealizationError(f"{label}: state {i} does not have unit trace")
            if not is_psd(rho):
                raise RealizationError(f"{label}: state {i} is not positive semidefinite")
        object.__setattr__(self, "branches", branches)

    def average(self) -> np.ndarray:
        """The ensemble average state."""
        return sum(p * rho for p, rho in self.branches)


@dataclass(frozen=True, eq=False)
class QuantumRealization:
    """Measurements, context POVMs and sources in one Hilbert space."""

    dim: int
    measurements: tuple[QuantumMeasurement, ...]
    context_povms: tuple[ContextPOVM, ...]
    sources: tuple[SourceEnsemble, ...]
    special_source: SourceEnsemble

    def __post_init__(self):
        for name in ("measurements", "context_povms", "sources"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        shapes = [m.dim for m in self.measurements] + [c.dim for c in self.context_povms]
        for src in (*self.sources, self.special_source):
            shapes += [rho.shape[0] for _, rho in src.branches]
        if any(d != self.dim for d in shapes):
            raise RealizationError(f"All operators must act on dimension {self.dim}")

    def measurement(self, measurement_id: str) -> QuantumMeasurement:
        for m in self.measurements:
            if m.measurement_id == measurement_id:
                return m
        raise RealizationError(f"Realization has no measurement '{measurement_id}'")


@dataclass(frozen=True, eq=False)
class CycleFragment:
    """Measurements and context POVMs of a cycle, before sources are attached."""

    measurements: tuple[QuantumMeasurement, ...]
    context_povms: tuple[ContextPOVM, ...]

    def with_sources(
        self, sources: Sequence[SourceEnsemble], special_source: SourceEnsemble
    ) -> QuantumRealization:
        return QuantumRealization(
            dim=self.measurements[0].dim,
            measurements=tuple(self.measurements),
            context_povms=tuple(self.context_povms),
            sources=tuple(sources),
            special_source=special_source,
        )


class RealizationStatistics(NamedTuple):
    corr: float
    r: float
    p_star: float


@dataclass(frozen=True)
class EquivalenceReport:
    """Result of check_operational_equivalences."""

    source_deviation: float
    measurement_deviation: float
    passed: bool
    failures: tuple[str, ...] = ()


def projector(vector: Sequence[complex]) -> np.ndarray:
    """Rank-one projector onto a (normalized) vector."""
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def binary_measurement(measurement_id: str, effect: np.ndarray) -> QuantumMeasurement:
    """The two-outcome measurement {E, I - E}."""
    effect = _as_operator(effect)
    return QuantumMeasurement(measurement_id, (effect, np.eye(effect.shape[0]) - effect))


def joint_povm_from_commuting(
    *measurements: QuantumMeasurement, tol: float = STRUCTURAL_TOLERANCE
) -> ContextPOVM:
    """
    Joint POVM of pairwise commuting measurements.

    The effect of a joint outcome is the product of the members' effects.

    Args:
        *measurements: Two or more measurements on the same space
        tol: Commutator tolerance (max-norm)

    Returns:
        ContextPOVM whose marginals reproduce the inputs

    Raises:
        IncompatibleMeasurementsError: If some pair of effects does not commute
    """
    if not measurements:
        raise ValueError("At least one measurement is required")
    dim = measurements[0].dim
    if any(m.dim != dim for m in measurements):
        raise IncompatibleMeasurementsError("Measurements act on different dimensions")

    for a, b in itertools.combinations(measurements, 2):
        for e, f in itertools.product(a.effects, b.effects):
            if _max_abs(e @ f - f @ e) > tol:
                raise IncompatibleMeasurementsError(
                    f"Effects of '{a.measurement_id}' and '{b.measurement_id}' do not commute"
                )

    effects = []
    for outcome in itertools.product(*(range(m.outcome_count) for m in measurements)):
        joint = np.eye(dim, dtype=complex)
        for m, o in zip(measurements, outcome):
            joint = joint @ m.effects[o]
        effects.append((joint + joint.conj().T) / 2)
    return ContextPOVM(
        member_ids=tuple(m.measurement_id for m in measurements),
        outcome_counts=tuple(m.outcome_count for m in measurements),
        effects=tuple(effects),
    )


def _outcome_zero_effects(
    m1: QuantumMeasurement, m2: QuantumMeasurement, tol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if m1.outcome_count != 2 or m2.outcome_count != 2:
        raise IncompatibleMeasurementsError("Both measurements must be binary")
    e1, e2 = m1.effects[0], m2.effects[0]
    rest = np.eye(m1.dim) - e1 - e2
    if min_eigenvalue(rest) < -tol:
        raise IncompatibleMeasurementsError(
            f"E+ of '{m1.measurement_id}' and '{m2.measurement_id}' sum above the identity; "
            "the joint measurement is genuinely four-outcome"
        )
    return e1, e2, rest


def joint_povm_zero_coincidence(
    m1: QuantumMeasurement, m2: QuantumMeasurement, tol: float = STRUCTURAL_TOLERANCE
) -> ContextPOVM:
    """
    Joint POVM {0, E1+, E2+, I - E1+ - E2+} of two binary measurements whose
    outcome-0 effects satisfy E1+ + E2+ <= I. The (+, +) outcome never occurs.

    Raises:
        IncompatibleMeasurementsError: If E1+ + E2+ exceeds the identity
    """
    e1, e2, rest = _outcome_zero_effects(m1, m2, tol)
    return ContextPOVM(
        member_ids=(m1.measurement_id, m2.measurement_id),
        outcome_counts=(2, 2),
        effects=(np.zeros_like(e1), e1, e2, rest),
    )


def tri_form(
    m1: QuantumMeasurement, m2: QuantumMeasurement, tol: float = STRUCTURAL_TOLERANCE
) -> QuantumMeasurement:
    """Three-outcome measurement {E1+, I - E1+ - E2+, E2+} of an adjacent pair."""
    e1, e2, rest = _outcome_zero_effects(m1, m2, tol)
    return QuantumMeasurement(f"{m1.measurement_id}{m2.measurement_id}", (e1, rest, e2))


def translate_tri_to_quad(
    tri_measurements: Sequence[QuantumMeasurement],
    member_ids: Optional[Sequence[str]] = None,
    tol: float = STRUCTURAL_TOLERANCE,
) -> CycleFragment:
    """
    Turn a cycle of three-outcome measurements into binary measurements and
    four-outcome context POVMs.

    Outcome map for the pair (M_i, M_i+1): 0 -> (+, -), 1 -> (-, -), 2 -> (-, +);
    the (+, +) effect is zero. Outcome 2 of each measurement must equal
    outcome 0 of the next one.

    Args:
        tri_measurements: n three-outcome measurements, n >= 3
        member_ids: Ids of the n binary measurements (default M1..Mn)
        tol: Equality tolerance (max-norm)

    Returns:
        CycleFragment with contexts (M_i, M_i+1)

    Raises:
        TranslationError: If the cycle is malformed or an equivalence fails
    """
    n = len(tri_measurements)
    if n < 3:
        raise TranslationError(f"A cycle needs at least 3 measurements, got {n}")
    if any(t.outcome_count != 3 for t in tri_measurements):
        raise TranslationError("Every measurement of the cycle must have three outcomes")
    ids = tuple(member_ids) if member_ids is not None else tuple(f"M{i + 1}" for i in range(n))
    if len(ids) != n:
        raise TranslationError(f"Expected {n} member ids, got {len(ids)}")

    for i, tri in enumerate(tri_measurements):
        following = tri_measurements[(i + 1) % n]
        deviation = _max_abs(tri.effects[2] - following.effects[0])
        if deviation > tol:
            raise TranslationError(
                f"Outcome 2 of '{tri.measurement_id}' is not equivalent to outcome 0 of "
                f"'{following.measurement_id}' (deviation {deviation:.3g}); the joint "
                "measurement must be represented by a genuinely four-outcome POVM"
            )

    measurements = tuple(
        binary_measurement(ids[i], tri.effects[0]) for i, tri in enumerate(tri_measurements)
    )
    contexts = tuple(
        ContextPOVM(
            member_ids=(ids[i], ids[(i + 1) % n]),
            outcome_counts=(2, 2),
            effects=(np.zeros_like(tri.effects[0]), tri.effects[0], tri.effects[2], tri.effects[1]),
        )
        for i, tri in enumerate(tri_measurements)
    )
    return CycleFragment(measurements, contexts)


def kcbs_realization(n: int, tol: float = STRUCTURAL_TOLERANCE) -> QuantumRealization:
    """
    Qutrit realization of the odd n-cycle.

    The rays |l_i> = (sin t cos f_i, sin t sin f_i, cos t) with
    cos^2 t = cos(pi/n) / (1 + cos(pi/n)) and f_i = (n-1) pi i / n make
    adjacent projectors orthogonal. Sources S_i prepare |l_i><l_i| with
    probability 1/3 and (I - P_i)/2 otherwise; the special source prepares
    |psi> = (0, 0, 1) with probability 1/3. All sources average to I/3.

    Args:
        n: Odd cycle length, at least 5
        tol: Tolerance for the adjacent orthogonality check

    Returns:
        QuantumRealization with measurement ids M1..Mn

    Raises:
        ValueError: If n is even or smaller than 5
        RealizationError: If adjacent rays are not orthogonal within tol
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 5 or n % 2 == 0:
        raise ValueError(f"KCBS construction needs an odd n >= 5, got {n!r}")

    c = np.cos(np.pi / n)
    cos_t = np.sqrt(c / (1 + c))
    sin_t = np.sqrt(1 / (1 + c))
    rays = [
        np.array([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t])
        for phi in ((n - 1) * np.pi * i / n for i in range(1, n + 1))
    ]
    for i in range(n):
        overlap = abs(np.dot(rays[i], rays[(i + 1) % n]))
        if overlap > tol:
            raise RealizationError(f"Rays {i + 1} and {(i + 1) % n + 1} overlap by {overlap:.3g}")

    identity = np.eye(3)
    projectors = [projector(ray) for ray in rays]
    measurements = tuple(binary_measurement(f"M{i + 1}", p) for i, p in enumerate(projectors))
    contexts = tuple(
        joint_povm_from_commuting(measurements[i], measurements[(i + 1) % n], tol=tol)
        for i in range(n)
    )
    sources = tuple(
        SourceEnsemble(f"S{i + 1}", ((1 / 3, p), (2 / 3, (identity - p) / 2)))
        for i, p in enumerate(projectors)
    )
    psi = projector([0, 0, 1])
    special = SourceEnsemble("S*", ((1 / 3, psi), (2 / 3, (identity - psi) / 2)))
    get_logger().debug(f"Built KCBS realization for n={n}, cos^2 theta={cos_t ** 2:.15g}")
    return CycleFragment(measurements, contexts).with_sources(sources, special)


def _check_alignment(q: QuantumRealization, s: Scenario) -> None:
    scenario_ids = [m.id for m in s.measurements]
    realization_ids = [m.measurement_id for m in q.measurements]
    if sorted(scenario_ids) != sorted(realization_ids):
        raise RealizationError(
            f"Realization measurements {realization_ids} do not match scenario {scenario_ids}"
        )
    for m in s.measurements:
        if q.measurement(m.id).outcome_count != m.outcome_count:
            raise RealizationError(f"Outcome count mismatch for measurement '{m.id}'")
    if len(q.context_povms) != len(s.contexts):
        raise RealizationError(
            f"Realization has {len(q.context_povms)} context POVMs, "
            f"scenario has {len(s.contexts)} contexts"
        )
    for i, (povm, context) in enumerate(zip(q.context_povms, s.contexts)):
        if povm.member_ids != context.member_ids:
            raise RealizationError(
                f"Context {i}: POVM members {list(povm.member_ids)} "
                f"differ from {list(context.member_ids)}"
            )
    if len(q.sources) != len(s.corr_pairing):
        raise RealizationError(
            f"Realization has {len(q.sources)} sources, corr_pairing has {len(s.corr_pairing)}"
        )
    for source, measurement_id in zip(q.sources, s.corr_pairing):
        outcomes = q.measurement(measurement_id).outcome_count
        if len(source.branches) > outcomes:
            raise RealizationError(
                f"Source '{source.source_id}' has {len(source.branches)} branches, "
                f"paired measurement '{measurement_id}' has {outcomes} outcomes"
            )


def _born(effect: np.ndarray, rho: np.ndarray) -> float:
    return float(np.trace(effect @ rho).real)


def evaluate_realization(q: QuantumRealization, s: Scenario) -> RealizationStatistics:
    """
    Corr, R and p* of a realization by the Born rule.

    Source i is paired with measurement corr_pairing[i]; branch s of the
    source counts when the measurement returns outcome s. R is F evaluated on
    the context statistics of the special source's branch-0 state.

    Raises:
        RealizationError: If the realization is not aligned with the scenario
    """
    _check_alignment(q, s)

    total = 0.0
    for source, measurement_id in zip(q.sources, s.corr_pairing):
        effects = q.measurement(measurement_id).effects
        total += sum(
            p * _born(effects[outcome], rho)
            for outcome, (p, rho) in enumerate(source.branches)
        )
    corr = total / len(s.corr_pairing)

    p_star, rho_star = q.special_source.branches[0]
    r = float(s.functional.offset)
    for term in s.functional.terms:
        r += float(term.coeff) * _born(q.context_povms[term.context].effect(term.outcome), rho_star)

    return RealizationStatistics(corr=corr, r=r, p_star=p_star)


def _marginal_failures(q: QuantumRealization, tol: float) -> tuple[float, list[str]]:
    """Largest deviation of a context POVM marginal from its standalone effects."""
    failures = []
    worst = 0.0
    for povm in q.context_povms:
        for position, measurement_id in enumerate(povm.member_ids):
            try:
                standalone = q.measurement(measurement_id).effects
            except RealizationError as e:
                failures.append(str(e))
                continue
            marginal = povm.marginal(position)
            if len(marginal) != len(standalone):
                failures.append(f"Outcome count mismatch for '{measurement_id}'")
                continue
            deviation = max(_max_abs(a - b) for a, b in zip(marginal, standalone))
            worst = max(worst, deviation)
            if deviation > tol:
                failures.append(
                    f"Marginal of '{measurement_id}' in context {list(povm.member_ids)} "
                    f"differs by {deviation:.3g}"
                )
    return worst, failures


def check_operational_equivalences(
    q: QuantumRealization, tol: float = STRUCTURAL_TOLERANCE
) -> EquivalenceReport:
    """
    Check that all sources average to the same state and that every context
    POVM coarse-grains to its members' standalone effects.

    Raises:
        ValueError: If tol is not positive
    """
    if not tol > 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    failures = []

    named = [(src.source_id, src.average()) for src in (*q.sources, q.special_source)]
    source_deviation = 0.0
    for (a_id, a), (b_id, b) in itertools.combinations(named, 2):
        deviation = _max_abs(a - b)
        source_deviation = max(source_deviation, deviation)
        if deviation > tol:
            failures.append(f"Sources '{a_id}' and '{b_id}' differ by {deviation:.3g}")

    measurement_deviation, marginal_failures = _marginal_failures(q, tol)
    failures.extend(marginal_failures)

    return EquivalenceReport(
        source_deviation=source_deviation,
        measurement_deviation=measurement_deviation,
        passed=not failures,
        failures=tuple(failures),
    )


def depolarize(q: QuantumRealization, v: float) -> QuantumRealization:
    """
    Apply depolarizing noise with visibility ``v`` to every effect:
    E -> v E + (1 - v) Tr(E)/dim I. Measurements and context POVMs are
    transformed alike, so marginals stay consistent. Sources are unchanged.
    """
    if not 0 <= v <= 1:
        raise ValueError(f"Visibility must lie in [0, 1], got {v}")
    identity = np.eye(q.dim)

    def noisy(e: np.ndarray) -> np.ndarray:
        return v * e + (1 - v) * np.trace(e).real / q.dim * identity

    return QuantumRealization(
        dim=q.dim,
        measurements=tuple(
            QuantumMeasurement(m.measurement_id, tuple(noisy(e) for e in m.effects))
            for m in q.measurements
        ),
        context_povms=tuple(
            ContextPOVM(c.member_ids, c.outcome_counts, tuple(noisy(e) for e in c.effects))
            for c in q.context_povms
        ),
        sources=q.sources,
        special_source=q.special_source,
    )


def _matrix_to_json(op: np.ndarray) -> list:
    return [[[round_float(z.real), round_float(z.imag)] for z in row] for row in op]


def _matrix_from_json(data: Any, field: str) -> np.ndarray:
    try:
        array = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise RealizationError(f"Malformed matrix at {field}") from None
    if array.ndim != 3 or array.shape[2] != 2:
        raise RealizationError(f"Matrix at {field} must be rows of [re, im] pairs")
    return _as_operator(array[..., 0] + 1j * array[..., 1])


def _source_to_json(src: SourceEnsemble) -> dict[str, Any]:
    return {
        "id": src.source_id,
        "branches": [
            {"probability": round_float(p), "state": _matrix_to_json(rho)}
            for p, rho in src.branches
        ],
    }


def _source_from_json(data: dict[str, Any], field: str) -> SourceEnsemble:
    return SourceEnsemble(
        data["id"],
        tuple(
            (b["probability"], _matrix_from_json(b["state"], f"{field}.branches[{i}].state"))
            for i, b in enumerate(data["branches"])
        ),
    )


def realization_to_dict(q: QuantumRealization) -> dict[str, Any]:
    return {
        "dim": q.dim,
        "measurements": [
            {"id": m.measurement_id, "effects": [_matrix_to_json(e) for e in m.effects]}
            for m in q.measurements
        ],
        "contexts": [
            {
                "members": list(c.member_ids),
                "outcomes": list(c.outcome_counts),
                "effects": [_matrix_to_json(e) for e in c.effects],
            }
            for c in q.context_povms
        ],
        "sources": [_source_to_json(src) for src in q.sources],
        "special_source": _source_to_json(q.special_source),
    }


def realization_to_json(q: QuantumRealization) -> str:
    """Realization dump: matrices as rows of [re, im] pairs."""
    return json.dumps(realization_to_dict(q), indent=2) + "\n"


def realization_from_json(text: str) -> QuantumRealization:
    """
    Load a realization dump. Context POVMs must marginalize to their members'
    standalone effects within the structural tolerance.

    Raises:
        RealizationError: If the text is not a well-formed realization or a
            context POVM is inconsistent with its member measurements
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RealizationError(
            f"Invalid realization JSON: {e.msg} (line {e.lineno}, column {e.colno})"
        ) from None
    try:
        q = QuantumRealization(
            dim=int(data["dim"]),
            measurements=tuple(
                QuantumMeasurement(
                    m["id"],
                    tuple(
                        _matrix_from_json(e, f"measurements[{i}].effects[{j}]")
                        for j, e in enumerate(m["effects"])
                    ),
                )
                for i, m in enumerate(data["measurements"])
            ),
            context_povms=tuple(
                ContextPOVM(
                    tuple(c["members"]),
                    tuple(c["outcomes"]),
                    tuple(
                        _matrix_from_json(e, f"contexts[{i}].effects[{j}]")
                        for j, e in enumerate(c["effects"])
                    ),
                )
                for i, c in enumerate(data["contexts"])
            ),
            sources=tuple(
                _source_from_json(src, f"sources[{i}]") for i, src in enumerate(data["sources"])
            ),
            special_source=_source_from_json(data["special_source"], "special_source"),
        )
    except (KeyError, TypeError) as e:
        raise RealizationError(f"Malformed realization: missing or invalid {str(e)}") from None
    _, failures = _marginal_failures(q, STRUCTURAL_TOLERANCE)
    if failures:
        raise RealizationError(f"Inconsistent context POVMs: {'; '.join(failures)}")
    return q


def read_realization(path: Union[str, Path]) -> QuantumRealization:
    return realization_from_json(Path(path).read_text(encoding="utf-8"))


def write_realization(q: QuantumRealization, path: Union[str, Path]) -> None:
    Path(path).write_text(realization_to_json(q), encoding="utf-8")
