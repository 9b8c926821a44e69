"""
Noise-robust noncontextuality inequalities.

Scores every vertex with Corr and R scores, extracts the parameters
(R_det, R_ind, Corr_ind) and assembles the tradeoff bound

    Corr <= 1 - p* (1 - Corr_ind) (R - R_det) / (R_ind - R_det)

together with its logical-proof and n-cycle specializations.
"""

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Any, Optional, Sequence, Union

from .exceptions import (
    DegenerateScenarioError,
    LogicalProofError,
    NotAStatisticalProofError,
)
from .logger import get_logger
from .polytope import HRep, Vertex, VertexKind, build_hrep, classify_vertex, enumerate_vertices
from .scenario import Scenario
from .utils import format_fraction

Number = Union[Fraction, float]

COMPARISON_TOLERANCE = 1e-12


@dataclass(frozen=True)
class VertexScores:
    """Corr and R of one vertex."""

    vertex_index: int
    corr_lambda: Fraction
    r_lambda: Fraction
    kind: VertexKind


@dataclass(frozen=True)
class InequalityParameters:
    """The three exact parameters of the bound plus the vertex counts."""

    r_det: Fraction
    r_ind: Fraction
    corr_ind: Fraction
    n_det_vertices: int
    n_ind_vertices: int


@dataclass(frozen=True)
class BoundEvaluation:
    """Measured statistics checked against the bound."""

    corr: float
    r: float
    p_star: float
    rhs: float
    violated: bool
    margin: float


def corr_of_vertex(v: Vertex, s: Scenario) -> Fraction:
    """
    Source-optimized Corr of a vertex: the mean over the pairing of the
    largest marginal probability of each paired measurement.

    Raises:
        ValueError: If a paired measurement belongs to no context
    """
    if not s.corr_pairing:
        raise ValueError("Scenario has an empty corr_pairing")
    total = Fraction(0)
    for measurement_id in s.corr_pairing:
        containing = s.contexts_containing(measurement_id)
        if not containing:
            raise ValueError(f"Measurement '{measurement_id}' is not in any context")
        total += max(v.tables[containing[0]].marginal(measurement_id))
    return total / len(s.corr_pairing)


def r_of_vertex(v: Vertex, s: Scenario) -> Fraction:
    """Value of the witness functional on the vertex's tables."""
    value = s.functional.offset
    for term in s.functional.terms:
        value += term.coeff * v.tables[term.context].probability(term.outcome)
    return value


def score_vertices(vertices: Sequence[Vertex], s: Scenario) -> list[VertexScores]:
    """Score every vertex; unclassified vertices are classified on the way."""
    return [
        VertexScores(
            vertex_index=i,
            corr_lambda=corr_of_vertex(v, s),
            r_lambda=r_of_vertex(v, s),
            kind=v.kind or classify_vertex(v, s),
        )
        for i, v in enumerate(vertices)
    ]


def _parameters_from_scores(scores: Sequence[VertexScores]) -> InequalityParameters:
    if not scores:
        raise ValueError("No vertices to score")
    det = [sc for sc in scores if sc.kind is VertexKind.DETERMINISTIC]
    ind = [sc for sc in scores if sc.kind is VertexKind.INDETERMINISTIC]
    if not det:
        raise LogicalProofError(
            "No deterministic noncontextual assignment exists; use logical_bound instead"
        )
    if not ind:
        raise DegenerateScenarioError("The polytope has no indeterministic vertex")

    r_det = max(sc.r_lambda for sc in det)
    r_ind = max(sc.r_lambda for sc in ind)
    corr_ind = max(sc.corr_lambda for sc in ind)
    if r_ind <= r_det:
        raise NotAStatisticalProofError(
            f"R_ind = {format_fraction(r_ind)} does not exceed R_det = {format_fraction(r_det)}"
        )
    if corr_ind >= 1:
        raise DegenerateScenarioError("Indeterministic vertices reach Corr = 1")
    return InequalityParameters(
        r_det=r_det,
        r_ind=r_ind,
        corr_ind=corr_ind,
        n_det_vertices=len(det),
        n_ind_vertices=len(ind),
    )


def compute_parameters(vertices: Sequence[Vertex], s: Scenario) -> InequalityParameters:
    """
    Extract (R_det, R_ind, Corr_ind) from the vertex set.

    Args:
        vertices: Vertices of the scenario's polytope
        s: Scenario

    Returns:
        InequalityParameters with exact rationals

    Raises:
        LogicalProofError: If there is no deterministic vertex
        DegenerateScenarioError: If there is no indeterministic vertex, or Corr_ind = 1
        NotAStatisticalProofError: If R_ind <= R_det
    """
    return _parameters_from_scores(score_vertices(vertices, s))


def _check_parameters(params: InequalityParameters) -> None:
    if params.r_ind <= params.r_det:
        raise NotAStatisticalProofError(
            f"R_ind = {format_fraction(params.r_ind)} does not exceed "
            f"R_det = {format_fraction(params.r_det)}"
        )


def _exact(*values: Any) -> bool:
    return all(isinstance(x, Rational) and not isinstance(x, bool) for x in values)


def bound_rhs(params: InequalityParameters, p_star: Real, r: Real) -> Number:
    """
    Right-hand side of the bound at (p_star, r).

    ``r`` is not clamped: values below R_det give a right-hand side above 1.
    The result is an exact Fraction when p_star and r are rational.

    Raises:
        NotAStatisticalProofError: If R_ind <= R_det
        ValueError: If p_star is outside [0, 1]
    """
    _check_parameters(params)
    if not 0 <= p_star <= 1:
        raise ValueError(f"p_star must lie in [0, 1], got {p_star}")
    slope = (1 - params.corr_ind) / (params.r_ind - params.r_det)
    if _exact(p_star, r):
        return 1 - Fraction(p_star) * slope * (Fraction(r) - params.r_det)
    return 1.0 - float(p_star) * float(slope) * (float(r) - float(params.r_det))


def evaluate_bound(
    params: InequalityParameters,
    corr: Real,
    r: Real,
    p_star: Real,
    tolerance: float = COMPARISON_TOLERANCE,
) -> BoundEvaluation:
    """
    Check measured (Corr, R, p*) against the bound.

    ``violated`` requires the margin Corr - rhs to exceed ``tolerance``.
    """
    rhs = float(bound_rhs(params, p_star, r))
    margin = float(corr) - rhs
    return BoundEvaluation(
        corr=float(corr),
        r=float(r),
        p_star=float(p_star),
        rhs=rhs,
        violated=margin > tolerance,
        margin=margin,
    )


def logical_bound(vertices: Sequence[Vertex], s: Scenario) -> Fraction:
    """
    Largest Corr over indeterministic vertices.

    For scenarios without deterministic vertices this is the whole
    noncontextuality bound on Corr.

    Raises:
        DegenerateScenarioError: If there is no indeterministic vertex
    """
    ind = [sc for sc in score_vertices(vertices, s) if sc.kind is VertexKind.INDETERMINISTIC]
    if not ind:
        raise DegenerateScenarioError("The polytope has no indeterministic vertex")
    return max(sc.corr_lambda for sc in ind)


def noise_threshold(params: InequalityParameters, p_star: Real) -> Number:
    """Corr floor 1 - p*(1 - Corr_ind) below which no R witnesses contextuality."""
    if not 0 < p_star <= 1:
        raise ValueError(f"p_star must lie in (0, 1], got {p_star}")
    if _exact(p_star):
        return 1 - Fraction(p_star) * (1 - params.corr_ind)
    return 1.0 - float(p_star) * float(1 - params.corr_ind)


def maximal_sets(
    scores: Sequence[VertexScores], params: InequalityParameters
) -> tuple[list[int], list[int]]:
    """
    Vertices attaining the extremes used by the bound.

    Returns:
        (deterministic vertices with R = R_det and Corr = 1,
         indeterministic vertices with R = R_ind and Corr = Corr_ind), as vertex indices
    """
    det = [
        sc.vertex_index
        for sc in scores
        if sc.kind is VertexKind.DETERMINISTIC
        and sc.r_lambda == params.r_det
        and sc.corr_lambda == 1
    ]
    ind = [
        sc.vertex_index
        for sc in scores
        if sc.kind is VertexKind.INDETERMINISTIC
        and sc.r_lambda == params.r_ind
        and sc.corr_lambda == params.corr_ind
    ]
    return det, ind


def saturating_model_exists(
    vertices: Sequence[Vertex], params: InequalityParameters, s: Scenario
) -> bool:
    """True iff both maximal sets are non-empty, so the bound is tight."""
    det, ind = maximal_sets(score_vertices(vertices, s), params)
    return bool(det) and bool(ind)


def specialize_xu(params: InequalityParameters, n: int) -> Fraction:
    """
    Slope of the bound in R at p* = 1/3.

    For the n-cycle this recovers the coefficient n/6 of the known
    three-outcome inequality Corr <= 1 - (n/6)(R - (n-1)/n).
    """
    _check_parameters(params)
    if n < 3:
        raise ValueError(f"Cycle length must be at least 3, got {n}")
    slope = Fraction(1, 3) * (1 - params.corr_ind) / (params.r_ind - params.r_det)
    if slope != Fraction(n, 6):
        get_logger().warning(
            f"Slope {format_fraction(slope)} differs from the {n}-cycle value {n}/6"
        )
    return slope


def xu_rhs(n: int, r: Real) -> Number:
    """Right-hand side 1 - (n/6)(R - (n-1)/n) of the n-cycle three-outcome inequality."""
    if n < 3:
        raise ValueError(f"Cycle length must be at least 3, got {n}")
    if _exact(r):
        return 1 - Fraction(n, 6) * (Fraction(r) - Fraction(n - 1, n))
    return 1.0 - n / 6 * (float(r) - (n - 1) / n)


@dataclass(frozen=True)
class Derivation:
    """Everything produced by derive(); ``failure`` is set instead of ``parameters``
    when the scenario is not a statistical proof."""

    scenario: Scenario
    hrep: HRep
    vertices: tuple[Vertex, ...]
    scores: tuple[VertexScores, ...]
    parameters: Optional[InequalityParameters]
    saturable: bool
    failure: Optional[NotAStatisticalProofError] = None

    @property
    def n_det(self) -> int:
        return sum(1 for sc in self.scores if sc.kind is VertexKind.DETERMINISTIC)

    @property
    def n_ind(self) -> int:
        return sum(1 for sc in self.scores if sc.kind is VertexKind.INDETERMINISTIC)

    def require_parameters(self) -> InequalityParameters:
        """Parameters, or the stored NotAStatisticalProofError."""
        if self.parameters is None:
            raise self.failure
        return self.parameters


def derive(s: Scenario) -> Derivation:
    """
    Run the full pipeline: H-rep, vertices, scores, parameters, saturation.

    A scenario that is not a statistical proof still yields a Derivation,
    carrying the error in ``failure``.
    """
    logger = get_logger()
    hrep = build_hrep(s)
    logger.info(
        f"H-representation: {len(hrep.variables)} variables, "
        f"{len(hrep.equalities)} equalities, {len(hrep.inequalities)} inequalities"
    )
    vertices = tuple(enumerate_vertices(hrep))
    scores = tuple(score_vertices(vertices, s))
    logger.log_vertex_summary(
        sum(v.kind is VertexKind.DETERMINISTIC for v in vertices),
        sum(v.kind is VertexKind.INDETERMINISTIC for v in vertices),
        len(hrep.variables),
    )
    try:
        params = _parameters_from_scores(scores)
    except NotAStatisticalProofError as e:
        logger.warning(f"Not a statistical proof: {str(e)}")
        return Derivation(s, hrep, vertices, scores, None, False, failure=e)

    det, ind = maximal_sets(scores, params)
    return Derivation(s, hrep, vertices, scores, params, bool(det) and bool(ind))


def inequality_text(params: InequalityParameters) -> str:
    """The bound with its parameters substituted as fractions."""
    r_det = format_fraction(params.r_det)
    return (
        f"Corr <= 1 - p*·(1-{format_fraction(params.corr_ind)})"
        f"·(R-{r_det})/({format_fraction(params.r_ind)}-{r_det})"
    )


def derivation_report(d: Derivation) -> dict[str, Any]:
    """JSON-ready summary of a derivation."""
    report: dict[str, Any] = {}
    if d.parameters is not None:
        p = d.parameters
        report.update(
            {
                "r_det": format_fraction(p.r_det),
                "r_ind": format_fraction(p.r_ind),
                "corr_ind": format_fraction(p.corr_ind),
            }
        )
    report.update(
        {
            "n_det": d.n_det,
            "n_ind": d.n_ind,
            "n_vertices": len(d.vertices),
            "saturable": d.saturable,
        }
    )
    if d.parameters is not None:
        report["inequality"] = inequality_text(d.parameters)
    else:
        report["diagnosis"] = {"error": type(d.failure).__name__, "message": str(d.failure)}
    return report
