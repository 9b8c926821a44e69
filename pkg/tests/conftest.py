"""
Shared test fixtures for ncinequality tests.
"""

import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest

from ncinequality.polytope import build_hrep, enumerate_vertices
from ncinequality.quantum import kcbs_realization
from ncinequality.scenario import (
    Context,
    FunctionalTerm,
    Measurement,
    Scenario,
    WitnessFunctional,
    build_n_cycle,
)

HALF = Fraction(1, 2)


@pytest.fixture(scope="session")
def cycle_vertices():
    """Vertices of the n-cycle polytope, enumerated once per n."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = enumerate_vertices(build_hrep(build_n_cycle(n)))
        return cache[n]

    return get


@pytest.fixture
def cycle5():
    """The 5-cycle scenario."""
    return build_n_cycle(5)


@pytest.fixture(scope="session")
def kcbs5():
    """Ideal KCBS realization for n = 5."""
    return kcbs_realization(5)


@pytest.fixture
def deterministic_point():
    """Coordinates of the deterministic n-cycle vertex fixed by a global assignment."""

    def build(assignment):
        n = len(assignment)
        coords = []
        for i in range(n):
            pair = (assignment[i], assignment[(i + 1) % n])
            coords.extend(Fraction(int(o == pair)) for o in itertools.product(range(2), repeat=2))
        return tuple(coords)

    return build


@pytest.fixture
def sign_point():
    """Coordinates of the n-cycle vertex with the given anticorrelation pattern."""

    def build(anticorrelated):
        coords = []
        for anti in anticorrelated:
            support = {(0, 1), (1, 0)} if anti else {(0, 0), (1, 1)}
            coords.extend(
                HALF if o in support else Fraction(0)
                for o in itertools.product(range(2), repeat=2)
            )
        return tuple(coords)

    return build


@pytest.fixture
def cycle_oracle(deterministic_point, sign_point):
    """Brute-force vertex set of the n-cycle: all product assignments plus all
    odd-parity anticorrelation patterns."""

    def build(n):
        det = {deterministic_point(a) for a in itertools.product(range(2), repeat=n)}
        ind = {
            sign_point(pattern)
            for pattern in itertools.product((False, True), repeat=n)
            if sum(pattern) % 2 == 1
        }
        return det, ind

    return build


@pytest.fixture
def random_scenario():
    """Seeded generator of small valid scenarios."""

    def build(seed, max_measurements=3, max_outcomes=2, max_context_size=2):
        rng = random.Random(seed)
        ids = [f"A{i}" for i in range(rng.randint(1, max_measurements))]
        measurements = tuple(Measurement(mid, rng.randint(2, max_outcomes)) for mid in ids)

        contexts = []
        for _ in range(rng.randint(1, 3)):
            size = rng.randint(1, min(max_context_size, len(ids)))
            contexts.append(Context(tuple(rng.sample(ids, size))))
        covered = {mid for c in contexts for mid in c.member_ids}
        contexts.extend(Context((mid,)) for mid in ids if mid not in covered)

        counts = {m.id: m.outcome_count for m in measurements}
        terms = []
        for index, context in enumerate(contexts):
            outcomes = list(itertools.product(*(range(counts[mid]) for mid in context.member_ids)))
            for outcome in rng.sample(outcomes, rng.randint(0, len(outcomes))):
                coeff = Fraction(rng.randint(-3, 3), rng.randint(1, 4))
                terms.append(FunctionalTerm(index, outcome, coeff))

        pairing = tuple(rng.sample(ids, rng.randint(1, len(ids))))
        offset = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
        return Scenario(
            measurements=measurements,
            contexts=tuple(contexts),
            functional=WitnessFunctional(terms=tuple(terms), offset=offset),
            corr_pairing=pairing,
        )

    return build


@pytest.fixture
def born_r():
    """Naive Born-rule value of F: loop over every context joint outcome."""

    def compute(realization, scenario):
        rho = realization.special_source.branches[0][1]
        coeffs = {(t.context, tuple(t.outcome)): t.coeff for t in scenario.functional.terms}
        total = float(scenario.functional.offset)
        for index, povm in enumerate(realization.context_povms):
            for outcome, effect in zip(povm.joint_outcomes, povm.effects):
                coeff = coeffs.get((index, outcome), 0)
                prob = 0.0
                for a in range(rho.shape[0]):
                    for b in range(rho.shape[0]):
                        prob += (effect[a, b] * rho[b, a]).real
                total += float(coeff) * prob
        return total

    return compute


@pytest.fixture
def tmp_config(tmp_path):
    """Write a settings file and return its path."""

    def write(content):
        path = tmp_path / "settings.json"
        if isinstance(content, str):
            path.write_text(content)
        else:
            path.write_text(json.dumps(content))
        return str(path)

    return write


@pytest.fixture
def kcbs_r():
    """Closed-form ideal KCBS value 2 cos(pi/n) / (1 + cos(pi/n))."""

    def value(n):
        c = np.cos(np.pi / n)
        return 2 * c / (1 + c)

    return value
