"""End-to-end pipeline: plan per-class circuits, collect exact or sampled
counts, estimate class expectations by parity, combine with class weights,
and render verdicts against the classical and quantum bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import (
    QUARTER_TURN,
    Circuit,
    MeasurementSetting,
    ghz_circuit,
    with_setting,
)
from .mermin import (
    BoundsRecord,
    SymmetryClass,
    bounds_for,
    canonical_polynomial,
    symmetry_classes,
)
from .noise import NoiseModel, ZERO_NOISE, noisy_distribution
from .statevector import CountsTable, OutcomeDistribution, sample_counts
from .transpile import DeviceModel, default_device, transpile

# Preparation phases (radians) that attain the positive quantum bound with
# X as the unprimed and Y as the primed observable, determined against the
# dense-operator oracle: the expectation over the phase family is sinusoidal
# and peaks at these points.
PREP_PHASES_MAX = {3: math.pi / 2, 4: 3 * math.pi / 4, 5: math.pi}

# Documented alternate phases. For n=4 and n=5 these attain the bound with
# negative sign under this package's conventions, so evaluate |value|.
PREP_PHASES_ALT = {3: math.pi / 2, 4: 7 * math.pi / 4, 5: 0.0}

DEFAULT_SHOTS = {3: 1024, 4: 8192, 5: 8192}

GENUINE_THRESHOLD_4 = 8.0


def resolve_prep_phase(n: int, selector) -> float:
    """Accept "max", "alt", an integer number of quarter turns, or a raw
    angle in radians (must be a multiple of pi/4)."""
    if isinstance(selector, str):
        if selector == "max":
            return PREP_PHASES_MAX[n]
        if selector == "alt":
            return PREP_PHASES_ALT[n]
        raise ValueError(f"unknown prep phase {selector!r}")
    if isinstance(selector, int) and not isinstance(selector, bool):
        return (selector % 8) * QUARTER_TURN
    return float(selector)


@dataclass(frozen=True)
class ExperimentPlan:
    n: int
    prep_phase: float
    classes: tuple[tuple[SymmetryClass, Circuit], ...]
    shots_per_class: int
    seed: int
    device: DeviceModel
    noise: NoiseModel

    def __post_init__(self):
        if self.shots_per_class < 1:
            raise ValueError("shots_per_class must be >= 1")
        if not self.classes:
            raise ValueError("plan needs at least one class")


@dataclass(frozen=True)
class ClassEstimate:
    prime_count: int
    weight: int
    expectation: float
    stderr: float


@dataclass(frozen=True)
class MerminEstimate:
    n_parties: int
    mode: str
    reduction: str
    prep_phase: float
    shots_per_class: int
    seed: int
    per_class: tuple[ClassEstimate, ...]
    value: float
    stderr: float
    lr_bound: float
    qm_bound: float
    violates_lr: bool
    sigma_distance: float | None
    exceeds_genuine_threshold: bool | None


def build_plan(
    n: int,
    prep_phase="max",
    shots: int | None = None,
    seed: int = 0,
    device: DeviceModel | None = None,
    noise: NoiseModel = ZERO_NOISE,
) -> ExperimentPlan:
    """One lowered circuit per prime-count symmetry class. The GHZ control
    qubit is the device's CNOT target, so the fan-out is star-legal."""
    if n not in DEFAULT_SHOTS:
        raise ValueError("plans are defined for n in {3, 4, 5}")
    if device is None:
        device = default_device(n)
    if device.n_qubits != n:
        raise ValueError("device qubit count does not match n")
    phase = resolve_prep_phase(n, prep_phase)
    if shots is None:
        shots = DEFAULT_SHOTS[n]
    poly = canonical_polynomial(n)
    prep = ghz_circuit(n, phase, control=device.cnot_target)
    lowered = []
    for cls in symmetry_classes(poly):
        setting = MeasurementSetting(n, cls.representative_mask)
        circ, _ = transpile(with_setting(prep, setting), device)
        lowered.append((cls, circ))
    return ExperimentPlan(n, phase, tuple(lowered), shots, seed, device, noise)


@lru_cache(maxsize=None)
def _parity_signs(n: int) -> np.ndarray:
    par = np.arange(1 << n, dtype=np.uint32)
    for shift in (16, 8, 4, 2, 1):
        par = par ^ (par >> shift)
    return 1.0 - 2.0 * (par & 1).astype(float)


def parity_expectation_probs(probs, n: int | None = None) -> float:
    """Signed parity sum over a probability table: even-parity mass minus
    odd-parity mass. Accepts an OutcomeDistribution, an array indexed by
    outcome, or a dict keyed by bitstring. No normalization is applied."""
    if isinstance(probs, OutcomeDistribution):
        return float(np.dot(_parity_signs(probs.n_qubits), probs.probabilities))
    if isinstance(probs, dict):
        total = 0.0
        for key, p in probs.items():
            sign = -1.0 if key.count("1") % 2 else 1.0
            total += sign * p
        return total
    arr = np.asarray(probs, dtype=float)
    if n is None:
        n = int(arr.size).bit_length() - 1
    return float(np.dot(_parity_signs(n), arr))


def parity_expectation(t: CountsTable) -> tuple[float, float]:
    """Parity estimator and its standard error from sampled counts. The
    stderr follows the multinomial covariance of the signed sum,
    sqrt((1 - E^2) / shots)."""
    if not t.counts:
        raise ValueError("empty counts table")
    total = 0.0
    for key, cnt in t.counts.items():
        sign = -1.0 if key.count("1") % 2 else 1.0
        total += sign * cnt
    e = total / t.shots
    var = max(1.0 - e * e, 0.0)
    return e, math.sqrt(var / t.shots)


def stderr_probability(p: float, shots: int) -> float:
    """Multinomial standard error of one probability, sqrt(p(1-p)/N)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return math.sqrt(p * (1.0 - p) / shots)


def combine(
    per_class,
    classes,
    bounds: BoundsRecord,
    n_parties: int,
    mode: str = "sampled",
    reduction: str = "classes",
    prep_phase: float = 0.0,
    shots_per_class: int = 1,
    seed: int = 0,
) -> MerminEstimate:
    """Weighted combination of class estimates.

    per_class is a sequence of (prime_count, expectation, stderr) aligned
    with the class list; value = sum of signed_weight * expectation and the
    stderr adds the independent class errors in quadrature.
    """
    classes = list(classes)
    per_class = list(per_class)
    if len(per_class) != len(classes):
        raise ValueError("class mismatch")
    entries = []
    value = 0.0
    var = 0.0
    for (pc, e, se), cls in zip(per_class, classes):
        if pc != cls.prime_count:
            raise ValueError("class mismatch")
        value += cls.signed_weight * e
        var += (cls.signed_weight * se) ** 2
        entries.append(ClassEstimate(pc, cls.signed_weight, float(e), float(se)))
    stderr = math.sqrt(var)
    sigma = None
    if mode == "sampled" and stderr > 0.0:
        sigma = (value - bounds.lr_bound) / stderr
    genuine = bool(value > GENUINE_THRESHOLD_4) if n_parties == 4 else None
    return MerminEstimate(
        n_parties=n_parties,
        mode=mode,
        reduction=reduction,
        prep_phase=prep_phase,
        shots_per_class=shots_per_class,
        seed=seed,
        per_class=tuple(entries),
        value=float(value),
        stderr=float(stderr),
        lr_bound=bounds.lr_bound,
        qm_bound=bounds.qm_bound,
        violates_lr=bool(value - bounds.lr_bound > 0),
        sigma_distance=sigma,
        exceeds_genuine_threshold=genuine,
    )


def class_distributions(plan: ExperimentPlan) -> list[tuple[SymmetryClass, OutcomeDistribution]]:
    return [(cls, noisy_distribution(circ, plan.noise)) for cls, circ in plan.classes]


def run_plan(plan: ExperimentPlan, mode: str = "exact") -> MerminEstimate:
    """Exact mode evaluates the noisy outcome probabilities directly
    (stderr 0); sampled mode draws shots_per_class counts per class with a
    per-class seed derived as plan.seed XOR class index."""
    if mode not in ("exact", "sampled"):
        raise ValueError("mode must be exact or sampled")
    bounds = bounds_for(plan.n)
    per_class = []
    classes = []
    for index, (cls, circ) in enumerate(plan.classes):
        dist = noisy_distribution(circ, plan.noise)
        if mode == "exact":
            e, se = parity_expectation_probs(dist), 0.0
        else:
            counts = sample_counts(dist, plan.shots_per_class, plan.seed ^ index)
            e, se = parity_expectation(counts)
        per_class.append((cls.prime_count, e, se))
        classes.append(cls)
    return combine(
        per_class, classes, bounds, plan.n,
        mode=mode, reduction="classes", prep_phase=plan.prep_phase,
        shots_per_class=plan.shots_per_class, seed=plan.seed,
    )


def sampled_class_counts(plan: ExperimentPlan) -> list[tuple[SymmetryClass, CountsTable]]:
    """The per-class counts a sampled run would use, for export."""
    out = []
    for index, (cls, circ) in enumerate(plan.classes):
        dist = noisy_distribution(circ, plan.noise)
        out.append((cls, sample_counts(dist, plan.shots_per_class, plan.seed ^ index)))
    return out


def full_term_run(plan: ExperimentPlan, mode: str = "exact") -> MerminEstimate:
    """Run one circuit per polynomial term instead of per class; term seeds
    are plan.seed XOR term index. In exact mode this equals the class-reduced
    result. The per-entry list carries one entry per term."""
    if mode not in ("exact", "sampled"):
        raise ValueError("mode must be exact or sampled")
    poly = canonical_polynomial(plan.n)
    bounds = bounds_for(plan.n)
    prep = ghz_circuit(plan.n, plan.prep_phase, control=plan.device.cnot_target)
    value = 0.0
    var = 0.0
    entries = []
    for index, (coeff, mask) in enumerate(poly.terms):
        setting = MeasurementSetting(plan.n, mask)
        circ, _ = transpile(with_setting(prep, setting), plan.device)
        dist = noisy_distribution(circ, plan.noise)
        if mode == "exact":
            e, se = parity_expectation_probs(dist), 0.0
        else:
            counts = sample_counts(dist, plan.shots_per_class, plan.seed ^ index)
            e, se = parity_expectation(counts)
        value += coeff * e
        var += (coeff * se) ** 2
        entries.append(ClassEstimate(mask.bit_count(), coeff, float(e), float(se)))
    stderr = math.sqrt(var)
    sigma = None
    if mode == "sampled" and stderr > 0.0:
        sigma = (value - bounds.lr_bound) / stderr
    genuine = bool(value > GENUINE_THRESHOLD_4) if plan.n == 4 else None
    return MerminEstimate(
        n_parties=plan.n,
        mode=mode,
        reduction="full-terms",
        prep_phase=plan.prep_phase,
        shots_per_class=plan.shots_per_class,
        seed=plan.seed,
        per_class=tuple(entries),
        value=float(value),
        stderr=float(stderr),
        lr_bound=bounds.lr_bound,
        qm_bound=bounds.qm_bound,
        violates_lr=bool(value - bounds.lr_bound > 0),
        sigma_distance=sigma,
        exceeds_genuine_threshold=genuine,
    )


def exact_value(
    n: int,
    noise: NoiseModel = ZERO_NOISE,
    prep_phase="max",
    device: DeviceModel | None = None,
) -> float:
    plan = build_plan(n, prep_phase=prep_phase, device=device, noise=noise)
    return run_plan(plan, mode="exact").value


def estimate_to_json(est: MerminEstimate) -> dict:
    return {
        "n": est.n_parties,
        "mode": est.mode,
        "reduction": est.reduction,
        "prep_phase": est.prep_phase,
        "shots_per_class": est.shots_per_class,
        "seed": est.seed,
        "per_class": [
            {
                "prime_count": c.prime_count,
                "weight": c.weight,
                "expectation": c.expectation,
                "stderr": c.stderr,
            }
            for c in est.per_class
        ],
        "value": est.value,
        "stderr": est.stderr,
        "lr_bound": est.lr_bound,
        "qm_bound": est.qm_bound,
        "violates_lr": est.violates_lr,
        "sigma_distance": est.sigma_distance,
        "exceeds_genuine_threshold": est.exceeds_genuine_threshold,
    }


def estimate_table(est: MerminEstimate) -> str:
    """Human-readable report mirroring the LR / QM / EXP result columns."""
    lines = [
        f"Mermin estimate, n={est.n_parties} "
        f"(mode={est.mode}, reduction={est.reduction})"
    ]
    for c in est.per_class:
        lines.append(
            f"  primes={c.prime_count}  weight={c.weight:+d}  "
            f"expectation={c.expectation:+.6f}  stderr={c.stderr:.6f}"
        )
    lr = est.lr_bound
    lr_text = f"{int(lr)}" if lr == int(lr) else f"{lr:.4f}"
    if est.mode == "sampled":
        exp_text = f"{est.value:.4f} +/- {est.stderr:.4f}"
    else:
        exp_text = f"{est.value:.4f} (exact)"
    lines.append(f"  LR | QM | EXP : {lr_text} | {est.qm_bound:.4f} | {exp_text}")
    verdict = "yes" if est.violates_lr else "no"
    if est.sigma_distance is not None:
        verdict += f", sigma distance {est.sigma_distance:.2f}"
    lines.append(f"  violates local realism: {verdict}")
    if est.exceeds_genuine_threshold is None:
        genuine = "n/a"
    else:
        genuine = "yes" if est.exceeds_genuine_threshold else "no"
    lines.append(f"  exceeds genuine multipartite threshold (>8): {genuine}")
    return "\n".join(lines) + "\n"


def counts_to_csv(t: CountsTable) -> str:
    """outcome,count rows over all 2^n outcomes, zeros included."""
    lines = ["outcome,count"]
    for i in range(1 << t.n_qubits):
        key = format(i, f"0{t.n_qubits}b")
        lines.append(f"{key},{t.counts.get(key, 0)}")
    return "\n".join(lines) + "\n"
