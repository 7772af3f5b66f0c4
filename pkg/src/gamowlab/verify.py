"""The nine acceptance checks, shared by the test suite and the CLI.

Each criterion function draws its randomized cases from a seeded generator,
measures the worst defect against its pinned tolerance, and returns a
CriterionResult.  The tolerances here are fixed on purpose: callers can
tighten quadrature settings elsewhere, but the pass thresholds below define
what this package promises and are not configurable.

The deterministic fixtures (the reference pole at E_R = 1, Gamma = 0.1 and
the test functions 1/(E-i), 1/(E-2i)) mirror the bundled reference
scenario, so `verify-all` from the CLI and the acceptance tests exercise
identical numbers.
"""
from __future__ import annotations

import json
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, TimeDirectionViolation, ValidationError
from .expansion import decompose
from .gamow import (
    GamowFunctional,
    GamowVariant,
    breit_wigner_pole_term,
    eigenvalue_defect,
    gamow_pairing,
    semigroup_divergence_scan,
    semigroup_factor,
)
from .goldenrule import ConstantCoupling, DecayScenario, born_rate, decay_rate, normalize, transition_probability
from .hardy import fourier_transform_signal, paley_wiener_classify
from .paths import Sheet, horizontal_line
from .spectral import (
    EnergyWaveFunction,
    HardyClass,
    ModelKind,
    ResonancePole,
    SMatrixModel,
    WaveTerm,
)
from .hardy import titchmarsh_conjugate_defect, titchmarsh_value

DEFAULT_SEED = 20260814

REFERENCE_POLE = ResonancePole(1.0, 0.1)
REFERENCE_PSI = EnergyWaveFunction(
    (WaveTerm(1.0, 1j, 1),), declared_class=HardyClass.HARDY_LOWER
)
REFERENCE_PHI = EnergyWaveFunction(
    (WaveTerm(1.0, 2j, 1),), declared_class=HardyClass.HARDY_LOWER
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


def _random_wavefunction(
    rng: np.random.Generator,
    hardy: HardyClass = HardyClass.HARDY_LOWER,
    min_decay: int = 1,
) -> EnergyWaveFunction:
    """A random rational function with poles on one side of the axis.

    With ``min_decay`` = 2 every term gets multiplicity 2, which kills the
    1/E part of the large-energy expansion without fine-tuned coefficient
    cancellations.
    """
    n_terms = int(rng.integers(1, 4))
    sign = 1.0 if hardy is HardyClass.HARDY_LOWER else -1.0
    terms = []
    for _ in range(n_terms):
        coeff = complex(rng.normal(), rng.normal())
        pole = complex(rng.uniform(-3.0, 3.0), sign * rng.uniform(0.05, 2.0))
        mult = 2 if min_decay >= 2 else int(rng.integers(1, 3))
        terms.append(WaveTerm(coeff, pole, mult))
    return EnergyWaveFunction(tuple(terms), declared_class=hardy)


def _criterion_titchmarsh(rng: np.random.Generator) -> CriterionResult:
    worst_value = 0.0
    worst_conj = 0.0
    for case in range(100):
        hardy = HardyClass.HARDY_LOWER if case % 2 == 0 else HardyClass.HARDY_UPPER
        wf = _random_wavefunction(rng, hardy)
        side = -1.0 if hardy is HardyClass.HARDY_LOWER else 1.0
        while True:
            z = complex(rng.uniform(-3.0, 3.0), side * rng.uniform(0.05, 2.0))
            if abs(wf(z)) > 0.05:
                break
        value = titchmarsh_value(wf, z)
        worst_value = max(worst_value, abs(value - wf(z)) / abs(wf(z)))
        conj = titchmarsh_conjugate_defect(wf, np.conj(z))
        worst_conj = max(worst_conj, abs(conj) / abs(wf(z)))
    passed = worst_value < 1e-8 and worst_conj < 1e-8
    return CriterionResult(
        "titchmarsh-reproduction",
        passed,
        f"worst relative error {worst_value:.2e}, worst conjugate defect "
        f"{worst_conj:.2e} over 100 random Hardy functions (tolerance 1e-08)",
    )


def _criterion_eigenvalue(rng: np.random.Generator) -> CriterionResult:
    worst = 0.0
    for _ in range(50):
        pole = ResonancePole(rng.uniform(0.3, 5.0), rng.uniform(0.02, 1.5))
        variant = GamowVariant.DECAYING if rng.uniform() < 0.5 else GamowVariant.GROWING
        hardy = (
            HardyClass.HARDY_LOWER
            if variant is GamowVariant.DECAYING
            else HardyClass.HARDY_UPPER
        )
        wf = _random_wavefunction(rng, hardy, min_decay=2)
        g = GamowFunctional(pole, variant)
        defect = eigenvalue_defect(g, wf)
        scale = max(abs(g.point * gamow_pairing(g, wf)), 1e-6)
        worst = max(worst, abs(defect) / scale)
    return CriterionResult(
        "gamow-eigenvalue",
        worst < 1e-8,
        f"worst relative eigenvalue defect {worst:.2e} over 50 random "
        f"(pole, test) pairs (tolerance 1e-08)",
    )


def _criterion_breit_wigner(rng: np.random.Generator) -> CriterionResult:
    cases = [(REFERENCE_PSI, REFERENCE_PHI, REFERENCE_POLE)]
    for _ in range(50):
        psi = _random_wavefunction(rng, HardyClass.HARDY_LOWER)
        phi = _random_wavefunction(rng, HardyClass.HARDY_LOWER)
        pole = ResonancePole(rng.uniform(0.3, 5.0), rng.uniform(0.02, 1.5))
        cases.append((psi, phi, pole))
    worst = 0.0
    for psi, phi, pole in cases:
        lhs, rhs = breit_wigner_pole_term(psi, phi, pole)
        scale = max(abs(rhs), 1e-9)
        worst = max(worst, abs(lhs - rhs) / scale)
    return CriterionResult(
        "breit-wigner-pole-term",
        worst < 1e-8,
        f"worst lhs/rhs relative gap {worst:.2e} on the reference case plus "
        f"50 random ones (tolerance 1e-08)",
    )


def _criterion_decay_law(rng: np.random.Generator) -> CriterionResult:
    worst_law = 0.0
    worst_comp = 0.0
    violations_ok = True
    for variant in (GamowVariant.DECAYING, GamowVariant.GROWING):
        direction = 1.0 if variant is GamowVariant.DECAYING else -1.0
        for _ in range(5):
            pole = ResonancePole(rng.uniform(0.3, 5.0), rng.uniform(0.02, 1.5))
            g = GamowFunctional(pole, variant)
            for t in (0.0, 1.0 / pole.Gamma, 5.0 / pole.Gamma):
                factor = semigroup_factor(g, direction * t)
                law = math.exp(-pole.Gamma * t)
                worst_law = max(worst_law, abs(abs(factor) ** 2 - law) / law)
            t1, t2 = direction * rng.uniform(0.1, 3.0), direction * rng.uniform(0.1, 3.0)
            lhs = semigroup_factor(g, t1) * semigroup_factor(g, t2)
            rhs = semigroup_factor(g, t1 + t2)
            worst_comp = max(worst_comp, abs(lhs - rhs) / abs(rhs))
            for t in np.linspace(0.05, 12.0, 20):
                try:
                    semigroup_factor(g, -direction * float(t))
                    violations_ok = False
                except TimeDirectionViolation:
                    pass
    passed = worst_law < 1e-12 and worst_comp < 5e-15 and violations_ok
    return CriterionResult(
        "exponential-decay-law",
        passed,
        f"worst |factor|^2 error {worst_law:.2e} (tolerance 1e-12), worst "
        f"composition gap {worst_comp:.2e}, wrong-direction grid "
        f"{'all rejected' if violations_ok else 'NOT all rejected'}",
    )


def _criterion_fourier_support(rng: np.random.Generator) -> CriterionResult:
    worst_mass = 0.0
    flips_ok = True
    for _ in range(8):
        wf = _random_wavefunction(rng, HardyClass.HARDY_LOWER)
        signal = fourier_transform_signal(wf)
        report = paley_wiener_classify(signal)
        worst_mass = max(worst_mass, report.forbidden_mass_fraction)
        if report.inferred_class is not HardyClass.HARDY_LOWER:
            flips_ok = False
        mirrored = paley_wiener_classify(fourier_transform_signal(wf.reflect()))
        if mirrored.inferred_class is not HardyClass.HARDY_UPPER:
            flips_ok = False
    passed = worst_mass < 1e-6 and flips_ok
    return CriterionResult(
        "fourier-half-line-support",
        passed,
        f"worst forbidden-mass fraction {worst_mass:.2e} (tolerance 1e-06), "
        f"reflection {'flips every class' if flips_ok else 'FAILS to flip'}",
    )


def _criterion_expansion(rng: np.random.Generator) -> CriterionResult:
    del rng
    psi, phi = REFERENCE_PSI, REFERENCE_PHI
    one = SMatrixModel(ModelKind.FLAT_RATIONAL_E, (REFERENCE_POLE,))
    two = SMatrixModel(
        ModelKind.FLAT_RATIONAL_E, (REFERENCE_POLE, ResonancePole(2.5, 0.4))
    )
    none = SMatrixModel(ModelKind.FLAT_RATIONAL_E, ())
    r1 = decompose(psi, phi, one, mode="oracle").residual
    r2 = decompose(psi, phi, two, mode="oracle").residual
    r0 = decompose(psi, phi, none, mode="oracle")
    line_a = decompose(psi, phi, two, path=horizontal_line(-0.10, Sheet.SECOND))
    line_b = decompose(psi, phi, two, path=horizontal_line(-0.16, Sheet.SECOND))
    path_gap = abs(line_a.background - line_b.background) / abs(line_a.background)
    passed = (
        r1 < 1e-6
        and r2 < 1e-6
        and path_gap < 1e-8
        and not r0.pole_terms
        and r0.residual < 1e-10
    )
    return CriterionResult(
        "expansion-identity",
        passed,
        f"residuals one-pole {r1:.2e}, two-pole {r2:.2e} (tolerance 1e-06); "
        f"background path gap {path_gap:.2e} (1e-08); no-pole residual "
        f"{r0.residual:.2e} with {len(r0.pole_terms)} pole terms (1e-10)",
    )


def _criterion_golden_rule(rng: np.random.Generator) -> CriterionResult:
    del rng
    scenario = normalize(
        DecayScenario(
            ResonancePole(1.0, 0.01), (ConstantCoupling(1.0),), born_energy=1.0
        )
    )
    gamma = scenario.pole.Gamma
    worst_p = 0.0
    for t in np.linspace(0.0, 500.0, 500):
        p, _ = transition_probability(scenario, float(t))
        worst_p = max(worst_p, abs(p - (1.0 - math.exp(-gamma * t))))
    rate0 = decay_rate(scenario, 0.0)
    rate_err = abs(rate0 - gamma) / gamma
    born_errs = []
    for ratio in (1e-1, 1e-2, 1e-3):
        s = normalize(
            DecayScenario(
                ResonancePole(1.0, ratio), (ConstantCoupling(1.0),), born_energy=1.0
            )
        )
        born_errs.append(abs(born_rate(s) - s.pole.Gamma) / s.pole.Gamma)
    born_ok = all(
        err < 2.0 * ratio for err, ratio in zip(born_errs, (1e-1, 1e-2, 1e-3))
    ) and born_errs[0] > born_errs[1] > born_errs[2]
    passed = worst_p < 1e-10 and rate_err < 1e-8 and born_ok
    return CriterionResult(
        "exact-golden-rule",
        passed,
        f"max |P - (1 - e^-Gamma t)| {worst_p:.2e} on 500 points (tolerance "
        f"1e-10); rate(0) error {rate_err:.2e} (1e-08); Born errors "
        f"{born_errs[0]:.2e} > {born_errs[1]:.2e} > {born_errs[2]:.2e}, "
        f"each under 2 Gamma/E_R: {born_ok}",
    )


def _criterion_divergence(rng: np.random.Generator) -> CriterionResult:
    del rng
    g = GamowFunctional(REFERENCE_POLE, GamowVariant.DECAYING)
    test = REFERENCE_PSI
    forbidden = semigroup_divergence_scan(g, test, -2.0)
    allowed = semigroup_divergence_scan(g, test, 2.0)
    growing = semigroup_divergence_scan(
        GamowFunctional(REFERENCE_POLE, GamowVariant.GROWING),
        REFERENCE_PSI.conjugate_on_axis(),
        2.0,
    )
    increasing = forbidden[0] < forbidden[1] < forbidden[2]
    mirrored = growing[0] < growing[1] < growing[2]
    ratio = allowed[-1] / allowed[-2]
    passed = increasing and mirrored and abs(ratio - 1.0) < 0.01
    return CriterionResult(
        "semigroup-domain-breakdown",
        passed,
        f"forbidden-t magnitudes {forbidden[0]:.2e} -> {forbidden[1]:.2e} -> "
        f"{forbidden[2]:.2e} ({'strictly increasing' if increasing else 'NOT increasing'}, "
        f"mirrored variant {'too' if mirrored else 'FAILS'}); allowed-t final "
        f"ratio {ratio:.6f} (must be within 1.01)",
    )


_MINI_CONFIG = {
    "seed": 7,
    "model": {"kind": "flat", "poles": [{"E_R": 1.0, "Gamma": 0.1}]},
    "wavefunctions": {
        "psi": {
            "class": "hardy-lower",
            "terms": [{"coefficient": [1.0, 0.0], "pole": [0.0, 1.0], "multiplicity": 1}],
        },
        "phi": {
            "class": "hardy-lower",
            "terms": [{"coefficient": [1.0, 0.0], "pole": [0.0, 2.0], "multiplicity": 1}],
        },
    },
    "tasks": [
        {
            "kind": "gamow-evolve",
            "pole": {"E_R": 1.0, "Gamma": 0.1},
            "variant": "decaying",
            "t_grid": "0:10:41",
        },
        {"kind": "expand", "psi": "psi", "phi": "phi", "mode": "oracle"},
    ],
}


def _run_mini(raw: dict, root: Path) -> dict[str, bytes]:
    from . import config as config_mod
    from . import runner as runner_mod

    cfg = config_mod.parse_config(raw, config_mod.config_digest(raw))
    _report, run_dir = runner_mod.run(cfg, out_root=root)
    return {p.name: p.read_bytes() for p in sorted(run_dir.iterdir())}


def _criterion_plumbing(rng: np.random.Generator, elapsed_so_far: float) -> CriterionResult:
    from . import config as config_mod

    del rng
    with tempfile.TemporaryDirectory() as tmp:
        first = _run_mini(_MINI_CONFIG, Path(tmp) / "a")
        second = _run_mini(_MINI_CONFIG, Path(tmp) / "b")
    identical = first == second

    rejects = []
    bad_gamma = json.loads(json.dumps(_MINI_CONFIG))
    bad_gamma["model"]["poles"][0]["Gamma"] = -0.5
    try:
        config_mod.parse_config(bad_gamma, "x")
        rejects.append("negative Gamma accepted")
    except ValidationError as exc:
        if "Gamma must be > 0" not in str(exc):
            rejects.append("Gamma error does not name the invariant")
    dangling = json.loads(json.dumps(_MINI_CONFIG))
    dangling["tasks"][1]["psi"] = "psi2"
    try:
        config_mod.parse_config(dangling, "x")
        rejects.append("dangling wavefunction accepted")
    except ValidationError as exc:
        if "psi2" not in str(exc):
            rejects.append("dangling-reference error does not name the reference")
    unknown = json.loads(json.dumps(_MINI_CONFIG))
    unknown["model"]["colour"] = "blue"
    try:
        config_mod.parse_config(unknown, "x")
        rejects.append("unknown key accepted")
    except ParseError:
        pass

    in_budget = elapsed_so_far < 60.0
    passed = identical and not rejects and in_budget
    problems = "; ".join(rejects) if rejects else "all invalid configs rejected by name"
    # The detail line must stay byte-identical between reruns, so it records
    # whether the budget held rather than the wall-clock figure itself.
    budget_note = "within the 60s budget" if in_budget else "OVER the 60s budget"
    return CriterionResult(
        "determinism-and-plumbing",
        passed,
        f"reruns {'byte-identical' if identical else 'DIFFER'}; {problems}; "
        f"full sweep {budget_note}",
    )


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    """Run every acceptance criterion in order and collect the results.

    The criteria consume one shared seeded generator sequentially, so a
    fixed seed pins every randomized case and the whole list is
    reproducible bit for bit.
    """
    rng = np.random.default_rng(seed)
    started = time.perf_counter()
    results = [
        _criterion_titchmarsh(rng),
        _criterion_eigenvalue(rng),
        _criterion_breit_wigner(rng),
        _criterion_decay_law(rng),
        _criterion_fourier_support(rng),
        _criterion_expansion(rng),
        _criterion_golden_rule(rng),
        _criterion_divergence(rng),
    ]
    results.append(_criterion_plumbing(rng, time.perf_counter() - started))
    return results
