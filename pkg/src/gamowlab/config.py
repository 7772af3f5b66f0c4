"""Scenario configuration: JSON in, validated domain objects out.

A scenario file declares at most one S-matrix model, a set of named energy
wavefunctions, optionally a golden-rule decay scenario, and an ordered task
list.  Everything is validated eagerly at load time: unknown keys, dangling
references, and invariant violations (for example Gamma <= 0) are rejected
before any task runs, with messages naming the offending field.

Complex numbers are written as two-element arrays [re, im].
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .goldenrule import (
    ConstantCoupling,
    DecayScenario,
    PolynomialLorentzianCoupling,
    TabulatedCoupling,
)
from .spectral import (
    EnergyWaveFunction,
    HardyClass,
    ModelKind,
    ResonancePole,
    SMatrixModel,
    WaveTerm,
)

TASK_KINDS = ("hardy-check", "gamow-evolve", "expand", "golden-rule", "verify-all")

_CLASS_NAMES = {
    "hardy-lower": HardyClass.HARDY_LOWER,
    "hardy-upper": HardyClass.HARDY_UPPER,
    "none": HardyClass.NONE,
}
_KIND_NAMES = {
    "flat": ModelKind.FLAT_RATIONAL_E,
    "uniformized": ModelKind.UNIFORMIZED_RATIONAL_K,
}


@dataclass(frozen=True)
class TaskSpec:
    """One entry of the task list, with its raw parameters."""

    index: int
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    output_dir: str | None
    model: SMatrixModel | None
    wavefunctions: dict[str, EnergyWaveFunction]
    golden_rule: DecayScenario | None
    tasks: tuple[TaskSpec, ...]
    digest: str


def _expect_mapping(node, where: str) -> dict:
    if not isinstance(node, dict):
        raise ParseError(f"{where} must be a JSON object")
    return node


def _check_keys(node: dict, allowed, where: str) -> None:
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        raise ParseError(f"unknown field {unknown[0]!r} in {where}")


def _number(node, where: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ParseError(f"{where} must be a number")
    return float(node)


def _complex(node, where: str) -> complex:
    if (
        not isinstance(node, list)
        or len(node) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in node)
    ):
        raise ParseError(f"{where} must be a two-element [re, im] array")
    return complex(node[0], node[1])


def _parse_pole(node, where: str) -> ResonancePole:
    node = _expect_mapping(node, where)
    _check_keys(node, ("E_R", "Gamma"), where)
    for key in ("E_R", "Gamma"):
        if key not in node:
            raise ParseError(f"{where} is missing {key!r}")
    return ResonancePole(_number(node["E_R"], f"{where}.E_R"),
                         _number(node["Gamma"], f"{where}.Gamma"))


def _parse_model(node) -> SMatrixModel:
    node = _expect_mapping(node, "model")
    _check_keys(node, ("kind", "background", "poles"), "model")
    kind_name = node.get("kind")
    if kind_name not in _KIND_NAMES:
        raise ParseError(
            f"model.kind must be one of {sorted(_KIND_NAMES)}, got {kind_name!r}"
        )
    background = 1.0 + 0.0j
    if "background" in node:
        background = _complex(node["background"], "model.background")
    poles_node = node.get("poles", [])
    if not isinstance(poles_node, list):
        raise ParseError("model.poles must be an array")
    poles = tuple(
        _parse_pole(p, f"model.poles[{i}]") for i, p in enumerate(poles_node)
    )
    return SMatrixModel(_KIND_NAMES[kind_name], poles, background)


def _parse_wavefunction(name: str, node) -> EnergyWaveFunction:
    where = f"wavefunctions.{name}"
    node = _expect_mapping(node, where)
    _check_keys(node, ("class", "terms", "damping_scale"), where)
    class_name = node.get("class", "none")
    if class_name not in _CLASS_NAMES:
        raise ParseError(
            f"{where}.class must be one of {sorted(_CLASS_NAMES)}, got {class_name!r}"
        )
    terms_node = node.get("terms")
    if not isinstance(terms_node, list) or not terms_node:
        raise ParseError(f"{where}.terms must be a nonempty array")
    terms = []
    for i, item in enumerate(terms_node):
        t_where = f"{where}.terms[{i}]"
        item = _expect_mapping(item, t_where)
        _check_keys(item, ("coefficient", "pole", "multiplicity"), t_where)
        for key in ("coefficient", "pole"):
            if key not in item:
                raise ParseError(f"{t_where} is missing {key!r}")
        mult = item.get("multiplicity", 1)
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ParseError(f"{t_where}.multiplicity must be an integer")
        terms.append(
            WaveTerm(
                _complex(item["coefficient"], f"{t_where}.coefficient"),
                _complex(item["pole"], f"{t_where}.pole"),
                mult,
            )
        )
    damping = node.get("damping_scale")
    if damping is not None:
        damping = _number(damping, f"{where}.damping_scale")
    return EnergyWaveFunction(tuple(terms), _CLASS_NAMES[class_name], damping)


def _parse_channel(node, where: str):
    node = _expect_mapping(node, where)
    kind = node.get("type")
    if kind == "constant":
        _check_keys(node, ("type", "amplitude"), where)
        return ConstantCoupling(_number(node.get("amplitude", 0.0), f"{where}.amplitude"))
    if kind == "polynomial-lorentzian":
        _check_keys(node, ("type", "coefficients", "center", "width"), where)
        coeffs = node.get("coefficients")
        if not isinstance(coeffs, list):
            raise ParseError(f"{where}.coefficients must be an array")
        return PolynomialLorentzianCoupling(
            tuple(_number(c, f"{where}.coefficients") for c in coeffs),
            _number(node.get("center", 0.0), f"{where}.center"),
            _number(node.get("width", 1.0), f"{where}.width"),
        )
    if kind == "tabulated":
        _check_keys(node, ("type", "energies", "amplitudes"), where)
        for key in ("energies", "amplitudes"):
            if not isinstance(node.get(key), list):
                raise ParseError(f"{where}.{key} must be an array")
        return TabulatedCoupling(
            tuple(_number(e, f"{where}.energies") for e in node["energies"]),
            tuple(_number(v, f"{where}.amplitudes") for v in node["amplitudes"]),
        )
    raise ParseError(
        f"{where}.type must be one of ['constant', 'polynomial-lorentzian', "
        f"'tabulated'], got {kind!r}"
    )


def _parse_golden_rule(node) -> DecayScenario:
    node = _expect_mapping(node, "golden_rule")
    _check_keys(node, ("pole", "channels", "born_energy"), "golden_rule")
    if "pole" not in node:
        raise ParseError("golden_rule is missing 'pole'")
    channels_node = node.get("channels")
    if not isinstance(channels_node, list) or not channels_node:
        raise ParseError("golden_rule.channels must be a nonempty array")
    born = node.get("born_energy")
    if born is not None:
        born = _number(born, "golden_rule.born_energy")
    return DecayScenario(
        _parse_pole(node["pole"], "golden_rule.pole"),
        tuple(
            _parse_channel(c, f"golden_rule.channels[{i}]")
            for i, c in enumerate(channels_node)
        ),
        born_energy=born,
    )


_TASK_KEYS = {
    "hardy-check": ("kind", "wavefunction", "tol"),
    "gamow-evolve": ("kind", "pole", "pole_index", "variant", "t_grid", "tol"),
    "expand": ("kind", "psi", "phi", "mode", "tol"),
    "golden-rule": ("kind", "t_grid", "gamma_sweep", "tol"),
    "verify-all": ("kind",),
}


def _parse_task(index: int, node, cfg_names: dict) -> TaskSpec:
    where = f"tasks[{index}]"
    node = _expect_mapping(node, where)
    kind = node.get("kind")
    if kind not in TASK_KINDS:
        raise ParseError(f"{where}.kind must be one of {list(TASK_KINDS)}, got {kind!r}")
    _check_keys(node, _TASK_KEYS[kind], where)
    params = {k: v for k, v in node.items() if k != "kind"}

    def need_wavefunction(key):
        name = params.get(key)
        if not isinstance(name, str):
            raise ParseError(f"{where}.{key} must name a wavefunction")
        if name not in cfg_names["wavefunctions"]:
            raise ValidationError(
                f"{where} references undeclared wavefunction {name!r}"
            )

    if kind == "hardy-check":
        need_wavefunction("wavefunction")
    elif kind == "expand":
        need_wavefunction("psi")
        need_wavefunction("phi")
        if not cfg_names["has_model"]:
            raise ValidationError(f"{where} needs a model, but none is declared")
        mode = params.get("mode", "oracle")
        if mode not in ("oracle", "physical"):
            raise ParseError(f"{where}.mode must be 'oracle' or 'physical'")
    elif kind == "gamow-evolve":
        if ("pole" in params) == ("pole_index" in params):
            raise ParseError(f"{where} needs exactly one of 'pole' or 'pole_index'")
        if "pole" in params:
            params["pole"] = _parse_pole(params["pole"], f"{where}.pole")
        else:
            idx = params["pole_index"]
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise ParseError(f"{where}.pole_index must be an integer")
            n = cfg_names["n_poles"]
            if not cfg_names["has_model"] or not 0 <= idx < n:
                raise ValidationError(
                    f"{where}.pole_index {idx} does not refer to a declared model pole"
                )
        variant = params.get("variant", "decaying")
        if variant not in ("decaying", "growing"):
            raise ParseError(f"{where}.variant must be 'decaying' or 'growing'")
        _parse_grid(params.get("t_grid", "0:10:101"), f"{where}.t_grid")
    elif kind == "golden-rule":
        if not cfg_names["has_golden_rule"]:
            raise ValidationError(
                f"{where} needs a golden_rule scenario, but none is declared"
            )
        _parse_grid(params.get("t_grid", "0:50:500"), f"{where}.t_grid")
        sweep = params.get("gamma_sweep")
        if sweep is not None:
            if not isinstance(sweep, list) or not sweep:
                raise ParseError(f"{where}.gamma_sweep must be a nonempty array")
            for g in sweep:
                if _number(g, f"{where}.gamma_sweep") <= 0:
                    raise ValidationError("Gamma must be > 0")
    if "tol" in params:
        tol = _number(params["tol"], f"{where}.tol")
        if tol <= 0:
            raise ValidationError(f"{where}.tol must be > 0")
    return TaskSpec(index, kind, params)


def _parse_grid(text, where: str) -> tuple[float, float, int]:
    """Parse an 'a:b:n' grid description into (start, stop, count)."""
    if not isinstance(text, str):
        raise ParseError(f"{where} must be a string 'start:stop:count'")
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(f"{where} must look like 'start:stop:count'")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None
    if count < 2:
        raise ValidationError(f"{where} needs at least two grid points")
    if not stop > start:
        raise ValidationError(f"{where} must have stop > start")
    return start, stop, count


_TOP_KEYS = ("seed", "output_dir", "model", "wavefunctions", "golden_rule", "tasks")


def parse_config(raw: dict, digest: str) -> ScenarioConfig:
    """Validate a decoded JSON document into a ScenarioConfig."""
    raw = _expect_mapping(raw, "config")
    _check_keys(raw, _TOP_KEYS, "config")

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ParseError("config.seed must be an integer")
    output_dir = raw.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ParseError("config.output_dir must be a string")

    model = _parse_model(raw["model"]) if "model" in raw else None

    wavefunctions = {}
    wf_node = raw.get("wavefunctions", {})
    wf_node = _expect_mapping(wf_node, "wavefunctions") if wf_node else {}
    for name, node in wf_node.items():
        wavefunctions[name] = _parse_wavefunction(name, node)

    golden = _parse_golden_rule(raw["golden_rule"]) if "golden_rule" in raw else None

    tasks_node = raw.get("tasks", [])
    if not isinstance(tasks_node, list):
        raise ParseError("config.tasks must be an array")
    names = {
        "wavefunctions": wavefunctions,
        "has_model": model is not None,
        "n_poles": len(model.poles) if model is not None else 0,
        "has_golden_rule": golden is not None,
    }
    tasks = tuple(_parse_task(i, t, names) for i, t in enumerate(tasks_node))

    return ScenarioConfig(
        seed=seed,
        output_dir=output_dir,
        model=model,
        wavefunctions=wavefunctions,
        golden_rule=golden,
        tasks=tasks,
        digest=digest,
    )


def config_digest(raw: dict) -> str:
    """Stable short digest of the canonical JSON form of a config."""
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def load_raw(path) -> dict:
    """Read and decode a scenario file without validating its content."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return raw


def load_config(path) -> ScenarioConfig:
    """Read, decode, and fully validate a scenario file."""
    raw = load_raw(path)
    return parse_config(raw, config_digest(raw))


def reference_scenario_path() -> Path:
    """Location of the bundled reference scenario file."""
    return Path(__file__).resolve().parent / "data" / "reference_scenario.json"
