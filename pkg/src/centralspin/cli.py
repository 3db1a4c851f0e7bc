"""Command-line experiment runner.

    centralspin run config.json
    centralspin preset fig2c [--out fig2c.csv]
    centralspin list-presets

A config is one JSON object describing one experiment.  Times are in units
of ``1/g1`` and every coupling or frequency is a ratio to ``g1`` (``g1 = 1``
internally).  Results go to a CSV whose ``#`` header lines echo the full
config, followed by one row per time point.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dicke_basis, individual_baths, intrabath, measures, single_qubit, two_qubit
from .presets import get_preset, preset_names
from .rk import IntegrationError

__all__ = [
    "ConfigError",
    "BathSpec",
    "ExperimentConfig",
    "load_config",
    "compute",
    "format_csv",
    "run",
    "list_presets",
    "main",
]

EXPERIMENTS = ("single_qubit", "two_qubit_common", "two_qubit_individual", "intrabath_single", "intrabath_two")
BATH_KINDS = ("spin_coherent", "equally_weighted", "w_class", "fully_polarized")
SINGLE_STATES = {"up": (1, 0), "down": (0, 1), "plus": (1 / math.sqrt(2), 1 / math.sqrt(2))}
TWO_STATES = ("uu", "ud", "du", "dd", "bell")

_SINGLE_PARAMS = {"omega1": 0.0, "g1p": 0.0}
_COMMON_PARAMS = {"omega1": 0.0, "omega2": 0.0, "J": 0.0, "Jp": 0.0, "g2": 1.0, "g1p": 0.0, "g2p": 0.0}
_INDIVIDUAL_PARAMS = {"omega1": 0.0, "g1p": 0.0, "omega2": 0.0, "g2": 1.0, "g2p": 0.0}
PARAM_DEFAULTS = {
    "single_qubit": _SINGLE_PARAMS,
    "intrabath_single": _SINGLE_PARAMS,
    "two_qubit_common": _COMMON_PARAMS,
    "intrabath_two": _COMMON_PARAMS,
    "two_qubit_individual": _INDIVIDUAL_PARAMS,
}

COLUMNS = {
    "single_qubit": ("t", "Sx", "Sy", "Sz", "purity", "coherence", "entropy"),
    "two_qubit_common": ("t", "concurrence", "C_re", "entropy", "p_uu", "p_ud", "p_du", "p_dd"),
    "two_qubit_individual": ("t", "concurrence", "C_re", "entropy", "p_uu", "p_ud", "p_du", "p_dd"),
    "intrabath_single": ("t", "reduced_concurrence", "coherence", "entropy"),
    "intrabath_two": ("t", "reduced_concurrence", "C_re", "entropy"),
}

DEFAULT_TOL = 1e-9
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3


class ConfigError(ValueError):
    """Invalid experiment config; the message names the offending key or line."""


# -- small typed readers over the raw JSON dict -------------------------------


def _get(d: dict, key: str, where: str, default=..., kind=None):
    path = f"{where}.{key}" if where else key
    if key not in d:
        if default is ...:
            raise ConfigError(f"missing key '{path}'")
        return default
    value = d[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ConfigError(f"key '{path}': expected a finite number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key '{path}': expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"key '{path}': expected a string, got {value!r}")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"key '{path}': expected an object, got {value!r}")
        return value
    return value


def _complex(value, path: str) -> complex:
    """A number, or ``[re, im]``."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"key '{path}': expected a number or [re, im], got {value!r}")


def _reject_unknown(d: dict, allowed, where: str):
    extra = sorted(set(d) - set(allowed))
    if extra:
        prefix = f"{where}." if where else ""
        raise ConfigError(f"unknown key '{prefix}{extra[0]}' (allowed: {', '.join(sorted(allowed))})")


# -- config types --------------------------------------------------------------


@dataclass(frozen=True)
class BathSpec:
    kind: str
    theta: float = 0.0
    phi: float = 0.0
    gamma_nm1: complex = 0j
    gamma_n: complex = 0j
    m: int = 0

    @classmethod
    def from_dict(cls, d, where: str) -> "BathSpec":
        if not isinstance(d, dict):
            raise ConfigError(f"key '{where}': expected an object, got {d!r}")
        kind = _get(d, "kind", where, kind=str)
        if kind not in BATH_KINDS:
            raise ConfigError(f"key '{where}.kind': unknown bath kind {kind!r} (choose from {', '.join(BATH_KINDS)})")
        if kind == "spin_coherent":
            _reject_unknown(d, {"kind", "theta", "theta_over_pi", "phi", "phi_over_pi"}, where)
            theta = _angle(d, "theta", where, required=True)
            phi = _angle(d, "phi", where, required=False)
            return cls(kind, theta=theta, phi=phi)
        if kind == "w_class":
            _reject_unknown(d, {"kind", "gamma_nm1", "gamma_n"}, where)
            g1 = _complex(_get(d, "gamma_nm1", where), f"{where}.gamma_nm1")
            g0 = _complex(_get(d, "gamma_n", where), f"{where}.gamma_n")
            norm = abs(g1) ** 2 + abs(g0) ** 2
            if abs(norm - 1) > 1e-12:
                raise ConfigError(f"key '{where}': w_class amplitudes have norm {norm!r}, expected 1")
            return cls(kind, gamma_nm1=g1, gamma_n=g0)
        if kind == "fully_polarized":
            _reject_unknown(d, {"kind", "m"}, where)
            return cls(kind, m=_get(d, "m", where, default=0, kind=int))
        _reject_unknown(d, {"kind"}, where)
        return cls(kind)

    def build(self, n_spins: int) -> dicke_basis.BathState:
        if self.kind == "spin_coherent":
            return dicke_basis.spin_coherent(n_spins, self.theta, self.phi)
        if self.kind == "equally_weighted":
            return dicke_basis.equally_weighted(n_spins)
        if self.kind == "w_class":
            return dicke_basis.w_class(n_spins, self.gamma_nm1, self.gamma_n)
        return dicke_basis.fully_polarized(n_spins, self.m)


def _angle(d: dict, name: str, where: str, required: bool) -> float:
    raw, scaled = name in d, f"{name}_over_pi" in d
    if raw and scaled:
        raise ConfigError(f"key '{where}': give either '{name}' or '{name}_over_pi', not both")
    if scaled:
        return math.pi * _get(d, f"{name}_over_pi", where, kind=float)
    if raw:
        return _get(d, name, where, kind=float)
    if required:
        raise ConfigError(f"missing key '{where}.{name}' (or '{where}.{name}_over_pi')")
    return 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_spins: int
    params: dict
    bath: BathSpec
    initial_state: np.ndarray
    t_max: float
    n_points: int
    tol: float = DEFAULT_TOL
    bath2: BathSpec | None = None
    n_spins2: int | None = None
    output: str | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, d) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        _reject_unknown(
            d,
            {"experiment", "n_spins", "n_spins2", "params", "bath", "bath2", "initial_state", "time", "tol", "output"},
            "",
        )
        experiment = _get(d, "experiment", "", kind=str)
        if experiment not in EXPERIMENTS:
            raise ConfigError(f"key 'experiment': unknown experiment {experiment!r} (choose from {', '.join(EXPERIMENTS)})")
        individual = experiment == "two_qubit_individual"
        n_spins = _get(d, "n_spins", "", kind=int)
        _check_spins(n_spins, "n_spins", experiment)
        n_spins2 = None
        if "n_spins2" in d or "bath2" in d:
            if not individual:
                raise ConfigError(f"keys 'n_spins2'/'bath2' only apply to two_qubit_individual, not {experiment}")
            n_spins2 = _get(d, "n_spins2", "", default=n_spins, kind=int)
            _check_spins(n_spins2, "n_spins2", experiment)

        defaults = PARAM_DEFAULTS[experiment]
        raw_params = _get(d, "params", "", default={}, kind=dict)
        _reject_unknown(raw_params, defaults, "params")
        params = {k: _get(raw_params, k, "params", default=v, kind=float) for k, v in defaults.items()}

        bath = BathSpec.from_dict(_get(d, "bath", ""), "bath")
        bath2 = BathSpec.from_dict(d["bath2"], "bath2") if "bath2" in d else None

        two = experiment not in ("single_qubit", "intrabath_single")
        state = _initial_state(_get(d, "initial_state", ""), two)

        time = _get(d, "time", "", kind=dict)
        _reject_unknown(time, {"t_max", "n_points"}, "time")
        t_max = _get(time, "t_max", "time", kind=float)
        n_points = _get(time, "n_points", "time", kind=int)
        if not t_max > 0:
            raise ConfigError(f"key 'time.t_max': must be positive, got {t_max!r}")
        if n_points < 2:
            raise ConfigError(f"key 'time.n_points': need at least 2 points, got {n_points!r}")
        tol = _get(d, "tol", "", default=DEFAULT_TOL, kind=float)
        if not tol > 0:
            raise ConfigError(f"key 'tol': must be positive, got {tol!r}")
        output = _get(d, "output", "", default=None, kind=str) if d.get("output") is not None else None

        config = cls(experiment, n_spins, params, bath, state, t_max, n_points, tol, bath2, n_spins2, output, dict(d))
        config.baths()  # surfaces bath construction errors (e.g. m out of range) as config errors
        return config

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)

    def baths(self):
        try:
            first = self.bath.build(self.n_spins)
            if self.experiment != "two_qubit_individual":
                return first, None
            second = (self.bath2 or self.bath).build(self.n_spins2 or self.n_spins)
            return first, second
        except ValueError as exc:
            raise ConfigError(f"key 'bath': {exc}") from exc


def _check_spins(n: int, key: str, experiment: str):
    low = 2 if experiment.startswith("intrabath") else 1
    if not low <= n <= dicke_basis.MAX_BATH_SPINS:
        raise ConfigError(f"key '{key}': must lie in {low}..{dicke_basis.MAX_BATH_SPINS}, got {n}")


def _initial_state(d, two: bool) -> np.ndarray:
    if not isinstance(d, dict):
        raise ConfigError(f"key 'initial_state': expected an object, got {d!r}")
    kind = _get(d, "kind", "initial_state", kind=str)
    names = TWO_STATES if two else tuple(SINGLE_STATES)
    if kind == "explicit":
        _reject_unknown(d, {"kind", "amplitudes"}, "initial_state")
        amps = _get(d, "amplitudes", "initial_state")
        size = 4 if two else 2
        if not isinstance(amps, list) or len(amps) != size:
            raise ConfigError(f"key 'initial_state.amplitudes': expected a list of {size} amplitudes")
        v = np.array([_complex(a, f"initial_state.amplitudes[{i}]") for i, a in enumerate(amps)])
        norm = float(np.sum(np.abs(v) ** 2))
        if abs(norm - 1) > 1e-12:
            raise ConfigError(f"key 'initial_state.amplitudes': norm is {norm!r}, expected 1")
        return v
    _reject_unknown(d, {"kind"}, "initial_state")
    if kind not in names:
        raise ConfigError(f"key 'initial_state.kind': unknown state {kind!r} (choose from {', '.join(names)}, explicit)")
    if two:
        state = two_qubit.TwoQubitState.bell() if kind == "bell" else two_qubit.TwoQubitState.basis(kind)
        return state.vector()
    return np.array(SINGLE_STATES[kind], dtype=complex)


def load_config(path) -> ExperimentConfig:
    """Parse a JSON config file; syntax errors report line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return ExperimentConfig.from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# -- dynamics dispatch ---------------------------------------------------------


def _two_qubit_row(rho: np.ndarray) -> list[float]:
    pops = np.diag(rho).real
    return [
        measures.concurrence(rho),
        measures.relative_entropy_of_coherence(rho),
        measures.von_neumann_entropy(rho),
        *pops,
    ]


def _single_params(config: ExperimentConfig) -> single_qubit.SingleQubitParams:
    p = config.params
    return single_qubit.SingleQubitParams(config.n_spins, omega1=p["omega1"], g1=1.0, g1p=p["g1p"])


def _common_params(config: ExperimentConfig) -> two_qubit.TwoQubitParams:
    return two_qubit.TwoQubitParams(config.n_spins, g1=1.0, **config.params)


def _integrate_common(config: ExperimentConfig, bath):
    params = _common_params(config)
    q0 = two_qubit.TwoQubitState.from_vector(config.initial_state)
    amps = two_qubit.integrate(params, q0, bath, config.times(), tol=config.tol)
    return [two_qubit.to_schrodinger(a, params) for a in amps]


def compute(config: ExperimentConfig) -> tuple[tuple[str, ...], np.ndarray]:
    """Column names and the ``(n_points, n_columns)`` table for ``config``."""
    times = config.times()
    bath, bath2 = config.baths()
    kind = config.experiment
    rows = []
    if kind in ("single_qubit", "intrabath_single"):
        params = _single_params(config)
        q0 = single_qubit.QubitState(*config.initial_state)
        chi0 = None
        for t in times:
            table = single_qubit.evolve(params, q0, bath, t)
            rho = single_qubit.qubit_density(table)
            if kind == "single_qubit":
                s_plus = rho[single_qubit.DOWN, single_qubit.UP]
                sz = 0.5 * (rho[0, 0] - rho[1, 1]).real
                rows.append(
                    [t, s_plus.real, s_plus.imag, sz, measures.purity(rho),
                     single_qubit.coherence(rho), single_qubit.entropy(rho)]
                )
            else:
                chi = intrabath.pair_density(single_qubit.bath_density(table))
                chi0 = chi if chi0 is None else chi0
                rows.append(
                    [t, _reduced(chi, chi0), single_qubit.coherence(rho), single_qubit.entropy(rho)]
                )
    elif kind in ("two_qubit_common", "intrabath_two"):
        chi0 = None
        for a in _integrate_common(config, bath):
            rho = two_qubit.two_qubit_density(a)
            if kind == "two_qubit_common":
                rows.append([a.t, *_two_qubit_row(rho)])
            else:
                chi = intrabath.pair_density(two_qubit.bath_density_2q(a))
                chi0 = chi if chi0 is None else chi0
                rows.append(
                    [a.t, _reduced(chi, chi0), measures.relative_entropy_of_coherence(rho),
                     measures.von_neumann_entropy(rho)]
                )
    else:
        p = config.params
        state = individual_baths.JointInitialState(
            np.outer(config.initial_state, config.initial_state.conj()),
            bath,
            bath2,
            single_qubit.SingleQubitParams(config.n_spins, omega1=p["omega1"], g1=1.0, g1p=p["g1p"]),
            single_qubit.SingleQubitParams(bath2.n_spins, omega1=p["omega2"], g1=p["g2"], g1p=p["g2p"]),
        )
        for t in times:
            rows.append([t, *_two_qubit_row(individual_baths.compose(state, t))])
    return COLUMNS[kind], np.array(rows, dtype=float)


def _reduced(chi, chi0) -> float:
    try:
        return intrabath.reduced_concurrence(chi, chi0)
    except ValueError as exc:
        raise ConfigError(f"key 'bath': {exc} (choose an entangled bath such as equally_weighted or w_class)") from exc


# -- output --------------------------------------------------------------------


def _fmt(x: float) -> str:
    if x == 0:
        return "0"  # also folds -0.0
    return format(float(x), ".12g")


def format_csv(config: ExperimentConfig, columns, table: np.ndarray) -> str:
    meta = json.dumps(config.raw, sort_keys=True, separators=(",", ":"))
    lines = [f"# centralspin {config.experiment}", f"# config: {meta}", ",".join(columns)]
    lines += [",".join(_fmt(x) for x in row) for row in table]
    return "\n".join(lines) + "\n"


def run(config: ExperimentConfig, output=None) -> Path:
    """Run ``config`` and write its CSV; returns the path written."""
    path = Path(output or config.output or f"{config.experiment}.csv")
    columns, table = compute(config)
    path.write_text(format_csv(config, columns, table))
    return path


def list_presets() -> list[str]:
    return preset_names()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="centralspin", description="Central spin dynamics experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the experiment described by a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="override the config's output path")
    p_preset = sub.add_parser("preset", help="run a named figure preset")
    p_preset.add_argument("name")
    p_preset.add_argument("--out", help="CSV path (default: <name>.csv)")
    p_preset.add_argument("--show", action="store_true", help="print the preset config as JSON instead of running")
    sub.add_parser("list-presets", help="print the available preset names")
    args = parser.parse_args(argv)

    try:
        if args.command == "list-presets":
            print("\n".join(list_presets()))
            return 0
        if args.command == "preset":
            try:
                raw = get_preset(args.name)
            except KeyError as exc:
                raise ConfigError(exc.args[0]) from None
            if args.show:
                print(json.dumps(raw, indent=2, sort_keys=True))
                return 0
            config = ExperimentConfig.from_dict(raw)
            path = run(config, args.out or f"{args.name}.csv")
        else:
            path = run(load_config(args.config), args.out)
    except ConfigError as exc:
        print(f"centralspin: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"centralspin: integration failed at t={exc.t:.12g}: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
