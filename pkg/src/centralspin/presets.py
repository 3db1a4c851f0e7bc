"""Named experiment configurations, one per figure panel.

Panels ``a``-``d`` of the polarization and entanglement figures scan the
bath polar angle ``theta = pi/10, 2pi/10, 3pi/10, 5pi/10``; panels of the
intrabath figures scan ``g'/g = 0, 0.8, 1, 2``.  The two-qubit intrabath
figures carry a ``b-`` infix (``fig9b-a``) so they do not collide with
panel ``b`` of the single-qubit figure.  Bare figure names alias panel ``c``.

``t_max`` values are chosen to show the collapse and the first revivals;
they are calibration, not data taken from the figures.
"""
from __future__ import annotations

import copy
import math

__all__ = ["PRESETS", "ALIASES", "preset_names", "get_preset"]

_THETAS = {"a": 1, "b": 2, "c": 3, "d": 5}  # in units of pi/10
_ANISOTROPY = {"a": 0.0, "b": 0.8, "c": 1.0, "d": 2.0}
_N = 60


def _coherent(panel: str) -> dict:
    return {"kind": "spin_coherent", "theta_over_pi": _THETAS[panel] / 10, "phi_over_pi": 0.0}


def _time(t_max: float, n_points: int) -> dict:
    return {"t_max": t_max, "n_points": n_points}


def _build() -> dict:
    presets = {}
    for panel in "abcd":
        presets[f"fig2{panel}"] = {
            "experiment": "single_qubit",
            "n_spins": _N,
            "params": {"omega1": 1.0, "g1p": 0.0},
            "bath": _coherent(panel),
            "initial_state": {"kind": "up"},
            "time": _time(20.0, 2001),
        }
        presets[f"fig4{panel}"] = {
            "experiment": "single_qubit",
            "n_spins": _N,
            "params": {"omega1": 1.0, "g1p": 1.0},
            "bath": _coherent(panel),
            "initial_state": {"kind": "up"},
            "time": _time(100 * math.pi, 6001),
        }
        for fig, gp, t_max in (("fig5", 0.0, 60.0), ("fig6", 1.0, 2 * _N * math.pi)):
            presets[f"{fig}{panel}"] = {
                "experiment": "two_qubit_individual",
                "n_spins": _N,
                "params": {"omega1": 1.0, "g1p": gp, "omega2": 1.0, "g2": 1.0, "g2p": gp},
                "bath": _coherent(panel),
                "initial_state": {"kind": "bell"},
                "time": _time(t_max, 6001),
            }
        for fig, state in (("fig7", "bell"), ("fig8", "uu")):
            presets[f"{fig}{panel}"] = {
                "experiment": "two_qubit_common",
                "n_spins": _N,
                "params": {
                    "omega1": 1.0, "omega2": 1.0, "J": 0.0, "Jp": 0.0,
                    "g2": 1.0, "g1p": 1.0, "g2p": 1.0,
                },
                "bath": _coherent(panel),
                "initial_state": {"kind": state},
                "time": _time(_N * math.pi, 3001),
            }
        gp = _ANISOTROPY[panel]
        for fig, bath in (
            ("fig9", {"kind": "equally_weighted"}),
            ("fig10", {"kind": "w_class", "gamma_nm1": 1 / math.sqrt(2), "gamma_n": 1 / math.sqrt(2)}),
        ):
            presets[f"{fig}{panel}"] = {
                "experiment": "intrabath_single",
                "n_spins": _N,
                "params": {"omega1": 0.0, "g1p": gp},
                "bath": bath,
                "initial_state": {"kind": "plus"},
                "time": _time(10.0, 2001),
            }
            presets[f"{fig}b-{panel}"] = {
                "experiment": "intrabath_two",
                "n_spins": _N,
                "params": {
                    "omega1": 0.0, "omega2": 0.0, "J": 0.0, "Jp": 0.0,
                    "g2": 1.0, "g1p": gp, "g2p": gp,
                },
                "bath": bath,
                "initial_state": {"kind": "bell"},
                "time": _time(10.0, 2001),
            }
    return presets


PRESETS = _build()
ALIASES = {f"fig{k}": f"fig{k}c" for k in (2, 4, 5, 6, 7, 8, 9, 10)}


def preset_names() -> list[str]:
    return sorted(PRESETS, key=_natural_key) + sorted(ALIASES, key=_natural_key)


def _natural_key(name: str):
    digits = "".join(ch for ch in name[3:] if ch.isdigit())
    return int(digits), name


def get_preset(name: str) -> dict:
    """A fresh copy of the named configuration (``output`` not set)."""
    key = ALIASES.get(name, name)
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return copy.deepcopy(PRESETS[key])
