"""Run configuration: flat key=value files plus command-line overrides.

Defaults mirror the baseline scenario: prior mean 1, prior width 2^(-1/4),
two photon levels in an equal-weight superposition, ground-state mechanics,
and a search window covering the first mechanical period.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .field_state import (Coherent, MechInit, ModelConfig, Squeezed, Thermal,
                          equal_weight_amplitudes, validate_amplitudes)

_DEFAULTS: dict[str, str] = {
    "g0": "1.0",
    "sigma": str(2 ** -0.25),
    "n_phot": "2",
    "mech": "coherent",
    "alpha_abs": "0.0",
    "alpha_phase": "0.0",
    "n_th": "0.0",
    "zeta_abs": "0.0",
    "zeta_phase": "0.0",
    "amplitudes": "",
    "tau": "0.0",
    "tau_min": "0.0",
    "tau_max": str(2 * np.pi),
    "tau_steps": "200",
    "g_min": "0.0",
    "g_max": "2.0",
    "g_steps": "41",
    "window_min": "0.0",
    "window_max": str(2 * np.pi),
    "tstar_grid": "512",
    "workers": "1",
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, deterministic run description (no randomness anywhere)."""

    model: ModelConfig
    amplitudes: np.ndarray
    tau_grid: tuple[float, float, int]
    g_grid: tuple[float, float, int]
    window: tuple[float, float]
    tstar_grid: int
    workers: int
    raw: dict[str, str] = field(repr=False, default_factory=dict)

    def tau_points(self) -> np.ndarray:
        lo, hi, steps = self.tau_grid
        return np.linspace(lo, hi, steps)

    def g_points(self) -> np.ndarray:
        lo, hi, steps = self.g_grid
        return np.linspace(lo, hi, steps)


def _parse_file(path: str | Path) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _mech_from(kv: dict[str, str]) -> MechInit:
    kind = kv["mech"].lower()
    try:
        if kind == "coherent":
            return Coherent(alpha_abs=float(kv["alpha_abs"]),
                            alpha_phase=float(kv["alpha_phase"]))
        if kind == "thermal":
            return Thermal(n_th=float(kv["n_th"]))
        if kind == "squeezed":
            return Squeezed(alpha_abs=float(kv["alpha_abs"]),
                            alpha_phase=float(kv["alpha_phase"]),
                            zeta_abs=float(kv["zeta_abs"]),
                            zeta_phase=float(kv["zeta_phase"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"mech must be coherent, thermal, or squeezed, got {kind!r}")


def _grid(kv: dict[str, str], prefix: str) -> tuple[float, float, int]:
    lo = float(kv[f"{prefix}_min"])
    hi = float(kv[f"{prefix}_max"])
    steps = int(kv[f"{prefix}_steps"])
    if not hi > lo:
        raise ConfigError(f"{prefix} grid must be strictly increasing")
    if steps < 2:
        raise ConfigError(f"{prefix}_steps must be >= 2")
    return lo, hi, steps


def load_config(path: str | Path | None = None,
                overrides: list[str] | None = None) -> RunConfig:
    """Merge defaults, an optional config file, and key=value overrides."""
    kv = dict(_DEFAULTS)
    if path is not None:
        file_kv = _parse_file(path)
        unknown = set(file_kv) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kv.update(file_kv)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key: {key}")
        kv[key] = value.strip()

    try:
        mech = _mech_from(kv)
        n_phot = int(kv["n_phot"])
        model = ModelConfig(g0=float(kv["g0"]), sigma=float(kv["sigma"]),
                            tau=float(kv["tau"]), n_phot=n_phot, mech=mech)
        if kv["amplitudes"]:
            amps = np.array([complex(tok) for tok in kv["amplitudes"].split(",")])
            amps = validate_amplitudes(amps)
            if len(amps) != n_phot:
                raise ConfigError("amplitudes length must equal n_phot")
        else:
            amps = equal_weight_amplitudes(n_phot)
        window = (float(kv["window_min"]), float(kv["window_max"]))
        if not (0 <= window[0] < window[1]):
            raise ConfigError(f"bad search window {window}")
        cfg = RunConfig(
            model=model,
            amplitudes=amps,
            tau_grid=_grid(kv, "tau"),
            g_grid=_grid(kv, "g"),
            window=window,
            tstar_grid=int(kv["tstar_grid"]),
            workers=max(1, int(kv["workers"])),
            raw=kv,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def resolved_items(cfg: RunConfig) -> list[tuple[str, str]]:
    """Sorted key=value pairs recorded in every CSV header."""
    return sorted(cfg.raw.items())
