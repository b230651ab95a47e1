"""Run configuration: a YAML/JSON file merged with command-line flags (flags win)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import InvalidArgument
from .params import (ChannelParams, GaussianStateParams, preset_squeezed_thermal,
                     preset_squeezed_vacuum, require_physical)

STATE_KEYS = {"preset", "r", "n0", "A10", "A20", "B0_re", "B0_im"}
CHANNEL_KEYS = {"gamma_amp_1", "gamma_amp_2", "gamma_phase_1", "gamma_phase_2", "nbar_1", "nbar_2"}
TOL_KEYS = {"eps_trace", "eps_series", "root_tol"}
TOP_KEYS = {"state", "channel", "time", "tolerances"}
PRESETS = ("squeezed_vacuum", "squeezed_thermal", "explicit")


@dataclass
class RunConfig:
    state: dict[str, Any] = field(default_factory=lambda: {"preset": "squeezed_vacuum", "r": 0.5})
    channel: dict[str, float] = field(default_factory=dict)
    time: float = 0.0
    eps_trace: float = 1e-10
    eps_series: float = 1e-16
    root_tol: float = 1e-10

    def gaussian_state(self) -> GaussianStateParams:
        s = self.state
        preset = s.get("preset", "squeezed_vacuum")
        if preset == "squeezed_vacuum":
            p = preset_squeezed_vacuum(float(s.get("r", 0.0)))
        elif preset == "squeezed_thermal":
            p = preset_squeezed_thermal(float(s.get("r", 0.0)), float(s.get("n0", 0.0)))
        elif preset == "explicit":
            try:
                p = GaussianStateParams(float(s["A10"]), float(s["A20"]),
                                        complex(float(s.get("B0_re", 0.0)), float(s.get("B0_im", 0.0))))
            except KeyError as exc:
                raise InvalidArgument(f"explicit state needs {exc.args[0]}") from None
        else:
            raise InvalidArgument(f"unknown preset {preset!r}; expected one of {PRESETS}")
        require_physical(p)
        return p

    def channel_params(self) -> ChannelParams:
        return ChannelParams(**{k: float(v) for k, v in self.channel.items()})

    def validate(self) -> None:
        for name in ("eps_trace", "eps_series", "root_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InvalidArgument(f"{name} must lie in (0, 1), got {v}")
        if self.time < 0:
            raise InvalidArgument("time must be non-negative")

    def echo(self) -> dict[str, Any]:
        """Every numeric setting, for output metadata."""
        out: dict[str, Any] = {f"state.{k}": v for k, v in sorted(self.state.items())}
        ch = self.channel_params()
        out.update({f"channel.{k}": getattr(ch, k) for k in sorted(CHANNEL_KEYS)})
        out.update(time=self.time, eps_trace=self.eps_trace, eps_series=self.eps_series,
                   root_tol=self.root_tol)
        return out


def _check_keys(section: str, given: dict, allowed: set) -> None:
    unknown = set(given) - allowed
    if unknown:
        raise InvalidArgument(f"unknown key(s) in {section}: {', '.join(sorted(unknown))}")


def load_config(path: str | Path) -> RunConfig:
    data = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(data, dict):
        raise InvalidArgument("config file must hold a mapping")
    _check_keys("config", data, TOP_KEYS)
    cfg = RunConfig()
    if "state" in data:
        _check_keys("state", data["state"], STATE_KEYS)
        cfg.state = dict(data["state"])
    if "channel" in data:
        _check_keys("channel", data["channel"], CHANNEL_KEYS)
        cfg.channel = dict(data["channel"])
    if "time" in data:
        cfg.time = float(data["time"])
    if "tolerances" in data:
        _check_keys("tolerances", data["tolerances"], TOL_KEYS)
        for k, v in data["tolerances"].items():
            setattr(cfg, k, float(v))
    cfg.validate()
    return cfg
