"""Scenario configuration: INI files, presets and a stable content hash.

A config file is INI with a ``[scenario]`` section carrying the schema id and
optional ``[world]``, ``[radio]``, ``[energy]`` and ``[train]`` sections whose
keys are the field names of the matching dataclasses.  Loading starts from the
file's ``preset`` (``paper`` by default) and the file's keys override it.  A
preset passed explicitly (``--preset``) is applied last and sets the scale keys
(agents, non-agents, UEs, epochs, update period).
"""

from __future__ import annotations

import configparser
import dataclasses
import enum
import hashlib
import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import radio
from .energy import UavPowerParams
from .marl import Method, TrainConfig
from .radio import AntennaPattern, LinkBudget, McsTable
from .world import WorldConfig

CONFIG_SCHEMA = "uavbs-config/1"
SEED_ENV = "UAVBS_SEED"


class ConfigError(ValueError):
    """Invalid or unreadable scenario configuration (CLI exit code 2)."""


class Mode(str, enum.Enum):
    POMDP = "pomdp"
    FOMDP = "fomdp"


@dataclass(frozen=True)
class RadioConfig:
    budget: LinkBudget = LinkBudget()
    pattern: AntennaPattern = AntennaPattern()
    mcs_path: str = ""

    def mcs_table(self) -> McsTable:
        return McsTable.from_file(self.mcs_path) if self.mcs_path else radio.IEEE_80211AD_MCS


@dataclass(frozen=True)
class ScenarioConfig:
    world: WorldConfig = WorldConfig()
    radio: RadioConfig = RadioConfig()
    energy: UavPowerParams = UavPowerParams()
    train: TrainConfig = TrainConfig()
    method: Method = Method.PROPOSED
    mode: Mode = Mode.POMDP
    output_dir: str = "runs"

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.world.fomdp != (self.mode == Mode.FOMDP):
            object.__setattr__(self, "world", replace(self.world, fomdp=self.mode == Mode.FOMDP))

    @property
    def seed(self) -> int:
        return self.train.seed

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, train=replace(self.train, seed=int(seed)), world=replace(self.world, seed=int(seed)))

    def with_method(self, method) -> "ScenarioConfig":
        return replace(self, method=Method(method))


# Desk scale keeps the run inside a laptop-core budget.
PRESETS = {
    "paper": {
        "world": {"m_agents": 4, "k_nonagents": 3, "n_ues": 25},
        "train": {"epochs": 50_000, "update_period": 1},
    },
    "desk": {
        "world": {"m_agents": 2, "k_nonagents": 1, "n_ues": 8},
        "train": {"epochs": 3000, "update_period": 4},
    },
}


def preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    p = PRESETS[name]
    return ScenarioConfig(world=WorldConfig(**p["world"]), train=TrainConfig(**p["train"]))


def _parse_value(text: str, default):
    text = text.strip()
    if isinstance(default, bool):
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    if isinstance(default, tuple):
        return tuple(float(v) for v in text.replace(",", " ").split())
    return text


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, enum.Enum):
        return str(value.value)
    return str(value)


def _apply(obj, section: configparser.SectionProxy, label: str):
    known = {f.name: f for f in fields(obj)}
    changes = {}
    for key, text in section.items():
        if key not in known:
            raise ConfigError(f"[{label}] unknown key {key!r}")
        try:
            changes[key] = _parse_value(text, getattr(obj, key))
        except ValueError as exc:
            raise ConfigError(f"[{label}] {key}: {exc}") from None
    try:
        return replace(obj, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{label}] {exc}") from None


def parse_config(text: str, source: str = "<string>", preset_name: str | None = None) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if not parser.has_section("scenario"):
        raise ConfigError(f"{source}: missing [scenario] section")
    sc = parser["scenario"]
    schema = sc.get("schema", "").strip()
    if schema != CONFIG_SCHEMA:
        raise ConfigError(f"{source}: unsupported config schema {schema!r} (expected {CONFIG_SCHEMA})")
    allowed = {"schema", "preset", "method", "mode", "output_dir"}
    for key in sc:
        if key not in allowed:
            raise ConfigError(f"{source}: [scenario] unknown key {key!r}")
    for name in parser.sections():
        if name not in ("scenario", "world", "radio", "energy", "train"):
            raise ConfigError(f"{source}: unknown section [{name}]")

    cfg = preset(sc.get("preset", "paper").strip())
    if parser.has_section("world") and ("seed" in parser["world"] or "fomdp" in parser["world"]):
        raise ConfigError(f"{source}: set the seed in [train] and observability via [scenario] mode")
    world = _apply(cfg.world, parser["world"], "world") if parser.has_section("world") else cfg.world
    energy = _apply(cfg.energy, parser["energy"], "energy") if parser.has_section("energy") else cfg.energy
    train = _apply(cfg.train, parser["train"], "train") if parser.has_section("train") else cfg.train
    rc = cfg.radio
    if parser.has_section("radio"):
        rs = parser["radio"]
        mcs_path = rs.get("mcs_path", "").strip()
        budget_keys = {f.name for f in fields(LinkBudget)}
        pattern_keys = {f.name for f in fields(AntennaPattern)}
        for key in rs:
            if key != "mcs_path" and key not in budget_keys | pattern_keys:
                raise ConfigError(f"{source}: [radio] unknown key {key!r}")
        sub_b = {k: v for k, v in rs.items() if k in budget_keys}
        sub_p = {k: v for k, v in rs.items() if k in pattern_keys and k not in budget_keys}
        tmp = configparser.ConfigParser(interpolation=None)
        tmp.read_dict({"b": sub_b, "p": sub_p})
        rc = RadioConfig(_apply(rc.budget, tmp["b"], "radio"), _apply(rc.pattern, tmp["p"], "radio"), mcs_path)
        if mcs_path:
            base = Path(source).parent if source != "<string>" else Path(".")
            path = Path(mcs_path) if Path(mcs_path).is_absolute() else base / mcs_path
            try:
                McsTable.from_file(path)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"{source}: [radio] mcs_path: {exc}") from None
            rc = replace(rc, mcs_path=str(path))
    if preset_name is not None:
        # an explicit preset (command line) wins over the file's scale keys
        if preset_name not in PRESETS:
            raise ConfigError(f"unknown preset {preset_name!r}; choose from {sorted(PRESETS)}")
        world = replace(world, **PRESETS[preset_name]["world"])
        train = replace(train, **PRESETS[preset_name]["train"])
    # world seed follows the training seed
    world = replace(world, seed=train.seed)
    try:
        return ScenarioConfig(
            world=world,
            radio=rc,
            energy=energy,
            train=train,
            method=sc.get("method", cfg.method.value).strip().lower(),
            mode=sc.get("mode", cfg.mode.value).strip().lower(),
            output_dir=sc.get("output_dir", cfg.output_dir).strip(),
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path, preset_name: str | None = None) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, str(path), preset_name)


def _section(obj) -> dict:
    return {f.name: _format_value(getattr(obj, f.name)) for f in fields(obj)}


def dump_config(cfg: ScenarioConfig, include_output_dir: bool = True) -> str:
    """Full INI text of ``cfg``; every field is written, so reloading is exact."""
    parser = configparser.ConfigParser(interpolation=None)
    # no preset key: every field is written, so the base preset is irrelevant
    scenario = {"schema": CONFIG_SCHEMA, "method": cfg.method.value, "mode": cfg.mode.value}
    if include_output_dir:
        scenario["output_dir"] = cfg.output_dir
    parser["scenario"] = scenario
    world = _section(cfg.world)
    world.pop("fomdp")
    world.pop("seed")
    parser["world"] = world
    parser["radio"] = {**_section(cfg.radio.budget), **_section(cfg.radio.pattern), "mcs_path": cfg.radio.mcs_path}
    parser["energy"] = _section(cfg.energy)
    parser["train"] = _section(cfg.train)
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(dump_config(cfg))


def config_hash(cfg: ScenarioConfig) -> str:
    """SHA-256 of the canonical INI (output_dir excluded)."""
    return hashlib.sha256(dump_config(cfg, include_output_dir=False).encode()).hexdigest()
