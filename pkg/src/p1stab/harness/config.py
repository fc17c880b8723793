"""Experiment configuration: a human-editable INI file with nested tables.

Sections: [bundle], [filtration], [grid], [run], plus command-specific
tables ([bergman], [saturate], [chern_weil]).  Validation errors name the
section and field.  A canonical JSON rendering of the parsed config is
hashed into the run manifest so identical configs are byte-identifiable.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .. import __version__
from ..algebra.bundles import SplitBundle
from ..errors import ConfigError

DEFAULT_TOLERANCES = {
    "grid_volume": 1e-12,
    "curvature_degree": 1e-5,
    "cocycle": 1e-6,
    "scaling_invariance": 1e-8,
    "path_doubling": 1e-6,
    "slope_relative_error": 0.05,
    "renorm_reconstruction": 1e-9,
    "condition_limit": 1e16,
}


@dataclass(frozen=True)
class ExperimentConfig:
    degrees: tuple[int, ...]
    twist: int
    filtration_type: str = "two_step"  # two_step | trivial | corpus
    sub_indices: tuple[int, ...] = ()
    subspace: tuple[tuple[str, ...], ...] = ()
    corpus_file: str = ""
    n_rho: int = 64
    n_theta: int = 64
    fd_step: float = 1e-4
    path_nodes: int = 32
    t_max: float = 6.0
    t_step: float = 0.5
    seed: int = 0
    out_dir: str = "out"
    bergman_twists: tuple[int, ...] = (4, 8, 16, 32)
    raw: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        bundle = self.bundle  # validates degrees
        if self.twist < bundle.regularity:
            raise ConfigError(
                f"[bundle] twist = {self.twist} below regularity {bundle.regularity}"
            )
        if self.n_rho < 1 or self.n_theta < 1:
            raise ConfigError("[grid] n_rho and n_theta must be positive")
        if self.fd_step <= 0:
            raise ConfigError("[grid] fd_step must be positive")
        if self.path_nodes < 1:
            raise ConfigError("[grid] path_nodes must be positive")
        if self.t_max <= 0 or self.t_step <= 0:
            raise ConfigError("[run] t_max and t_step must be positive")
        if self.filtration_type not in ("two_step", "trivial", "corpus"):
            raise ConfigError(
                f"[filtration] type must be two_step, trivial or corpus, got {self.filtration_type!r}"
            )
        if self.filtration_type == "two_step" and not (self.sub_indices or self.subspace):
            raise ConfigError("[filtration] two_step needs sub_indices or subspace")
        if self.filtration_type == "corpus" and not self.corpus_file:
            raise ConfigError("[filtration] corpus needs corpus_file")

    @property
    def bundle(self) -> SplitBundle:
        try:
            return SplitBundle(self.degrees)
        except ValueError as exc:
            raise ConfigError(f"[bundle] degrees: {exc}") from exc

    def t_grid(self) -> np.ndarray:
        n = int(round(self.t_max / self.t_step))
        grid = np.round(np.arange(n + 1) * self.t_step, 12)
        if grid[-1] < self.t_max - 1e-12:
            grid = np.append(grid, self.t_max)
        return grid

    def canonical_dict(self) -> dict:
        return {
            "bundle": {"degrees": list(self.degrees), "twist": self.twist},
            "filtration": {
                "type": self.filtration_type,
                "sub_indices": list(self.sub_indices),
                "subspace": [list(v) for v in self.subspace],
                "corpus_file": self.corpus_file,
            },
            "grid": {
                "n_rho": self.n_rho,
                "n_theta": self.n_theta,
                "fd_step": self.fd_step,
                "path_nodes": self.path_nodes,
            },
            "run": {"t_max": self.t_max, "t_step": self.t_step, "seed": self.seed},
            "bergman": {"twists": list(self.bergman_twists)},
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()


def _get(parser, section, key, default=None, required=False):
    if parser.has_option(section, key):
        return parser.get(section, key)
    if required:
        raise ConfigError(f"[{section}] missing required field '{key}'")
    return default


def _int_list(text: str, where: str) -> tuple[int, ...]:
    if not text or not text.strip():
        return ()
    try:
        return tuple(int(x.strip()) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: expected comma-separated integers, got {text!r}") from exc


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if not parser.has_section("bundle"):
        raise ConfigError("missing [bundle] section")

    degrees = _int_list(_get(parser, "bundle", "degrees", required=True), "[bundle] degrees")
    if not degrees:
        raise ConfigError("[bundle] degrees must be nonempty")

    def fval(section, key, default):
        raw = _get(parser, section, key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from exc

    def ival(section, key, default):
        raw = _get(parser, section, key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}") from exc

    subspace: tuple[tuple[str, ...], ...] = ()
    raw_sub = _get(parser, "filtration", "subspace_json")
    if raw_sub:
        try:
            data = json.loads(raw_sub)
            subspace = tuple(tuple(str(c) for c in vec) for vec in data)
        except (json.JSONDecodeError, TypeError) as exc:
            raise ConfigError(f"[filtration] subspace_json: {exc}") from exc

    cfg = dict(
        degrees=degrees,
        twist=ival("bundle", "twist", 0),
        filtration_type=_get(parser, "filtration", "type", "two_step"),
        sub_indices=_int_list(
            _get(parser, "filtration", "sub_indices", ""), "[filtration] sub_indices"
        ),
        subspace=subspace,
        corpus_file=_get(parser, "filtration", "corpus_file", ""),
        n_rho=ival("grid", "n_rho", 64),
        n_theta=ival("grid", "n_theta", 64),
        fd_step=fval("grid", "fd_step", 1e-4),
        path_nodes=ival("grid", "path_nodes", 32),
        t_max=fval("run", "t_max", 6.0),
        t_step=fval("run", "t_step", 0.5),
        seed=ival("run", "seed", 0),
        out_dir=_get(parser, "output", "dir", "out"),
        bergman_twists=_int_list(_get(parser, "bergman", "twists", "4, 8, 16, 32"), "[bergman] twists"),
    )
    if overrides:
        cfg.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**cfg)


def run_manifest(config: ExperimentConfig, calibration_sign: int = -1) -> dict:
    """Provenance block embedded in every emitted report."""
    return {
        "config_hash": config.config_hash(),
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "software_version": __version__,
        "calibration_sign": calibration_sign,
        "seed": config.seed,
        "tolerances": dict(DEFAULT_TOLERANCES),
    }
