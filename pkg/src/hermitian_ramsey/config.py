"""Run configuration: caps, seeds, and the asymptotic vs desk-scale constants."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .field import prime_power
from .rng import parse_seed

ASYMPTOTIC_Q_MIN = 2**40
PROFILES = ("desk", "asymptotic")
THREADS_ENV = "HERMITIAN_RAMSEY_THREADS"


def asymptotic_constants(q: int) -> dict:
    """The asymptotic parameters, evaluated literally at ``q`` (natural logs)."""
    lq = math.log(q)
    return {
        "m": 2**24 * q**2,
        "density_floor": 1 / 256,
        "edge_target": 2**40 * q**3,
        "R": 2**24 * q**2,
        "r": 1024 * q * lq,
        "alpha": 1 / (256 * q),
        "t": 2**30 * q * lq**2,
        "p": lq**2 / q,
    }


@dataclass
class RunConfig:
    q: int | None = None
    master_seed: int = 0
    profile: str = "desk"
    k4_cap: int = 250
    alpha_cap: int = 400
    pair_budget: int = 10**6
    srg_samples: int = 10**5
    onan_budget: int = 10**6
    # desk-scale replacements for m = 2^24 q^2 and the |X|^2/(256 q) edge floor
    m_prime_factor: float = 4.0
    density_floor: float = 1 / 256
    output_dir: str = "."
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.q is not None:
            self.p, self.a = prime_power(self.q)
        self.master_seed = parse_seed(self.master_seed)
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")

    @property
    def m_prime(self) -> float | None:
        if self.q is None:
            return None
        if self.profile == "asymptotic":
            return asymptotic_constants(self.q)["m"]
        return self.m_prime_factor * self.q**2

    @property
    def assertions_enabled(self) -> bool:
        """Asymptotic-profile bounds are only asserted where they are meaningful (q >= 2^40)."""
        return self.profile == "desk" or (self.q or 0) >= ASYMPTOTIC_Q_MIN

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["m_prime"] = self.m_prime
        d["assertions_enabled"] = self.assertions_enabled
        return d

    @classmethod
    def load(cls, path: str | Path | None, **overrides) -> "RunConfig":
        """Read a JSON config file and apply non-None keyword overrides."""
        data = {}
        if path is not None:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


__all__ = ["RunConfig", "asymptotic_constants", "canonical_json", "asdict"]
