"""Physical constants of a single donor and field representations.

All energies and frequencies are ordinary frequencies in GHz; fields are in
tesla. The Hamiltonian is

    H = w0 Sz - w0 delta Iz + A S.I

with ``w0 = gamma_e * B``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path


class ParameterError(ValueError):
    """Raised for physically invalid parameters or quantum numbers."""


@dataclass(frozen=True)
class SystemParams:
    """Electron spin 1/2 coupled to a nuclear spin ``I2/2``.

    Defaults are the Si:Bi values. ``gamma_e`` (GHz/T) corresponds to
    g = 2.0003 and reproduces the cancellation fields 0.053 ... 0.26 T.
    """

    A: float = 1.4754
    delta: float = 2.488e-4
    I2: int = 9
    gamma_e: float = 28.0042

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A > 0):
            raise ParameterError(f"hyperfine constant must be positive, got {self.A}")
        if not (math.isfinite(self.delta) and 0 <= self.delta < 1):
            raise ParameterError(f"delta must lie in [0, 1), got {self.delta}")
        if isinstance(self.I2, bool) or int(self.I2) != self.I2 or self.I2 < 1:
            raise ParameterError(f"I2 (= 2 I) must be a positive integer, got {self.I2}")
        object.__setattr__(self, "I2", int(self.I2))
        if not (math.isfinite(self.gamma_e) and self.gamma_e > 0):
            raise ParameterError(f"gamma_e must be positive, got {self.gamma_e}")

    @property
    def I_nuc(self) -> float:
        return self.I2 / 2

    @property
    def S(self) -> float:
        return 0.5

    @property
    def dim(self) -> int:
        return 2 * (self.I2 + 1)

    @property
    def m_max(self) -> float:
        """Largest total projection, I + 1/2 (the unmixed singlets sit at +-m_max)."""
        return (self.I2 + 1) / 2

    def m_values(self) -> list[float]:
        """All total projections m = m_s + m_I, ascending."""
        return [-self.m_max + k for k in range(self.I2 + 2)]

    def field(self, B: float) -> "FieldPoint":
        return FieldPoint.from_field(self, B)

    @classmethod
    def si_bi(cls) -> "SystemParams":
        return cls()

    @classmethod
    def si_p(cls) -> "SystemParams":
        # 31P: A/2pi = 117.5 MHz; nuclear/electron Zeeman ratio from
        # gamma_n(31P) = 17.235 MHz/T
        return cls(A=0.1175, delta=17.235e-3 / 28.0042, I2=1, gamma_e=28.0042)

    def to_dict(self) -> dict:
        return {
            "A_GHz": self.A,
            "delta": self.delta,
            "I2": self.I2,
            "gamma_e_GHz_per_T": self.gamma_e,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        unknown = set(d) - {"A_GHz", "delta", "I2", "gamma_e_GHz_per_T"}
        if unknown:
            raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
        defaults = cls()
        try:
            return cls(
                A=float(d.get("A_GHz", defaults.A)),
                delta=float(d.get("delta", defaults.delta)),
                I2=d.get("I2", defaults.I2),
                gamma_e=float(d.get("gamma_e_GHz_per_T", defaults.gamma_e)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SystemParams":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"malformed parameter JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise ParameterError("parameter JSON must be an object")
        return cls.from_dict(d)

    @classmethod
    def load(cls, path: str | Path) -> "SystemParams":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True)
class FieldPoint:
    """A magnetic field in three consistent representations.

    B in tesla, omega0 = gamma_e B in GHz, omega0_tilde = omega0 / A.
    """

    B: float
    omega0: float
    omega0_tilde: float

    def __post_init__(self):
        if not math.isfinite(self.B) or self.B < 0:
            raise ParameterError(f"field must be finite and non-negative, got {self.B}")

    @classmethod
    def from_field(cls, params: SystemParams, B: float) -> "FieldPoint":
        B = float(B)
        w0 = params.gamma_e * B
        return cls(B, w0, w0 / params.A)

    @classmethod
    def from_omega0_tilde(cls, params: SystemParams, w: float) -> "FieldPoint":
        w = float(w)
        return cls(w * params.A / params.gamma_e, w * params.A, w)

    def as_dict(self) -> dict:
        return asdict(self)
