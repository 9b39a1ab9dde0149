"""Comparison tolerance for angles and lengths.

Angles are measured in units of π: a full turn is 2. They are ``Fraction``
when exact and ``float`` otherwise.
"""

import math
from fractions import Fraction
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, model_validator

Angle = Union[Fraction, float]

TURN = Fraction(2)


class Tolerance(BaseModel):
    """Slack used by every boundary comparison.

    Attributes:
        eps: Slack in radians (for angles) and length units (for points).
        mode: ``float-eps`` compares with slack; ``strict-rational`` compares
            exactly and expects Fraction inputs.
    """

    model_config = ConfigDict(frozen=True)

    eps: float = 1e-9
    mode: Literal["float-eps", "strict-rational"] = "float-eps"

    @model_validator(mode="after")
    def _positive_in_float_mode(self) -> "Tolerance":
        if self.mode == "float-eps" and not self.eps > 0:
            raise ValueError("eps must be positive in float-eps mode")
        return self

    @property
    def strict(self) -> bool:
        return self.mode == "strict-rational"

    @property
    def angle_eps(self) -> float:
        """The slack in units of π."""
        return 0.0 if self.strict else self.eps / math.pi

    @property
    def length_eps(self) -> float:
        return 0.0 if self.strict else self.eps

    def angle_le(self, a: Angle, b: Angle) -> bool:
        return a <= b + self.angle_eps

    def angle_lt(self, a: Angle, b: Angle) -> bool:
        return a < b - self.angle_eps

    def angle_eq(self, a: Angle, b: Angle) -> bool:
        return abs(a - b) <= self.angle_eps

    def length_le(self, a, b) -> bool:
        return a <= b + self.length_eps


DEFAULT_TOLERANCE = Tolerance()
STRICT = Tolerance(eps=0.0, mode="strict-rational")


def mod_turn(a: Angle) -> Angle:
    """Reduces an angle into [0, 2)."""
    return a % TURN if isinstance(a, Fraction) else a % 2.0


def degrees(value: Union[str, int, float, Fraction]) -> Angle:
    """Converts a degree reading into π-units, exactly when it is rational text."""
    if isinstance(value, float):
        return value / 180.0
    return Fraction(str(value)) / 180 if isinstance(value, str) else Fraction(value) / 180


def to_degrees(a: Angle) -> Union[Fraction, float]:
    return a * 180


def to_radians(a: Angle) -> float:
    return float(a) * math.pi


def format_degrees(a: Angle) -> str:
    """Text form of an angle in degrees: exact for Fractions, repr for floats."""
    d = to_degrees(a)
    if isinstance(d, Fraction):
        return str(d.numerator) if d.denominator == 1 else f"{d.numerator}/{d.denominator}"
    return repr(float(d))
