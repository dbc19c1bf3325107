from __future__ import annotations

from typing import Tuple

from pydantic import BaseModel, Field


class SurfaceBetti(BaseModel):
    """Betti numbers b0..b4 of a smooth projective surface."""

    b0: int = Field(..., ge=0)
    b1: int = Field(..., ge=0)
    b2: int = Field(..., ge=0)
    b3: int = Field(..., ge=0)
    b4: int = Field(..., ge=0)

    class Config:
        frozen = True

    @classmethod
    def of(cls, *numbers: int) -> "SurfaceBetti":
        if len(numbers) != 5:
            raise ValueError(f"a surface has 5 Betti numbers (got {len(numbers)})")
        return cls(**dict(zip(("b0", "b1", "b2", "b3", "b4"), numbers)))

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return (self.b0, self.b1, self.b2, self.b3, self.b4)


class CurveBetti(BaseModel):
    """Betti numbers b0..b2 of a smooth curve (possibly disconnected or empty)."""

    b0: int = Field(..., ge=0)
    b1: int = Field(..., ge=0)
    b2: int = Field(..., ge=0)

    class Config:
        frozen = True

    @classmethod
    def of(cls, *numbers: int) -> "CurveBetti":
        if len(numbers) != 3:
            raise ValueError(f"a curve has 3 Betti numbers (got {len(numbers)})")
        return cls(**dict(zip(("b0", "b1", "b2"), numbers)))

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.b0, self.b1, self.b2)


PLANE = SurfaceBetti.of(1, 0, 1, 0, 1)
LINE = CurveBetti.of(1, 0, 1)
EMPTY_CURVE = CurveBetti.of(0, 0, 0)


__all__ = ["CurveBetti", "EMPTY_CURVE", "LINE", "PLANE", "SurfaceBetti"]
