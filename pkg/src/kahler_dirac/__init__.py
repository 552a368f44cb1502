"""Exact Kähler–Atiyah algebra and Dirac spectra on S^3 and S^2."""

from .numbers import HALF, I, ONE, SQRT2, ZERO, Num, num

__all__ = ["HALF", "I", "ONE", "SQRT2", "ZERO", "Num", "num"]
