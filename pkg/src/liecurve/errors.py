"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class LieCurveError(Exception):
    exit_code = 2


class ValidationError(LieCurveError):
    """Malformed input: bad file contents, bad parameters, unknown names."""


class AlgebraError(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class NonMonotoneParameter(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class NonUniformGrid(ValidationError):
    pass


class MissingPositions(ValidationError):
    pass


class VanishingCurvature(LieCurveError):
    exit_code = 3

    def __init__(self, s: float, kappa: float, kappa_min: float):
        self.s = s
        self.kappa = kappa
        self.kappa_min = kappa_min
        super().__init__(
            f"curvature {kappa:.3e} below kappa_min {kappa_min:.3e} at s={s:.17g}; "
            "Frenet frame undefined"
        )


class HVanishes(LieCurveError):
    exit_code = 4

    def __init__(self, intervals: list[tuple[float, float]], h_min: float):
        self.intervals = intervals
        self.h_min = h_min
        if intervals:
            advice = "usable intervals with |H| >= {:g}: {}".format(
                h_min, ", ".join(f"[{a:.6g}, {b:.6g}]" for a, b in intervals)
            )
        else:
            advice = f"no interval with |H| >= {h_min:g}; the partner degenerates everywhere"
        super().__init__(f"harmonic curvature vanishes; {advice} (rerun with --trim)")


class DegenerateFrame(LieCurveError):
    exit_code = 5


class NotMannheim(LieCurveError):
    exit_code = 6


class MuZero(ValidationError):
    pass


class NonPositiveKappa(ValidationError):
    pass


class StepTooLarge(LieCurveError):
    exit_code = 7


class ConditionViolated(ValidationError):
    pass


class RangeContainsHZero(ValidationError):
    pass


class ZeroParameter(ValidationError):
    pass
