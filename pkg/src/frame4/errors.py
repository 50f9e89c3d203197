"""Exception hierarchy.

Admissibility failures (the curve or coefficient data does not support the
requested frame) map to CLI exit code 2; everything else maps to 1.
"""


class Frame4Error(Exception):
    exit_code = 1


class AdmissibilityError(Frame4Error):
    exit_code = 2


class DegenerateRows(Frame4Error):
    pass


class NotUnit(Frame4Error):
    pass


class UnknownPreset(Frame4Error):
    pass


class ResolutionError(Frame4Error):
    """Sampled angle jumps too far between neighbouring samples to unwrap."""


class NotRegular(AdmissibilityError):
    pass


class Not2Regular(AdmissibilityError):
    pass


class RankDeficient(AdmissibilityError):
    pass


class PatternMismatch(AdmissibilityError):
    pass


class AvoidanceFailed(AdmissibilityError):
    pass


class SideDegenerate(AdmissibilityError):
    pass
