"""Exception types shared by all modules.

Each error carries a short machine-readable ``code`` that the CLI prints
and maps to a nonzero exit status.
"""


class CobwebError(Exception):
    code = "error"


class InvalidParameter(CobwebError):
    code = "invalid-parameter"


class UnsupportedParameter(CobwebError):
    code = "unsupported-parameter"


class SingularForm(CobwebError):
    code = "singular-form"


class NotProperPoint(CobwebError):
    code = "not-a-proper-point"


class NotRealPlane(CobwebError):
    code = "not-a-real-plane"


class DegeneratePolarity(CobwebError):
    code = "degenerate-polarity"


class DegenerateAxis(CobwebError):
    code = "degenerate-axis"


class Singular(CobwebError):
    code = "singular"


class ChartOverflow(CobwebError):
    code = "chart-overflow"


class NotHyperbolic(CobwebError):
    code = "not-hyperbolic"


class NotCompleteOrthoscheme(CobwebError):
    code = "not-a-complete-orthoscheme"


class NoHalfturnSymmetry(CobwebError):
    code = "no-halfturn-symmetry"


class StabilizerOverflow(CobwebError):
    code = "stabilizer-overflow"


class GluingFailure(CobwebError):
    code = "gluing-failure"


class PairingConstructionFailure(CobwebError):
    code = "pairing-construction-failure"


class NonclosingCycle(CobwebError):
    code = "nonclosing-cycle"


class UnboundGenerator(CobwebError):
    code = "unbound-generator"


class InvalidRadius(CobwebError):
    code = "invalid-radius"


class KernelNotInterior(CobwebError):
    code = "kernel-not-interior"
