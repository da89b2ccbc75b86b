"""Exception types shared across the package.

Each error carries a ``code`` string of the form ``module.name`` so the
command line layer can surface it unchanged.
"""

from __future__ import annotations


class SurgeryError(Exception):
    """Base class for all package errors."""

    code = "hgpsurgery.error"


class DimensionMismatch(SurgeryError, ValueError):
    code = "gf2.dimension_mismatch"


class SearchBudgetExceeded(SurgeryError):
    """Raised when an exhaustive search would exceed its budget.

    Attributes:
        lower_bound: Best proven lower bound on the searched quantity.
        budget: The budget that was exceeded.
    """

    code = "complex.search_budget_exceeded"

    def __init__(self, lower_bound, budget, message=None):
        self.lower_bound = lower_bound
        self.budget = budget
        super().__init__(
            message or f"search budget {budget} exceeded; lower bound {lower_bound}"
        )


class NotAComplex(SurgeryError, ValueError):
    code = "complex.not_a_complex"


class DegreeOutOfRange(SurgeryError, ValueError):
    code = "cone.degree_out_of_range"


class NotAChainMap(SurgeryError, ValueError):
    code = "cone.not_a_chain_map"


class NotACodeword(SurgeryError, ValueError):
    code = "gadget.not_a_codeword"


class GaugeQubits(SurgeryError, ValueError):
    code = "gadget.gauge_qubits"


class CheegerBudgetExceeded(SearchBudgetExceeded):
    code = "gadget.budget_exceeded"


class OrientationMismatch(SurgeryError, ValueError):
    code = "surgery.orientation_mismatch"


class DependentCodewords(SurgeryError, ValueError):
    code = "surgery.dependent_codewords"


class MismatchedD(SurgeryError, ValueError):
    code = "surgery.mismatched_d"


class WrongShape(SurgeryError, ValueError):
    code = "toric.wrong_shape"


class ZeroVector(SurgeryError, ValueError):
    code = "toric.zero_vector"


class InputError(SurgeryError, ValueError):
    code = "io.input_error"
