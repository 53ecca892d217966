"""Exception and warning types."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class IncompleteParametrizationError(ValueError):
    """A field lacks the amplitude data an operation needs."""


class ModelValidityError(ValueError):
    """Inputs fall outside the regime where a closed form is defined."""


class LabelingError(RuntimeError):
    """Adiabatic continuation could not assign quantum numbers.

    ``pair`` holds the two eigenpair indices that stayed ambiguous.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DegeneratePerturbationError(ArithmeticError):
    """Second-order perturbation theory hit a vanishing energy denominator."""


class ValidityWarning(UserWarning):
    """An approximate formula is used near or beyond its stated regime."""
