"""
Exception hierarchy for rsdr.

Input and parameter problems map to CLI exit code 1, numerical failures to 2.
"""


class RsdrError(Exception):
    """Base error for every failure raised by rsdr"""

    pass


class InputError(RsdrError):
    """Data cannot be used as given (shape, finiteness, missing columns)"""

    pass


class ParameterError(RsdrError):
    """A tuning parameter is outside its documented range"""

    pass


class SlicingError(InputError):
    """The response cannot be cut into the requested number of slices"""

    pass


class FoldSizeError(InputError):
    """A cross-validation fold is too small to fit or score"""

    pass


class EvaluationError(InputError):
    """Labels cannot support an ROC evaluation"""

    pass


class NumericalError(RsdrError):
    """Linear algebra failed on otherwise valid input"""

    pass


class SingularCovarianceError(NumericalError):
    """Predictor covariance (plus ridge) is not positive definite"""

    pass


class DegenerateProjectionError(NumericalError):
    """Matrix is too close to rank deficient to project onto the Stiefel manifold"""

    pass
