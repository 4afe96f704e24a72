"""Exception types raised across the package.

Every error derives from :class:`OpinionFlowError` so the command line can map
any of them to exit code 2.
"""


class OpinionFlowError(Exception):
    pass


# graphs and files

class GraphError(OpinionFlowError, ValueError):
    pass


class GraphFileError(GraphError):
    """Malformed graph, scenario or P-matrix file.

    ``where`` names the offending line or field so messages can point at it.
    """

    def __init__(self, message, source=None, where=None):
        self.source = source
        self.where = where
        prefix = ""
        if source is not None:
            prefix += f"{source}: "
        if where is not None:
            prefix += f"{where}: "
        super().__init__(prefix + message)


class DecompositionError(GraphError):
    pass


# design

class DesignError(OpinionFlowError, ValueError):
    pass


class SingularTransformError(DesignError):
    pass


class MembershipError(DesignError):
    """P is invertible but P A P^-1 has a negative entry."""


class ClassError(DesignError):
    """The graph class does not support the requested construction."""


class ConstraintError(DesignError):
    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(message)


class SignPatternError(DesignError):
    pass


# dynamics

class DynamicsError(OpinionFlowError, ArithmeticError):
    pass


class NullSpaceError(DynamicsError):
    def __init__(self, message, multiplicity):
        self.multiplicity = multiplicity
        super().__init__(message)


class UnstableError(DynamicsError):
    pass


class GateError(DynamicsError):
    """The uniform left vector shortcut does not apply to this design."""


class SingularBlockError(DynamicsError):
    pass


class DivergenceError(DynamicsError):
    def __init__(self, message, t):
        self.t = t
        super().__init__(message)


class ConvergenceError(DynamicsError):
    """Eigenvalue iteration did not converge."""
