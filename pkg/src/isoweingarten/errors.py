"""Exception hierarchy shared by all modules."""


class IsoGeometryError(Exception):
    """Base class for every error raised by isoweingarten."""


class DomainError(IsoGeometryError, ValueError):
    """A parameter or evaluation point lies outside the valid domain."""


class NotASphereError(DomainError):
    """Parabolic i-sphere with vanishing leading coefficient."""


class AdmissibilityError(IsoGeometryError, ValueError):
    """The surface has an isotropic tangent plane at the evaluation point."""

    def __init__(self, message, u=None, v=None):
        super().__init__(message)
        self.u = u
        self.v = v


class StencilError(IsoGeometryError, IndexError):
    """A finite-difference stencil does not fit inside the sample grid."""


class OutOfScopeError(IsoGeometryError, ValueError):
    """Requested the constant relative curvature family (m0 = 0)."""


class SingularBranchError(IsoGeometryError, ArithmeticError):
    """Integration reached the singular locus g' = m0 u."""

    def __init__(self, message, u=None, partial=None):
        super().__init__(message)
        self.u = u
        self.partial = partial


class NonFiniteError(IsoGeometryError, ArithmeticError):
    """Integration produced an overflow or NaN."""

    def __init__(self, message, u=None, partial=None):
        super().__init__(message)
        self.u = u
        self.partial = partial
