"""Exception hierarchy shared by all modules."""


class ShintaniError(Exception):
    """Base class for every error raised by this package."""


class PrecisionExhausted(ShintaniError):
    """A sign or value could not be certified at the maximal allowed precision."""


class SearchExhausted(ShintaniError):
    """A bounded search (unit power, signed generator, ...) hit its bound."""


class NotQuadratic(ShintaniError):
    pass


class NotAMember(ShintaniError):
    pass


class DependentGenerators(ShintaniError):
    pass


class EqualHeights(ShintaniError):
    """Two generators of a cone have the same height coordinate."""


class ZeroCoefficient(ShintaniError):
    """The height vector e_h lies on a wall of the cone (never happens for rational cones in a field)."""


class NotAFace(ShintaniError):
    pass


class NotInHalfspace(ShintaniError):
    pass


class NonGenericPoint(ShintaniError):
    pass


class RayNotInterior(ShintaniError):
    pass


class GeneratorNotInLattice(ShintaniError):
    pass


class NotConvergent(ShintaniError):
    pass


class BoundaryPoint(ShintaniError):
    """z equals 0 or |omega| where the sine/xi function is undefined."""


class OrderOverflow(ShintaniError):
    pass


class InvalidDatum(ShintaniError):
    """Ray-class data violating a standing assumption (e.g. f = O_F, z in b)."""


class EmptyTable(ShintaniError):
    pass


class UnitIdealModulus(InvalidDatum):
    """The modulus f equals O_F, which the construction excludes."""


class ShiftInLattice(InvalidDatum):
    """z lies in b = z a0^-1 f (happens when a0 is not coprime to f)."""
