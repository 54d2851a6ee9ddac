"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`StructureError`, which is a :class:`ValueError`.  Errors that carry a
counterexample keep it on the instance so callers (and the CLI) can print it.
"""


class StructureError(ValueError):
    pass


# -- orders and lattices -----------------------------------------------------

class IndexOutOfRange(StructureError):
    def __init__(self, index, size):
        super().__init__(f"index {index} outside 0..{size - 1}")
        self.index = index
        self.size = size


class CycleDetected(StructureError):
    def __init__(self, a, b):
        super().__init__(f"{a} <= {b} and {b} <= {a} after closure")
        self.pair = (a, b)


class NotALattice(StructureError):
    def __init__(self, a, b, missing):
        super().__init__(f"elements {a} and {b} have no {missing}")
        self.pair = (a, b)
        self.missing = missing


class NotDistributive(StructureError):
    def __init__(self, triple=None):
        msg = "lattice is not distributive"
        if triple is not None:
            msg += f" (witness {triple})"
        super().__init__(msg)
        self.triple = triple


class NotHeyting(StructureError):
    def __init__(self, a, b):
        super().__init__(f"no relative pseudocomplement for ({a}, {b})")
        self.pair = (a, b)


class DegenerateLattice(StructureError):
    def __init__(self):
        super().__init__("lattice has bot == top (or no bounds); no proper filters")


# -- abstract logics ---------------------------------------------------------

class EmptyTheoryFamily(StructureError):
    def __init__(self):
        super().__init__("the theory family must be nonempty")


class NotIntersectionClosed(StructureError):
    def __init__(self, witness):
        super().__init__(f"intersection of {witness} is not a theory")
        self.witness = witness


class MalformedTable(StructureError):
    pass


class MissingConnective(StructureError):
    def __init__(self, name):
        super().__init__(f"logic has no {name} connective")
        self.name = name


class NotATheory(StructureError):
    def __init__(self, theory):
        super().__init__(f"{theory} is not a theory")
        self.theory = theory


class NotDisjunctionClosed(StructureError):
    def __init__(self, a, b):
        super().__init__(f"join of {a} and {b} leaves the set")
        self.pair = (a, b)


class NotDisjoint(StructureError):
    def __init__(self, element):
        super().__init__(f"element {element} lies in both sets")
        self.element = element


class NoWitness(StructureError):
    """Prime separation found nothing.  On a valid distributive logic this
    means a bug, never bad input."""

    def __init__(self, theory, avoid):
        super().__init__(f"no prime theory extends {theory} and avoids {avoid}")
        self.theory = theory
        self.avoid = avoid


class ElementInTheory(StructureError):
    def __init__(self, element):
        super().__init__(f"element {element} already lies in the theory")
        self.element = element


class NotDistributiveLogic(StructureError):
    def __init__(self):
        super().__init__("logic is not distributive")


# -- duality -----------------------------------------------------------------

class NotIntuitionisticLogic(StructureError):
    def __init__(self, reason="logic is not intuitionistic"):
        super().__init__(reason)


class AdjunctionFailure(StructureError):
    def __init__(self, z, a, b):
        super().__init__(f"z <= a->b iff z&a <= b fails at z={z}, a={a}, b={b}")
        self.triple = (z, a, b)


class RoundtripMismatch(StructureError):
    def __init__(self, witness, reason=""):
        super().__init__(f"round trip mismatch at {witness}{': ' + reason if reason else ''}")
        self.witness = witness


# -- morphisms ---------------------------------------------------------------

class UniverseMismatch(StructureError):
    pass


class NotAHom(StructureError):
    def __init__(self, witness):
        super().__init__(f"map is not a homomorphism: {witness}")
        self.witness = witness


class NotWellDefinedOnQuotient(StructureError):
    def __init__(self, a, b):
        super().__init__(f"equivalent expressions {a}, {b} have inequivalent images")
        self.pair = (a, b)


# -- enumeration -------------------------------------------------------------

class BudgetExceeded(StructureError):
    pass
