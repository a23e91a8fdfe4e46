"""Exception and warning classes shared across the package."""


class EicaError(ValueError):
    """Base class for all input and computation errors raised by eica."""


class FieldMismatch(EicaError):
    pass


class ShapeError(EicaError):
    pass


class ParseError(EicaError):
    pass


# category axioms -------------------------------------------------------

class CategoryAxiomError(EicaError):
    """One violated axiom, with the witness that violates it."""

    def __init__(self, *witness):
        self.witness = witness
        super().__init__(f"{type(self).__name__}({', '.join(map(str, witness))})")


class MissingComposite(CategoryAxiomError):
    pass


class BadComposite(CategoryAxiomError):
    """A composite that lands outside Hom(dom f, cod g), or composes a non-composable pair."""


class NonAssociative(CategoryAxiomError):
    pass


class IdentityLawBroken(CategoryAxiomError):
    pass


class NotEI(CategoryAxiomError):
    pass


class DuplicateId(CategoryAxiomError):
    pass


class UnknownObject(CategoryAxiomError):
    pass


class UnknownMorphism(CategoryAxiomError):
    pass


class InvalidCategory(EicaError):
    """Raised by validation with every violation found, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid category ({len(self.violations)} violation(s)):\n{lines}")

    @property
    def kinds(self):
        return {type(v) for v in self.violations}


class NotAGroup(CategoryAxiomError):
    pass


class NotAntisymmetric(CategoryAxiomError):
    pass


class HasOrientedCycle(CategoryAxiomError):
    pass


# representations -------------------------------------------------------

class CategoryMismatch(EicaError):
    pass


class NotFunctorial(EicaError):
    def __init__(self, g, f, detail=""):
        self.pair = (g, f)
        msg = f"NotFunctorial({g}, {f})"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class NotARepresentation(EicaError):
    pass


class NotSimple(NotARepresentation):
    pass


class NotAnIdeal(EicaError):
    pass


class ZeroModule(EicaError):
    pass


class RadicalBudgetExceeded(EicaError):
    """The exhaustive radical fallback would enumerate more vectors than allowed."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed; this is a bug or a counterexample."""


class SimplicityBudgetExceeded(UserWarning):
    """Simplicity of a supplied group module could not be checked within budget."""
