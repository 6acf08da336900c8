"""Exception hierarchy shared across the toolkit."""


class K3KitError(Exception):
    """Base class for all toolkit errors."""


# --- binary form arithmetic ---

class DegreeMismatch(K3KitError):
    pass


class BothZero(K3KitError):
    pass


class ZeroForm(K3KitError):
    pass


# --- lattices and discriminant forms ---

class BadParameter(K3KitError):
    pass


class OddLattice(K3KitError):
    pass


class AsymmetricForm(K3KitError):
    pass


class DegenerateResult(K3KitError):
    pass


class NotInjective(K3KitError):
    pass


class RankTooLarge(K3KitError):
    pass


class GroupTooLarge(K3KitError):
    pass


class NotIsotropic(K3KitError):
    pass


# --- Weierstrass analysis ---

class IdenticallyZeroDiscriminant(K3KitError):
    pass


class NoRowMatch(K3KitError):
    pass


class NonMinimalModel(K3KitError):
    """A place has valuations (>=4, >=6); the model is not relatively minimal."""

    def __init__(self, msg, place=None):
        super().__init__(msg)
        self.place = place


class AlreadyMinimal(K3KitError):
    pass


class DegreeUnderflow(K3KitError):
    pass


# --- cone geometry ---

class NotRoot(K3KitError):
    pass


class OnWall(K3KitError):
    pass


class NotPositive(K3KitError):
    pass


class Unstable(K3KitError):
    """Bound-doubling did not certify the chamber walls."""


class BadSignature(K3KitError):
    pass


# --- cli ---

class ParseError(K3KitError):
    pass


class ValidationError(K3KitError):
    pass
