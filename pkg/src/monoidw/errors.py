"""Exception hierarchy.

Errors whose docstring says "sentinel" can only fire on an implementation bug;
they exist so that a broken invariant fails loudly instead of producing output.
"""


class MonoidwError(Exception):
    pass


class ParseError(MonoidwError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class IndexOutOfRange(MonoidwError):
    pass


class AssocViolation(MonoidwError):
    def __init__(self, i: int, j: int, k: int):
        self.triple = (i, j, k)
        super().__init__(f"associativity fails at ({i}, {j}, {k})")


class IdentityViolation(MonoidwError):
    def __init__(self, i: int):
        self.element = i
        super().__init__(f"identity law fails at element {i}")


class SizeGuardExceeded(MonoidwError):
    def __init__(self, what: str, size: int, guard: int):
        self.size = size
        self.guard = guard
        super().__init__(f"{what}: size {size} exceeds guard {guard}")


class InternalJDMismatch(MonoidwError):
    """Sentinel: J and D partitions differ on a finite monoid."""


class NotAGroup(MonoidwError):
    """Sentinel: the H-class of an idempotent failed the group axioms."""


class NotREquivalent(MonoidwError):
    pass


class NoWitness(MonoidwError):
    """Sentinel: no multiplier found although the elements are R (or L) related."""


class WitnessDisagreement(MonoidwError):
    """Sentinel: the local-divisor product depends on the chosen witness."""


class StrictnessViolation(MonoidwError):
    """Sentinel: a non-unit produced a local divisor that does not shrink."""


class MorphismViolation(MonoidwError):
    """Sentinel: a constructed map failed its homomorphism check."""


class CIsUnit(MonoidwError):
    pass


class NDoesNotShrink(MonoidwError):
    pass


class DoesNotGenerate(MonoidwError):
    pass


class NonTerminatingSuspected(MonoidwError):
    """Sentinel: more rewrite steps than the weight of the input word."""


class PreconditionNotCertified(MonoidwError):
    pass


class InfiniteIndex(MonoidwError):
    pass


class PartsNotDisjoint(MonoidwError):
    def __init__(self, g: int, h: int, word: str):
        self.parts = (g, h)
        self.word = word
        super().__init__(f"parts {g} and {h} share the word {word!r}")


class NotPrefixFree(MonoidwError):
    def __init__(self, u: str, uv: str):
        self.witness = (u, uv)
        super().__init__(f"not prefix-free: {u!r} is a proper prefix of {uv!r}")


class DelayNotCertified(MonoidwError):
    def __init__(self, d_max: int):
        self.d_max = d_max
        super().__init__(f"no synchronization delay <= {d_max} found")


class NotInClass(MonoidwError):
    """An expression uses a constructor outside the requested language class."""
