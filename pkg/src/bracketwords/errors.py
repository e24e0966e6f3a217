"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`BracketError`.
The ``category`` attribute drives the CLI exit code: ``"precision"`` maps to 3,
``"domain"`` to 4 and ``"usage"`` to 2.
"""


class BracketError(Exception):
    category = "domain"

    def record(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class PrecisionExhausted(BracketError):
    category = "precision"


class Reducible(BracketError):
    pass


class NoRoot(BracketError):
    pass


class MultipleRoots(BracketError):
    pass


class FieldMismatch(BracketError):
    pass


class HypothesisViolated(BracketError):
    pass


class GPSyntaxError(BracketError):
    category = "usage"

    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position

    def record(self) -> dict:
        rec = super().record()
        rec["position"] = self.position
        return rec


class UnknownConstant(BracketError):
    category = "usage"


class MissingParam(BracketError):
    pass


class UncodedValue(BracketError):
    def __init__(self, n: int, value):
        super().__init__(f"value {value!r} at n={n} has no symbol in the coding table")
        self.n = n
        self.value = value


class PartitionViolation(BracketError):
    def __init__(self, n: int, hits: int):
        super().__init__(f"{hits} selectors fire at n={n}, expected exactly one")
        self.n = n


class NegativeIndex(BracketError):
    def __init__(self, n: int, index: int):
        super().__init__(f"index map yields {index} < 0 at n={n}")
        self.n = n


class NonUniformMorphism(BracketError):
    pass


class NotPisot(BracketError):
    pass


class InsufficientSamples(BracketError):
    pass


class TooLarge(BracketError):
    pass
