"""Exception hierarchy for the dmm runtime and language."""


class DMMError(Exception):
    """Base class. ``pos`` is a (line, column) pair when the error comes from source text."""

    def __init__(self, message="", pos=None):
        super().__init__(message)
        self.message = message
        self.pos = pos

    def __str__(self):
        if self.pos is None:
            return self.message
        return f"{self.pos[0]}:{self.pos[1]}: {self.message}"


class EmptyName(DMMError):
    pass


class ForbiddenCharacter(DMMError):
    def __init__(self, text, position):
        super().__init__(f"forbidden character {text[position]!r} at {position} in {text!r}")
        self.position = position


class UnknownPort(DMMError):
    pass


class UnknownType(UnknownPort):
    pass


class UnknownField(UnknownPort):
    pass


class UnknownKind(DMMError):
    pass


class DuplicateType(DMMError):
    pass


class DuplicateKind(DMMError):
    pass


class ArityMismatch(DMMError):
    pass


class InvalidSignature(DMMError):
    pass


class KindMismatch(DMMError):
    pass


class MaskTailConflict(DMMError):
    pass


class MalformedMask(DMMError):
    pass


class CrossKindWeight(DMMError):
    pass


class PortDirectionError(DMMError):
    pass


class TransformFailure(DMMError):
    """Raised when a neuron's transform throws or emits a wrongly-kinded value; the machine halts."""

    def __init__(self, message, neuron=None, tick=None):
        super().__init__(message)
        self.neuron = neuron
        self.tick = tick


class MachineHalted(DMMError):
    pass


# language errors


class LexError(DMMError):
    pass


class ParseError(DMMError):
    def __init__(self, message, pos=None, expected=()):
        super().__init__(message, pos)
        self.expected = tuple(expected)


class EvalError(DMMError):
    pass


class UnknownIdentifier(EvalError):
    pass


class DuplicateIdentifier(EvalError):
    pass


class UnboundTransform(EvalError):
    pass
