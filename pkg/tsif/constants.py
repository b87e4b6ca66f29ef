from enum import Enum


class Symbol(str, Enum):
    LT = "<"
    EQ = "="
    GT = ">"


# Signatures are plain strings over this alphabet, in this order.
ALPHABET = (Symbol.LT.value, Symbol.EQ.value, Symbol.GT.value)

# Arity of the signature: every letter compares two consecutive series elements.
SIGNATURE_ARITY = 2


class Feature(str, Enum):
    one = "one"
    width = "width"


class Aggregator(str, Enum):
    sum = "sum"


class Phase(str, Enum):
    found = "found"
    not_found = "not_found"


class Sign(str, Enum):
    plus = "+"
    minus = "-"


class RegisterRole(str, Enum):
    main = "main"
    potential = "potential"


class Precondition(str, Enum):
    none = "none"
    non_default = "non_default"


class RecordKind(str, Enum):
    linear = "linear"
    conditional_linear = "conditional_linear"
    nonlinear = "nonlinear"


class ProofKind(str, Enum):
    proved_universal = "proved_universal"
    proved_with_guard = "proved_with_guard"
    desk_verified = "desk_verified"
    refuted = "refuted"
    unknown = "unknown"


class FacetKind(str, Enum):
    facet = "facet"
    not_facet = "not_facet"
    undecided = "undecided"


class ExitCode:
    success = 0
    verification_failure = 1
    usage_error = 2


THREADS_ENV = "TSIF_THREADS"
DB_SCHEMA = "tsif-invariants"
DB_SCHEMA_VERSION = 1
