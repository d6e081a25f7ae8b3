"""Tag enums shared by the algebra services, the reports and the CLI.

Each StrEnum value is also its wire form in JSON output, CSV columns and CLI flags.
"""

from enum import StrEnum

# ── Algebra ─────────────────────────────────────────────────────────────────


class TNormKind(StrEnum):
    """Conjunction quantifier families."""

    min_max = "min_max"
    product = "product"
    schweizer_sklar = "schweizer_sklar"
    drastic = "drastic"


class ImplVariant(StrEnum):
    """Second coordinate of CD implication: x'⊓y' (printed) or x⊓y' (standard)."""

    printed = "printed"
    standard = "standard"


class CrispOp(StrEnum):
    meet = "meet"
    join = "join"
    neg = "neg"
    impl = "impl"


class DefectMetric(StrEnum):
    max = "max"
    mean = "mean"


# ── σ-mapping ───────────────────────────────────────────────────────────────


class SigmaConvention(StrEnum):
    """How the negative-evidence coordinate is sent through the generator."""

    pure_generator = "pure_generator"  # f(1 - b)
    printed = "printed"  # 1 - f(1 - b)
    symmetric = "symmetric"  # f(b)


class OpMap(StrEnum):
    """Which complex operation each lattice operation is compared against."""

    printed = "printed"  # meet -> add, join -> mul
    summary = "summary"  # join -> add, meet -> mul


class Identity(StrEnum):
    """Audited homomorphism identities."""

    meet = "meet"
    join = "join"
    meet_offset = "meet_offset"
    negation = "negation"


# ── Evidential error ────────────────────────────────────────────────────────


class ShiftMode(StrEnum):
    common_shift = "common_shift"  # (n+ - k, n- - k)
    swap_shift = "swap_shift"  # (n+ - k, n- + k)


class KernelKind(StrEnum):
    binomial_symmetric = "binomial_symmetric"
    discrete_uniform = "discrete_uniform"


# ── DSL ─────────────────────────────────────────────────────────────────────


class Semantics(StrEnum):
    crisp = "crisp"
    fuzzy = "fuzzy"
    quantum = "quantum"
