"""Crisp, fuzzy and quantum evaluation of DSL expressions, plus random(ρ) sampling."""

from __future__ import annotations

import math
import time
from collections.abc import Mapping

import numpy as np
import numpy.typing as npt

from pbitq.dsl.ast import (
    And,
    Atom,
    CountLit,
    CrispLit,
    Expr,
    Implies,
    Not,
    Or,
    PairLit,
    Random,
    contains_random,
    free_atoms,
)
from pbitq.dsl.printer import to_text
from pbitq.log import log_timing
from pbitq.models.enums import ImplVariant
from pbitq.models.values import Amplitude, Evidence, PBit, TruthPair
from pbitq.schemas.families import SigmaConfig, TNormFamily
from pbitq.schemas.reports import ComparisonReport, NodeComparison, SampleResult
from pbitq.services import logic_core, quantum_map

Binding = PBit | TruthPair | Evidence
Environment = Mapping[str, Binding]
BoolArray = npt.NDArray[np.bool_]


class EvaluationError(ValueError):
    """Base class for expressions that cannot be evaluated under the chosen semantics."""


class UnboundAtom(EvaluationError):
    def __init__(self, *names: str) -> None:
        self.names = names
        self.name = names[0]
        listed = ", ".join(repr(name) for name in names)
        noun = "atom" if len(names) == 1 else "atoms"
        super().__init__(f"{noun} {listed} not bound in the environment")


class NonCrispLeaf(EvaluationError):
    """A pair, count literal or non-p-bit binding reached crisp evaluation."""


class RandomOutsideSampling(EvaluationError):
    """random(ρ) only has meaning inside ``sample_random``."""


class RandomInCrisp(RandomOutsideSampling):
    pass


class ImpliesInQuantum(EvaluationError):
    """The σ-mapping has no counterpart for implication."""


def _lookup(env: Environment, name: str) -> Binding:
    try:
        return env[name]
    except KeyError:
        raise UnboundAtom(name) from None


def _crisp_leaf(e: Expr, env: Environment) -> PBit:
    if isinstance(e, CrispLit):
        return e.value
    if isinstance(e, Atom):
        value = _lookup(env, e.name)
        if not isinstance(value, PBit):
            raise NonCrispLeaf(f"atom {e.name!r} is bound to {type(value).__name__}, not a p-bit")
        return value
    raise NonCrispLeaf(f"{to_text(e)} is not a crisp leaf")


def _pair_leaf(e: Expr, env: Environment) -> TruthPair:
    value: Binding
    if isinstance(e, Atom):
        value = _lookup(env, e.name)
    elif isinstance(e, CrispLit | PairLit | CountLit):
        value = e.value
    else:
        raise RandomOutsideSampling(f"{to_text(e)} can only be evaluated by sampling")
    if isinstance(value, PBit):
        return logic_core.embed_crisp(value)
    if isinstance(value, Evidence):
        return logic_core.normalize(value)
    return value


# ── crisp ───────────────────────────────────────────────────────────────────


def eval_crisp(
    e: Expr,
    env: Environment,
    variant: ImplVariant = ImplVariant.printed,
) -> PBit:
    if isinstance(e, Random):
        raise RandomInCrisp(f"{to_text(e)} cannot be evaluated crisply; use sampling")
    if isinstance(e, Not):
        return logic_core.cd_neg(eval_crisp(e.operand, env, variant))
    if isinstance(e, And):
        return logic_core.cd_meet(
            eval_crisp(e.left, env, variant), eval_crisp(e.right, env, variant)
        )
    if isinstance(e, Or):
        return logic_core.cd_join(
            eval_crisp(e.left, env, variant), eval_crisp(e.right, env, variant)
        )
    if isinstance(e, Implies):
        return logic_core.cd_impl(
            eval_crisp(e.left, env, variant), eval_crisp(e.right, env, variant), variant
        )
    return _crisp_leaf(e, env)


# ── fuzzy ───────────────────────────────────────────────────────────────────


def eval_fuzzy(
    e: Expr,
    env: Environment,
    fam: TNormFamily,
    variant: ImplVariant = ImplVariant.printed,
) -> TruthPair:
    if isinstance(e, Not):
        return logic_core.fuzzy_neg(eval_fuzzy(e.operand, env, fam, variant))
    if isinstance(e, And):
        return logic_core.fuzzy_meet(
            eval_fuzzy(e.left, env, fam, variant), eval_fuzzy(e.right, env, fam, variant), fam
        )
    if isinstance(e, Or):
        return logic_core.fuzzy_join(
            eval_fuzzy(e.left, env, fam, variant), eval_fuzzy(e.right, env, fam, variant), fam
        )
    if isinstance(e, Implies):
        return logic_core.fuzzy_impl(
            eval_fuzzy(e.left, env, fam, variant),
            eval_fuzzy(e.right, env, fam, variant),
            fam,
            variant,
        )
    return _pair_leaf(e, env)


# ── quantum ─────────────────────────────────────────────────────────────────


def eval_quantum(e: Expr, env: Environment, cfg: SigmaConfig) -> Amplitude:
    """Leaves through σ; ∧/∨ through the op map's amplitude operators; ¬ as the swap."""
    if isinstance(e, Implies):
        raise ImpliesInQuantum(f"implication in {to_text(e)} has no quantum semantics")
    if isinstance(e, Not):
        return quantum_map.amp_neg(eval_quantum(e.operand, env, cfg))
    if isinstance(e, And):
        return quantum_map.combine(
            quantum_map.meet_operator(cfg.op_map),
            eval_quantum(e.left, env, cfg),
            eval_quantum(e.right, env, cfg),
        )
    if isinstance(e, Or):
        return quantum_map.combine(
            quantum_map.join_operator(cfg.op_map),
            eval_quantum(e.left, env, cfg),
            eval_quantum(e.right, env, cfg),
        )
    return quantum_map.sigma(cfg, _pair_leaf(e, env))


def compare(
    e: Expr,
    env: Environment,
    cfg: SigmaConfig,
    fam: TNormFamily,
) -> ComparisonReport:
    """Per-node error between eval_quantum and σ∘eval_fuzzy, listed bottom-up."""
    nodes: list[NodeComparison] = []

    def visit(node: Expr) -> tuple[TruthPair, Amplitude]:
        if isinstance(node, Implies):
            raise ImpliesInQuantum(f"implication in {to_text(node)} has no quantum semantics")
        if isinstance(node, Not):
            pair, amp = visit(node.operand)
            pair, amp = logic_core.fuzzy_neg(pair), quantum_map.amp_neg(amp)
        elif isinstance(node, And | Or):
            left_pair, left_amp = visit(node.left)
            right_pair, right_amp = visit(node.right)
            if isinstance(node, And):
                pair = logic_core.fuzzy_meet(left_pair, right_pair, fam)
                op = quantum_map.meet_operator(cfg.op_map)
            else:
                pair = logic_core.fuzzy_join(left_pair, right_pair, fam)
                op = quantum_map.join_operator(cfg.op_map)
            amp = quantum_map.combine(op, left_amp, right_amp)
        else:
            pair = _pair_leaf(node, env)
            amp = quantum_map.sigma(cfg, pair)
        image = quantum_map.sigma(cfg, pair)
        error = float(quantum_map.scaled_error(amp.to_complex(), image.to_complex()))
        nodes.append(
            NodeComparison(
                expr=to_text(node),
                quantum=(amp.re, amp.im),
                sigma_of_fuzzy=(image.re, image.im),
                error=error,
            )
        )
        return pair, amp

    visit(e)
    return ComparisonReport(nodes=nodes, root_error=nodes[-1].error)


# ── sampling ────────────────────────────────────────────────────────────────


def _sample_fold(
    e: Expr,
    env: Environment,
    variant: ImplVariant,
    rng: np.random.Generator,
    trials: int,
) -> tuple[BoolArray, BoolArray]:
    if isinstance(e, Random):
        hit = rng.random(trials) < e.rho
        return hit, ~hit
    if isinstance(e, Not):
        t, f = _sample_fold(e.operand, env, variant, rng, trials)
        return f, t
    if isinstance(e, And | Or | Implies):
        lt, lf = _sample_fold(e.left, env, variant, rng, trials)
        rt, rf = _sample_fold(e.right, env, variant, rng, trials)
        if isinstance(e, And):
            return lt & rt, lf | rf
        if isinstance(e, Or):
            return lt | rt, lf & rf
        second = lf & rf if variant == ImplVariant.printed else lt & rf
        return ~lt | rt, second
    bit = _crisp_leaf(e, env)
    return np.full(trials, bool(bit.t)), np.full(trials, bool(bit.f))


def sample_random(
    e: Expr,
    env: Environment,
    trials: int,
    seed: int,
    variant: ImplVariant = ImplVariant.printed,
) -> SampleResult:
    """Resolve every random(ρ) leaf per trial, evaluate crisply, and aggregate the outcomes."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    missing = sorted(free_atoms(e) - env.keys())
    if missing:
        raise UnboundAtom(*missing)
    start = time.perf_counter()
    if contains_random(e):
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        t, f = _sample_fold(e, env, variant, rng, trials)
        evidence = Evidence(int(t.sum()), int(f.sum()), trials)
    else:
        # every trial agrees with the crisp value
        bit = eval_crisp(e, env, variant)
        evidence = Evidence(bit.t * trials, bit.f * trials, trials)
    pair = logic_core.normalize(evidence)
    log_timing("sample_random", start, True, trials=trials, seed=seed)
    return SampleResult(
        w_plus=pair.w_plus,
        w_minus=pair.w_minus,
        stderr_plus=math.sqrt(pair.w_plus * (1.0 - pair.w_plus) / trials),
        stderr_minus=math.sqrt(pair.w_minus * (1.0 - pair.w_minus) / trials),
        n_plus=evidence.n_plus,
        n_minus=evidence.n_minus,
        trials=trials,
        seed=seed,
    )
