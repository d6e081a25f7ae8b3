"""``pbitq`` command line: evaluate expressions and run the algebra experiments.

JSON goes to stdout, CSV to ``--out``, logs and error messages to stderr.
Exit codes: 0 success, 1 usage error, 2 evaluation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

import pandas as pd
import structlog

from pbitq.config import get_settings
from pbitq.dsl.evaluator import (
    Environment,
    compare,
    eval_crisp,
    eval_fuzzy,
    eval_quantum,
    sample_random,
)
from pbitq.dsl.parser import parse
from pbitq.dsl.printer import to_text
from pbitq.log import configure_structured_logging
from pbitq.models.enums import (
    CrispOp,
    DefectMetric,
    ImplVariant,
    KernelKind,
    OpMap,
    Semantics,
    ShiftMode,
    SigmaConvention,
    TNormKind,
)
from pbitq.schemas.families import SigmaConfig, TNormFamily
from pbitq.services import audit_service, ee_model, logic_core, tnorm_engine
from pbitq.services.env_validators import load_environment

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EVALUATION = 2

DEFAULT_SWEEP_P = (-1.0, -2.0, -4.0, -8.0, -16.0, -32.0)
DEFAULT_DEFECT_P = (-2.0, -8.0, -32.0)
DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.02)

logger = structlog.get_logger("pbitq.cli")


class UsageError(Exception):
    """Bad command-line usage; reported with exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _map_error(exc: Exception) -> tuple[int, str]:
    if isinstance(exc, UsageError):
        return EXIT_USAGE, str(exc)
    if isinstance(exc, ValueError | LookupError | OSError | RuntimeError):
        return EXIT_EVALUATION, f"error: {exc}"
    return EXIT_EVALUATION, f"internal error: {type(exc).__name__}: {exc}"


# ── output ──────────────────────────────────────────────────────────────────


def _round(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.6g}")
    if isinstance(value, dict):
        return {key: _round(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_round(item) for item in value]
    return value


def _emit(payload: Any) -> None:
    try:
        text = json.dumps(_round(payload), indent=2, ensure_ascii=False, allow_nan=False)
    except ValueError as exc:
        raise ValueError(f"result is not representable as JSON: {exc}") from exc
    sys.stdout.write(text + "\n")


# ── argument helpers ────────────────────────────────────────────────────────


def _family(args: argparse.Namespace) -> TNormFamily:
    kind = args.family
    if kind is None:
        kind = TNormKind.schweizer_sklar if args.p is not None else TNormKind.min_max
    return TNormFamily(kind=kind, p=args.p if kind == TNormKind.schweizer_sklar else None)


def _sigma_config(args: argparse.Namespace, family: TNormFamily) -> SigmaConfig:
    return SigmaConfig(family=family, convention=args.convention, op_map=args.op_map)


def _environment(args: argparse.Namespace) -> Environment:
    return load_environment(args.env) if args.env is not None else {}


def _write_csv(rows: list[dict[str, Any]], path: Path) -> None:
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")


# ── commands ────────────────────────────────────────────────────────────────


def cmd_eval(args: argparse.Namespace) -> None:
    expr = parse(args.expr)
    env = _environment(args)
    if args.semantics == Semantics.crisp:
        _emit({"value": eval_crisp(expr, env, args.impl_variant).symbol})
    elif args.semantics == Semantics.fuzzy:
        pair = eval_fuzzy(expr, env, _family(args), args.impl_variant)
        _emit({"value": {"w_plus": pair.w_plus, "w_minus": pair.w_minus}})
    else:
        amp = eval_quantum(expr, env, _sigma_config(args, _family(args)))
        _emit({"value": {"re": amp.re, "im": amp.im}})


def cmd_print(args: argparse.Namespace) -> None:
    _emit({"text": to_text(parse(args.expr))})


def cmd_compare(args: argparse.Namespace) -> None:
    family = _family(args)
    report = compare(parse(args.expr), _environment(args), _sigma_config(args, family), family)
    _emit(report.model_dump(mode="json"))


def cmd_sample(args: argparse.Namespace) -> None:
    result = sample_random(
        parse(args.expr), _environment(args), args.trials, args.seed, args.impl_variant
    )
    _emit(result.model_dump(mode="json"))


def cmd_truth_table(args: argparse.Namespace) -> None:
    rows = [
        {"a": a.symbol, "b": b.symbol if b is not None else None, "result": result.symbol}
        for a, b, result in logic_core.truth_table(args.op, args.impl_variant)
    ]
    if args.out is not None:
        _write_csv(rows, args.out)
    _emit({"op": args.op.value, "variant": args.impl_variant.value, "rows": rows})


def cmd_audit(args: argparse.Namespace) -> None:
    report = audit_service.sweep([args.p], args.samples, args.seed, args.out, workers=args.workers)
    _emit(report.model_dump(mode="json"))


def cmd_sweep(args: argparse.Namespace) -> None:
    report = audit_service.sweep(
        args.p_values, args.samples, args.seed, args.out, workers=args.workers
    )
    _emit(report.model_dump(mode="json"))


def cmd_sweep_defect(args: argparse.Namespace) -> None:
    families = [TNormFamily.product(), *(TNormFamily.schweizer_sklar(p) for p in args.p_values)]
    reports = tnorm_engine.defect_sweep(families, args.grid, args.metric)
    if args.out is not None:
        tnorm_engine.write_defect_csv(reports, args.out)
    _emit([report.model_dump(mode="json") for report in reports])


def cmd_ee_fit(args: argparse.Namespace) -> None:
    rows = ee_model.ee_fit(
        args.epsilons,
        total=args.total,
        grid=args.grid,
        samples=args.samples,
        seed=args.seed,
        bound=args.bound,
        shift_mode=args.shift_mode,
        kernel=args.kernel,
    )
    if args.out is not None:
        ee_model.write_ee_fit_csv(rows, args.out)
    _emit([row.model_dump(mode="json") for row in rows])


def cmd_demorgan_check(args: argparse.Namespace) -> None:
    families = [
        TNormFamily.min_max(),
        TNormFamily.product(),
        TNormFamily.drastic(),
        *(TNormFamily.schweizer_sklar(p) for p in args.p_values),
    ]
    rows = audit_service.demorgan_check(families, args.samples, args.seed)
    _emit([row.model_dump(mode="json") for row in rows])


# ── parser ──────────────────────────────────────────────────────────────────


def _add_expression(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--expr", required=True, help="expression text")
    sub.add_argument("--env", type=Path, default=None, help="JSON environment file")


def _add_family(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--family", type=TNormKind, choices=list(TNormKind), default=None)
    sub.add_argument("--p", type=float, default=None, help="Schweizer-Sklar parameter")


def _add_sigma(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--convention",
        type=SigmaConvention,
        choices=list(SigmaConvention),
        default=SigmaConvention.pure_generator,
    )
    sub.add_argument("--op-map", type=OpMap, choices=list(OpMap), default=OpMap.printed)


def _add_variant(sub: argparse.ArgumentParser, default: ImplVariant) -> None:
    sub.add_argument(
        "--impl-variant", type=ImplVariant, choices=list(ImplVariant), default=default
    )


def _add_run(sub: argparse.ArgumentParser, samples: int, seed: int) -> None:
    sub.add_argument("--samples", type=int, default=samples)
    sub.add_argument("--seed", type=int, default=seed)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = _ArgumentParser(
        prog="pbitq",
        description="Evaluate CD-logic expressions and run the algebra experiments.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def command(name: str, handler: Callable[[argparse.Namespace], None], text: str) -> Any:
        sub = commands.add_parser(name, help=text, description=text)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("eval", cmd_eval, "evaluate an expression under one semantics")
    _add_expression(sub)
    sub.add_argument(
        "--semantics", type=Semantics, choices=list(Semantics), default=Semantics.crisp
    )
    _add_family(sub)
    _add_sigma(sub)
    _add_variant(sub, settings.impl_variant)

    sub = command("print", cmd_print, "print the canonical form of an expression")
    sub.add_argument("--expr", required=True)

    sub = command("compare", cmd_compare, "per-node quantum vs σ∘fuzzy comparison")
    _add_expression(sub)
    _add_family(sub)
    _add_sigma(sub)

    sub = command("sample", cmd_sample, "Monte Carlo evaluation of random(ρ) leaves")
    _add_expression(sub)
    sub.add_argument("--trials", type=int, default=settings.default_samples)
    sub.add_argument("--seed", type=int, default=settings.default_seed)
    _add_variant(sub, settings.impl_variant)

    sub = command("truth-table", cmd_truth_table, "crisp CD truth table of one operator")
    sub.add_argument("--op", type=CrispOp, choices=list(CrispOp), required=True)
    _add_variant(sub, settings.impl_variant)
    sub.add_argument("--out", type=Path, default=None)

    sub = command("audit", cmd_audit, "σ homomorphism audit for one p")
    sub.add_argument("--p", type=float, required=True)
    _add_run(sub, settings.default_samples, settings.default_seed)
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--out", type=Path, default=None)

    sub = command("sweep", cmd_sweep, "σ homomorphism audit across p values")
    sub.add_argument("--p-values", type=float, nargs="+", default=list(DEFAULT_SWEEP_P))
    _add_run(sub, settings.default_samples, settings.default_seed)
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--out", type=Path, default=None)

    sub = command("sweep-defect", cmd_sweep_defect, "distributivity defect per family")
    sub.add_argument("--p-values", type=float, nargs="+", default=list(DEFAULT_DEFECT_P))
    sub.add_argument("--grid", type=int, default=50)
    sub.add_argument(
        "--metric", type=DefectMetric, choices=list(DefectMetric), default=DefectMetric.max
    )
    sub.add_argument("--out", type=Path, default=None)

    sub = command("ee-fit", cmd_ee_fit, "fit the SS parameter of the evidential-error meet")
    sub.add_argument("--epsilons", type=float, nargs="+", default=list(DEFAULT_EPSILONS))
    sub.add_argument("--total", type=int, default=1000)
    sub.add_argument("--grid", type=int, default=21)
    sub.add_argument("--bound", type=int, default=None)
    sub.add_argument(
        "--shift-mode", type=ShiftMode, choices=list(ShiftMode), default=ShiftMode.common_shift
    )
    sub.add_argument(
        "--kernel", type=KernelKind, choices=list(KernelKind), default=KernelKind.binomial_symmetric
    )
    _add_run(sub, settings.default_samples, settings.default_seed)
    sub.add_argument("--out", type=Path, default=None)

    sub = command("demorgan-check", cmd_demorgan_check, "swap-negation De Morgan laws per family")
    sub.add_argument("--p-values", type=float, nargs="+", default=[-1.0, -8.0])
    _add_run(sub, settings.default_samples, settings.default_seed)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    configure_structured_logging()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        code, message = _map_error(exc)
        sys.stderr.write(f"{message}\n")
        return code

    structlog.contextvars.bind_contextvars(command=args.command)
    try:
        args.handler(args)
    except Exception as exc:
        code, message = _map_error(exc)
        logger.info("command_failed", error=str(exc), exit_code=code)
        sys.stderr.write(f"{message}\n")
        return code
    finally:
        structlog.contextvars.unbind_contextvars("command")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
