"""σ-mapping from truth pairs into complex amplitudes, and amplitude arithmetic."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from pbitq.models.enums import OpMap, SigmaConvention
from pbitq.models.values import Amplitude, TruthPair
from pbitq.schemas.families import SigmaConfig
from pbitq.services import tnorm_engine

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

# σ-image tolerance for inputs produced by floating-point arithmetic
_IMAGE_SLACK = 1e-12


class OutOfImage(ValueError):
    """Raised when an amplitude has no preimage under the configured σ."""


def _generator(cfg: SigmaConfig, x: npt.ArrayLike) -> FloatArray:
    clamped = np.clip(np.asarray(x, dtype=np.float64), cfg.clamp_floor, 1.0)
    return tnorm_engine.generator_array(cfg.family, clamped, clamp_floor=cfg.clamp_floor)


def sigma_array(
    cfg: SigmaConfig,
    w_plus: npt.ArrayLike,
    w_minus: npt.ArrayLike,
) -> ComplexArray:
    """σ over batches of pairs, returned as complex values re + i·im."""
    wp = np.asarray(w_plus, dtype=np.float64)
    wm = np.asarray(w_minus, dtype=np.float64)
    re = _generator(cfg, wp)
    if cfg.convention == SigmaConvention.pure_generator:
        im = _generator(cfg, 1.0 - wm)
    elif cfg.convention == SigmaConvention.printed:
        im = 1.0 - _generator(cfg, 1.0 - wm)
    else:
        im = _generator(cfg, wm)
    return re + 1j * im


def sigma(cfg: SigmaConfig, a: TruthPair) -> Amplitude:
    return Amplitude.from_complex(complex(sigma_array(cfg, a.w_plus, a.w_minus)))


def _invert(cfg: SigmaConfig, u: float, name: str) -> float:
    ceiling = float(tnorm_engine.generator_array(cfg.family, cfg.clamp_floor))
    if u < -_IMAGE_SLACK or u > ceiling * (1.0 + _IMAGE_SLACK) + _IMAGE_SLACK:
        raise OutOfImage(f"{name}={u!r} is outside the generator image [0, {ceiling:g}]")
    x = tnorm_engine.generator_inverse(cfg.family, max(u, 0.0))
    return min(max(x, cfg.clamp_floor), 1.0)


def sigma_inverse(cfg: SigmaConfig, z: Amplitude) -> TruthPair:
    w_plus = _invert(cfg, z.re, "re")
    if cfg.convention == SigmaConvention.pure_generator:
        w_minus = 1.0 - _invert(cfg, z.im, "im")
    elif cfg.convention == SigmaConvention.printed:
        w_minus = 1.0 - _invert(cfg, 1.0 - z.im, "1 - im")
    else:
        w_minus = _invert(cfg, z.im, "im")
    return TruthPair(w_plus, w_minus)


# ── amplitude arithmetic ────────────────────────────────────────────────────


def amp_add(x: Amplitude, y: Amplitude) -> Amplitude:
    return Amplitude(x.re + y.re, x.im + y.im)


def amp_mul(x: Amplitude, y: Amplitude) -> Amplitude:
    return Amplitude(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re)


def amp_neg(z: Amplitude) -> Amplitude:
    """¬z = i·conj(z), i.e. the coordinate swap."""
    return Amplitude(z.im, z.re)


def meet_operator(op_map: OpMap) -> str:
    return "add" if op_map == OpMap.printed else "mul"


def join_operator(op_map: OpMap) -> str:
    return "mul" if op_map == OpMap.printed else "add"


def combine(op: str, x: Amplitude, y: Amplitude) -> Amplitude:
    return amp_add(x, y) if op == "add" else amp_mul(x, y)


def absolute_error(lhs: complex | ComplexArray, rhs: complex | ComplexArray) -> FloatArray:
    return np.asarray(np.abs(np.asarray(lhs) - np.asarray(rhs)), dtype=np.float64)


def scaled_error(lhs: complex | ComplexArray, rhs: complex | ComplexArray) -> FloatArray:
    """|lhs - rhs| / max(1, |rhs|): absolute near the origin, relative for large moduli."""
    diff = absolute_error(lhs, rhs)
    return np.asarray(diff / np.maximum(1.0, np.abs(np.asarray(rhs))), dtype=np.float64)
