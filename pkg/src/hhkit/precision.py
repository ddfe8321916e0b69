"""Probabilistic-recirculation heavy-hitter algorithm.

A d-way table of (key, counter) register arrays models a match-action
pipeline.  A matched packet increments its counter(s) in place.  An unmatched
packet leaves the pipeline carrying the minimum counter value it sampled
(`carry_min`) and is cloned back through the pipeline with a small
probability; the clone overwrites the minimum slot with (flow, new value)
after a configurable packet delay, overriding any increments that landed in
between.  Admission probability targets 1/(carry_min+1); two restricted
variants build it from raw random bits:

* power-of-two: round to 2^-x with x = ceil(log2 carry_min); writes 2^x.
  Realized probability is within a factor 2 of the target.
* nine-eighths: decompose carry_min+1 = 2^shift * T with T in [8, 16) and
  use 2^-shift * 1/floor(T) via a lookup-table threshold on an N-bit draw.
  Realized probability is within a factor 9/8 of the target (up to 2^-N
  quantization); the written value stays carry_min+1.

Preloading every counter with a nonzero initial value V caps the per-packet
recirculation probability near 1/(V+1) from the first packet on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels_py as _codes
from .tables import PendingWrite, RecirculatingTableAlgorithm

__all__ = ["ProbMode", "PrecisionConfig", "Precision", "RecircDecision",
           "recirc_decision", "stage_count", "PendingWrite"]


class ProbMode(enum.Enum):
    """How the admission probability is realized from the random source."""

    EXACT = _codes.MODE_EXACT
    POWER_OF_TWO = _codes.MODE_POW2
    NINE_EIGHTHS = _codes.MODE_NINE_EIGHTHS

    @classmethod
    def parse(cls, text: str) -> "ProbMode":
        key = text.strip().lower().replace("_", "-")
        try:
            return _MODE_NAMES[key]
        except KeyError:
            raise ValueError(f"unknown probability mode {text!r}; "
                             f"choose from {sorted(_MODE_NAMES)}") from None

    @property
    def label(self) -> str:
        return {ProbMode.EXACT: "exact", ProbMode.POWER_OF_TWO: "pow2",
                ProbMode.NINE_EIGHTHS: "nine-eighths"}[self]


_MODE_NAMES = {
    "exact": ProbMode.EXACT,
    "pow2": ProbMode.POWER_OF_TWO,
    "power-of-two": ProbMode.POWER_OF_TWO,
    "2-approx": ProbMode.POWER_OF_TWO,
    "nine-eighths": ProbMode.NINE_EIGHTHS,
    "98": ProbMode.NINE_EIGHTHS,
    "9/8": ProbMode.NINE_EIGHTHS,
}


@dataclass(frozen=True)
class PrecisionConfig:
    d: int = 2
    entries_per_way: int = 1024
    initial_value: int = 0
    prob_mode: ProbMode = ProbMode.EXACT
    delay: int = 0
    seed: int = 0
    lookup_bits: int = 16

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.entries_per_way < 1:
            raise ValueError("entries_per_way must be >= 1")
        if self.initial_value < 0:
            raise ValueError("initial_value must be >= 0")
        if self.delay < 0:
            raise ValueError("delay must be >= 0")


@dataclass(frozen=True)
class RecircDecision:
    """Distribution of one admission decision for a given carry_min.

    `probability` is the mode-defined target rational; `realized` is the
    exact probability of the bit-level procedure (quantized by the draw
    widths); `bits_consumed` counts random bits spent per decision.
    """

    probability: Fraction
    new_value: int
    bits_consumed: int
    realized: Fraction = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.realized is None:
            object.__setattr__(self, "realized", self.probability)


def recirc_decision(carry_min: int, mode: ProbMode,
                    lookup_bits: int = 16) -> RecircDecision:
    """Admission probability and replacement value for one unmatched packet."""
    if carry_min < 0:
        raise ValueError("carry_min must be >= 0")
    if mode is ProbMode.EXACT:
        m = carry_min + 1
        if m == 1:
            return RecircDecision(Fraction(1), 1, 0)
        # realized by one 64-bit draw under a floor threshold, never above 1/m
        thr = (1 << 64) // m
        return RecircDecision(Fraction(1, m), m, 64, Fraction(thr, 1 << 64))
    if mode is ProbMode.POWER_OF_TWO:
        xb = 0 if carry_min <= 1 else (carry_min - 1).bit_length()
        p = Fraction(1, 1 << xb)
        return RecircDecision(p, 1 << xb, xb)
    if mode is ProbMode.NINE_EIGHTHS:
        m = carry_min + 1
        if m == 1:
            return RecircDecision(Fraction(1), 1, 0)
        nb = lookup_bits
        shift = m.bit_length() - 4
        if shift > 0:
            mantissa = m >> shift
            thr = (1 << nb) // mantissa
            return RecircDecision(Fraction(1, mantissa << shift), m, shift + nb,
                                  Fraction(thr, 1 << (nb + shift)))
        # carry_min+1 < 8: the decomposition is exact, target is 1/m
        mantissa = m << (-shift)
        thr = (1 << nb) // m
        return RecircDecision(Fraction(1 << (-shift), mantissa), m, nb,
                              Fraction(thr, 1 << nb))
    raise ValueError(f"unknown mode {mode!r}")


def stage_count(d: int, stacked: bool) -> int:
    """Pipeline stages consumed by a d-way deployment: 3 per way when laid
    out naively, d + 2 when independent per-way actions are stacked."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return d + 2 if stacked else 3 * d


class Precision(RecirculatingTableAlgorithm):
    name = "precision"

    def __init__(self, config: PrecisionConfig | None = None,
                 backend: str | None = None, **kwargs):
        if config is None:
            config = PrecisionConfig(**kwargs)
        elif kwargs:
            raise ValueError("pass either a config object or keyword fields")
        self.config = config
        super().__init__(config.d, config.entries_per_way, seed=config.seed,
                         initial_value=config.initial_value, delay=config.delay,
                         mode=config.prob_mode.value,
                         lookup_bits=config.lookup_bits, backend=backend)

    @property
    def prob_mode(self) -> ProbMode:
        return self.config.prob_mode
