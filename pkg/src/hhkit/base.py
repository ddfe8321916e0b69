"""Streaming-algorithm interface shared by every heavy-hitter implementation."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .core import Packet

# flag bits in per-packet outcome arrays
FLAG_MATCHED = 1
FLAG_RECIRCULATED = 2


@dataclass(frozen=True)
class ArrivalOutcome:
    """Per-packet record: match status, the on-arrival estimate, and whether
    the packet was sent around the pipeline again."""

    matched: bool
    estimate: int
    recirculated: bool = False
    carry_min: int | None = None


@dataclass
class TraceResult:
    """Bulk-processing outcome arrays, one entry per packet."""

    estimates: np.ndarray  # int64
    flags: np.ndarray      # uint8 bitfield of FLAG_*
    carry_min: np.ndarray  # int64, -1 where absent

    @property
    def matched(self) -> np.ndarray:
        return (self.flags & FLAG_MATCHED) != 0

    @property
    def recirculated(self) -> np.ndarray:
        return (self.flags & FLAG_RECIRCULATED) != 0

    def outcome(self, i: int) -> ArrivalOutcome:
        cm = int(self.carry_min[i])
        return ArrivalOutcome(
            matched=bool(self.flags[i] & FLAG_MATCHED),
            estimate=int(self.estimates[i]),
            recirculated=bool(self.flags[i] & FLAG_RECIRCULATED),
            carry_min=None if cm < 0 else cm,
        )


class Algorithm(ABC):
    """Contract: `process` is the only mutator; `estimate` and `top` are
    read-only queries over the current state."""

    name: str = "algorithm"

    @abstractmethod
    def process(self, packet: Packet | int) -> ArrivalOutcome:
        """Consume one packet and report the on-arrival outcome."""

    @abstractmethod
    def estimate(self, flow: int) -> int:
        """Current size estimate for `flow`."""

    @abstractmethod
    def top(self, k: int) -> list[tuple[int, int]]:
        """The k largest (flow, count) entries, ties broken by smaller id."""

    @abstractmethod
    def memory_counters(self) -> int:
        """Number of counters this instance occupies (the memory budget)."""

    # --- bulk path -------------------------------------------------------

    def run_into(self, flows: np.ndarray, est: np.ndarray, flags: np.ndarray,
                 carry: np.ndarray) -> None:
        """Process a chunk of flow ids, filling the outcome arrays.

        Default implementation loops over `process`; kernel-backed tables
        override it.
        """
        for i in range(len(flows)):
            o = self.process(int(flows[i]))
            est[i] = o.estimate
            flags[i] = (FLAG_MATCHED if o.matched else 0) | (
                FLAG_RECIRCULATED if o.recirculated else 0)
            carry[i] = -1 if o.carry_min is None else o.carry_min

    def process_trace(self, flows: np.ndarray) -> TraceResult:
        n = len(flows)
        est = np.empty(n, dtype=np.int64)
        flags = np.empty(n, dtype=np.uint8)
        carry = np.empty(n, dtype=np.int64)
        self.run_into(np.ascontiguousarray(flows, dtype=np.int64), est, flags, carry)
        return TraceResult(est, flags, carry)

    # --- delayed-write hooks (no-ops for immediate-update algorithms) ----

    def sync(self, up_to_seq: int) -> int:
        """Deliver table writes due by `up_to_seq`; returns how many."""
        return 0

    def finalize(self) -> int:
        """Deliver every outstanding table write (end of measurement)."""
        return 0

    # --- bookkeeping ------------------------------------------------------

    @property
    def packets(self) -> int:
        return self._n_packets

    @property
    def matched_count(self) -> int:
        return self._n_matched

    @property
    def recirculations(self) -> int:
        return self._n_recirc

    _n_packets = 0
    _n_matched = 0
    _n_recirc = 0

    @staticmethod
    def _flow_of(packet: Packet | int) -> int:
        return packet.flow if isinstance(packet, Packet) else int(packet)
