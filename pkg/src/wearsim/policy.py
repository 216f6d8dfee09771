"""Compaction start-location policies: golden-ratio rotation and baselines.

Each ring keeps its own progression of start locations.  A ring's first
use as a compaction destination is always its head (cell 0); every
later use is shifted from the previous one by a policy-defined amount,
modulo the ring size.  The golden-ratio shift spreads successive starts
as evenly as possible for any ring size, which is what levels wear;
the other kinds exist as baselines to measure that claim against.

Policy spec strings, as accepted on the command line:

    golden          shift by floor(ring_size * (3 - sqrt(5)) / 2)
    quarter         shift by a quarter of the ring
    fraction:<f>    shift by floor(ring_size * f), f in [0, 1)
    none            always compact to the ring head
    random:<seed>   seeded uniform start per use (Mersenne Twister)
    single          no dual ring: mark-compact one flat space to address 0
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

#: Fraction of the ring advanced between consecutive golden starts:
#: 1 - 1/phi = (3 - sqrt(5)) / 2 with phi = (1 + sqrt(5)) / 2, about 137.5
#: degrees of a full turn.
GOLDEN_FRACTION = (3 - math.sqrt(5)) / 2

DUAL_RING_KINDS = ("golden", "quarter", "fraction", "none", "random")
POLICY_KINDS = DUAL_RING_KINDS + ("single",)


class PolicyError(ValueError):
    """Bad policy specification or misuse of a policy."""


def golden_shift(ring_size: int) -> int:
    """Cells between consecutive golden start locations on a ring.

    Exact floor(ring_size * (3 - sqrt(5)) / 2) for any ring size:
    5*ring_size**2 is never a perfect square, so the floor equals
    (3*ring_size - isqrt(5*ring_size**2) - 1) // 2.  Integer arithmetic
    avoids double-rounding on huge rings.
    """
    if ring_size < 2:
        raise PolicyError(f"ring size must be >= 2, got {ring_size}")
    return (3 * ring_size - math.isqrt(5 * ring_size * ring_size) - 1) // 2


@dataclass(frozen=True)
class Policy:
    """One wear-leveling policy choice."""

    kind: str
    fraction: float | None = None  # "fraction" kind only
    seed: int | None = None        # "random" kind only

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise PolicyError(f"unknown policy kind '{self.kind}'")
        if self.kind == "fraction":
            if self.fraction is None or not 0.0 <= self.fraction < 1.0:
                raise PolicyError("fraction must be in [0, 1)")
        elif self.fraction is not None:
            raise PolicyError(f"policy '{self.kind}' takes no fraction")
        if self.kind == "random":
            if self.seed is None or self.seed < 0:
                raise PolicyError("random policy needs a seed >= 0")
        elif self.seed is not None:
            raise PolicyError(f"policy '{self.kind}' takes no seed")

    @property
    def is_dual_ring(self) -> bool:
        return self.kind != "single"

    def shift_cells(self, ring_size: int) -> int:
        """Constant per-use advance of the start location, in cells."""
        if self.kind == "golden":
            return golden_shift(ring_size)
        if self.kind == "quarter":
            return ring_size // 4
        if self.kind == "fraction":
            return math.floor(ring_size * self.fraction)
        if self.kind == "none":
            return 0
        raise PolicyError(f"policy '{self.kind}' has no constant shift")

    def spec_string(self) -> str:
        if self.kind == "fraction":
            return f"fraction:{self.fraction!r}"
        if self.kind == "random":
            return f"random:{self.seed}"
        return self.kind


def parse_policy(spec: str) -> Policy:
    """Parse a policy spec string (see module docstring for the grammar)."""
    name, sep, arg = spec.partition(":")
    if name == "fraction":
        if not sep:
            raise PolicyError("fraction policy needs a value, e.g. fraction:0.25")
        try:
            value = float(arg)
        except ValueError:
            raise PolicyError(f"bad fraction '{arg}'") from None
        return Policy("fraction", fraction=value)
    if name == "random":
        if not sep:
            raise PolicyError("random policy needs a seed, e.g. random:42")
        try:
            seed = int(arg)
        except ValueError:
            raise PolicyError(f"bad seed '{arg}'") from None
        return Policy("random", seed=seed)
    if sep:
        raise PolicyError(f"policy '{name}' takes no argument")
    if name in ("golden", "quarter", "none", "single"):
        return Policy(name)
    raise PolicyError(f"unknown policy '{spec}'")


class PolicyState:
    """Per-ring progression of compaction start locations for one run.

    The random kind draws both rings' starts from one seeded stream, in
    the order the rings are asked, so a whole run stays reproducible
    from the seed.
    """

    def __init__(self, policy: Policy):
        if not policy.is_dual_ring:
            raise PolicyError("single-space policy keeps no ring start state")
        self.policy = policy
        self.next_start = [0, 0]  # first use of either ring starts at its head
        self._rng = random.Random(policy.seed) if policy.kind == "random" else None

    def take(self, ring: int, ring_size: int) -> int:
        """Start location for this compaction; advances the ring's progression."""
        used = self.next_start[ring]
        if self.policy.kind == "random":
            self.next_start[ring] = self._rng.randrange(ring_size)
        else:
            shift = self.policy.shift_cells(ring_size)
            self.next_start[ring] = (used + shift) % ring_size
        return used


def start_sequence(policy: Policy, ring_size: int, count: int) -> list[int]:
    """First `count` start locations a single ring receives under `policy`."""
    if count < 1:
        raise PolicyError(f"count must be >= 1, got {count}")
    state = PolicyState(policy)
    return [state.take(0, ring_size) for _ in range(count)]
