"""Discrete baker map on a 2^n x 2^n grid.

A partition (q_1, ..., q_k) with sum(2^q_i) == 2^n cuts the square into
vertical strips of widths 2^q_i.  Strip i is stretched horizontally by
2^(n-q_i) and squashed vertically onto the band [N_{i-1}, N_i).  The map is
admissible (has a reversible swap-gate circuit) exactly when every 2^q_i
divides the preceding partial sum N_{i-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Point = tuple[int, int]

# Enumeration guard: admissible-partition counts explode with n.
MAX_ENUM_N = 8


@dataclass(frozen=True)
class BakerPartition:
    """Exponent list (q_1, ..., q_k) for a baker map on a 2^n square."""

    n: int
    q: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.q:
            raise ValueError("partition must be non-empty")
        if any(e < 0 or e > self.n for e in self.q):
            raise ValueError(f"exponents must lie in [0, {self.n}]")
        if sum(1 << e for e in self.q) != 1 << self.n:
            raise ValueError(
                f"widths 2^q must sum to 2^{self.n}, got {sum(1 << e for e in self.q)}"
            )

    @classmethod
    def parse(cls, n: int, text: str) -> "BakerPartition":
        """Parse the comma-separated exponent format, e.g. '2,1,1'."""
        try:
            q = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"bad partition {text!r}: {exc}") from None
        return cls(n, q)

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.q)

    @property
    def k(self) -> int:
        return len(self.q)

    def prefix_sums(self) -> list[int]:
        """N_0 = 0, N_1, ..., N_k = 2^n."""
        sums = [0]
        for e in self.q:
            sums.append(sums[-1] + (1 << e))
        return sums


def is_admissible(p: BakerPartition) -> bool:
    """True iff 2^q_i divides N_{i-1} for every i >= 2."""
    prefix = 1 << p.q[0]
    for e in p.q[1:]:
        if prefix % (1 << e) != 0:
            return False
        prefix += 1 << e
    return True


def enumerate_admissible(n: int, max_n: int = MAX_ENUM_N) -> list[BakerPartition]:
    """All admissible partitions for a 2^n square, lexicographic in q."""
    if not 1 <= n <= max_n:
        raise ValueError(f"n must lie in [1, {max_n}]")
    total = 1 << n
    out: list[BakerPartition] = []

    def extend(prefix_sum: int, acc: list[int]):
        remaining = total - prefix_sum
        for e in range(n + 1):
            width = 1 << e
            if width > remaining:
                break
            if acc and prefix_sum % width != 0:
                continue
            acc.append(e)
            if width == remaining:
                out.append(BakerPartition(n, tuple(acc)))
            else:
                extend(prefix_sum + width, acc)
            acc.pop()

    extend(0, [])
    return out


def strip_index(p: BakerPartition, x: int) -> int:
    """1-based index of the vertical strip containing column x."""
    prefix = 0
    for i, e in enumerate(p.q, start=1):
        prefix += 1 << e
        if x < prefix:
            return i
    raise ValueError(f"x={x} outside the {1 << p.n} square")


def apply(p: BakerPartition, pt: Point) -> Point:
    """Forward baker map of a single point."""
    x, y = pt
    size = 1 << p.n
    if not (0 <= x < size and 0 <= y < size):
        raise ValueError(f"point {pt} outside the {size} square")
    prefix = 0
    for e in p.q:
        width = 1 << e
        if x < prefix + width:
            stretch = 1 << (p.n - e)
            return (stretch * (x - prefix) + y % stretch, prefix + y // stretch)
        prefix += width
    raise AssertionError("unreachable: widths cover the square")


def apply_ms(s: int, n: int, pt: Point) -> Point:
    """The standalone map M_s; equals the baker map on any strip whose
    width 2^s divides the strip's left edge."""
    if not 0 <= s <= n:
        raise ValueError(f"s must lie in [0, {n}]")
    x, y = pt
    size = 1 << n
    if not (0 <= x < size and 0 <= y < size):
        raise ValueError(f"point {pt} outside the {size} square")
    low = 1 << (n - s)
    return ((low * x) % size + y % low, y // low + x - x % (1 << s))


def permutation_table(p: BakerPartition) -> list[int]:
    """Forward map as a table over indices x * 2^n + y."""
    size = 1 << p.n
    table = [0] * (size * size)
    for x in range(size):
        for y in range(size):
            nx, ny = apply(p, (x, y))
            table[x * size + y] = nx * size + ny
    return table


def inverse(p: BakerPartition) -> list[int]:
    """Inverse map as a table over indices x * 2^n + y."""
    table = permutation_table(p)
    inv = [0] * len(table)
    for src, dst in enumerate(table):
        inv[dst] = src
    return inv


def iterate(p: BakerPartition, r: int, pt: Point) -> Point:
    """r-fold forward application (r >= 0)."""
    if r < 0:
        raise ValueError("iteration count must be >= 0")
    for _ in range(r):
        pt = apply(p, pt)
    return pt


def iterate_table(p: BakerPartition, r: int) -> list[int]:
    """Table of the r-fold map, built by repeated composition."""
    if r < 0:
        raise ValueError("iteration count must be >= 0")
    size = 1 << p.n
    table = list(range(size * size))
    step = permutation_table(p)
    for _ in range(r):
        table = [step[t] for t in table]
    return table


def permutation_order(p: BakerPartition) -> int:
    """Smallest r >= 1 with iterate(p, r) == identity."""
    step = permutation_table(p)
    table = step[:]
    r = 1
    identity = list(range(len(step)))
    while table != identity:
        table = [step[t] for t in table]
        r += 1
    return r
