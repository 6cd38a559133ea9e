"""Basis-state simulation of swap circuits.

Every gate maps computational basis states to basis states, so a circuit is
simulated exactly as a permutation of (x, y) integer pairs.  States pack as
s = (x << n) | y; x wire i is bit n+i, y wire i is bit i.
"""

from __future__ import annotations

import numpy as np

from . import baker
from .baker import BakerPartition
from .circuit import Circuit, Gate

try:  # optional fast path for the exhaustive equivalence sweeps
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BasisState = tuple[int, int]


def _bitpos(wire, n: int) -> int:
    return wire.index + (n if wire.reg == "x" else 0)


def apply_gate(g: Gate, s: BasisState, n: int) -> BasisState:
    """Swap the two target bits iff every control condition holds."""
    x, y = s
    packed = (x << n) | y
    for wire, value in g.controls:
        if (packed >> _bitpos(wire, n)) & 1 != value:
            return s
    p1 = _bitpos(g.targets[0], n)
    p2 = _bitpos(g.targets[1], n)
    if (packed >> p1) & 1 != (packed >> p2) & 1:
        packed ^= (1 << p1) | (1 << p2)
    return (packed >> n, packed & ((1 << n) - 1))


def run(c: Circuit, s: BasisState) -> BasisState:
    """Left-to-right application of every gate."""
    for g in c.gates:
        s = apply_gate(g, s, c.n)
    return s


def _gate_rows(gates, n: int):
    rows = []
    for g in gates:
        cmask = 0
        cval = 0
        for wire, value in g.controls:
            pos = _bitpos(wire, n)
            cmask |= 1 << pos
            cval |= value << pos
        rows.append((_bitpos(g.targets[0], n), _bitpos(g.targets[1], n), cmask, cval))
    return rows


def _gate_arrays(c: Circuit):
    """Pack the circuit into flat arrays for vectorized simulation."""
    rows = _gate_rows(c.gates, c.n)
    arr = np.array(rows, dtype=np.uint64).reshape(len(rows), 4)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


if HAVE_NUMBA:

    @njit(cache=True)
    def _run_all(size, p1, p2, cmask, cval):  # pragma: no cover - jitted
        out = np.arange(size, dtype=np.uint64)
        one = np.uint64(1)
        for i in range(size):
            s = out[i]
            for g in range(p1.shape[0]):
                if (s & cmask[g]) == cval[g]:
                    if ((s >> p1[g]) ^ (s >> p2[g])) & one:
                        s ^= (one << p1[g]) | (one << p2[g])
            out[i] = s
        return out

    @njit(cache=True)
    def _sweep_chunk(n, gate_off, garr, part_off, q_flat):  # pragma: no cover
        """Simulate many circuits and compare each against its baker map.

        Returns the first mismatching state per circuit, or -1 if equivalent.
        """
        count = gate_off.shape[0] - 1
        fails = np.full(count, -1, dtype=np.int64)
        size = 1 << n
        nstates = size * size
        one = np.uint64(1)
        un = np.uint64(n)
        prefix = np.empty(size, dtype=np.uint64)
        stretch = np.empty(size, dtype=np.uint64)
        for ci in range(count):
            pos = 0
            for t in range(part_off[ci], part_off[ci + 1]):
                width = 1 << q_flat[t]
                for x in range(pos, pos + width):
                    prefix[x] = pos
                    stretch[x] = 1 << (n - q_flat[t])
                pos += width
            g0 = gate_off[ci]
            g1 = gate_off[ci + 1]
            for s0 in range(nstates):
                s = np.uint64(s0)
                for g in range(g0, g1):
                    if (s & garr[g, 2]) == garr[g, 3]:
                        if ((s >> garr[g, 0]) ^ (s >> garr[g, 1])) & one:
                            s ^= (one << garr[g, 0]) | (one << garr[g, 1])
                x = np.uint64(s0) >> un
                y = np.uint64(s0) & np.uint64(size - 1)
                st = stretch[x]
                bx = st * (x - prefix[x]) + y % st
                by = prefix[x] + y // st
                if s != ((bx << un) | by):
                    fails[ci] = s0
                    break
        return fails


def _run_all_numpy(size, p1, p2, cmask, cval):
    out = np.arange(size, dtype=np.uint64)
    one = np.uint64(1)
    for g in range(p1.shape[0]):
        fire = (out & cmask[g]) == cval[g]
        differ = (((out >> p1[g]) ^ (out >> p2[g])) & one).astype(bool)
        flip = fire & differ
        out[flip] ^= (one << p1[g]) | (one << p2[g])
    return out


def to_permutation(c: Circuit) -> np.ndarray:
    """Permutation table over packed indices (x << n) | y."""
    if c.n > 12:
        raise ValueError("table materialization capped at n=12")
    size = 1 << (2 * c.n)
    arrays = _gate_arrays(c)
    if HAVE_NUMBA:
        return _run_all(size, *arrays)
    return _run_all_numpy(size, *arrays)


def baker_permutation(p: BakerPartition) -> np.ndarray:
    """The baker map over packed indices, vectorized per strip."""
    n = p.n
    size = 1 << n
    idx = np.arange(size * size, dtype=np.uint64)
    x = idx >> n
    y = idx & (size - 1)
    nx = np.empty_like(x)
    ny = np.empty_like(y)
    prefix = 0
    for e in p.q:
        width = 1 << e
        stretch = 1 << (n - e)
        m = (x >= prefix) & (x < prefix + width)
        nx[m] = stretch * (x[m] - prefix) + (y[m] % stretch)
        ny[m] = prefix + y[m] // stretch
        prefix += width
    return (nx << np.uint64(n)) | ny


def equivalence(c: Circuit, p: BakerPartition):
    """Compare the circuit's permutation against the baker map pointwise.

    Returns (True, None) on equality, else (False, (point, circuit_image,
    baker_image)) for the first mismatching basis state.
    """
    perm = to_permutation(c)
    ref = baker_permutation(p)
    bad = np.nonzero(perm != ref)[0]
    if bad.size == 0:
        return True, None
    i = int(bad[0])
    n = c.n
    unpack = lambda s: (s >> n, s & ((1 << n) - 1))
    return False, (unpack(i), unpack(int(perm[i])), unpack(int(ref[i])))


_PIECE_ROWS: dict[int, list] = {}


def _rows_for_piece(piece, n: int) -> list:
    # Pieces are interned by the synthesis caches, so id-keying is stable.
    rows = _PIECE_ROWS.get(id(piece))
    if rows is None:
        rows = _gate_rows(piece, n)
        _PIECE_ROWS[id(piece)] = rows
    return rows


def equivalence_sweep(n: int, partitions, chunk: int = 8192):
    """Check synthesized-circuit vs baker-map equality for many partitions.

    Yields (partition, first_bad_state) for every failure; silent when all
    match.  Stream lengths are asserted against the gate-count model as they
    are built.
    """
    from .circuit import _count_first, _count_later, _stream_pieces

    batch: list = []
    rows: list = []
    gate_off = [0]
    part_off = [0]
    q_flat: list[int] = []

    def flush():
        nonlocal batch, rows, gate_off, part_off, q_flat
        if not batch:
            return
        garr = np.array(rows, dtype=np.uint64).reshape(len(rows), 4)
        goff = np.array(gate_off, dtype=np.int64)
        poff = np.array(part_off, dtype=np.int64)
        qf = np.array(q_flat, dtype=np.int64)
        if HAVE_NUMBA:
            fails = _sweep_chunk(n, goff, garr, poff, qf)
            for p, bad in zip(batch, fails):
                if bad >= 0:
                    yield p, int(bad)
        else:  # pragma: no cover - numba is an install-time expectation
            from .circuit import synthesize

            for p in batch:
                ok, witness = equivalence(synthesize(p), p)
                if not ok:
                    yield p, witness
        batch = []
        rows = []
        gate_off = [0]
        part_off = [0]
        q_flat = []

    for p in partitions:
        total = 0
        for piece in _stream_pieces(p):
            rows.extend(_rows_for_piece(piece, n))
            total += len(piece)
        model = _count_first(n, p.q[0]) + sum(_count_later(p.q[0], e) for e in p.q[1:])
        if total != model:
            raise AssertionError(f"gate count {total} != model {model} for {p}")
        gate_off.append(len(rows))
        q_flat.extend(p.q)
        part_off.append(len(q_flat))
        batch.append(p)
        if len(batch) >= chunk:
            yield from flush()
    yield from flush()


def permutation_to_csv(perm: np.ndarray) -> str:
    lines = ["index,image"]
    lines.extend(f"{i},{int(v)}" for i, v in enumerate(perm))
    return "\n".join(lines) + "\n"


def permutation_parity(perm: np.ndarray) -> int:
    """0 for even, 1 for odd, via cycle decomposition."""
    seen = np.zeros(len(perm), dtype=bool)
    parity = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = int(perm[cur])
            length += 1
        parity ^= (length - 1) & 1
    return parity
