"""Encrypt/decrypt pipeline: two-stage baker scrambling plus keyed XOR.

Stage 1 permutes the (image, plane) matrix independently at every pixel and
block; stage 2 permutes pixel positions independently per plane, image, and
block.  Baker parameters and iteration counts come from a keyed schedule
(SHA-256 over the schedule seed and position, so both sides agree without
sharing plaintext).  Diffusion XORs key digits derived from the plaintext-
seeded chaotic sequences into the bit cube; the aggregates x0/alpha/beta
travel in the ciphertext header so the receiver can rebuild the keystream,
while the lambda tuning parameters stay secret.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import baker
from .baker import BakerPartition
from .chaos import ChaoticSequences, ScmParams, generate_sequences
from .images import BitTensor, BlockLayout, ImageSet, pack, plan_layout, unpack
from .keystream import Seed, derive_seed, key_table, seed_from_header

MAX_ITERATIONS = 16
MAGIC = b"QBMI1"

Mode = str  # "simplified" | "non_simplified"


@dataclass(frozen=True)
class MasterKey:
    lambdas: tuple[float, float, float, float, float]
    schedule_seed: int
    mode: Mode = "non_simplified"

    def __post_init__(self):
        if len(self.lambdas) != 5 or any(lam < 1 for lam in self.lambdas):
            raise ValueError("five lambda parameters >= 1 required")
        if not 0 <= self.schedule_seed < (1 << 64):
            raise ValueError("schedule seed must fit in 64 bits")
        if self.mode not in ("simplified", "non_simplified"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def params(self) -> ScmParams:
        return ScmParams(self.lambdas)


@dataclass(frozen=True)
class KeySchedule:
    """Per-position partition choices and iteration counts for both stages.

    Stage 1 tables are indexed [x, y, t]; stage 2 tables [l, m, t].  Entries
    index into the corresponding admissible-partition list.
    """

    plane_partitions: tuple[BakerPartition, ...]  # on the (m, l) square
    pixel_partitions: tuple[BakerPartition, ...]  # on the (x, y) square
    s1_part: np.ndarray
    s1_iter: np.ndarray
    s2_part: np.ndarray
    s2_iter: np.ndarray


def _draw(seed: int, label: bytes, pos: tuple[int, ...], n_choices: int) -> tuple[int, int]:
    digest = hashlib.sha256(
        struct.pack(">Q", seed) + label + struct.pack(f">{len(pos)}I", *pos)
    ).digest()
    part = int.from_bytes(digest[:8], "big") % n_choices
    iters = 1 + int.from_bytes(digest[8:16], "big") % MAX_ITERATIONS
    return part, iters


def derive_schedule(key: MasterKey, n: int, layout: BlockLayout) -> KeySchedule:
    """Deterministic schedule from the seed; positions ignored when simplified."""
    lplanes = (layout.images_per_block - 1).bit_length()
    if lplanes < 1:
        raise ValueError("plane square needs at least one bit")
    plane_parts = tuple(baker.enumerate_admissible(lplanes))
    pixel_parts = tuple(baker.enumerate_admissible(n))

    side = 1 << n
    blocks = layout.block_count
    per_block = layout.images_per_block

    s1_part = np.empty((side, side, blocks), dtype=np.int64)
    s1_iter = np.empty_like(s1_part)
    s2_part = np.empty((per_block, per_block, blocks), dtype=np.int64)
    s2_iter = np.empty_like(s2_part)

    if key.mode == "simplified":
        part, iters = _draw(key.schedule_seed, b"stage1", (), len(plane_parts))
        s1_part[:], s1_iter[:] = part, iters
        part, iters = _draw(key.schedule_seed, b"stage2", (), len(pixel_parts))
        s2_part[:], s2_iter[:] = part, iters
    else:
        for x in range(side):
            for y in range(side):
                for t in range(blocks):
                    part, iters = _draw(
                        key.schedule_seed, b"stage1", (x, y, t), len(plane_parts)
                    )
                    s1_part[x, y, t], s1_iter[x, y, t] = part, iters
        for l in range(per_block):
            for m in range(per_block):
                for t in range(blocks):
                    part, iters = _draw(
                        key.schedule_seed, b"stage2", (l, m, t), len(pixel_parts)
                    )
                    s2_part[l, m, t], s2_iter[l, m, t] = part, iters

    return KeySchedule(plane_parts, pixel_parts, s1_part, s1_iter, s2_part, s2_iter)


_TABLE_CACHE: dict[tuple, np.ndarray] = {}


def _iter_table(p: BakerPartition, r: int) -> np.ndarray:
    """Flat table of the r-fold baker map over indices (x << n) | y."""
    key = (p.n, p.q, r)
    cached = _TABLE_CACHE.get(key)
    if cached is None:
        step = np.array(baker.permutation_table(p), dtype=np.int64)
        table = np.arange(step.size, dtype=np.int64)
        for _ in range(r):
            table = step[table]
        _TABLE_CACHE[key] = cached = table
    return cached


def _permute_planes(planes: np.ndarray, part_idx: np.ndarray, iter_cnt: np.ndarray,
                    partitions, inverse: bool) -> np.ndarray:
    """Permute each row of ``planes`` (positions, plane-cells) by its table."""
    out = np.empty_like(planes)
    flat_part = part_idx.reshape(-1)
    flat_iter = iter_cnt.reshape(-1)
    for key in set(zip(flat_part.tolist(), flat_iter.tolist())):
        pi, r = key
        table = _iter_table(partitions[pi], r)
        rows = np.nonzero((flat_part == pi) & (flat_iter == r))[0]
        if inverse:
            out[rows] = planes[rows][:, table]
        else:
            sel = np.empty_like(table)
            sel[table] = np.arange(table.size)
            out[rows] = planes[rows][:, sel]
    return out


def scramble_stage1(tensor: BitTensor, sched: KeySchedule, inverse: bool = False) -> BitTensor:
    """Permute the (m, l) matrix at every (x, y, t); point = (m, l)."""
    side = 1 << tensor.n
    per_block = 1 << tensor.lplanes
    blocks = tensor.block_count
    # (t, m, x, y, l) -> (x, y, t, m, l): one row per scrambling position
    moved = tensor.bits.transpose(2, 3, 0, 1, 4).reshape(side * side * blocks, -1)
    done = _permute_planes(moved, sched.s1_part, sched.s1_iter, sched.plane_partitions, inverse)
    bits = done.reshape(side, side, blocks, per_block, per_block).transpose(2, 3, 0, 1, 4)
    return BitTensor(tensor.n, tensor.lplanes, np.ascontiguousarray(bits))


def scramble_stage2(tensor: BitTensor, sched: KeySchedule, inverse: bool = False) -> BitTensor:
    """Permute pixel positions at every (l, m, t); point = (x, y)."""
    side = 1 << tensor.n
    per_block = 1 << tensor.lplanes
    blocks = tensor.block_count
    # (t, m, x, y, l) -> (l, m, t, x, y)
    moved = tensor.bits.transpose(4, 1, 0, 2, 3).reshape(per_block * per_block * blocks, -1)
    done = _permute_planes(moved, sched.s2_part, sched.s2_iter, sched.pixel_partitions, inverse)
    bits = done.reshape(per_block, per_block, blocks, side, side).transpose(2, 1, 3, 4, 0)
    return BitTensor(tensor.n, tensor.lplanes, np.ascontiguousarray(bits))


def diffuse(tensor: BitTensor, keys: np.ndarray) -> BitTensor:
    """XOR key digits into the cube; plane l takes key bit (l mod digit width).

    Key digits carry ceil(log2 L) bits while the cube has 2^ceil(log2 L)
    planes, so digit bits are reused cyclically across planes; the operation
    stays an involution.
    """
    blocks, per_block, side, _ = keys.shape
    if (blocks, per_block) != (tensor.block_count, 1 << tensor.lplanes):
        raise ValueError("key table disagrees with the tensor layout")
    planes = 1 << tensor.lplanes
    bit_idx = np.arange(planes) % tensor.lplanes if tensor.lplanes else np.zeros(planes, int)
    # keys: (t, m, x, y) -> plane mask (t, m, x, y, l)
    mask = (keys[..., None] >> bit_idx) & 1
    return BitTensor(tensor.n, tensor.lplanes, tensor.bits ^ mask.astype(np.uint8))


@dataclass(frozen=True)
class Ciphertext:
    """Scrambled and diffused bit cube plus the public seed aggregates."""

    tensor: BitTensor
    n: int
    L: int
    M: int
    x0: float
    alpha: int
    beta: int
    mode: Mode


def _sequences_for(seed: Seed, key: MasterKey, n: int, layout: BlockLayout) -> ChaoticSequences:
    lengths = (1 << n, 1 << n, layout.images_per_block, layout.block_count)
    return generate_sequences(seed.state(), key.params(), lengths)


def encrypt(image_set: ImageSet, key: MasterKey) -> Ciphertext:
    layout = plan_layout(image_set.M, image_set.L)
    tensor = pack(image_set)
    seed = derive_seed(image_set, tensor)
    seqs = _sequences_for(seed, key, image_set.n, layout)
    keys = key_table(seqs, layout, image_set.n)
    sched = derive_schedule(key, image_set.n, layout)
    scrambled = scramble_stage2(scramble_stage1(tensor, sched), sched)
    diffused = diffuse(scrambled, keys)
    return Ciphertext(
        diffused, image_set.n, image_set.L, image_set.M,
        seed.x0, seed.alpha, seed.beta, key.mode,
    )


def decrypt(ct: Ciphertext, key: MasterKey) -> ImageSet:
    """Reverse pipeline; a wrong key just yields garbage images."""
    layout = plan_layout(ct.M, ct.L)
    if ct.tensor.block_count != layout.block_count:
        raise ValueError("ciphertext dimensions disagree with its header")
    if ct.mode != key.mode:
        raise ValueError("key mode disagrees with the ciphertext header")
    seed = seed_from_header(ct.x0, ct.alpha, ct.beta)
    seqs = _sequences_for(seed, key, ct.n, layout)
    keys = key_table(seqs, layout, ct.n)
    sched = derive_schedule(key, ct.n, layout)
    undiffused = diffuse(ct.tensor, keys)
    unscrambled = scramble_stage1(
        scramble_stage2(undiffused, sched, inverse=True), sched, inverse=True
    )
    return unpack(unscrambled, layout, ct.M, ct.L)


# ---------------------------------------------------------------------------
# File formats


def write_key(path: str | Path, key: MasterKey):
    lines = [f"lambda{i + 1} = {repr(lam)}" for i, lam in enumerate(key.lambdas)]
    lines.append(f"schedule_seed = {key.schedule_seed}")
    lines.append(f"mode = {key.mode}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_key(path: str | Path) -> MasterKey:
    fields: dict[str, str] = {}
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        name, _, value = ln.partition("=")
        fields[name.strip()] = value.strip()
    try:
        lambdas = tuple(float(fields[f"lambda{i + 1}"]) for i in range(5))
        return MasterKey(lambdas, int(fields["schedule_seed"]), fields.get("mode", "non_simplified"))
    except KeyError as exc:
        raise ValueError(f"{path}: missing key field {exc}") from None


def write_ciphertext(path: str | Path, ct: Ciphertext):
    """Header lines, a separator, then bits packed in (t, m, l, y, x) order."""
    header = [
        MAGIC.decode(),
        f"n = {ct.n}",
        f"L = {ct.L}",
        f"M = {ct.M}",
        f"blocks = {ct.tensor.block_count}",
        f"x0 = {repr(ct.x0)}",
        f"alpha = {ct.alpha}",
        f"beta = {ct.beta}",
        f"mode = {ct.mode}",
        "---",
    ]
    payload_bits = ct.tensor.bits.transpose(0, 1, 4, 3, 2).reshape(-1)
    payload = np.packbits(payload_bits)
    Path(path).write_bytes("\n".join(header).encode() + b"\n" + payload.tobytes())


def read_ciphertext(path: str | Path) -> Ciphertext:
    blob = Path(path).read_bytes()
    sep = blob.find(b"---\n")
    if not blob.startswith(MAGIC) or sep < 0:
        raise ValueError(f"{path}: not a ciphertext file")
    fields: dict[str, str] = {}
    for ln in blob[:sep].decode().splitlines()[1:]:
        if ln.strip():
            name, _, value = ln.partition("=")
            fields[name.strip()] = value.strip()
    n = int(fields["n"])
    L = int(fields["L"])
    M = int(fields["M"])
    blocks = int(fields["blocks"])
    lplanes = max(1, (L - 1).bit_length())
    side = 1 << n
    per_block = 1 << lplanes
    total = blocks * per_block * side * side * per_block
    payload = np.frombuffer(blob[sep + 4 :], dtype=np.uint8)
    bits = np.unpackbits(payload, count=total)
    tensor_bits = bits.reshape(blocks, per_block, per_block, side, side).transpose(0, 1, 4, 3, 2)
    tensor = BitTensor(n, lplanes, np.ascontiguousarray(tensor_bits))
    return Ciphertext(
        tensor, n, L, M, float(fields["x0"]), int(fields["alpha"]),
        int(fields["beta"]), fields["mode"],
    )
