"""NK fitness landscapes: generation, evaluation, and an exhaustive optimum search.

An NK landscape scores binary genomes of length ``n``. Each locus contributes
one value looked up in its private fitness table, selected by the locus's own
allele together with the alleles of ``k`` neighbour loci; total fitness is the
mean of the ``n`` contributions, so it always lies in [0, 1]. Raising ``k``
raises the epistatic linkage and with it the ruggedness of the landscape.
"""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np

# Exhaustive search walks all 2**n genomes; refuse anything bigger than this.
MAX_BRUTE_FORCE_N = 24


class NkLandscape:
    """An immutable NK landscape instance.

    Attributes:
        n: number of loci.
        k: epistatic degree (neighbours per locus), 0 <= k <= n - 1.
        seed: the seed the instance was generated from (kept for provenance
            and serialization; instances built from explicit arrays keep
            whatever seed the caller supplies).
        neighbors: (n, k) int array; row i lists the k loci feeding locus i,
            all distinct and never i itself.
        tables: (n, 2**(k+1)) float array of per-locus fitness contributions,
            every entry in [0, 1]. Row i is indexed by the integer formed
            from locus i's own allele (most significant bit) followed by its
            neighbours' alleles in stored row order.
    """

    def __init__(self, n, k, seed, neighbors, tables):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if k < 0 or k > n - 1:
            raise ValueError(f"k must satisfy 0 <= k <= n-1={n - 1}, got {k}")
        neighbors = np.asarray(neighbors, dtype=np.int64).reshape(n, k)
        tables = np.asarray(tables, dtype=np.float64).reshape(n, 2 ** (k + 1))
        if k > 0:
            if neighbors.min() < 0 or neighbors.max() >= n:
                raise ValueError("neighbor index out of range")
            self_idx = np.arange(n)[:, None]
            if np.any(neighbors == self_idx):
                raise ValueError("a locus may not be its own neighbor")
            if any(len(set(row)) != k for row in neighbors.tolist()):
                raise ValueError("neighbor rows must hold distinct indices")
        if tables.min() < 0.0 or tables.max() > 1.0:
            raise ValueError("table entries must lie in [0, 1]")

        self.n = int(n)
        self.k = int(k)
        self.seed = int(seed)
        self.neighbors = neighbors
        self.tables = tables
        neighbors.flags.writeable = False
        tables.flags.writeable = False

        # Precomputed lookup machinery: per-locus gather columns (self first,
        # then neighbours), bit weights with the own allele as MSB, and a
        # flattened table with per-row offsets.
        self._cols = np.column_stack([np.arange(n), neighbors])
        self._pow = (1 << np.arange(k, -1, -1)).astype(np.int64)
        self._row_base = (np.arange(n) * 2 ** (k + 1)).astype(np.int64)
        self._flat = tables.ravel()
        self._inv_n = 1.0 / n

    def evaluate(self, bits) -> float:
        """Fitness of one genome: the mean per-locus table contribution."""
        if bits.shape[-1] != self.n or bits.ndim != 1:
            raise ValueError(
                f"genome length {bits.shape} does not match landscape n={self.n}"
            )
        idx = bits[self._cols] @ self._pow
        idx += self._row_base
        return float(self._flat[idx].sum() * self._inv_n)

    def evaluate_many(self, bits_matrix) -> np.ndarray:
        """Fitness of each row of an (m, n) matrix of genomes."""
        bits_matrix = np.asarray(bits_matrix)
        if bits_matrix.ndim != 2 or bits_matrix.shape[1] != self.n:
            raise ValueError(
                f"expected shape (m, {self.n}), got {bits_matrix.shape}"
            )
        idx = bits_matrix[:, self._cols] @ self._pow
        idx += self._row_base
        return self._flat[idx].sum(axis=1) * self._inv_n

    def __eq__(self, other):
        return (
            isinstance(other, NkLandscape)
            and self.n == other.n
            and self.k == other.k
            and self.seed == other.seed
            and np.array_equal(self.neighbors, other.neighbors)
            and np.array_equal(self.tables, other.tables)
        )

    def __repr__(self):
        return f"NkLandscape(n={self.n}, k={self.k}, seed={self.seed})"


def generate_nk(n: int, k: int, seed: int) -> NkLandscape:
    """Generate a random NK landscape, reproducibly from ``seed``.

    Each locus gets k distinct neighbours drawn uniformly from the other
    n - 1 loci, and a table of 2**(k+1) contributions drawn uniformly
    from [0, 1).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0 or k > n - 1:
        raise ValueError(f"k must satisfy 0 <= k <= n-1={n - 1}, got {k}")
    rng = random.Random(seed)
    loci = list(range(n))
    neighbors = []
    for i in range(n):
        others = loci[:i] + loci[i + 1 :]
        neighbors.append(rng.sample(others, k))
    width = 2 ** (k + 1)
    tables = [[rng.random() for _ in range(width)] for _ in range(n)]
    return NkLandscape(n, k, seed, neighbors, tables)


def evaluate_nk(landscape: NkLandscape, genome: np.ndarray) -> float:
    """Fitness of ``genome`` on ``landscape`` (mean table contribution)."""
    return landscape.evaluate(genome)


def brute_force_optimum(landscape: NkLandscape):
    """Exhaustively locate a global optimum of the landscape.

    Returns:
        (genome, fitness) where genome is the lexicographically smallest
        maximizer (locus 0 treated as the most significant bit).

    Raises:
        ValueError: if landscape.n exceeds MAX_BRUTE_FORCE_N.
    """
    n = landscape.n
    if n > MAX_BRUTE_FORCE_N:
        raise ValueError(
            f"refusing exhaustive search for n={n} > {MAX_BRUTE_FORCE_N}"
        )
    total = 1 << n
    chunk = min(total, 1 << 14)
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint32)
    best_fit = -1.0
    best_code = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        fits = landscape.evaluate_many(bits)
        j = int(np.argmax(fits))
        # strict > keeps the earliest (lexicographically smallest) maximizer
        if fits[j] > best_fit:
            best_fit = float(fits[j])
            best_code = start + j
    return bits_from_int(best_code, n), best_fit


def random_bit_genome(n: int, rng: random.Random) -> np.ndarray:
    """Uniform random genome of n binary alleles."""
    word = rng.getrandbits(n)
    raw = word.to_bytes((n + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:n].copy()


def bits_from_int(code: int, n: int) -> np.ndarray:
    """Decode an integer into n alleles, locus 0 as the most significant bit."""
    return np.array([(code >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def int_from_bits(bits) -> int:
    """Inverse of bits_from_int."""
    code = 0
    for b in bits:
        code = (code << 1) | int(b)
    return code


def save_landscape(landscape: NkLandscape, path) -> None:
    """Write a landscape as structured text; round-trips bit-exactly."""
    lines = [
        "nk-landscape",
        f"n {landscape.n}",
        f"k {landscape.k}",
        f"seed {landscape.seed}",
    ]
    for i in range(landscape.n):
        row = " ".join(str(v) for v in landscape.neighbors[i].tolist())
        lines.append(f"neighbors {i} {row}".rstrip())
    for i in range(landscape.n):
        row = " ".join(repr(v) for v in landscape.tables[i].tolist())
        lines.append(f"table {i} {row}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_landscape(path) -> NkLandscape:
    """Read a landscape written by save_landscape."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "nk-landscape":
        raise ValueError(f"{path}: not an nk-landscape file")
    header = {}
    neighbors = {}
    tables = {}
    for line in lines[1:]:
        parts = line.split()
        if not parts:
            continue
        tag = parts[0]
        if tag in ("n", "k", "seed"):
            header[tag] = int(parts[1])
        elif tag == "neighbors":
            neighbors[int(parts[1])] = [int(v) for v in parts[2:]]
        elif tag == "table":
            tables[int(parts[1])] = [float(v) for v in parts[2:]]
        else:
            raise ValueError(f"{path}: unknown line tag {tag!r}")
    for key in ("n", "k", "seed"):
        if key not in header:
            raise ValueError(f"{path}: missing header field {key!r}")
    n = header["n"]
    return NkLandscape(
        n,
        header["k"],
        header["seed"],
        [neighbors[i] for i in range(n)],
        [tables[i] for i in range(n)],
    )
