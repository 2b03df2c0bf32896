"""Random Boolean networks with synchronous update, plus trait-based NK scoring.

A network has ``r`` nodes. Node ``i`` reads ``b`` input nodes (self-connection
allowed, duplicates allowed) and holds a truth table of ``2**b`` bits; the
table is indexed by the integer formed from the input states in stored order,
first input as the most significant bit. All nodes update simultaneously from
the same pre-step state.

For the combined task, ``n`` designated trait nodes are read off after ``t``
synchronous cycles and scored as a binary genome on an NK landscape; the
fitness of the network is the mean score over several random-start trials.
"""

from __future__ import annotations

import random
from collections import namedtuple
from pathlib import Path

import numpy as np

from .nk import NkLandscape

RbnNode = namedtuple("RbnNode", ["inputs", "function"])


class RbnGenome:
    """Wiring and truth tables for an r-node Boolean network.

    Attributes:
        inputs: (r, b) int array of input node indices in [0, r).
        functions: (r, 2**b) uint8 array of truth-table outputs.
    """

    __slots__ = ("inputs", "functions")

    def __init__(self, inputs, functions):
        inputs = np.asarray(inputs, dtype=np.int64)
        functions = np.asarray(functions, dtype=np.uint8)
        if inputs.ndim != 2 or functions.ndim != 2:
            raise ValueError("inputs and functions must be 2-D arrays")
        r, b = inputs.shape
        if r < 1 or b < 1:
            raise ValueError("network needs at least one node and one input")
        if functions.shape != (r, 2**b):
            raise ValueError(
                f"functions shape {functions.shape} != ({r}, {2 ** b})"
            )
        if inputs.min() < 0 or inputs.max() >= r:
            raise ValueError("input index out of range")
        if functions.max() > 1:
            raise ValueError("function entries must be 0/1 bits")
        self.inputs = inputs
        self.functions = functions

    @property
    def r(self) -> int:
        return self.inputs.shape[0]

    @property
    def b(self) -> int:
        return self.inputs.shape[1]

    def __len__(self):
        return self.inputs.shape[0]

    def node(self, i: int) -> RbnNode:
        return RbnNode(
            tuple(self.inputs[i].tolist()), tuple(self.functions[i].tolist())
        )

    def copy(self) -> "RbnGenome":
        return RbnGenome(self.inputs.copy(), self.functions.copy())

    def __eq__(self, other):
        return (
            isinstance(other, RbnGenome)
            and np.array_equal(self.inputs, other.inputs)
            and np.array_equal(self.functions, other.functions)
        )

    def __repr__(self):
        return f"RbnGenome(r={self.r}, b={self.b})"


class TraitMap:
    """Distinct node indices whose states are read off as the phenotype."""

    __slots__ = ("nodes",)

    def __init__(self, nodes):
        nodes = np.asarray(nodes, dtype=np.int64)
        if nodes.ndim != 1 or nodes.size < 1:
            raise ValueError("trait map needs at least one node index")
        if nodes.min() < 0:
            raise ValueError("trait node index out of range")
        if len(set(nodes.tolist())) != nodes.size:
            raise ValueError("trait node indices must be distinct")
        self.nodes = nodes
        nodes.flags.writeable = False

    def __len__(self):
        return self.nodes.size

    def __eq__(self, other):
        return isinstance(other, TraitMap) and np.array_equal(
            self.nodes, other.nodes
        )

    def __repr__(self):
        return f"TraitMap({self.nodes.tolist()})"


def generate_rbn(r: int, b: int, seed: int) -> RbnGenome:
    """Random network: inputs uniform over [0, r) with replacement, uniform
    truth-table bits; reproducible from ``seed``."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    if b > r:
        raise ValueError(f"b={b} may not exceed r={r}")
    rng = random.Random(seed)
    inputs = [[rng.randrange(r) for _ in range(b)] for _ in range(r)]
    width = 2**b
    functions = [[rng.getrandbits(1) for _ in range(width)] for _ in range(r)]
    return RbnGenome(inputs, functions)


def assign_traits(r: int, n: int, seed: int) -> TraitMap:
    """Pick n distinct trait nodes uniformly without replacement from [0, r)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > r:
        raise ValueError(f"cannot assign {n} traits to {r} nodes")
    rng = random.Random(seed)
    return TraitMap(rng.sample(range(r), n))


def _simulate(genome: RbnGenome, states: np.ndarray, t: int) -> np.ndarray:
    """Advance an (m, r) block of states through t synchronous cycles."""
    m, r = states.shape
    b = genome.b
    take = np.take
    offsets = np.repeat(np.arange(m, dtype=np.int64) * r, r)
    cols = [
        np.tile(genome.inputs[:, j], m) + offsets for j in range(b)
    ]
    base = np.tile(np.arange(r, dtype=np.int64) * (1 << b), m)
    ff = genome.functions.astype(np.int64).ravel()
    flat = states.astype(np.int64).ravel()
    for _ in range(t):
        code = take(flat, cols[0])
        for j in range(1, b):
            code <<= 1
            code |= take(flat, cols[j])
        code += base
        flat = take(ff, code)
    return flat.reshape(m, r)


def step(genome: RbnGenome, state: np.ndarray) -> np.ndarray:
    """One synchronous update; every node reads the same pre-step state."""
    state = np.asarray(state)
    if state.shape != (genome.r,):
        raise ValueError(f"state length {state.shape} != r={genome.r}")
    return _simulate(genome, state[None, :], 1)[0].astype(np.uint8)


def run_for(genome: RbnGenome, state0: np.ndarray, t: int) -> np.ndarray:
    """State after exactly t synchronous cycles from state0."""
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    state0 = np.asarray(state0)
    if state0.shape != (genome.r,):
        raise ValueError(f"state length {state0.shape} != r={genome.r}")
    return _simulate(genome, state0[None, :], t)[0].astype(np.uint8)


def random_state(r: int, rng: random.Random) -> np.ndarray:
    """Uniform random network state of r bits."""
    return _random_states(rng, 1, r)[0]


def _random_states(rng: random.Random, m: int, r: int) -> np.ndarray:
    nbits = m * r
    word = rng.getrandbits(nbits)
    raw = word.to_bytes((nbits + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:nbits].reshape(m, r).copy()


def _as_rng(rng) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


def rbnk_trial_scores(
    genome: RbnGenome,
    landscape: NkLandscape,
    traits: TraitMap,
    t: int = 50,
    trials: int = 10,
    rng=None,
) -> np.ndarray:
    """Per-trial NK scores of the network's trait readout.

    Each trial draws a fresh uniform start state, runs t synchronous cycles,
    reads the trait nodes in stored order as a binary genome, and scores it
    on the landscape.
    """
    if len(traits) != landscape.n:
        raise ValueError(
            f"trait count {len(traits)} != landscape n={landscape.n}"
        )
    if int(traits.nodes.max()) >= genome.r:
        raise ValueError("trait node index outside the network")
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = _as_rng(rng)
    starts = _random_states(rng, trials, genome.r)
    finals = _simulate(genome, starts, t)
    readout = finals[:, traits.nodes]
    return landscape.evaluate_many(readout)


def evaluate_rbnk(
    genome: RbnGenome,
    landscape: NkLandscape,
    traits: TraitMap,
    t: int = 50,
    trials: int = 10,
    rng=None,
) -> float:
    """Mean trait-readout score over ``trials`` random-start trials."""
    scores = rbnk_trial_scores(genome, landscape, traits, t, trials, rng)
    return float(scores.mean())


def save_network(genome: RbnGenome, path) -> None:
    """Write a network as structured text (0-based node indices)."""
    lines = ["rbn-network", f"r {genome.r}", f"b {genome.b}"]
    for i in range(genome.r):
        wires = " ".join(str(v) for v in genome.inputs[i].tolist())
        table = "".join(str(v) for v in genome.functions[i].tolist())
        lines.append(f"node {i} {wires} {table}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_network(path) -> RbnGenome:
    """Read a network written by save_network."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "rbn-network":
        raise ValueError(f"{path}: not an rbn-network file")
    header = {}
    rows = {}
    for line in lines[1:]:
        parts = line.split()
        if not parts:
            continue
        if parts[0] in ("r", "b"):
            header[parts[0]] = int(parts[1])
        elif parts[0] == "node":
            i = int(parts[1])
            rows[i] = ([int(v) for v in parts[2:-1]], [int(c) for c in parts[-1]])
        else:
            raise ValueError(f"{path}: unknown line tag {parts[0]!r}")
    for key in ("r", "b"):
        if key not in header:
            raise ValueError(f"{path}: missing header field {key!r}")
    r = header["r"]
    inputs = [rows[i][0] for i in range(r)]
    functions = [rows[i][1] for i in range(r)]
    return RbnGenome(inputs, functions)


def save_traits(traits: TraitMap, path) -> None:
    """Write a trait map as structured text (0-based node indices)."""
    row = " ".join(str(v) for v in traits.nodes.tolist())
    Path(path).write_text(f"trait-map\nnodes {row}\n")


def load_traits(path) -> TraitMap:
    """Read a trait map written by save_traits."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "trait-map":
        raise ValueError(f"{path}: not a trait-map file")
    for line in lines[1:]:
        parts = line.split()
        if parts and parts[0] == "nodes":
            return TraitMap([int(v) for v in parts[1:]])
    raise ValueError(f"{path}: missing nodes line")
