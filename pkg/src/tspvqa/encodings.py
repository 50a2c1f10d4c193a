"""The three TSP encodings: one-hot QUBO, binary-label HOBO, and permutation.

Index conventions (used consistently by decoders, Hamiltonian lowering, and
the simulator, which is little-endian: bit j of a basis-state integer is
variable j):

* Node 1 is fixed at timestep 1 and eliminated from all encodings by partial
  evaluation.  Movable nodes are 2..n at timesteps 2..n.
* QUBO: variable x_{it} ("node i visited at timestep t") has flat index
  (t-2)*(n-1) + (i-2); timestep-major.  (n-1)^2 variables.
* HOBO: timestep t carries a K-bit label, K = ceil(log2(n-1)); labels 0..n-2
  stand for nodes 2..n (node = label + 2).  Bit k of timestep t has flat
  index (t-2)*K + k, with k = 0 the least significant bit.
* Permutation: the whole bitstring is an unsigned integer, bit 0 least
  significant, decoded by factorial-base decomposition over nodes 2..n.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from tspvqa.core import Route, TspInstance
from tspvqa.errors import InvalidArgumentError
from tspvqa.polynomial import BinaryPolynomial


# ---------------------------------------------------------------------------
# Scheme descriptor

class SchemeKind(str, enum.Enum):
    QUBO = "qubo"
    HOBO = "hobo"
    PERMUTATION = "permutation"


@dataclass(frozen=True)
class EncodingScheme:
    kind: SchemeKind
    n: int
    penalty: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.n < 3:
            raise InvalidArgumentError(f"need at least 3 nodes, got {self.n}")
        if self.kind is not SchemeKind.PERMUTATION:
            if self.penalty is None or self.penalty <= 0:
                raise InvalidArgumentError(f"{self.kind.value} encoding needs a positive penalty")

    @property
    def num_qubits(self) -> int:
        return num_qubits(self.kind, self.n)


def label_bits(n: int) -> int:
    """Bits per timestep label in the reduced HOBO encoding."""
    return max(1, math.ceil(math.log2(n - 1)))


def num_qubits(kind: SchemeKind, n: int) -> int:
    kind = SchemeKind(kind)
    if kind is SchemeKind.QUBO:
        return (n - 1) ** 2
    if kind is SchemeKind.HOBO:
        return (n - 1) * label_bits(n)
    return max(1, math.ceil(math.log2(math.factorial(n - 1))))


def feasible_ratio_theoretical(kind: SchemeKind, n: int) -> float:
    """Feasible-subspace ratio of the unreduced encodings (no fixed first city)."""
    kind = SchemeKind(kind)
    if n < 3:
        raise InvalidArgumentError(f"need at least 3 nodes, got {n}")
    if kind is SchemeKind.QUBO:
        return math.factorial(n) / 2 ** (n * n)
    if kind is SchemeKind.HOBO:
        return math.factorial(n) / 2 ** (n * math.ceil(math.log2(n)))
    return 1.0


# ---------------------------------------------------------------------------
# Decoding

class InfeasibleReason(enum.Enum):
    MULTIPLE_NODES_PER_STEP = "MultipleNodesPerStep"
    NODE_REPEATED = "NodeRepeated"
    STEP_EMPTY = "StepEmpty"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"


@dataclass(frozen=True)
class DecodeResult:
    route: Route | None = None
    reason: InfeasibleReason | None = None

    @property
    def feasible(self) -> bool:
        return self.route is not None

    @classmethod
    def ok(cls, route: Route) -> "DecodeResult":
        return cls(route=tuple(route))

    @classmethod
    def bad(cls, reason: InfeasibleReason) -> "DecodeResult":
        return cls(reason=reason)


def bits_of_state(state: int, num_bits: int) -> list[int]:
    """Little-endian bit list of a basis-state integer."""
    return [(state >> j) & 1 for j in range(num_bits)]


def decode_qubo(bits, n: int) -> DecodeResult:
    bits = list(bits)
    m = n - 1
    if len(bits) != m * m:
        raise InvalidArgumentError(f"QUBO bitstring for n={n} must have {m * m} bits, got {len(bits)}")
    order = [1]
    for t in range(m):  # timestep t+2
        column = bits[t * m:(t + 1) * m]
        ones = [i for i, b in enumerate(column) if b]
        if not ones:
            return DecodeResult.bad(InfeasibleReason.STEP_EMPTY)
        if len(ones) > 1:
            return DecodeResult.bad(InfeasibleReason.MULTIPLE_NODES_PER_STEP)
        order.append(ones[0] + 2)
    if len(set(order)) != n:
        return DecodeResult.bad(InfeasibleReason.NODE_REPEATED)
    return DecodeResult.ok(order)


def decode_hobo(bits, n: int) -> DecodeResult:
    bits = list(bits)
    m = n - 1
    k = label_bits(n)
    if len(bits) != m * k:
        raise InvalidArgumentError(f"HOBO bitstring for n={n} must have {m * k} bits, got {len(bits)}")
    labels = []
    for t in range(m):
        label = sum(bits[t * k + j] << j for j in range(k))
        if label > m - 1:
            return DecodeResult.bad(InfeasibleReason.INDEX_OUT_OF_RANGE)
        labels.append(label)
    if len(set(labels)) != m:
        return DecodeResult.bad(InfeasibleReason.NODE_REPEATED)
    return DecodeResult.ok([1] + [label + 2 for label in labels])


def decode_permutation(x: int, n: int) -> Route:
    """Total factorial-base decoding of an index onto a first-city-fixed route.

    The index is reduced modulo (n-1)!, so every value of a
    ceil(log2((n-1)!))-bit register maps to a valid route.
    """
    if x < 0:
        raise InvalidArgumentError(f"index must be non-negative, got {x}")
    m = n - 1
    f = math.factorial(m)
    x %= f
    nodes = list(range(2, n + 1))
    order = [1]
    for i in range(m):
        f //= m - i
        k, x = divmod(x, f)
        order.append(nodes.pop(k))
    return tuple(order)


# ---------------------------------------------------------------------------
# Binary polynomials (the QUBO and HOBO cost functions)

def _bit_poly(entry, num_vars: int) -> BinaryPolynomial:
    if isinstance(entry, BinaryPolynomial):
        return entry
    if entry in (0, 1):
        return BinaryPolynomial.constant(float(entry), num_vars)
    raise InvalidArgumentError(f"bit entry must be 0, 1 or a polynomial, got {entry!r}")


def h_delta(b, b_prime, num_vars: int) -> BinaryPolynomial:
    """Equality indicator of two bit vectors: 1 iff equal, as a multilinear polynomial.

    Entries may be concrete bits (0/1) or single-bit polynomials; the product
    form prod_k (1 - (b_k - b'_k)^2) is expanded with x^2 = x applied.
    """
    b, b_prime = list(b), list(b_prime)
    if len(b) != len(b_prime):
        raise InvalidArgumentError(f"bit vectors differ in length: {len(b)} vs {len(b_prime)}")
    out = BinaryPolynomial.constant(1.0, num_vars)
    for u_raw, v_raw in zip(b, b_prime):
        u = _bit_poly(u_raw, num_vars)
        v = _bit_poly(v_raw, num_vars)
        # 1 - (u - v)^2 = 1 - u - v + 2uv for binary u, v
        out = out * (1.0 - u - v + 2.0 * (u * v))
    return out


def qubo_polynomial(inst: TspInstance, penalty: float) -> BinaryPolynomial:
    """One-hot cost over (n-1)^2 variables: distance plus both one-hot penalties.

    Node 1 at timestep 1 is partially evaluated away, turning the edges to
    timesteps 2 and n into linear terms.
    """
    if penalty <= 0:
        raise InvalidArgumentError(f"penalty must be positive, got {penalty}")
    n = inst.n
    m = n - 1
    nv = m * m
    w = inst.w

    def var(i: int, t: int) -> BinaryPolynomial:
        # node i in 2..n at timestep t in 2..n
        return BinaryPolynomial.variable((t - 2) * m + (i - 2), nv)

    poly = BinaryPolynomial(nv)
    # distance: edge timestep 1 -> 2 and n -> 1 (node 1 fixed), interior edges quadratic
    for j in range(2, n + 1):
        poly = poly + w[0, j - 1] * var(j, 2)
        poly = poly + w[j - 1, 0] * var(j, n)
    for t in range(2, n):
        for i in range(2, n + 1):
            for j in range(2, n + 1):
                if i != j:
                    poly = poly + w[i - 1, j - 1] * (var(i, t) * var(j, t + 1))
    # penalties: each movable node visited once, each timestep 2..n occupied once
    for i in range(2, n + 1):
        residual = BinaryPolynomial.constant(1.0, nv)
        for t in range(2, n + 1):
            residual = residual - var(i, t)
        poly = poly + penalty * (residual * residual)
    for t in range(2, n + 1):
        residual = BinaryPolynomial.constant(1.0, nv)
        for i in range(2, n + 1):
            residual = residual - var(i, t)
        poly = poly + penalty * (residual * residual)
    return poly.pruned()


def node_label_bits(i: int, n: int) -> list[int]:
    """Concrete label bits of movable node i (label i-2), LSB first."""
    k = label_bits(n)
    return [((i - 2) >> j) & 1 for j in range(k)]


def hobo_polynomial(inst: TspInstance, penalty: float) -> BinaryPolynomial:
    """Binary-label cost over (n-1)*K variables: validity, distinctness, distance.

    Timestep 1 hosts the fixed node 1 and carries no variables; its incident
    edges are partially evaluated against concrete labels.
    """
    if penalty <= 0:
        raise InvalidArgumentError(f"penalty must be positive, got {penalty}")
    n = inst.n
    m = n - 1
    k = label_bits(n)
    nv = m * k
    w = inst.w

    def step_bits(t: int) -> list[BinaryPolynomial]:
        # timestep t in 2..n, LSB first
        return [BinaryPolynomial.variable((t - 2) * k + j, nv) for j in range(k)]

    max_label = [(m - 1 >> j) & 1 for j in range(k)]  # binary of the largest valid label
    zero_positions = [j for j in range(k) if max_label[j] == 0]

    poly = BinaryPolynomial(nv)
    # validity: a label may not exceed m-1
    for t in range(2, n + 1):
        b = step_bits(t)
        for k0 in zero_positions:
            term = b[k0]
            for j in range(k0 + 1, k):
                term = term * h_delta([b[j]], [max_label[j]], nv)
            poly = poly + penalty * term
    # distinctness: no two timesteps share a label
    for t in range(2, n + 1):
        for t2 in range(t + 1, n + 1):
            poly = poly + penalty * h_delta(step_bits(t), step_bits(t2), nv)
    # distance: edges (1,2) and (n,1) against the fixed node, interior edges symbolic
    for j in range(2, n + 1):
        poly = poly + w[0, j - 1] * h_delta(step_bits(2), node_label_bits(j, n), nv)
        poly = poly + w[j - 1, 0] * h_delta(step_bits(n), node_label_bits(j, n), nv)
    for t in range(2, n):
        for i in range(2, n + 1):
            for j in range(2, n + 1):
                if i != j:
                    edge = h_delta(step_bits(t), node_label_bits(i, n), nv) * h_delta(
                        step_bits(t + 1), node_label_bits(j, n), nv
                    )
                    poly = poly + w[i - 1, j - 1] * edge
    return poly.pruned()


def build_polynomial(scheme: EncodingScheme, inst: TspInstance) -> BinaryPolynomial:
    if scheme.kind is SchemeKind.QUBO:
        return qubo_polynomial(inst, scheme.penalty)
    if scheme.kind is SchemeKind.HOBO:
        return hobo_polynomial(inst, scheme.penalty)
    raise InvalidArgumentError("the permutation encoding has no polynomial cost function")


# ---------------------------------------------------------------------------
# Whole-register decode tables (vectorized; cross-checked against the scalar
# decoders in the test suite)

def decode_table(scheme: EncodingScheme, inst: TspInstance):
    """Per-basis-state feasibility mask and tour length for all 2^q states.

    Lengths are NaN on infeasible states.
    """
    n = inst.n
    m = n - 1
    q = scheme.num_qubits
    states = np.arange(1 << q, dtype=np.int64)
    if scheme.kind is SchemeKind.PERMUTATION:
        from tspvqa.core import tour_length

        lengths = np.array([tour_length(inst, decode_permutation(int(s), n)) for s in states])
        return np.ones(1 << q, dtype=bool), lengths

    bits = (states[:, None] >> np.arange(q)[None, :]) & 1  # (2^q, q)
    if scheme.kind is SchemeKind.QUBO:
        x = bits.reshape(-1, m, m)  # (state, timestep, node)
        feasible = np.all(x.sum(axis=2) == 1, axis=1) & np.all(x.sum(axis=1) == 1, axis=1)
        order = np.argmax(x, axis=2) + 1  # node index - 1, per timestep
    else:
        k = label_bits(n)
        labels = (bits.reshape(-1, m, k) << np.arange(k)[None, None, :]).sum(axis=2)
        in_range = np.all(labels <= m - 1, axis=1)
        sorted_labels = np.sort(labels, axis=1)
        distinct = np.all(np.diff(sorted_labels, axis=1) != 0, axis=1)
        feasible = in_range & distinct
        order = labels + 1

    lengths = np.full(1 << q, np.nan)
    if feasible.any():
        idx = np.concatenate([np.zeros((int(feasible.sum()), 1), dtype=np.int64), order[feasible]], axis=1)
        nxt = np.roll(idx, -1, axis=1)
        lengths[feasible] = inst.w[idx, nxt].sum(axis=1)
    return feasible, lengths
