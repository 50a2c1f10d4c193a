"""Multilinear polynomials over binary variables.

The identification x^2 = x is applied on every multiplication, so a term is a
set of distinct variable indices (the empty set is the constant term).  Terms
with zero coefficient are never stored.
"""

from __future__ import annotations

import numpy as np

from tspvqa.errors import InvalidArgumentError

Term = tuple[int, ...]  # sorted, distinct variable indices

# Coefficients smaller than this after cancellation are numerical noise from
# expanding products like (1 - (b - b')^2) and are dropped.
PRUNE_TOL = 1e-12


class BinaryPolynomial:
    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: dict[Term, float] | None = None):
        self.num_vars = int(num_vars)
        self.terms: dict[Term, float] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff == 0.0:
                    continue
                key = tuple(sorted(set(key)))
                if key and (key[0] < 0 or key[-1] >= self.num_vars):
                    raise InvalidArgumentError(f"term {key} out of range for {self.num_vars} variables")
                self.terms[key] = self.terms.get(key, 0.0) + coeff

    @classmethod
    def constant(cls, value: float, num_vars: int) -> "BinaryPolynomial":
        return cls(num_vars, {(): float(value)})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> "BinaryPolynomial":
        return cls(num_vars, {(int(index),): 1.0})

    def copy(self) -> "BinaryPolynomial":
        out = BinaryPolynomial(self.num_vars)
        out.terms = dict(self.terms)
        return out

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = BinaryPolynomial.constant(other, self.num_vars)
        out = self.copy()
        for key, coeff in other.terms.items():
            new = out.terms.get(key, 0.0) + coeff
            if new == 0.0:
                out.terms.pop(key, None)
            else:
                out.terms[key] = new
        return out

    __radd__ = __add__

    def __neg__(self):
        out = BinaryPolynomial(self.num_vars)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                return BinaryPolynomial(self.num_vars)
            out = BinaryPolynomial(self.num_vars)
            out.terms = {k: c * other for k, c in self.terms.items()}
            return out
        out = BinaryPolynomial(self.num_vars)
        acc = out.terms
        for ka, ca in self.terms.items():
            sa = set(ka)
            for kb, cb in other.terms.items():
                key = tuple(sorted(sa | set(kb)))  # x^2 = x
                new = acc.get(key, 0.0) + ca * cb
                if new == 0.0:
                    acc.pop(key, None)
                else:
                    acc[key] = new
        return out

    __rmul__ = __mul__

    def pruned(self, tol: float = PRUNE_TOL) -> "BinaryPolynomial":
        out = BinaryPolynomial(self.num_vars)
        out.terms = {k: c for k, c in self.terms.items() if abs(c) > tol}
        return out

    def evaluate(self, bits) -> float:
        """Value at a concrete 0/1 assignment (bits[j] is variable j)."""
        bits = list(bits)
        if len(bits) != self.num_vars:
            raise InvalidArgumentError(f"expected {self.num_vars} bits, got {len(bits)}")
        total = 0.0
        for key, coeff in self.terms.items():
            if all(bits[j] for j in key):
                total += coeff
        return total

    def evaluate_all(self, num_qubits: int | None = None) -> np.ndarray:
        """Dense table of values over all 2^q assignments (bit j of the index = variable j)."""
        q = self.num_vars if num_qubits is None else int(num_qubits)
        if q < self.num_vars:
            raise InvalidArgumentError(f"need at least {self.num_vars} qubits, got {q}")
        states = np.arange(1 << q, dtype=np.int64)
        values = np.zeros(1 << q, dtype=float)
        for key, coeff in self.terms.items():
            mask = 0
            for j in key:
                mask |= 1 << j
            values[(states & mask) == mask] += coeff
        return values

    def dump(self) -> str:
        """Canonical text form, one `coeff: i1,i2,...` line per term."""
        lines = []
        for key in sorted(self.terms, key=lambda k: (len(k), k)):
            lines.append(f"{self.terms[key]!r}: {','.join(str(i) for i in key)}")
        return "\n".join(lines) + ("\n" if lines else "")

    def __eq__(self, other):
        return (
            isinstance(other, BinaryPolynomial)
            and self.num_vars == other.num_vars
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"BinaryPolynomial(num_vars={self.num_vars}, terms={len(self.terms)})"
