"""Benchmarking toolkit for TSP encodings under simulated variational quantum algorithms.

Compares three encodings of the travelling salesperson problem (one-hot QUBO,
binary-label HOBO, and a factorial-base permutation encoding) driven by
statevector-simulated VQE and QAOA, and computes feasibility and length-ratio
metrics against an exact brute-force oracle.
"""

from tspvqa.core import TspInstance, TourStats, generate_instance, tour_length, brute_force_stats
from tspvqa.polynomial import BinaryPolynomial
from tspvqa.encodings import EncodingScheme, DecodeResult

__all__ = [
    "TspInstance",
    "TourStats",
    "generate_instance",
    "tour_length",
    "brute_force_stats",
    "BinaryPolynomial",
    "EncodingScheme",
    "DecodeResult",
]

__version__ = "0.1.0"
