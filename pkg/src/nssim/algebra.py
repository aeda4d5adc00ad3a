"""Operator spans and algebras on three qubits.

Spans are stored as Frobenius-orthonormal bases obtained from an SVD of
the vectorized spanning set; the numerical rank at a relative cutoff of
``SPAN_CUTOFF`` is what "dimension" means throughout the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product
from typing import Iterable, Sequence

import numpy as np

from .qmat import (
    H,
    I2,
    PAULIS,
    S,
    X,
    Y,
    Z,
    commutator,
    embed,
    pauli_string,
    tensor_power,
)

SPAN_CUTOFF = 1e-10
N_QUBITS = 3
DIM = 2**N_QUBITS

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class OperatorSpan:
    """Orthonormal basis (under ``Tr(A^dagger B)``) of a linear span of operators."""

    basis: np.ndarray  # shape (dim, d, d)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def gram(self) -> np.ndarray:
        v = self.basis.reshape(self.dim, -1)
        return v.conj() @ v.T

    def project(self, x: np.ndarray) -> np.ndarray:
        v = self.basis.reshape(self.dim, -1)
        coeffs = v.conj() @ np.asarray(x, dtype=complex).reshape(-1)
        return (coeffs @ v).reshape(x.shape)

    def residual(self, x: np.ndarray) -> float:
        return membership_residual(x, self)

    def contains(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        return membership_residual(x, self) < tol


def span_of(ops: Iterable[np.ndarray], cutoff: float = SPAN_CUTOFF) -> OperatorSpan:
    """Orthonormalize a spanning set with a rank-revealing SVD."""
    ops = [np.asarray(o, dtype=complex) for o in ops]
    if not ops:
        raise ValueError("cannot build a span from an empty set")
    d = ops[0].shape[0]
    if any(o.shape != (d, d) for o in ops):
        raise ValueError("all operators in a span must share one shape")
    m = np.stack([o.reshape(-1) for o in ops])
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    if s[0] == 0.0:
        return OperatorSpan(np.zeros((0, d, d), dtype=complex))
    rank = int(np.sum(s > cutoff * s[0]))
    return OperatorSpan(vh[:rank].reshape(rank, d, d))


def membership_residual(x: np.ndarray, span: OperatorSpan) -> float:
    """Relative Frobenius distance from ``x`` to ``span`` (0 for ``x = 0``)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (span.ambient_dim, span.ambient_dim):
        raise ValueError(f"operator shape {x.shape} does not match span ambient dim {span.ambient_dim}")
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(x - span.project(x)) / norm)


def commutant(span: OperatorSpan, cutoff: float = SPAN_CUTOFF) -> OperatorSpan:
    """All operators commuting with every element of ``span``.

    Solves ``X B - B X = 0`` for all basis elements at once as a null-space
    problem on row-major vectorized ``X``.
    """
    if span.dim == 0:
        raise ValueError("commutant of an empty span is undefined")
    d = span.ambient_dim
    eye = np.eye(d)
    # row-major vec(X B - B X) = (I kron B^T - B kron I) vec(X)
    c = np.concatenate([np.kron(eye, b.T) - np.kron(b, eye) for b in span.basis])
    _, s, vh = np.linalg.svd(c, full_matrices=False)
    scale = s[0] if s[0] > 0 else 1.0
    rank = int(np.sum(s > cutoff * scale))
    null = vh[rank:].conj()
    return OperatorSpan(null.reshape(-1, d, d))


def product_span(a: OperatorSpan, b: OperatorSpan, both_orders: bool = False) -> OperatorSpan:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("spans act on different spaces")
    prods = [p @ q for p in a.basis for q in b.basis]
    if both_orders:
        prods += [q @ p for p in a.basis for q in b.basis]
    return span_of(prods)


def generated_algebra(generators: Sequence[np.ndarray]) -> OperatorSpan:
    """Unital associative algebra generated by ``generators``."""
    d = generators[0].shape[0]
    gens = span_of([np.eye(d), *generators])
    alg = gens
    while True:
        nxt = span_of([*alg.basis, *product_span(alg, gens).basis])
        if nxt.dim == alg.dim:
            return nxt
        alg = nxt


def max_commutator_norm(a: OperatorSpan, b: OperatorSpan) -> float:
    return max(
        (float(np.linalg.norm(commutator(p, q))) for p in a.basis for q in b.basis),
        default=0.0,
    )


# --- collective operators -------------------------------------------------


def symmetrize(word: str) -> np.ndarray:
    """Sum of a Pauli product over every distinct arrangement of its letters.

    ``symmetrize("ZZI")`` has three terms, ``symmetrize("XYZ")`` six and
    ``symmetrize("ZZZ")`` one.
    """
    word = word.upper()
    if not word or any(c not in PAULIS for c in word):
        raise ValueError(f"expected a word over IXYZ, got {word!r}")
    arrangements = sorted(set(permutations(word)))
    return sum(pauli_string("".join(p)) for p in arrangements)


def collective_generator(axis: str) -> np.ndarray:
    """Total-spin component ``J_u = sum_k sigma_u^(k) / 2``."""
    sigma = {"x": X, "y": Y, "z": Z}[axis]
    return sum(embed(sigma, k, N_QUBITS) for k in range(1, N_QUBITS + 1)) / 2


def total_spin_squared() -> np.ndarray:
    return sum(collective_generator(u) @ collective_generator(u) for u in AXES)


def heisenberg_coupling(j: int, k: int) -> np.ndarray:
    """``s_jk = sigma^(j) . sigma^(k)``."""
    return sum(embed(p, j, N_QUBITS) @ embed(p, k, N_QUBITS) for p in (X, Y, Z))


def symmetric_words(n: int = N_QUBITS) -> list[str]:
    """Multisets of ``n`` Pauli letters (20 for three qubits), ordered by weight."""
    words = ["".join(w) for w in combinations_with_replacement("IXYZ", n)]
    return sorted(words, key=lambda w: (n - w.count("I"), w))


def build_collective_algebra(n: int = N_QUBITS) -> OperatorSpan:
    """Span of all permutation-symmetric operators on ``n`` qubits."""
    return span_of(symmetrize(w) for w in symmetric_words(n))


def axis_change(axis: str) -> np.ndarray:
    """One-qubit Clifford ``u`` with ``u sigma_z u^dagger = sigma_axis``."""
    if axis == "z":
        return I2.copy()
    if axis == "x":
        return H.copy()
    if axis == "y":
        return S @ H
    raise ValueError(f"unknown axis {axis!r}")


def collective_axis_change(axis: str) -> np.ndarray:
    return tensor_power(axis_change(axis), N_QUBITS)


def axial_operators_z() -> list[np.ndarray]:
    return [np.eye(DIM, dtype=complex), collective_generator("z"), symmetrize("ZZI"), symmetrize("ZZZ")]


def build_axial_algebra(axis: str) -> OperatorSpan:
    u = collective_axis_change(axis)
    return span_of(u @ op @ u.conj().T for op in axial_operators_z())


def full_algebra(n: int = N_QUBITS) -> OperatorSpan:
    return span_of(pauli_string("".join(w)) for w in product("IXYZ", repeat=n))


class ErrorModel(enum.Enum):
    GENERAL_INDEPENDENT_ARBITRARY = "general-independent-arbitrary"
    GENERAL_INDEPENDENT_WEAK = "general-independent-weak"
    AXIAL_INDEPENDENT_ARBITRARY = "axial-independent-arbitrary"
    AXIAL_INDEPENDENT_WEAK = "axial-independent-weak"
    GENERAL_COLLECTIVE_ARBITRARY = "general-collective-arbitrary"
    GENERAL_COLLECTIVE_WEAK = "general-collective-weak"
    AXIAL_COLLECTIVE_ARBITRARY = "axial-collective-arbitrary"
    AXIAL_COLLECTIVE_WEAK = "axial-collective-weak"


def _first_order_generators(model: ErrorModel) -> list[np.ndarray]:
    name = model.value
    letters = (X, Y, Z) if name.startswith("general") else (Z,)
    if "independent" in name:
        return [embed(p, k, N_QUBITS) for p in letters for k in range(1, N_QUBITS + 1)]
    return [sum(embed(p, k, N_QUBITS) for k in range(1, N_QUBITS + 1)) / 2 for p in letters]


def error_model_span(model: ErrorModel) -> OperatorSpan:
    """Weak models: identity plus first-order generators.  Arbitrary: the generated algebra."""
    gens = _first_order_generators(model)
    if model.value.endswith("weak"):
        return span_of([np.eye(DIM), *gens])
    return generated_algebra(gens)


def error_model_dimension(model: ErrorModel | str) -> int:
    return error_model_span(ErrorModel(model)).dim


def named_span(name: str) -> OperatorSpan:
    """Spans addressable from the command line."""
    if name == "ac":
        return build_collective_algebra()
    if name in ("ax", "ay", "az"):
        return build_axial_algebra(name[1])
    if name.endswith("_commutant"):
        return commutant(named_span(name[: -len("_commutant")]))
    try:
        return error_model_span(ErrorModel(name))
    except ValueError:
        raise KeyError(f"unknown span {name!r}") from None
