"""Shift-family operators on the truncated tree and the walk operator bundle.

All operators are compressions to the span of vertices of depth <= d.  The
shift maps a parent basis vector to the sum of its children, its rescaling by
1/sqrt(2) is an isometry below the outermost layer, and the defect projection
1 - L L* kills shifted vectors exactly on the whole truncation (children come
in sibling pairs, which are always both inside the window).  Identity checks
are therefore restricted to the interior projector (depth <= d - 2), where
compression artifacts vanish; the margin is two layers because the chirality
block composes two depth-shifting factors.

Coin-type operators (C and the conjugator) are 2x2 block matrices with
diagonal blocks, so products with them are computed by exact row and column
scaling (see chiralwalk.linalg); this keeps the depth-10 identity suite in
budget without changing a single matrix entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (diag_block2, matmul, mul_diag_block_left,
                     mul_diag_block_right)
from .tree import TruncatedTree, truncated_tree
from .walk import WalkSpec, eval_vertex


def shift_matrix(t: TruncatedTree) -> np.ndarray:
    """(S f)(v) = f(parent(v)); the root row is zero.

    Column u holds the children of u that fit in the window, so vertices at
    the truncation depth are annihilated by the adjoint side of the pairing.
    """
    n = t.size
    s = np.zeros((n, n), dtype=np.complex128)
    for child, par in enumerate(t.parent_index):
        if par >= 0:
            s[child, par] = 1.0
    return s


class TreeOperators(NamedTuple):
    tree: TruncatedTree
    shift: np.ndarray
    isometry: np.ndarray
    defect: np.ndarray


def tree_operators(t: TruncatedTree) -> TreeOperators:
    """Shift S, isometry L = S / sqrt(2), and defect projection E = 1 - L L*."""
    s = shift_matrix(t)
    isometry = s / math.sqrt(2.0)
    defect = np.eye(t.size, dtype=np.complex128) - matmul(isometry, isometry.conj().T)
    return TreeOperators(t, s, isometry, defect)


def coin_values(w: WalkSpec, t: TruncatedTree, rule: str = "leftmost"):
    """Per-vertex coin data (a_v, b_v) as diagonal vectors in tree order."""
    a = np.empty(t.size, dtype=float)
    b = np.empty(t.size, dtype=np.complex128)
    for i, v in enumerate(t.addresses):
        coeff = eval_vertex(w, v, rule)
        a[i] = coeff.a
        b[i] = coeff.b
    return a, b


def coin_blocks(a: np.ndarray, b: np.ndarray):
    """Diagonal blocks of the coin symmetry [[a, conj(b)], [b, -a]]."""
    return (a.astype(np.complex128), np.conj(b), b, -a.astype(np.complex128))


def coin_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return diag_block2(*coin_blocks(a, b))


def conjugator_blocks(a: np.ndarray, b: np.ndarray):
    """Diagonal blocks of the unitary that diagonalizes the coin pointwise:
    (1/sqrt 2) [[s+, -s-], [b/s+, b/s-]] with s+- = sqrt(1 +- a)."""
    if np.any(np.abs(a) >= 1.0):
        raise ValueError("conjugator undefined where |a| = 1")
    r = 1.0 / math.sqrt(2.0)
    s_plus = np.sqrt(1.0 + a)
    s_minus = np.sqrt(1.0 - a)
    return (r * s_plus.astype(np.complex128), -r * s_minus.astype(np.complex128),
            r * b / s_plus, r * b / s_minus)


def conjugator_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return diag_block2(*conjugator_blocks(a, b))


def _dagger_blocks(d):
    d11, d12, d21, d22 = d
    return (np.conj(d11), np.conj(d21), np.conj(d12), np.conj(d22))


def shift_symmetry(isometry: np.ndarray, defect: np.ndarray,
                   p: float, q: complex) -> np.ndarray:
    """The involution [[p, conj(q) L*], [q L, (1 + p) E - p]].

    The lower right block must square to |q|^2 E + p^2 against |q|^2 L L*,
    which forces the coefficient 1 + p on the defect; with it the square is
    the identity wherever L*L = 1 holds (all of the interior).  At p = 0 this
    reduces to [[0, L*], [L, E]], and on a lattice without defect (E = 0) to
    the familiar [[p, conj(q) L*], [q L, -p]].
    """
    if abs(p * p + abs(q) ** 2 - 1.0) > 1e-12:
        raise ValueError(f"(p, q) = ({p}, {q}) not on the unit sphere")
    n = isometry.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    idx = np.arange(n)
    out[idx, idx] = p
    out[:n, n:] = np.conj(q) * isometry.conj().T
    out[n:, :n] = q * isometry
    out[n:, n:] = (1.0 + p) * defect
    out[n + idx, n + idx] -= p
    return out


def evolution_matrix(symmetry: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """U = (symmetry) (coin), with the coin applied by exact column scaling."""
    return mul_diag_block_right(symmetry, coin_blocks(a, b))


def chirality_direct(p: float, q: complex, a: np.ndarray, b: np.ndarray,
                     isometry: np.ndarray, defect: np.ndarray) -> np.ndarray:
    """Chirality block assembled term by term:

        q (conj(b)/s-) L s+  -  conj(q) s- L* (b/s+)
          + (1 + p) (conj(b)/s-) E (b/s+)  -  2 p |b|,

    with every function acting diagonally through the vertex values.  The
    conjugation route below reproduces this matrix exactly, entry for entry.
    """
    s_plus = np.sqrt(1.0 + a)
    s_minus = np.sqrt(1.0 - a)
    left = np.conj(b) / s_minus
    out = q * (left[:, None] * isometry * s_plus[None, :])
    out -= np.conj(q) * (s_minus[:, None] * isometry.conj().T * (b / s_plus)[None, :])
    out += (1.0 + p) * (left[:, None] * defect * (b / s_plus)[None, :])
    out -= np.diag(2.0 * p * np.abs(b)).astype(np.complex128)
    return out


def conjugated_skew(skew: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The skew part conjugated into the coin eigenbasis: eps* Q eps."""
    eps = conjugator_blocks(a, b)
    return mul_diag_block_left(_dagger_blocks(eps), mul_diag_block_right(skew, eps))


def chirality_conjugated(skew: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lower-left block of eps* Q eps: the chirality operator."""
    n = len(a)
    return conjugated_skew(skew, a, b)[n:, :n]


def interior_mask(t: TruncatedTree, margin: int = 2) -> np.ndarray:
    """Boolean mask selecting vertices of depth <= d - margin."""
    cutoff = t.depth - margin
    return np.array([len(v) <= cutoff for v in t.addresses])


@dataclass
class OperatorBundle:
    """Everything the identity suite and the index experiments consume."""

    depth: int
    tree: TruncatedTree
    walk: WalkSpec
    rule: str
    shift: np.ndarray
    isometry: np.ndarray
    defect: np.ndarray
    a: np.ndarray
    b: np.ndarray
    symmetry: np.ndarray
    coin: np.ndarray
    coin_diag: np.ndarray
    evolution: np.ndarray
    skew: np.ndarray
    chirality: np.ndarray
    interior: np.ndarray


def build_bundle(w: WalkSpec, depth: int, rule: str = "leftmost",
                 ops: TreeOperators | None = None,
                 route: str = "direct") -> OperatorBundle:
    """Construct the full operator bundle at a truncation depth.

    Pass a precomputed ``ops`` to share the walk-independent tree operators
    across several walks at the same depth.  ``route`` selects how the stored
    chirality block is produced ("direct" or "conjugation"); both agree to
    machine precision.
    """
    if ops is None:
        ops = tree_operators(truncated_tree(depth))
    elif ops.tree.depth != depth:
        raise ValueError(f"tree operators are at depth {ops.tree.depth}, not {depth}")
    t = ops.tree
    a, b = coin_values(w, t, rule)
    symmetry = shift_symmetry(ops.isometry, ops.defect, w.p, w.q)
    evolution = evolution_matrix(symmetry, a, b)
    skew = evolution - evolution.conj().T
    if route == "direct":
        chirality = chirality_direct(w.p, w.q, a, b, ops.isometry, ops.defect)
    elif route == "conjugation":
        chirality = chirality_conjugated(skew, a, b)
    else:
        raise ValueError(f"unknown route {route!r}")
    return OperatorBundle(
        depth=depth, tree=t, walk=w, rule=rule,
        shift=ops.shift, isometry=ops.isometry, defect=ops.defect,
        a=a, b=b,
        symmetry=symmetry,
        coin=coin_matrix(a, b),
        coin_diag=conjugator_matrix(a, b),
        evolution=evolution,
        skew=skew,
        chirality=chirality,
        interior=interior_mask(t),
    )


IDENTITY_NAMES = (
    "symmetry_squared",
    "coin_squared",
    "conjugator_unitary",
    "coin_diagonalized",
    "defect_kills_shift",
    "coin_anticommutes_skew",
    "conjugated_skew_diag_blocks",
)


def check_identities(bundle: OperatorBundle) -> dict[str, float]:
    """Max-norm residuals of the defining operator identities on the interior.

    Checks, in order: the shift symmetry squares to 1; the coin squares to 1;
    the conjugator is unitary; it diagonalizes the coin to diag(1, -1); the
    defect annihilates the isometry; the coin anticommutes with the skew part;
    and the conjugated skew part has vanishing diagonal blocks.

    Products against coin-type operators restrict exactly to the interior
    (their diagonal blocks never couple interior to exterior vertices), so
    those factors are sliced before multiplying; only genuinely depth-mixing
    products (the symmetry square, defect times isometry) contract over the
    full truncation.
    """
    n = bundle.tree.size
    inner = np.flatnonzero(bundle.interior)
    inner2 = np.concatenate([inner, n + inner])
    m = len(inner)
    a, b = bundle.a, bundle.b
    cblocks = tuple(v[inner] for v in coin_blocks(a, b))
    eblocks = tuple(v[inner] for v in conjugator_blocks(a, b))
    ix2 = np.ix_(inner2, inner2)

    residuals: dict[str, float] = {}

    gamma = bundle.symmetry
    sq = gamma[inner2, :] @ gamma[:, inner2]
    residuals["symmetry_squared"] = float(np.max(np.abs(sq - np.eye(2 * m))))

    coin_inner = bundle.coin[ix2]
    coin_sq = mul_diag_block_left(cblocks, coin_inner)
    residuals["coin_squared"] = float(np.max(np.abs(coin_sq - np.eye(2 * m))))

    diag_inner = bundle.coin_diag[ix2]
    gram = mul_diag_block_left(_dagger_blocks(eblocks), diag_inner)
    residuals["conjugator_unitary"] = float(np.max(np.abs(gram - np.eye(2 * m))))

    diagonalized = mul_diag_block_left(
        _dagger_blocks(eblocks), mul_diag_block_left(cblocks, diag_inner))
    target = np.diag(np.concatenate([np.ones(m), -np.ones(m)]))
    residuals["coin_diagonalized"] = float(np.max(np.abs(diagonalized - target)))

    el = bundle.defect[inner, :] @ bundle.isometry[:, inner]
    residuals["defect_kills_shift"] = float(np.max(np.abs(el)))

    skew_inner = bundle.skew[ix2]
    anti = (mul_diag_block_left(cblocks, skew_inner)
            + mul_diag_block_right(skew_inner, cblocks))
    residuals["coin_anticommutes_skew"] = float(np.max(np.abs(anti)))

    conj = mul_diag_block_left(_dagger_blocks(eblocks),
                               mul_diag_block_right(skew_inner, eblocks))
    top = np.max(np.abs(conj[:m, :m]))
    bottom = np.max(np.abs(conj[m:, m:]))
    residuals["conjugated_skew_diag_blocks"] = float(max(top, bottom))

    return residuals


def route_disagreement(bundle: OperatorBundle) -> float:
    """Interior max difference between the two chirality constructions."""
    direct = chirality_direct(bundle.walk.p, bundle.walk.q, bundle.a, bundle.b,
                              bundle.isometry, bundle.defect)
    conj = chirality_conjugated(bundle.skew, bundle.a, bundle.b)
    inner = np.flatnonzero(bundle.interior)
    return float(np.max(np.abs((direct - conj)[np.ix_(inner, inner)])))
