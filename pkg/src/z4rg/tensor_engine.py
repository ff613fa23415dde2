"""Rank-4 coupling tensors and the two-loop contractions.

The quartic vertex is ``g_ijkl = g1 S + g2 F + i g3 W`` over two real field
components.  All contractions work in tilde units (the loop factor is
absorbed into the couplings), so the prefactors are pure rationals:

    beta_ijkl = -eps g_ijkl
                + 1/2  * sum_{mn}   (g_ijmn g_mnkl               + 2 pairings)
                - 1/4  * sum_{mnpq} (g_ijmn g_mpqk g_npql        + 5 pairs)
                + 1/48 * sum_{mnpq} (g_ijkm g_mnpq g_npql        + 3 legs)

Entries are either :class:`~z4rg.algebra.CouplingPoly` (symbolic mode) or
``complex`` (numeric mode).  The numeric mode goes through ``numpy.einsum``;
the symbolic mode uses explicit index loops.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import G1, G2, G3, CouplingPoly, ExactScalar

__all__ = [
    "Rank4Tensor",
    "BasisProjection",
    "AsymmetricTensorError",
    "basis_tensor",
    "assemble_coupling",
    "symmetrize",
    "beta_tensor",
    "eta_tensor",
    "eta2_tensor",
    "project_basis",
    "derive_rg_functions",
]

I = ExactScalar(0, 1)

# (a,b | c,d) splittings of the four external legs
_ONE_LOOP_PAIRINGS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
# (pair on the first vertex, then the two legs on the remaining vertices)
_TWO_LOOP_PAIRS = tuple(
    pair + tuple(x for x in range(4) if x not in pair)
    for pair in itertools.combinations(range(4), 2)
)


class AsymmetricTensorError(ValueError):
    """Raised when a tensor that must be fully symmetric is not."""


class Rank4Tensor:
    """Dense ``n**4`` tensor with hashable-free entries.

    ``entries`` is a numpy array of shape ``(n, n, n, n)``; dtype ``complex``
    in numeric mode, ``object`` holding :class:`CouplingPoly` otherwise.
    """

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries)
        if entries.ndim != 4 or len(set(entries.shape)) != 1:
            raise ValueError(f"expected an (n,n,n,n) array, got shape {entries.shape}")
        self.entries = entries

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def symbolic(self) -> bool:
        return self.entries.dtype == object

    def __getitem__(self, idx):
        return self.entries[idx]

    def __add__(self, other: "Rank4Tensor") -> "Rank4Tensor":
        return Rank4Tensor(self.entries + other.entries)

    def __sub__(self, other: "Rank4Tensor") -> "Rank4Tensor":
        return Rank4Tensor(self.entries - other.entries)

    def scale(self, c) -> "Rank4Tensor":
        return Rank4Tensor(_scale(self.entries, c))

    def is_symmetric(self, tol: float = 0.0) -> bool:
        e = self.entries
        for perm in itertools.permutations(range(4)):
            t = np.transpose(e, perm)
            if self.symbolic:
                if not all(a == b for a, b in zip(e.flat, t.flat)):
                    return False
            elif np.max(np.abs(t - e), initial=0.0) > tol:
                return False
        return True

    def to_numeric(self, g=None) -> "Rank4Tensor":
        """Evaluate a symbolic tensor at ``g = (g1, g2, g3)`` (or cast)."""
        if not self.symbolic:
            return self
        if g is None:
            raise ValueError("numeric values for (g1, g2, g3) required")
        out = np.empty(self.entries.shape, dtype=complex)
        for idx, p in np.ndenumerate(self.entries):
            out[idx] = complex(p(*g))
        return Rank4Tensor(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rank4Tensor) or other.n != self.n:
            return NotImplemented
        return all(a == b for a, b in zip(self.entries.flat, other.entries.flat))

    def __repr__(self) -> str:
        kind = "symbolic" if self.symbolic else "numeric"
        return f"Rank4Tensor(n={self.n}, {kind})"


@dataclass(frozen=True)
class BasisProjection:
    """Components of a tensor along ``S``, ``F`` and ``i W``."""

    p1: CouplingPoly | complex
    p2: CouplingPoly | complex
    p3: CouplingPoly | complex
    residual_zero: bool

    def as_tuple(self):
        return self.p1, self.p2, self.p3


def _scale(arr: np.ndarray, c) -> np.ndarray:
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = v * c
        return out
    return arr * complex(c)


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def _levi(a: int, b: int) -> int:
    return (b - a) if abs(b - a) == 1 and min(a, b) == 0 else 0


def symmetrize(T: Rank4Tensor) -> Rank4Tensor:
    """Average over the 24 index permutations."""
    perms = list(itertools.permutations(range(4)))
    if T.symbolic:
        out = np.empty(T.entries.shape, dtype=object)
        for idx in itertools.product(range(T.n), repeat=4):
            acc = CouplingPoly()
            for perm in perms:
                acc = acc + T.entries[tuple(idx[p] for p in perm)]
            out[idx] = acc * ExactScalar(Fraction(1, 24))
        return Rank4Tensor(out)
    acc = sum(np.transpose(T.entries, p) for p in perms)
    return Rank4Tensor(acc / 24.0)


def basis_tensor(which: str, n: int = 2) -> Rank4Tensor:
    """``S``, ``F`` or ``W`` as exact constants wrapped in :class:`CouplingPoly`.

    ``W`` exists only for two components (it carries the 2-index
    antisymmetric symbol).
    """
    which = which.upper()
    if which not in ("S", "F", "W"):
        raise ValueError(f"unknown basis tensor {which!r}")
    if which == "W" and n != 2:
        raise ValueError("W is defined only for n = 2")
    if n < 1:
        raise ValueError("n must be positive")
    third, quarter = Fraction(1, 3), Fraction(1, 4)
    out = np.empty((n,) * 4, dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if which == "S":
            v = third * (_delta(i, j) * _delta(k, l) + _delta(i, k) * _delta(j, l) + _delta(i, l) * _delta(j, k))
        elif which == "F":
            v = Fraction(_delta(i, j) * _delta(i, k) * _delta(i, l))
        else:
            v = quarter * (
                _delta(i, j) * _delta(i, k) * _levi(i, l)
                + _delta(i, k) * _delta(i, l) * _levi(i, j)
                + _delta(i, j) * _delta(i, l) * _levi(i, k)
                + _delta(j, k) * _delta(j, l) * _levi(j, i)
            )
        out[i, j, k, l] = CouplingPoly.const(v)
    # the W formula is symmetric only after averaging
    return symmetrize(Rank4Tensor(out))


def assemble_coupling(symbolic: bool = True, g=None, n: int = 2) -> Rank4Tensor:
    """``g_ijkl = g1 S + g2 F + i g3 W``.

    Symbolic mode returns polynomial entries in the couplings.  Numeric mode
    substitutes ``g = (g1, g2, g3)``.
    """
    if n != 2:
        raise ValueError("the coupling tensor with W requires n = 2")
    S, F, W = (basis_tensor(w, 2).entries for w in "SFW")
    out = np.empty(S.shape, dtype=object)
    for idx in np.ndindex(S.shape):
        out[idx] = S[idx] * G1 + F[idx] * G2 + W[idx] * G3 * I
    T = Rank4Tensor(out)
    if symbolic:
        return T
    if g is None:
        raise ValueError("numeric mode needs g = (g1, g2, g3)")
    return T.to_numeric(g)


def numeric_basis(which: str, n: int = 2) -> np.ndarray:
    T = basis_tensor(which, n)
    return np.array([complex(p.coeff((0, 0, 0))) for p in T.entries.flat]).reshape(T.entries.shape)


# ----------------------------------------------------------------------------
# contractions
# ----------------------------------------------------------------------------

def _ring_zero(T: Rank4Tensor):
    return CouplingPoly() if T.symbolic else 0j


def _pair_trace(T: Rank4Tensor) -> np.ndarray:
    """``G_ij = sum_{klm} g_iklm g_jklm``."""
    g = T.entries
    if not T.symbolic:
        return np.einsum("iklm,jklm->ij", g, g)
    n = T.n
    out = np.empty((n, n), dtype=object)
    for i, j in itertools.product(range(n), repeat=2):
        acc = CouplingPoly()
        for k, l, m in itertools.product(range(n), repeat=3):
            acc = acc + g[i, k, l, m] * g[j, k, l, m]
        out[i, j] = acc
    return out


def _loop_parts(T: Rank4Tensor):
    """The three unsymmetrized sums, each summed over its permutation set."""
    g = T.entries
    n = T.n
    G = _pair_trace(T)
    if not T.symbolic:
        bubble = np.einsum("abmn,mncd->abcd", g, g)
        one = sum(np.transpose(bubble, _inverse(p)) for p in _ONE_LOOP_PAIRINGS)
        # H_mnkl = sum_pq g_mpqk g_npql
        H = np.einsum("mpqk,npql->mnkl", g, g)
        chain = np.einsum("abmn,mncd->abcd", g, H)
        two = sum(np.transpose(chain, _inverse(p)) for p in _TWO_LOOP_PAIRS)
        leg = np.einsum("abcm,md->abcd", g, G)
        legs = sum(np.transpose(leg, _inverse(p)) for p in _leg_perms())
        return one, two, legs

    H = np.empty((n,) * 4, dtype=object)
    for m, nn, k, l in itertools.product(range(n), repeat=4):
        acc = CouplingPoly()
        for p, q in itertools.product(range(n), repeat=2):
            acc = acc + g[m, p, q, k] * g[nn, p, q, l]
        H[m, nn, k, l] = acc
    one = np.empty((n,) * 4, dtype=object)
    two = np.empty((n,) * 4, dtype=object)
    legs = np.empty((n,) * 4, dtype=object)
    for ext in itertools.product(range(n), repeat=4):
        acc = CouplingPoly()
        for a, b, c, d in _ONE_LOOP_PAIRINGS:
            for m, nn in itertools.product(range(n), repeat=2):
                acc = acc + g[ext[a], ext[b], m, nn] * g[m, nn, ext[c], ext[d]]
        one[ext] = acc
        acc = CouplingPoly()
        for a, b, c, d in _TWO_LOOP_PAIRS:
            for m, nn in itertools.product(range(n), repeat=2):
                acc = acc + g[ext[a], ext[b], m, nn] * H[m, nn, ext[c], ext[d]]
        two[ext] = acc
        acc = CouplingPoly()
        for s in range(4):
            rest = tuple(ext[x] for x in range(4) if x != s)
            for m in range(n):
                acc = acc + g[rest + (m,)] * G[m, ext[s]]
        legs[ext] = acc
    return one, two, legs


def _leg_perms():
    # leg s is the one carrying the self-energy insertion
    return tuple(tuple(x for x in range(4) if x != s) + (s,) for s in range(4))


def _inverse(p):
    inv = [0] * 4
    for pos, src in enumerate(p):
        inv[src] = pos
    return tuple(inv)


def beta_tensor(gt: Rank4Tensor, eps=None, check_symmetry: bool = True) -> Rank4Tensor:
    """Two-loop beta tensor of ``gt``.

    Without ``eps`` only the loop part is returned (the ``-eps g`` term is
    linear and is kept outside the coupling polynomials).  With ``eps`` the
    full tensor ``-eps g + loops`` is returned.
    """
    if check_symmetry and not gt.is_symmetric(tol=1e-12):
        raise AsymmetricTensorError("beta_tensor needs a fully symmetric coupling tensor")
    one, two, legs = _loop_parts(gt)
    half, quarter, w = Fraction(1, 2), Fraction(-1, 4), Fraction(1, 48)
    if gt.symbolic:
        out = np.empty(one.shape, dtype=object)
        for idx in np.ndindex(one.shape):
            out[idx] = one[idx] * ExactScalar(half) + two[idx] * ExactScalar(quarter) + legs[idx] * ExactScalar(w)
    else:
        out = 0.5 * one - 0.25 * two + legs / 48.0
    res = Rank4Tensor(out)
    if eps is not None:
        res = res + gt.scale(-eps if not isinstance(eps, Fraction) else ExactScalar(-eps))
    return res


def _proportional_to_identity(G: np.ndarray, symbolic: bool, tol: float = 1e-12):
    n = G.shape[0]
    diag = G[0, 0]
    for i, j in itertools.product(range(n), repeat=2):
        target = diag if i == j else (CouplingPoly() if symbolic else 0)
        if symbolic:
            ok = G[i, j] == target
        else:
            ok = abs(G[i, j] - target) <= tol * max(1.0, abs(diag))
        if not ok:
            raise ArithmeticError(f"two-point structure is not proportional to delta_ij at ({i},{j})")
    return diag


def eta_tensor(gt: Rank4Tensor):
    """Field anomalous dimension ``(1/24) sum g_iklm g_jklm`` as a scalar."""
    G = _pair_trace(gt)
    diag = _proportional_to_identity(G, gt.symbolic)
    return diag * ExactScalar(Fraction(1, 24)) if gt.symbolic else diag / 24.0


def eta2_tensor(gt: Rank4Tensor):
    """Mass-insertion anomalous dimension.

    ``-(1/2) sum_k g_ijkk + (5/24) sum g_iklm g_jklm``, returned as a scalar.
    """
    g = gt.entries
    n = gt.n
    G = _pair_trace(gt)
    out = np.empty((n, n), dtype=object if gt.symbolic else complex)
    for i, j in itertools.product(range(n), repeat=2):
        tr = sum((g[i, j, k, k] for k in range(n)), _ring_zero(gt))
        if gt.symbolic:
            out[i, j] = tr * ExactScalar(Fraction(-1, 2)) + G[i, j] * ExactScalar(Fraction(5, 24))
        else:
            out[i, j] = -0.5 * tr + 5.0 / 24.0 * G[i, j]
    return _proportional_to_identity(out, gt.symbolic)


def project_basis(T: Rank4Tensor) -> BasisProjection:
    """Read off ``(p1, p2, p3)`` with ``T = p1 S + p2 F + i p3 W``.

    Uses the entries (1111), (1122), (1112) and then checks the
    reconstruction against all 16 entries.
    """
    if T.n != 2:
        raise ValueError("projection onto S, F, W needs n = 2")
    e = T.entries
    if T.symbolic:
        p1 = e[0, 0, 1, 1] * ExactScalar(3)
        p2 = e[0, 0, 0, 0] - p1
        p3 = e[0, 0, 0, 1] * (ExactScalar(4) / I)
        S, F, W = (basis_tensor(w, 2).entries for w in "SFW")
        ok = all(
            e[idx] == S[idx] * p1 + F[idx] * p2 + W[idx] * p3 * I for idx in np.ndindex(e.shape)
        )
    else:
        p1 = 3 * e[0, 0, 1, 1]
        p2 = e[0, 0, 0, 0] - p1
        p3 = -4j * e[0, 0, 0, 1]
        recon = p1 * numeric_basis("S") + p2 * numeric_basis("F") + 1j * p3 * numeric_basis("W")
        scale = max(1.0, float(np.max(np.abs(e))))
        ok = bool(np.max(np.abs(recon - e)) <= 1e-12 * scale)
    return BasisProjection(p1, p2, p3, ok)


def derive_rg_functions() -> dict[str, CouplingPoly]:
    """Loop parts of the three beta functions plus eta and eta2.

    The ``-eps g_a`` terms are not included in ``beta1..beta3``.
    """
    gt = assemble_coupling(symbolic=True)
    proj = project_basis(beta_tensor(gt))
    if not proj.residual_zero:
        raise ArithmeticError("beta tensor left the span of S, F, iW")
    return {
        "beta1": proj.p1,
        "beta2": proj.p2,
        "beta3": proj.p3,
        "eta": eta_tensor(gt),
        "eta2": eta2_tensor(gt),
    }
