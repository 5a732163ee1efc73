"""Flags of nested subspaces, genericity predicates, and quotients.

A flag is an ordered spanning list; the j-th subspace is the span of
the first j vectors.  Flag pairs use the reversed ordering.  Quotients
by direct sums of flag parts produce the CP^1 and CP^2 configurations
whose cross ratios and triple ratios are the coordinates of interest.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import GenericityViolation
from .projlin import EigenSystem, ProjPoint


@dataclass(frozen=True)
class Flag:
    """Ordered independent spanning vectors; rows of ``vectors``."""

    vectors: np.ndarray

    @property
    def height(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def reversed(self) -> "Flag":
        return Flag(vectors=self.vectors[::-1].copy())


def make_flag(vectors, cfg: Tolerances = DEFAULT_TOLERANCES) -> Flag:
    rows = []
    for v in vectors:
        a = v.coords if isinstance(v, ProjPoint) else np.asarray(v, dtype=complex).ravel()
        rows.append(a / np.abs(a).max())
    m = np.array(rows)
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= cfg.rank_tol * s[0]:
        raise GenericityViolation("flag spanning vectors are linearly dependent")
    return Flag(vectors=m)


def point_flag(p, cfg: Tolerances = DEFAULT_TOLERANCES) -> Flag:
    """Height-1 flag through a single projective point."""
    return make_flag([p], cfg)


@dataclass(frozen=True)
class FlagPair:
    flag: Flag
    reverse: Flag


def flag_pair_from_eigensystem(es: EigenSystem, order=None,
                               cfg: Tolerances = DEFAULT_TOLERANCES) -> FlagPair:
    """Flags from an eigenbasis in the given index order, and its reverse."""
    k = es.dim
    order = list(range(k)) if order is None else list(order)
    if sorted(order) != list(range(k)):
        raise ValueError("order must be a permutation of the eigendirection indices")
    f = make_flag([es.directions[i] for i in order], cfg)
    return FlagPair(flag=f, reverse=f.reversed())


def _full_rank(rows: np.ndarray, k: int, rank_tol: float) -> bool:
    if rows.shape[0] != k:
        return False
    s = np.linalg.svd(rows, compute_uv=False)
    return bool(s[-1] > rank_tol * s[0])


def generic_position(flags, cfg: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Do all dimension-compatible direct sums of flag parts fill C^k?

    For every composition (i_1, ..., i_m) with sum k and i_j at most
    each flag's height, the stacked leading vectors must have rank k.
    """
    flags = list(flags)
    k = flags[0].dim
    heights = [f.height for f in flags]
    for combo in itertools.product(*(range(h + 1) for h in heights)):
        if sum(combo) != k:
            continue
        rows = np.vstack([f.vectors[:c] for f, c in zip(flags, combo) if c > 0])
        if not _full_rank(rows, k, cfg.rank_tol):
            return False
    return True


def generic_with_point(a: Flag, v, c: Flag, d,
                       cfg: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Genericity of (A, span v, C, span d) with the lines as 1-flags."""
    return generic_position([a, point_flag(v, cfg), c, point_flag(d, cfg)], cfg)


def _complement_basis(rows: np.ndarray, k: int, cfg) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of the row span."""
    if rows.shape[0] == 0:
        return np.eye(k, dtype=complex)
    _, s, vh = np.linalg.svd(np.conj(rows))
    rank = int(np.sum(s > cfg.rank_tol * s[0]))
    if rank != rows.shape[0]:
        raise GenericityViolation("quotient subspace is degenerate")
    return vh[rank:].conj().T


def _project(basis: np.ndarray, v: np.ndarray, cfg, what: str) -> np.ndarray:
    img = basis.conj().T @ v
    if np.linalg.norm(img) <= cfg.rank_tol * np.linalg.norm(v):
        raise GenericityViolation(f"{what} lies in the quotiented subspace")
    return img


@dataclass(frozen=True)
class LineConfig:
    """Four labelled points of CP^1 coming from a quotient."""

    a: ProjPoint
    b: ProjPoint
    c: ProjPoint
    d: ProjPoint
    provenance: tuple | None = None

    @property
    def points(self):
        return (self.a, self.b, self.c, self.d)


def quotient_cp1(a: Flag, b1, c: Flag, d1, i: int, j: int,
                 cfg: Tolerances = DEFAULT_TOLERANCES) -> LineConfig:
    """Project to C^k / (A_i + C_j), a projective line.

    Images: the next step of A, the line b1, the next step of C, the
    line d1.  Requires i + j = k - 2.
    """
    k = a.dim
    if i + j != k - 2 or i < 0 or j < 0:
        raise ValueError("need i + j = k - 2 with i, j >= 0")
    if i + 1 > a.height or j + 1 > c.height:
        raise ValueError("flag heights too small for the requested quotient")
    b1 = b1 if isinstance(b1, ProjPoint) else ProjPoint(b1)
    d1 = d1 if isinstance(d1, ProjPoint) else ProjPoint(d1)
    rows = np.vstack([a.vectors[:i], c.vectors[:j]]) if i + j else np.zeros((0, k), dtype=complex)
    basis = _complement_basis(rows, k, cfg)
    pa = _project(basis, a.vectors[i], cfg, "next A step")
    pc = _project(basis, c.vectors[j], cfg, "next C step")
    pb = _project(basis, b1.coords, cfg, "B line")
    pd = _project(basis, d1.coords, cfg, "D line")
    return LineConfig(
        a=ProjPoint(pa, cfg), b=ProjPoint(pb, cfg), c=ProjPoint(pc, cfg), d=ProjPoint(pd, cfg),
        provenance=(i, j),
    )


def quotient_cp2(a: Flag, b: Flag, c: Flag, i: int, j: int, l: int,
                 cfg: Tolerances = DEFAULT_TOLERANCES):
    """Project to C^k / (A_i + C_j + B_l), a projective plane.

    Returns three (line, plane) pairs as 2-row arrays in quotient
    coordinates: each flag advances by one and two steps over the
    quotiented sum.  Requires i + j + l = k - 3.
    """
    k = a.dim
    if i + j + l != k - 3 or min(i, j, l) < 0:
        raise ValueError("need i + j + l = k - 3 with i, j, l >= 0")
    for f, n in ((a, i), (c, j), (b, l)):
        if n + 2 > f.height:
            raise ValueError("flag height too small for the requested quotient")
    rows = np.vstack([a.vectors[:i], c.vectors[:j], b.vectors[:l]])
    basis = _complement_basis(rows, k, cfg)

    def two_step(f: Flag, n: int, name: str) -> np.ndarray:
        u1 = _project(basis, f.vectors[n], cfg, f"{name} line")
        u2 = basis.conj().T @ f.vectors[n + 1]
        m = np.vstack([u1, u2])
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= cfg.rank_tol * s[0]:
            raise GenericityViolation(f"{name} plane collapses in the quotient")
        return m

    return two_step(a, i, "A"), two_step(b, l, "B"), two_step(c, j, "C")


def build_elliptic_flag(pairs, hyps, cfg: Tolerances = DEFAULT_TOLERANCES) -> Flag:
    """Flag listing elliptic pairs consecutively, then hyperbolic directions.

    ``pairs`` is a list of (p, partner); the spanning order is
    (p1, p1', p2, p2', ..., h1, ..., hn).
    """
    vecs = []
    for p, q in pairs:
        vecs.extend([p, q])
    vecs.extend(hyps)
    return make_flag(vecs, cfg)


def mirrored_pair_flag(pairs, hyps, cfg: Tolerances = DEFAULT_TOLERANCES) -> Flag:
    """Flag placing pair partners symmetrically about the middle.

    Order (p1, p2, ..., pm, h..., pm', ..., p2', p1'), so the reversed
    flag lists the partners: conjugation carries each step of the flag
    to the same step of its reverse.
    """
    front = [p for p, _ in pairs]
    back = [q for _, q in reversed(pairs)]
    return make_flag(front + list(hyps) + back, cfg)
