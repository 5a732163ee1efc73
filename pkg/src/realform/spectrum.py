"""Eigenvalue classification for conjugacy into PGL(k,R).

A spectrum is compatible when some real line ``l`` through the origin
(angle theta in [0, pi)) has every eigenvalue either on ``l`` or
matched with a partner by reflection about ``l``.  On-line eigenvalues
and their eigendirections are called hyperbolic, reflected pairs
elliptic.  The admissible angles form a finite set: each is either the
argument of an eigenvalue mod pi or the half-sum of two arguments mod
pi, so candidates are enumerated and validated exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import RepeatedEigenvalues
from .projlin import EigenSystem

HYPERBOLIC = "hyperbolic"
ELLIPTIC = "elliptic"

KIND_HYPERBOLIC = "strictly_hyperbolic"
KIND_ELLIPTIC = "strictly_elliptic"
KIND_MIXED = "mixed"
KIND_INCOMPATIBLE = "incompatible"


def _mod_pi(x: float) -> float:
    y = math.fmod(x, math.pi)
    if y < 0:
        y += math.pi
    return y


def _circ_dist_pi(a: float, b: float) -> float:
    """Distance between angles taken modulo pi."""
    d = abs(_mod_pi(a) - _mod_pi(b))
    return min(d, math.pi - d)


@dataclass(frozen=True)
class Labeling:
    """Hyperbolic/elliptic assignment valid for one admissible line."""

    theta: float
    labels: tuple          # HYPERBOLIC / ELLIPTIC per input index
    pairing: tuple         # sorted (i, j) index pairs for elliptic partners


@dataclass(frozen=True)
class SpectralClass:
    compatible: bool
    line_angles: tuple     # admissible theta values, ascending in [0, pi)
    labelings: tuple       # one Labeling per admissible angle
    generic: bool
    kind: str

    @property
    def labels(self):
        return self.labelings[0].labels if self.labelings else ()

    @property
    def pairing(self):
        return self.labelings[0].pairing if self.labelings else ()


def _validate_theta(lams, theta, cfg):
    """Labeling for a candidate angle, or None if it does not work."""
    k = len(lams)
    on_line = [_circ_dist_pi(np.angle(lams[i]), theta) < cfg.angle_tol for i in range(k)]
    labels = [HYPERBOLIC if on_line[i] else None for i in range(k)]
    pairing = []
    reflect = np.exp(2j * theta) * np.conj(lams)
    taken = [False] * k
    for i in range(k):
        if on_line[i] or taken[i]:
            continue
        best_j, best_err = None, np.inf
        for j in range(k):
            if j == i or taken[j] or on_line[j]:
                continue
            err = abs(lams[j] - reflect[i]) / max(abs(lams[i]), abs(lams[j]))
            if err < best_err:
                best_j, best_err = j, err
        if best_j is None or best_err >= cfg.angle_tol:
            return None
        taken[i] = taken[best_j] = True
        labels[i] = labels[best_j] = ELLIPTIC
        pairing.append((min(i, best_j), max(i, best_j)))
    return Labeling(theta=theta, labels=tuple(labels), pairing=tuple(sorted(pairing)))


def classify_eigenvalues(lams, cfg: Tolerances = DEFAULT_TOLERANCES) -> SpectralClass:
    """Classify a spectrum: admissible lines, labels, pairing, genericity.

    Raises RepeatedEigenvalues when two inputs are projectively equal.
    """
    lams = np.asarray(lams, dtype=complex).ravel()
    k = lams.size
    for i in range(k):
        for j in range(i + 1, k):
            if abs(lams[i] - lams[j]) / max(abs(lams[i]), abs(lams[j])) <= cfg.sep_tol:
                raise RepeatedEigenvalues(f"eigenvalues {lams[i]:.6g}, {lams[j]:.6g} coincide")

    args = np.angle(lams)
    candidates = [_mod_pi(a) for a in args]
    for i in range(k):
        for j in range(i + 1, k):
            candidates.append(_mod_pi((args[i] + args[j]) / 2.0))
    candidates.sort()

    labelings = []
    for theta in candidates:
        if any(_circ_dist_pi(theta, seen.theta) < cfg.angle_tol for seen in labelings):
            continue
        lab = _validate_theta(lams, theta, cfg)
        if lab is not None:
            labelings.append(lab)
    labelings.sort(key=lambda lab: lab.theta)

    compatible = bool(labelings)
    # A pair on a common line with equal magnitudes (i.e. lam_j = -lam_i)
    # is both hyperbolic for one line and elliptic for another: not generic.
    forbidden_pair = any(
        abs(lams[i] + lams[j]) <= cfg.sep_tol * max(abs(lams[i]), abs(lams[j]))
        for i in range(k)
        for j in range(i + 1, k)
    )
    generic = bool(compatible and len(labelings) == 1 and not forbidden_pair)

    if not compatible:
        kind = KIND_INCOMPATIBLE
    elif any(all(l == HYPERBOLIC for l in lab.labels) for lab in labelings):
        kind = KIND_HYPERBOLIC
    elif any(all(l == ELLIPTIC for l in lab.labels) for lab in labelings):
        kind = KIND_ELLIPTIC
    else:
        kind = KIND_MIXED

    return SpectralClass(
        compatible=compatible,
        line_angles=tuple(lab.theta for lab in labelings),
        labelings=tuple(labelings),
        generic=generic,
        kind=kind,
    )


def type_transformation(es: EigenSystem, cfg: Tolerances = DEFAULT_TOLERANCES) -> SpectralClass:
    """Spectral class of a transformation; labels index its eigendirections."""
    return classify_eigenvalues(es.eigenvalues, cfg)
