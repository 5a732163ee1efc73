"""Decision procedures for simultaneous conjugacy into PGL(k,R).

Five routes are implemented and cross-checked:

* ``Dim2Lemmas``    -- cross-ratio conditions on CP^1 fixed points (k = 2);
* ``Dim3FG``        -- flag cross ratios and triple ratios at k = 3,
                       including a synthetic hyperbolic base built from
                       elliptic eigendata when fewer than two strictly
                       hyperbolic generators exist;
* ``DimKFG``        -- the same flag coordinates at general k;
* ``DimKCrossOnly`` -- per-eigendirection cross-ratio conditions against
                       a base flag pair and one reference direction;
* ``DirectConjugation`` -- solve for the conjugation respecting all
                       eigendata; no genericity precondition, always a
                       definite answer.

Every Yes is certified: an explicit realifier gamma is produced and the
maximum imaginary residual of gamma^{-1} M gamma over the collection is
checked against ``cert_tol``.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .coords import (
    arg_sum_is_zero,
    conj_pair_defect,
    conj_product_defect,
    cross_ratio,
    cross_ratio_set,
    in_unit_circle,
    is_real_extended,
    is_real_positive,
    product_in_unit_circle,
    triple_ratio_set,
    unit_product_defect,
)
from .errors import (
    DegenerateFrame,
    DegenerateTriple,
    GenericityViolation,
    IncompatibleEigenvalues,
    NoConjugation,
    NumericalDegeneracy,
    RepeatedEigenvalues,
    SharedEigendirections,
    SpectralPreconditionError,
)
from .flags import (
    flag_pair_from_eigensystem,
    generic_position,
    generic_with_point,
    make_flag,
    mirrored_pair_flag,
    point_flag,
)
from .projlin import (
    ProjPoint,
    canonical_matrix,
    check_matrix,
    eig,
    frame_from_points,
    homography,
    proj_dist,
)
from .rform import (
    Multiplicity,
    conjugation_witness,
    elliptic_pair,
    hyperbolic_datum,
    preserves,
    realifier,
)
from .spectrum import (
    HYPERBOLIC,
    KIND_ELLIPTIC,
    KIND_HYPERBOLIC,
    KIND_INCOMPATIBLE,
    KIND_MIXED,
    type_transformation,
)

METHOD_DIM2 = "Dim2Lemmas"
METHOD_DIM3 = "Dim3FG"
METHOD_FG = "DimKFG"
METHOD_CROSS = "DimKCrossOnly"
METHOD_DIRECT = "DirectConjugation"

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Condition:
    name: str
    value: complex
    requirement: str
    passed: bool


@dataclass
class Certificate:
    gamma: np.ndarray | None = None
    residual: float | None = None
    conditions: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class Verdict:
    answer: str
    multiplicity: Multiplicity | None
    method: str


@dataclass(frozen=True)
class GenInfo:
    """One generator with its eigendata and spectral classification."""

    index: int
    matrix: np.ndarray
    es: object
    sclass: object

    @property
    def kind(self):
        return self.sclass.kind

    @property
    def generic(self):
        return self.sclass.generic

    def labeling(self):
        return self.sclass.labelings[0]

    def hyp_indices(self, labeling=None):
        lab = labeling or self.labeling()
        return [i for i, l in enumerate(lab.labels) if l == HYPERBOLIC]

    def pairs(self, labeling=None):
        lab = labeling or self.labeling()
        return list(lab.pairing)

    def direction(self, i) -> ProjPoint:
        return self.es.directions[i]


def prepare(ms, cfg: Tolerances = DEFAULT_TOLERANCES):
    """Eigendecompose and classify every generator; fail fast on spectra."""
    infos = []
    for idx, m in enumerate(ms):
        try:
            es = eig(m, cfg)
        except RepeatedEigenvalues as exc:
            raise RepeatedEigenvalues(f"matrix {idx}: {exc}") from exc
        sc = type_transformation(es, cfg)
        if sc.kind == KIND_INCOMPATIBLE:
            raise IncompatibleEigenvalues(
                f"matrix {idx}: eigenvalues admit no organizing real line"
            )
        infos.append(GenInfo(index=idx, matrix=es.matrix, es=es, sclass=sc))
    if not infos:
        raise ValueError("empty collection")
    k = infos[0].es.dim
    if any(info.es.dim != k for info in infos):
        raise ValueError("matrices have mismatched dimensions")
    return infos


def _eigendata(info: GenInfo, labeling=None):
    lab = labeling or info.labeling()
    data = []
    paired = {i for p in lab.pairing for i in p}
    for i, j in lab.pairing:
        data.extend(elliptic_pair(info.direction(i), info.direction(j)))
    for i, l in enumerate(lab.labels):
        if l == HYPERBOLIC and i not in paired:
            data.append(hyperbolic_datum(info.direction(i)))
    return data


def verify_certificate(ms, gamma, cfg: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Max imaginary residual of gamma^{-1} M gamma after optimal rephasing.

    The phase minimizing the squared imaginary part has the closed form
    exp(-i arg(sum of squared entries) / 2); the residual is relative to
    the largest entry.  Independent of how gamma was produced.
    """
    gamma = check_matrix(gamma, cfg)
    inv = np.linalg.inv(gamma)
    worst = 0.0
    for m in ms:
        n = inv @ np.asarray(m, dtype=complex) @ gamma
        w = np.sum(n * n)
        s = np.exp(-0.5j * np.angle(w)) if abs(w) > 0 else 1.0
        r = s * n
        worst = max(worst, float(np.max(np.abs(r.imag)) / np.max(np.abs(r))))
    return worst


def _certify_yes(infos, cfg, method, conditions, diagnostics):
    """Build gamma from the eigendata conjugation and verify it."""
    data = []
    for info in infos:
        data.extend(_eigendata(info))
    conj, unique = conjugation_witness(data, cfg)
    gamma = canonical_matrix(realifier(conj, cfg))
    residual = verify_certificate([info.matrix for info in infos], gamma, cfg)
    if residual >= cfg.cert_tol:
        raise NumericalDegeneracy(f"certificate residual {residual:.3g} above cert_tol")
    cert = Certificate(gamma=gamma, residual=residual, conditions=conditions,
                       diagnostics=list(diagnostics))
    mult = Multiplicity.ONE if unique else Multiplicity.INFINITE
    return Verdict(answer=YES, multiplicity=mult, method=method), cert


def _no_verdict(method, conditions, diagnostics):
    cert = Certificate(gamma=None, residual=None, conditions=conditions,
                       diagnostics=list(diagnostics))
    return Verdict(answer=NO, multiplicity=Multiplicity.ZERO, method=method), cert


def _require_generic(infos):
    bad = [info.index for info in infos if not info.generic]
    if bad:
        raise SpectralPreconditionError(
            f"generators {bad} have non-generic eigenvalues; coordinate methods need a unique labeling"
        )


# ---------------------------------------------------------------------------
# dimension 2

def _cp1_dirs(info: GenInfo):
    return info.es.directions[0], info.es.directions[1]


def _pick_reference(base_dirs, other: GenInfo, cfg):
    """First eigendirection of ``other`` distinct from all base directions."""
    for d in other.es.directions:
        if all(proj_dist(d, b) > cfg.sep_tol for b in base_dirs):
            return d
    return None


def _first_valid_pair(cands, cfg):
    for a, b in itertools.combinations(cands, 2):
        if _pick_reference(_cp1_dirs(a), b, cfg) is not None:
            return a, b
    return None


def decide_pgl2(ms, cfg: Tolerances = DEFAULT_TOLERANCES, infos=None):
    """Cross-ratio decision on CP^1 fixed-point configurations."""
    infos = prepare(ms, cfg) if infos is None else infos
    if infos[0].es.dim != 2:
        raise SpectralPreconditionError("this method needs 2x2 input")
    _require_generic(infos)
    if len(infos) == 1:
        return _certify_yes(infos, cfg, METHOD_DIM2, [], ["single compatible generator"])

    hyp = [i for i in infos if i.kind == KIND_HYPERBOLIC]
    ell = [i for i in infos if i.kind == KIND_ELLIPTIC]
    conditions = []
    tol = cfg.cr_tol

    def record(name, value, requirement, passed):
        conditions.append(Condition(name=name, value=value, requirement=requirement, passed=passed))
        return passed

    def crval(cr):
        return complex(np.inf) if cr.infinite else cr.value

    hyp_base = _first_valid_pair(hyp, cfg) if len(hyp) >= 2 else None
    ell_base = _first_valid_pair(ell, cfg) if len(ell) >= 2 else None

    if hyp_base is not None:
        h1, h2 = hyp_base
        h1m, h1p = _cp1_dirs(h1)
        ref = _pick_reference((h1m, h1p), h2, cfg)
        h2m, h2p = _cp1_dirs(h2)
        ok = True
        cr = cross_ratio(h1m, h2m, h1p, h2p)
        ok &= record(f"[H{h1.index},H{h2.index}]", crval(cr), "extended real",
                     is_real_extended(cr, tol))
        for other in infos:
            if other is h1 or other is h2:
                continue
            om, op = _cp1_dirs(other)
            if other.kind == KIND_HYPERBOLIC:
                for tag, dpt in (("-", om), ("+", op)):
                    cr = cross_ratio(h1m, dpt, h1p, ref)
                    ok &= record(f"[h{h1.index}-,h{other.index}{tag},h{h1.index}+,ref]",
                                 crval(cr), "extended real", is_real_extended(cr, tol))
            else:
                crm = cross_ratio(h1m, om, h1p, ref)
                crp = cross_ratio(h1m, op, h1p, ref)
                defect = conj_pair_defect(crm, crp)
                ok &= record(f"[h{h1.index}-,e{other.index}±,h{h1.index}+,ref] pair",
                             complex(defect), "conjugate pair", defect <= tol)
        if ok:
            return _certify_yes(infos, cfg, METHOD_DIM2, conditions, [])
        return _no_verdict(METHOD_DIM2, conditions, [])

    if ell_base is not None:
        e1, e2 = ell_base
        e1m, e1p = _cp1_dirs(e1)
        e2m, e2p = _cp1_dirs(e2)
        ok = True
        cr = cross_ratio(e1m, e2m, e1p, e2p)
        ok &= record(f"[E{e1.index},E{e2.index}]", crval(cr), "positive real",
                     is_real_positive(cr, tol))
        for other in infos:
            if other is e1 or other is e2:
                continue
            om, op = _cp1_dirs(other)
            if other.kind == KIND_ELLIPTIC:
                for base in (e1, e2):
                    bm, bp = _cp1_dirs(base)
                    cr = cross_ratio(bm, om, bp, op)
                    ok &= record(f"[E{base.index},E{other.index}]", crval(cr), "positive real",
                                 is_real_positive(cr, tol))
            else:
                for tag, dpt in (("-", om), ("+", op)):
                    c1 = cross_ratio(e1m, dpt, e1p, e2m)
                    c2 = cross_ratio(e1m, dpt, e1p, e2p)
                    passed = product_in_unit_circle(c1, c2, tol)
                    if c1.infinite or c2.infinite:
                        val = complex(np.inf)
                    else:
                        val = c1.value * c2.value
                    ok &= record(f"[e{e1.index}-,h{other.index}{tag},e{e1.index}+,e{e2.index}∓] product",
                                 val, "unit circle", passed)
        if ok:
            return _certify_yes(infos, cfg, METHOD_DIM2, conditions, [])
        return _no_verdict(METHOD_DIM2, conditions, [])

    if len(hyp) == 1 and len(ell) == 1 and len(infos) == 2:
        h, e = hyp[0], ell[0]
        hm, hp = _cp1_dirs(h)
        em, ep = _cp1_dirs(e)
        cr = cross_ratio(hm, em, hp, ep)
        ok = record(f"[h{h.index}-,e{e.index}-,h{h.index}+,e{e.index}+]", crval(cr),
                    "unit circle", in_unit_circle(cr, tol))
        if ok:
            return _certify_yes(infos, cfg, METHOD_DIM2, conditions, [])
        return _no_verdict(METHOD_DIM2, conditions, [])

    raise SharedEigendirections("no base pair with distinct eigendirection sets")


def condition_functions_pgl2(ms, cfg: Tolerances = DEFAULT_TOLERANCES):
    """The 2n-3 condition-function values for n generators on CP^1.

    Requires the first two generators hyperbolic with distinct
    eigendirection pairs; all values vanish exactly when the collection
    is simultaneously conjugate into PGL(2,R).
    """
    infos = prepare(ms, cfg)
    if infos[0].es.dim != 2:
        raise SpectralPreconditionError("condition functions are defined for 2x2 input")
    _require_generic(infos)
    if len(infos) < 2:
        raise SpectralPreconditionError("need at least two generators")
    m1, m2 = infos[0], infos[1]
    if m1.kind != KIND_HYPERBOLIC or m2.kind != KIND_HYPERBOLIC:
        raise SpectralPreconditionError("first two generators must be hyperbolic")
    if _pick_reference(_cp1_dirs(m1), m2, cfg) is None:
        raise SharedEigendirections("first two generators share their eigendirection pair")

    m1m, m1p = _cp1_dirs(m1)
    m2m, m2p = _cp1_dirs(m2)

    def crv(b):
        return cross_ratio(m1m, b, m1p, m2p).value

    z = crv(m2m)
    values = [z - np.conj(z)]
    for info in infos[2:]:
        dm, dp = _cp1_dirs(info)
        zm, zp = crv(dm), crv(dp)
        if info.kind == KIND_HYPERBOLIC:
            values.append(zm - np.conj(zm))
            values.append(zp - np.conj(zp))
        else:
            values.append((zm - np.conj(zm)) - (np.conj(zp) - zp))
            values.append((zm + np.conj(zm)) - (np.conj(zp) + zp))
    return values


# ---------------------------------------------------------------------------
# flag coordinate methods (k >= 3)

_ORDER_TRIES = 12


def _base_orderings(k):
    yield list(range(k)), list(range(k))
    rng = np.random.default_rng(20240501)
    for _ in range(_ORDER_TRIES):
        yield list(rng.permutation(k)), list(rng.permutation(k))


def _mirrored_flags(info: GenInfo, cfg):
    """Flag pair for a generator with at most one hyperbolic direction.

    Pairs sit symmetrically about the middle so the reversed flag lists
    the partners step by step.
    """
    lab = info.labeling()
    pairs = [(info.direction(i), info.direction(j)) for i, j in lab.pairing]
    hyps = [info.direction(i) for i in info.hyp_indices()]
    if len(hyps) > 1:
        raise GenericityViolation(
            f"generator {info.index}: flag coordinates handle at most one hyperbolic direction"
        )
    beta = mirrored_pair_flag(pairs, hyps, cfg)
    return beta, beta.reversed()


def _real_cr_conditions(a, c, d1, line, name, conditions, cfg):
    tol = cfg.cr_tol
    ok = True
    crs = cross_ratio_set(a, line, c, d1, cfg, check_genericity=False)
    for i, cr in enumerate(crs):
        passed = is_real_extended(cr, tol) and not cr.infinite
        conditions.append(Condition(f"{name}[{i}]", complex(np.inf) if cr.infinite else cr.value,
                                    "real", passed))
        ok &= passed
    return ok


def _real_triple_conditions(a, f, c, name, conditions, cfg):
    tol = cfg.cr_tol
    ok = True
    for tr in triple_ratio_set(a, f, c, cfg):
        passed = abs(tr.value.imag) <= tol * (1 + abs(tr.value.real))
        conditions.append(Condition(f"{name}{tr.provenance}", tr.value, "real", passed))
        ok &= passed
    return ok


def _conj_cr_conditions(a, c, d1, line_b, line_p, name, conditions, cfg):
    tol = cfg.cr_tol
    ok = True
    crs_b = cross_ratio_set(a, line_b, c, d1, cfg, check_genericity=False)
    crs_p = cross_ratio_set(a, line_p, c, d1, cfg, check_genericity=False)
    for i, (c1, c2) in enumerate(zip(crs_b, crs_p)):
        defect = conj_pair_defect(c1, c2)
        passed = defect <= tol
        conditions.append(Condition(f"{name}[{i}]", complex(defect), "conjugate pair", passed))
        ok &= passed
    return ok


def _conj_triple_conditions(a, beta, beta_rev, c, name, conditions, cfg):
    tol = cfg.cr_tol
    ok = True
    trs_b = triple_ratio_set(a, beta, c, cfg)
    trs_p = triple_ratio_set(a, beta_rev, c, cfg)
    for t1, t2 in zip(trs_b, trs_p):
        defect = abs(t1.value - np.conj(t2.value)) / max(abs(t1.value), abs(t2.value), 1e-300)
        passed = defect <= tol
        conditions.append(Condition(f"{name}{t1.provenance}", complex(defect), "conjugate pair", passed))
        ok &= passed
    return ok


def _decide_fg_hyperbolic_base(infos, cfg, method):
    hyp = [i for i in infos if i.kind == KIND_HYPERBOLIC]
    if len(hyp) < 2:
        raise GenericityViolation("flag method needs two strictly hyperbolic generators")
    g, h = hyp[0], hyp[1]

    base = None
    for og, oh in _base_orderings(g.es.dim):
        fg_ = flag_pair_from_eigensystem(g.es, og, cfg)
        fh = flag_pair_from_eigensystem(h.es, oh, cfg)
        if generic_position([fg_.flag, fh.flag, fg_.reverse, fh.reverse], cfg):
            base = (fg_, fh)
            break
    if base is None:
        raise GenericityViolation("no eigenbasis ordering puts the base flags in generic position")
    fg_, fh = base
    a, c = fg_.flag, fg_.reverse
    b, d = fh.flag, fh.reverse
    b1 = ProjPoint(b.vectors[0])
    d1 = ProjPoint(d.vectors[0])

    conditions = []
    ok = _real_cr_conditions(a, c, d1, b1, "cr(A,B,C,D)", conditions, cfg)
    ok &= _real_triple_conditions(a, b, c, "r3(A,B,C)", conditions, cfg)
    ok &= _real_triple_conditions(a, c, d, "r3(A,C,D)", conditions, cfg)

    for info in infos:
        if info is g or info is h:
            continue
        if info.kind == KIND_HYPERBOLIC:
            fp = flag_pair_from_eigensystem(info.es, cfg=cfg)
            beta, beta_rev = fp.flag, fp.reverse
        else:
            beta, beta_rev = _mirrored_flags(info, cfg)
        for f in (beta, beta_rev):
            if not generic_position([a, f, c, d], cfg):
                raise GenericityViolation(f"generator {info.index}: flags not in generic position")
        if info.kind == KIND_HYPERBOLIC:
            ok &= _real_cr_conditions(a, c, d1, ProjPoint(beta.vectors[0]),
                                      f"cr(A,b{info.index},C,D)", conditions, cfg)
            ok &= _real_cr_conditions(a, c, d1, ProjPoint(beta_rev.vectors[0]),
                                      f"cr(A,b'{info.index},C,D)", conditions, cfg)
            ok &= _real_triple_conditions(a, beta, c, f"r3(A,b{info.index},C)", conditions, cfg)
            ok &= _real_triple_conditions(a, beta_rev, c, f"r3(A,b'{info.index},C)", conditions, cfg)
        else:
            ok &= _conj_cr_conditions(a, c, d1, ProjPoint(beta.vectors[0]),
                                      ProjPoint(beta_rev.vectors[0]),
                                      f"cr(A,b{info.index},C,D) vs b'", conditions, cfg)
            ok &= _conj_triple_conditions(a, beta, beta_rev, c,
                                          f"r3(A,b{info.index},C) vs b'", conditions, cfg)

    if ok:
        try:
            return _certify_yes(infos, cfg, method, conditions, [])
        except (NoConjugation, NumericalDegeneracy) as exc:
            return _direct_with_note(infos, cfg,
                                     [f"coordinate conditions passed but certification failed: {exc}"])
    return _no_verdict(method, conditions, [])


def _decide_pgl3_synthetic(infos, cfg):
    """Synthetic hyperbolic base at k = 3 built from elliptic eigendata.

    One generator's elliptic pair and hyperbolic direction plus a
    direction of a second generator form a projective frame; mapping it
    to {[i,1,0], [-i,1,0], [0,0,1], [1,1,1]} pins the candidate real
    form, and the remaining checks read as if the base consisted of two
    hyperbolic transformations with standard flags.
    """
    ells = [i for i in infos if i.kind == KIND_MIXED]
    if not ells:
        raise GenericityViolation("synthetic base needs an elliptic generator")
    e1 = ells[0]
    lab = e1.labeling()
    pi, pj = lab.pairing[0]
    p, pp, hdir = e1.direction(pi), e1.direction(pj), e1.direction(e1.hyp_indices()[0])

    fourth = []
    for info in infos:
        if info is e1:
            continue
        if info.kind == KIND_MIXED:
            fourth.append((info, info.hyp_indices()[0]))
        else:
            fourth.extend((info, i) for i in range(info.es.dim))
    if not fourth:
        raise GenericityViolation("synthetic base needs a second generator")

    dst = frame_from_points(
        [ProjPoint([1j, 1, 0]), ProjPoint([-1j, 1, 0]), ProjPoint([0, 0, 1]),
         ProjPoint([1, 1, 1])], cfg)
    gamma0 = provider = q_idx = None
    for info, i in fourth:
        try:
            src = frame_from_points([p, pp, hdir, info.direction(i)], cfg)
        except DegenerateFrame:
            continue
        gamma0, provider, q_idx = homography(src, dst), info, i
        break
    if gamma0 is None:
        raise GenericityViolation("no second-generator direction completes a projective frame")

    eye = np.eye(3, dtype=complex)
    a = make_flag([eye[0], eye[1], eye[2]], cfg)
    c = a.reversed()
    d1 = ProjPoint([1.0, 1.0, 1.0])

    def moved(pt: ProjPoint) -> ProjPoint:
        return ProjPoint(gamma0 @ pt.coords, cfg)

    conditions = []
    diagnostics = ["synthetic hyperbolic base from elliptic eigendata",
                   f"frame generator {e1.index}, fourth point from {provider.index}"]
    ok = True
    for info in infos:
        if info is e1:
            continue
        lab = info.labeling()
        if info.kind == KIND_HYPERBOLIC:
            for i in range(info.es.dim):
                if info is provider and i == q_idx:
                    continue
                v = moved(info.direction(i))
                if not generic_with_point(a, v, c, d1, cfg):
                    raise GenericityViolation(
                        f"generator {info.index}: eigendirection not generic with the synthetic base")
                ok &= _real_cr_conditions(a, c, d1, v, f"cr(A,h{info.index}.{i},C,D)",
                                          conditions, cfg)
        else:
            qi, qj = lab.pairing[0]
            pair_moved = (moved(info.direction(qi)), moved(info.direction(qj)))
            mid = moved(info.direction(info.hyp_indices()[0]))
            for v in pair_moved:
                if not generic_with_point(a, v, c, d1, cfg):
                    raise GenericityViolation(
                        f"generator {info.index}: eigendirection not generic with the synthetic base")
            ok &= _conj_cr_conditions(a, c, d1, pair_moved[0], pair_moved[1],
                                      f"cr(A,b{info.index},C,D) vs b'", conditions, cfg)
            try:
                beta = mirrored_pair_flag([pair_moved], [mid], cfg)
                beta_rev = beta.reversed()
                ok &= _conj_triple_conditions(a, beta, beta_rev, c,
                                              f"r3(A,b{info.index},C) vs b'", conditions, cfg)
            except (GenericityViolation, DegenerateTriple) as exc:
                raise GenericityViolation(
                    f"generator {info.index}: triple ratios degenerate for the synthetic base: {exc}")

    if ok:
        try:
            return _certify_yes(infos, cfg, METHOD_DIM3, conditions, diagnostics)
        except (NoConjugation, NumericalDegeneracy) as exc:
            return _direct_with_note(infos, cfg,
                                     [f"synthetic-base conditions passed but certification failed: {exc}"])
    return _no_verdict(METHOD_DIM3, conditions, diagnostics)


def decide_pgl3(ms, cfg: Tolerances = DEFAULT_TOLERANCES, infos=None):
    """Flag cross-ratio and triple-ratio decision at k = 3."""
    infos = prepare(ms, cfg) if infos is None else infos
    if infos[0].es.dim != 3:
        raise SpectralPreconditionError("this method needs 3x3 input")
    _require_generic(infos)
    if len(infos) == 1:
        return _certify_yes(infos, cfg, METHOD_DIM3, [], ["single compatible generator"])
    hyp = [i for i in infos if i.kind == KIND_HYPERBOLIC]
    if len(hyp) >= 2:
        return _decide_fg_hyperbolic_base(infos, cfg, METHOD_DIM3)
    return _decide_pgl3_synthetic(infos, cfg)


def decide_pglk_fg(ms, cfg: Tolerances = DEFAULT_TOLERANCES, infos=None):
    """Flag cross-ratio and triple-ratio decision at general k >= 3."""
    infos = prepare(ms, cfg) if infos is None else infos
    if infos[0].es.dim < 3:
        raise SpectralPreconditionError("flag coordinates need k >= 3")
    _require_generic(infos)
    if len(infos) == 1:
        return _certify_yes(infos, cfg, METHOD_FG, [], ["single compatible generator"])
    return _decide_fg_hyperbolic_base(infos, cfg, METHOD_FG)


# ---------------------------------------------------------------------------
# cross-ratio-only method

def _cross_only_hyperbolic_conditions(crs, L, prefix, conditions, cfg):
    """Conditions on the cross ratios of one hyperbolic direction.

    The base flag lists L pair-derived directions first, then
    hyperbolic ones; L = 0 is the all-hyperbolic base.  Within the pair
    block the ratios live on the unit circle and their arguments
    telescope to full turns; past it they are real.
    """
    tol = cfg.cr_tol
    k = len(crs) + 1
    ok = True
    for j, cr in enumerate(crs):
        if j < L and j % 2 == 0:
            passed = in_unit_circle(cr, tol)
            conditions.append(Condition(f"{prefix}[{j}]", complex(np.inf) if cr.infinite else cr.value,
                                        "unit circle", passed))
            ok &= passed
        elif j >= L:
            passed = is_real_extended(cr, tol) and not cr.infinite
            conditions.append(Condition(f"{prefix}[{j}]", complex(np.inf) if cr.infinite else cr.value,
                                        "real", passed))
            ok &= passed
    for j in range(0, max(L - 3, 0), 2):
        passed = arg_sum_is_zero([crs[j], crs[j + 1], crs[j + 2]], (1, 2, 1), tol)
        conditions.append(Condition(f"{prefix} argsum[{j},{j+1},{j+2}]", complex(0),
                                    "0 mod 2pi", passed))
        ok &= passed
    if 2 <= L <= k - 1:
        j = L - 2
        passed = arg_sum_is_zero([crs[j], crs[j + 1]], (1, 2), tol)
        conditions.append(Condition(f"{prefix} argsum[{j},{j+1}]", complex(0), "0 mod 2pi", passed))
        ok &= passed
    return ok


def _cross_only_pair_conditions(crs_b, crs_p, L, prefix, conditions, cfg):
    """Conditions tying the cross ratios of an elliptic pair together."""
    tol = cfg.cr_tol
    k = len(crs_b) + 1
    ok = True
    for j in range(k - 1):
        if j < L and j % 2 == 0:
            defect = unit_product_defect(crs_b[j], crs_p[j])
            passed = defect <= tol
            conditions.append(Condition(f"{prefix}[{j}] product", complex(defect), "product == 1", passed))
            ok &= passed
        elif j < L - 2 and j % 2 == 1:
            defect = conj_product_defect(crs_b[j], [crs_p[j - 1], crs_p[j], crs_p[j + 1]])
            passed = defect <= tol
            conditions.append(Condition(f"{prefix}[{j}] triple product", complex(defect),
                                        "conjugate of product", passed))
            ok &= passed
        elif j >= L:
            defect = conj_pair_defect(crs_b[j], crs_p[j])
            passed = defect <= tol
            conditions.append(Condition(f"{prefix}[{j}]", complex(defect), "conjugate pair", passed))
            ok &= passed
    if 2 <= L <= k - 1:
        j = L - 1
        defect = conj_product_defect(crs_p[j], [crs_b[j - 1], crs_b[j]])
        passed = defect <= tol
        conditions.append(Condition(f"{prefix}[{j}] boundary", complex(defect),
                                    "conjugate of product", passed))
        ok &= passed
    return ok


def _cross_only_base_candidates(infos, cfg):
    """Base flag pairs ordered hyperbolic, then elliptic, then mixed."""
    out = []
    for kind in (KIND_HYPERBOLIC, KIND_ELLIPTIC, KIND_MIXED):
        for info in infos:
            if info.kind != kind:
                continue
            lab = info.labeling()
            pairs = [(info.direction(i), info.direction(j)) for i, j in lab.pairing]
            hyps = [info.direction(i) for i in info.hyp_indices()]
            try:
                if kind == KIND_HYPERBOLIC:
                    a = make_flag(list(info.es.directions), cfg)
                    L = 0
                else:
                    a = make_flag([v for pq in pairs for v in pq] + hyps, cfg)
                    L = 2 * len(pairs)
            except GenericityViolation:
                continue
            out.append((info, a, L))
    return out


def decide_pglk_cross_only(ms, cfg: Tolerances = DEFAULT_TOLERANCES, infos=None,
                           confirm_with_direct: bool = True):
    """Per-eigendirection cross-ratio conditions against a base flag pair.

    The base pair comes from one generator's eigenbasis (pairs listed
    consecutively for elliptic/mixed bases) and the reference direction
    is a hyperbolic eigendirection of another generator.  A No from the
    all-hyperbolic base is a failed sufficient condition, so every No is
    confirmed by the direct method before being reported.
    """
    infos = prepare(ms, cfg) if infos is None else infos
    _require_generic(infos)
    if len(infos) == 1:
        return _certify_yes(infos, cfg, METHOD_CROSS, [], ["single compatible generator"])

    for base_info, a, L in _cross_only_base_candidates(infos, cfg):
        c = a.reversed()
        for d_provider in infos:
            if d_provider is base_info:
                continue
            for d_idx in d_provider.hyp_indices():
                d = d_provider.direction(d_idx)
                try:
                    return _cross_only_with_base(infos, base_info, a, c, L, d_provider,
                                                 d_idx, d, cfg, confirm_with_direct)
                except GenericityViolation:
                    continue
    raise GenericityViolation(
        "no base flag pair and reference direction are generic for all eigendirections")


def _cross_only_with_base(infos, base_info, a, c, L, d_provider, d_idx, d, cfg,
                          confirm_with_direct):
    if not generic_position([a, c, point_flag(d, cfg)], cfg):
        raise GenericityViolation("base flags and reference direction are not generic")

    checks = []
    for info in infos:
        if info is base_info:
            continue
        lab = info.labeling()
        for i, j in lab.pairing:
            checks.append((info, "pair", (i, j)))
        for i in info.hyp_indices():
            if info is d_provider and i == d_idx:
                continue
            checks.append((info, "hyp", i))

    for info, kind, idx in checks:
        dirs = [idx] if kind == "hyp" else list(idx)
        for i in dirs:
            if not generic_with_point(a, info.direction(i), c, d, cfg):
                raise GenericityViolation(
                    f"generator {info.index}: eigendirection {i} not generic with the base")

    conditions = []
    ok = True
    for info, kind, idx in checks:
        if kind == "hyp":
            crs = cross_ratio_set(a, info.direction(idx), c, d, cfg, check_genericity=False)
            ok &= _cross_only_hyperbolic_conditions(crs, L, f"cr(A,h{info.index}.{idx},C,d)",
                                                    conditions, cfg)
        else:
            i, j = idx
            crs_b = cross_ratio_set(a, info.direction(i), c, d, cfg, check_genericity=False)
            crs_p = cross_ratio_set(a, info.direction(j), c, d, cfg, check_genericity=False)
            ok &= _cross_only_pair_conditions(crs_b, crs_p, L, f"cr(A,e{info.index}.{i}/{j},C,d)",
                                              conditions, cfg)

    diagnostics = [f"base generator {base_info.index}, reference direction from {d_provider.index}"]
    if ok:
        try:
            return _certify_yes(infos, cfg, METHOD_CROSS, conditions, diagnostics)
        except (NoConjugation, NumericalDegeneracy) as exc:
            return _direct_with_note(infos, cfg,
                                     [f"cross-only conditions passed but certification failed: {exc}"])
    if confirm_with_direct:
        verdict, cert = decide_direct(None, cfg, infos=infos)
        if verdict.answer == YES:
            cert.diagnostics.append("cross-only conditions failed but the direct method found a form")
            return verdict, cert
        diagnostics.append("No confirmed by the direct method")
    return _no_verdict(METHOD_CROSS, conditions, diagnostics)


# ---------------------------------------------------------------------------
# direct method

_MAX_LABELINGS = 128


def decide_direct(ms, cfg: Tolerances = DEFAULT_TOLERANCES, infos=None):
    """Solve for a common conjugation from the eigendata directly.

    No genericity precondition; always Yes or No.  Non-generic
    generators contribute one labeling per admissible line and all
    combinations are tried.
    """
    infos = prepare(ms, cfg) if infos is None else infos
    options = [info.sclass.labelings for info in infos]
    total = 1
    for opt in options:
        total *= len(opt)
    if total > _MAX_LABELINGS:
        raise NumericalDegeneracy(f"{total} labeling combinations exceed the search cap")

    tol = max(1e-6, cfg.cert_tol)
    last_records = []
    for combo in itertools.product(*options):
        data = []
        for info, lab in zip(infos, combo):
            data.extend(_eigendata(info, lab))
        try:
            conj, unique = conjugation_witness(data, cfg)
        except NoConjugation:
            continue
        records = []
        all_ok = True
        for info in infos:
            good = preserves(info.matrix, conj, tol)
            records.append(Condition(f"preserves(M{info.index})", complex(0 if good else 1),
                                     "commutes with conjugation", good))
            all_ok &= good
        if not all_ok:
            last_records = records
            continue
        gamma = canonical_matrix(realifier(conj, cfg))
        residual = verify_certificate([i.matrix for i in infos], gamma, cfg)
        cert = Certificate(gamma=gamma, residual=residual, conditions=records, diagnostics=[])
        mult = Multiplicity.ONE if unique else Multiplicity.INFINITE
        return Verdict(answer=YES, multiplicity=mult, method=METHOD_DIRECT), cert
    return _no_verdict(METHOD_DIRECT, last_records, ["no labeling admits a common real form"])


def _direct_with_note(infos, cfg, notes):
    verdict, cert = decide_direct(None, cfg, infos=infos)
    cert.diagnostics.extend(notes)
    return verdict, cert


# ---------------------------------------------------------------------------
# dispatch

FORCED_METHODS = ("auto", "dim2", "dim3", "fg", "cross", "direct")


def decide(ms, cfg: Tolerances = DEFAULT_TOLERANCES, method: str = "auto"):
    """Decide simultaneous conjugacy into PGL(k,R) with a certificate.

    ``method`` forces one route ("dim2", "dim3", "fg", "cross",
    "direct"); "auto" cascades through the coordinate methods of the
    right dimension and falls back to the direct one, recording each
    fallback reason in the certificate diagnostics.
    """
    if method not in FORCED_METHODS:
        raise ValueError(f"unknown method {method!r}")
    infos = prepare(ms, cfg)
    k = infos[0].es.dim

    if method != "auto":
        fn = {
            "dim2": decide_pgl2,
            "dim3": decide_pgl3,
            "fg": decide_pglk_fg,
            "cross": decide_pglk_cross_only,
            "direct": decide_direct,
        }[method]
        return fn(None, cfg, infos=infos)

    notes = []
    chain = []
    if all(info.generic for info in infos):
        if k == 2:
            chain = [("dim2", decide_pgl2)]
        elif k == 3:
            chain = [("dim3", decide_pgl3), ("cross", decide_pglk_cross_only)]
        else:
            chain = [("fg", decide_pglk_fg), ("cross", decide_pglk_cross_only)]
    else:
        notes.append("non-generic eigenvalues present; using the direct method")

    for name, fn in chain:
        try:
            verdict, cert = fn(None, cfg, infos=infos)
            cert.diagnostics = notes + cert.diagnostics
            return verdict, cert
        except (GenericityViolation, SharedEigendirections, SpectralPreconditionError) as exc:
            notes.append(f"{name}: {exc}")
    verdict, cert = decide_direct(None, cfg, infos=infos)
    cert.diagnostics = notes + cert.diagnostics
    return verdict, cert
