"""Command-line interface.

Subcommands: classify, decide, coords, generate, verify.  JSON is the
only wire format; complex numbers are always [re, im] pairs.  Output is
deterministic: sorted keys, floats rounded to 17 significant digits.

Exit codes: 0 yes/ok, 1 no, 2 parse or spec error, 3 spectral
precondition failure, 4 genericity failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .coords import fg_cross_ratio, triple_ratio_set
from .decide import FORCED_METHODS, decide, prepare, verify_certificate
from .errors import (
    GenericityViolation,
    IncompatibleEigenvalues,
    InfeasibleSpec,
    NonDiagonalizable,
    RealformError,
    RepeatedEigenvalues,
    SharedEigendirections,
    SpectralPreconditionError,
)
from .flags import flag_pair_from_eigensystem, quotient_cp1
from .oracle import InstanceSpec, generate
from .projlin import ProjPoint
from .spectrum import KIND_HYPERBOLIC

EXIT_YES = 0
EXIT_NO = 1
EXIT_PARSE = 2
EXIT_SPECTRAL = 3
EXIT_GENERICITY = 4

_SPECTRAL_ERRORS = (RepeatedEigenvalues, NonDiagonalizable, IncompatibleEigenvalues,
                    SpectralPreconditionError)
_GENERICITY_ERRORS = (GenericityViolation, SharedEigendirections)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _round17(x: float) -> float:
    return float(f"{float(x):.17g}")


def _c2pair(z) -> list:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        return None
    return [_round17(z.real), _round17(z.imag)]


def _matrix_out(m) -> list:
    return [[_c2pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _pair2c(v):
    if (not isinstance(v, (list, tuple))) or len(v) != 2:
        raise CliError("complex numbers must be [re, im] pairs", EXIT_PARSE)
    re, im = v
    if not all(isinstance(x, (int, float)) for x in (re, im)):
        raise CliError("complex number components must be numbers", EXIT_PARSE)
    z = complex(float(re), float(im))
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise CliError("non-finite number in input", EXIT_PARSE)
    return z


def _load_document(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read input document: {exc}", EXIT_PARSE)
    if not isinstance(doc, dict) or "k" not in doc or "matrices" not in doc:
        raise CliError("input document needs fields 'k' and 'matrices'", EXIT_PARSE)
    k = doc["k"]
    if not isinstance(k, int):
        raise CliError("'k' must be an integer", EXIT_PARSE)
    mats = []
    for idx, m in enumerate(doc["matrices"]):
        if len(m) != k or any(len(row) != k for row in m):
            raise CliError(f"matrix {idx} is not {k}x{k}", EXIT_PARSE)
        mats.append(np.array([[_pair2c(v) for v in row] for row in m]))
    if not mats:
        raise CliError("no matrices in input", EXIT_PARSE)
    return k, mats, doc.get("options", {})


def _tolerances(options, args) -> Tolerances:
    cfg = DEFAULT_TOLERANCES
    file_tols = options.get("tolerances", {}) if isinstance(options, dict) else {}
    if file_tols:
        try:
            cfg = cfg.override(**{k: float(v) for k, v in file_tols.items()})
        except (ValueError, TypeError) as exc:
            raise CliError(f"bad tolerance override in document: {exc}", EXIT_PARSE)
    flag_tols = {}
    for name in ("deg_tol", "eig_tol", "sep_tol", "angle_tol", "rank_tol", "cr_tol", "cert_tol"):
        val = getattr(args, name, None)
        if val is not None:
            flag_tols[name] = val
    if flag_tols:
        cfg = cfg.override(**flag_tols)
    return cfg


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2))
    sys.stdout.write("\n")


def _add_tol_flags(p):
    for name in ("deg-tol", "eig-tol", "sep-tol", "angle-tol", "rank-tol", "cr-tol", "cert-tol"):
        p.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float, default=None)


def cmd_classify(args) -> int:
    k, mats, options = _load_document(args.input)
    cfg = _tolerances(options, args)
    try:
        reports = []
        for idx, m in enumerate(mats):
            try:
                infos = prepare([m], cfg)
            except IncompatibleEigenvalues:
                from .projlin import eig
                from .spectrum import type_transformation
                sc = type_transformation(eig(m, cfg), cfg)
                reports.append(_classification(idx, sc))
                continue
            reports.append(_classification(idx, infos[0].sclass))
    except _SPECTRAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    _emit({"k": k, "classifications": reports})
    return EXIT_YES


def _classification(idx, sc):
    return {
        "index": idx,
        "compatible": bool(sc.compatible),
        "kind": sc.kind,
        "line_angles": [_round17(t) for t in sc.line_angles],
        "labelings": [
            {
                "theta": _round17(lab.theta),
                "labels": list(lab.labels),
                "pairing": [list(p) for p in lab.pairing],
            }
            for lab in sc.labelings
        ],
        "generic": bool(sc.generic),
    }


def cmd_decide(args) -> int:
    k, mats, options = _load_document(args.input)
    cfg = _tolerances(options, args)
    try:
        verdict, cert = decide(mats, cfg, method=args.method)
    except _SPECTRAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except _GENERICITY_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    _emit(_decision_doc(verdict, cert))
    return EXIT_YES if verdict.answer == "yes" else EXIT_NO


def _decision_doc(verdict, cert):
    return {
        "verdict": verdict.answer,
        "method": verdict.method,
        "multiplicity": verdict.multiplicity.value if verdict.multiplicity else None,
        "residual": _round17(cert.residual) if cert.residual is not None else None,
        "gamma": _matrix_out(cert.gamma) if cert.gamma is not None else None,
        "conditions": [
            {
                "name": c.name,
                "value": _c2pair(c.value),
                "requirement": c.requirement,
                "pass": bool(c.passed),
            }
            for c in cert.conditions
        ],
        "diagnostics": list(cert.diagnostics),
    }


def cmd_coords(args) -> int:
    k, mats, options = _load_document(args.input)
    cfg = _tolerances(options, args)
    try:
        infos = prepare(mats, cfg)
        doc = _coords_doc(infos, cfg)
    except _SPECTRAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except _GENERICITY_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    _emit(doc)
    return EXIT_YES


def _coords_doc(infos, cfg):
    from .coords import config_cross_ratio
    from .flags import generic_position

    hyp = [i for i in infos if i.kind == KIND_HYPERBOLIC]
    if len(hyp) < 2:
        raise GenericityViolation("coordinate dump needs two strictly hyperbolic generators")
    g, h = hyp[0], hyp[1]

    fg_ = flag_pair_from_eigensystem(g.es, cfg=cfg)
    fh = flag_pair_from_eigensystem(h.es, cfg=cfg)
    a, c = fg_.flag, fg_.reverse
    b, d = fh.flag, fh.reverse
    if not generic_position([a, b, c, d], cfg):
        raise GenericityViolation("base flags are not in generic position")
    d1 = ProjPoint(d.vectors[0])

    cross_out = []

    def cr_rows(flag, owner, tag):
        line = ProjPoint(flag.vectors[0])
        for i in range(a.dim - 1):
            config = quotient_cp1(a, line, c, d1, i, a.dim - 2 - i, cfg)
            primary = config_cross_ratio(config).value
            fg_val = fg_cross_ratio(config.a, config.b, config.c, config.d).value
            cross_out.append({
                "generator": owner,
                "flag": tag,
                "i": i,
                "j": a.dim - 2 - i,
                "value": _c2pair(primary),
                "fg_value": _c2pair(fg_val),
            })

    triple_out = []

    def tr_rows(x, y, z, owner, tag):
        for tr in triple_ratio_set(x, y, z, cfg):
            p, q, r = tr.provenance
            triple_out.append({
                "generator": owner,
                "flag": tag,
                "i": p,
                "j": q,
                "l": r,
                "value": _c2pair(tr.value),
            })

    cr_rows(b, h.index, "B")
    tr_rows(a, b, c, h.index, "B")
    tr_rows(a, c, d, h.index, "D")
    for info in infos:
        if info is g or info is h:
            continue
        fp = flag_pair_from_eigensystem(info.es, cfg=cfg)
        for tag, f in (("beta", fp.flag), ("beta_prime", fp.reverse)):
            if not generic_position([a, f, c, d], cfg):
                raise GenericityViolation(f"generator {info.index}: flags not in generic position")
            cr_rows(f, info.index, tag)
            tr_rows(a, f, c, info.index, tag)
    return {"k": a.dim, "cross_ratios": cross_out, "triple_ratios": triple_out}


def cmd_generate(args) -> int:
    seed = args.seed
    env_seed = os.environ.get("REALFORM_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise CliError("REALFORM_SEED must be an integer", EXIT_PARSE)
    mix = {}
    if args.hyperbolic:
        mix["hyperbolic"] = args.hyperbolic
    if args.elliptic:
        mix["elliptic"] = args.elliptic
    if args.mixed:
        mix["mixed"] = args.mixed
    if not mix:
        mix["hyperbolic"] = args.generators
    perturbation = None
    if args.perturb is not None:
        try:
            gen_s, mag_s = args.perturb.split(":")
            perturbation = (int(gen_s), float(mag_s))
        except ValueError:
            raise CliError("--perturb takes GENERATOR:MAGNITUDE", EXIT_PARSE)
    spec = InstanceSpec(
        k=args.k,
        n_generators=args.generators,
        type_mix=mix,
        seed=seed,
        scramble="random_gamma" if not args.no_scramble else "none",
        perturbation=perturbation,
    )
    try:
        inst = generate(spec)
    except InfeasibleSpec as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    doc = {
        "k": spec.k,
        "matrices": [_matrix_out(m) for m in inst.matrices],
        "options": {},
    }
    sidecar = {
        "answer": inst.answer,
        "gamma": _matrix_out(inst.gamma) if inst.gamma is not None else None,
        "seed": seed,
    }
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
        with open(args.output + ".truth", "w") as fh:
            json.dump(sidecar, fh, sort_keys=True, indent=2)
            fh.write("\n")
    else:
        _emit({"instance": doc, "truth": sidecar})
    return EXIT_YES


def cmd_verify(args) -> int:
    k, mats, options = _load_document(args.input)
    cfg = _tolerances(options, args)
    try:
        with open(args.gamma) as fh:
            gdoc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read gamma file: {exc}", EXIT_PARSE)
    raw = gdoc.get("gamma", gdoc) if isinstance(gdoc, dict) else gdoc
    try:
        gamma = np.array([[_pair2c(v) for v in row] for row in raw])
    except (TypeError, CliError):
        raise CliError("gamma file must hold a k x k matrix of [re, im] pairs", EXIT_PARSE)
    if gamma.shape != (k, k):
        raise CliError(f"gamma must be {k}x{k}", EXIT_PARSE)
    try:
        residual = verify_certificate(mats, gamma, cfg)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    _emit({"residual": _round17(residual), "cert_tol": _round17(cfg.cert_tol),
           "pass": bool(residual < cfg.cert_tol)})
    return EXIT_YES if residual < cfg.cert_tol else EXIT_NO


def build_parser():
    parser = argparse.ArgumentParser(prog="realform",
                                     description="Simultaneous conjugacy into PGL(k,R)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="spectral classification of each matrix")
    p.add_argument("input")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decide", help="decide conjugacy; exit 0 yes, 1 no")
    p.add_argument("input")
    p.add_argument("--method", choices=list(FORCED_METHODS), default="auto")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("coords", help="dump cross/triple ratio coordinates")
    p.add_argument("input")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("generate", help="generate an instance with known answer")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--hyperbolic", type=int, default=0)
    p.add_argument("--elliptic", type=int, default=0)
    p.add_argument("--mixed", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-scramble", action="store_true")
    p.add_argument("--perturb", default=None, metavar="GENERATOR:MAGNITUDE")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a realifier against the collection")
    p.add_argument("input")
    p.add_argument("--gamma", required=True)
    _add_tol_flags(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except _SPECTRAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except _GENERICITY_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except RealformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
