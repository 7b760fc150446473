"""Command-line front end: `mubkit {mub gen, mub verify, gauss, envelop, op, selftest}`.

Exit status is 0 exactly when every requested check passes.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, gauss, mub, selftest, su2ops, wigner
from .documents import (
    RunConfig,
    basis_document,
    document_to_csv,
    hadamard_document,
    operator_document,
    read_document,
    report_document,
    write_document,
)
from .errors import DimensionMismatch, MubkitError, ParseError, RangeError

ENVELOP_MAX_TWO_J = 12


def _config(args) -> RunConfig:
    return RunConfig.from_env(
        getattr(args, "tol", None),
        format=getattr(args, "format", "json"),
        exact=getattr(args, "exact", False),
        seed=getattr(args, "seed", RunConfig.seed),
    )


def _out_dir(args) -> Path:
    path = Path(args.output)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_mub_gen(args) -> int:
    cfg = _config(args)
    d = args.dimension
    if d < 1:
        raise RangeError("d must be >= 1")
    space = su2ops.AngularSpace.from_dimension(d)
    out = _out_dir(args)
    ext = cfg.format
    r = args.r
    written = []

    if args.hadamard:
        a_values = range(d) if args.all_a or args.a is None else [args.a]
        for a in a_values:
            doc = hadamard_document(mub.hadamard_matrix(d, a), a, exact=cfg.exact)
            written.append(write_document(doc, out / f"hadamard_d{d}_a{a}.{ext}", ext))
    else:
        if args.complete:
            bases = mub.complete_mub_set(d)
            bases_with_a = [(None, bases[0])] + list(zip(range(d), bases[1:]))
        elif args.all_a:
            bases_with_a = [(a, mub.eigenbasis(space, r, a)) for a in range(d)]
        else:
            a = 0 if args.a is None else args.a
            bases_with_a = [(a, mub.eigenbasis(space, r, a))]
        for a, basis in bases_with_a:
            if a is None:
                doc = basis_document(basis, exact=cfg.exact, tag="spherical-basis", params={"d": d})
                name = f"basis_d{d}_S.{ext}"
            else:
                doc = basis_document(basis, exact=cfg.exact, tag="v-eigenbasis",
                                     params={"d": d, "r": float(r), "a": a})
                name = f"basis_d{d}_r{float(r):g}_a{a}.{ext}"
            written.append(write_document(doc, out / name, ext))
    for path in written:
        print(path)
    print(f"wrote {len(written)} document(s)")
    return 0


def _load_bases(files) -> list[mub.Basis]:
    bases = []
    for f in files:
        doc = read_document(f)
        if doc.kind not in ("basis", "hadamard"):
            raise ParseError(f"{f}: expected a basis or hadamard document, got {doc.kind}")
        mat = doc.matrix()
        if doc.kind == "hadamard":
            mat = mat / math.sqrt(doc.dimension)
        bases.append(mub.Basis(Path(f).stem, mat))
    dims = {b.d for b in bases}
    if len(dims) > 1:
        raise DimensionMismatch(f"documents have different dimensions {sorted(dims)}")
    return bases


def cmd_mub_verify(args) -> int:
    cfg = _config(args)
    if args.census:
        if args.dimension is None:
            raise RangeError("--census needs -d")
        rep = mub.unbiased_census(args.dimension, tol=cfg.tolerance)
        print(f"census d={rep.d}: phi(d)={rep.totient}")
        for a, c in enumerate(rep.counts):
            print(f"  a={a}: {c} unbiased partners")
        print(f"lower bound holds: {rep.bound_holds}")
        if rep.digit_criterion is not None:
            print(f"digit criterion holds: {rep.digit_criterion}")
        for msg in rep.failures:
            print(f"  FAIL {msg}")
        if args.report:
            doc = report_document("census-report", rep.d, {"d": rep.d},
                                  {"counts": rep.counts, "totient": rep.totient,
                                   "bound_holds": rep.bound_holds, "digit_criterion": rep.digit_criterion})
            write_document(doc, Path(args.report))
        return 0 if rep.passed else 1

    if args.files:
        bases = _load_bases(args.files)
    elif args.dimension is not None:
        bases = mub.complete_mub_set(args.dimension)
    else:
        raise RangeError("give document files or -d")
    for b in bases:
        gram = b.vectors.conj().T @ b.vectors
        if np.max(np.abs(gram - np.eye(b.d))) > cfg.tolerance:
            print(f"FAIL {b.label}: not orthonormal")
            return 1
    reports = mub.pairwise_reports(bases, cfg.tolerance)
    for rep in reports:
        status = "unbiased" if rep.unbiased else "NOT unbiased"
        print(f"{rep.labels[0]} vs {rep.labels[1]}: {status} "
              f"(|overlap| in [{rep.min_modulus:.12f}, {rep.max_modulus:.12f}], target {1 / math.sqrt(bases[0].d):.12f})")
    good = sum(r.unbiased for r in reports)
    print(f"{good}/{len(reports)} pairs unbiased")
    if args.report:
        doc = report_document("overlap-report", bases[0].d, {"tol": cfg.tolerance},
                              {"pairs": [[r.labels[0], r.labels[1], r.unbiased, r.min_modulus, r.max_modulus]
                                         for r in reports]})
        write_document(doc, Path(args.report))
    return 0 if good == len(reports) else 1


def cmd_gauss(args) -> int:
    cfg = _config(args)
    if args.sum_rule:
        if args.dimension is None:
            raise RangeError("--sum-rule needs -d")
        d = args.dimension
        target = math.sqrt(d)
        grid = list(gauss.quadratic_phase_grid(d))
        if not args.all:
            grid = [g for g in grid if g[0] == 1 and g[1] == 0]
        bad = [(lam, mu, m) for lam, mu, m in grid if abs(m - target) >= cfg.tolerance]
        for lam, mu, m in bad:
            print(f"FAIL lambda={lam} mu={mu}: |sum|={m:.15f}")
        print(f"{len(grid) - len(bad)}/{len(grid)} magnitude checks pass (target sqrt({d}) = {target:.15f})")
        return 0 if not bad else 1

    if args.u is None or args.v is None or args.w is None:
        raise RangeError("gauss needs U V W")
    value = gauss.gauss_sum(args.u, args.v, args.w, force=args.force)
    print(f"S({args.u},{args.v},{args.w}) = {value.real:.15g} {value.imag:+.15g}i")
    print(f"|S| = {abs(value):.15g}")
    if not args.identity:
        return 0
    ok = True
    spec = gauss.GaussSumSpec(args.u, args.v, args.w)
    worst = max(gauss.translation_identity(spec, t) for t in range(-abs(args.w), abs(args.w) + 1))
    ok &= worst < cfg.tolerance
    print(f"translation identity: max residual {worst:.2e}")
    neg = gauss.negation_identity(spec)
    ok &= neg < cfg.tolerance
    print(f"negation identity: residual {neg:.2e}")
    try:
        case = gauss.sign_case(spec)
        signed = abs(value - case.predicted_sign * gauss.gauss_sum(args.u, -args.v, args.w))
        ok &= signed < cfg.tolerance
        print(f"sign case: {case.predicted_sign:+d} ({case.reason}), residual {signed:.2e}")
    except MubkitError as exc:
        print(f"sign case: not applicable ({exc})")
    if gauss.is_prime(abs(args.w)) and abs(args.w) > 2 and args.u % args.w:
        dev = abs(abs(value) - math.sqrt(abs(args.w)))
        ok &= dev < cfg.tolerance
        print(f"prime magnitude: | |S| - sqrt(w) | = {dev:.2e}")
    return 0 if ok else 1


def cmd_envelop(args) -> int:
    cfg = _config(args)
    two_j = args.two_j
    if not 0 <= two_j <= ENVELOP_MAX_TWO_J:
        raise RangeError(f"2j must lie in 0..{ENVELOP_MAX_TWO_J}")
    j = Fraction(two_j, 2)
    b = wigner.b_coefficients(j, args.r, args.a)
    print(f"v_ra for j={j}, r={args.r}, a={args.a}: nonzero b_kp")
    for (k, p), val in sorted(b.nonzero().items()):
        print(f"  b[{k},{p:+d}] = {val.real:.12f} {val.imag:+.12f}i")
    v = su2ops.v_ra_matrix(su2ops.AngularSpace(two_j), args.r, args.a)
    res = float(np.max(np.abs(wigner.reconstruct_v(b) - v)))
    ok = res < cfg.tolerance
    print(f"reconstruction residual {res:.2e}")
    print(f"trace formula vs closed form {b.agreement:.2e}")
    ok &= b.agreement < cfg.tolerance
    if args.check_cases:
        for t in (1, 2, 3):
            r = float(np.max(np.abs(wigner.v00_closed_forms(Fraction(t, 2)) - su2ops.v_ra_matrix(su2ops.AngularSpace(t)))))
            print(f"closed form j={Fraction(t, 2)}: residual {r:.2e}")
            ok &= r < cfg.tolerance
    return 0 if ok else 1


OPERATORS = ("h", "v", "z", "jplus", "jminus", "jz", "casimir")


def cmd_op(args) -> int:
    cfg = _config(args)
    space = su2ops.AngularSpace(args.two_j)
    p = su2ops.VraParams(args.r, args.a)
    jp, jm, jz = su2ops.ladder_operators(space, p)
    mats = {
        "h": su2ops.h_matrix(space),
        "v": su2ops.v_ra_matrix(space, p),
        "z": su2ops.z_matrix(space),
        "jplus": jp,
        "jminus": jm,
        "jz": jz,
        "casimir": su2ops.casimir(space, p),
    }
    doc = operator_document(args.name, mats[args.name], {"two_j": args.two_j, "r": args.r, "a": args.a})
    if args.output:
        write_document(doc, Path(args.output), cfg.format)
        print(args.output)
    else:
        print(doc.dumps() if cfg.format == "json" else document_to_csv(doc))
    return 0


def cmd_selftest(args) -> int:
    results = selftest.run_suites(args.suite, args.seed)
    for c in results:
        print(c.line())
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mubkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mubkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-10 or $MUBKIT_TOL)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=RunConfig.seed)

    mub_p = sub.add_parser("mub", help="generate or verify bases")
    mub_sub = mub_p.add_subparsers(dest="mub_command", required=True)

    gen = mub_sub.add_parser("gen", help="write basis or Hadamard documents")
    common(gen)
    gen.add_argument("-d", "--dimension", type=int, required=True)
    gen.add_argument("-r", type=float, default=0.0)
    gen.add_argument("-a", type=int, default=None)
    gen.add_argument("--all-a", action="store_true")
    gen.add_argument("--complete", action="store_true", help="spherical basis plus B_0a for all a (prime d)")
    gen.add_argument("--hadamard", action="store_true")
    gen.add_argument("--exact", action="store_true", help="store exact phase exponents")
    gen.add_argument("-o", "--output", default=".")
    gen.set_defaults(func=cmd_mub_gen)

    ver = mub_sub.add_parser("verify", help="check pairwise unbiasedness")
    common(ver)
    ver.add_argument("files", nargs="*")
    ver.add_argument("-d", "--dimension", type=int)
    ver.add_argument("--census", action="store_true")
    ver.add_argument("--report", help="write a report document here")
    ver.set_defaults(func=cmd_mub_verify)

    g = sub.add_parser("gauss", help="evaluate S(u, v, w) and its identities")
    common(g)
    g.add_argument("u", type=int, nargs="?")
    g.add_argument("v", type=int, nargs="?")
    g.add_argument("w", type=int, nargs="?")
    g.add_argument("--force", action="store_true", help="evaluate outside the uw + v even domain")
    g.add_argument("--identity", action="store_true", help="also report identity residuals")
    g.add_argument("--sum-rule", action="store_true", help="check |sum e^(i pi [k(d-k) l + 2 k m]/d)| = sqrt(d)")
    g.add_argument("-d", "--dimension", type=int)
    g.add_argument("--all", action="store_true", help="sweep every lambda, mu")
    g.set_defaults(func=cmd_gauss)

    env = sub.add_parser("envelop", help="expand v_ra in Racah unit tensors")
    common(env)
    env.add_argument("-j", "--two-j", type=int, required=True, help="2j")
    env.add_argument("-r", type=float, default=0.0)
    env.add_argument("-a", type=int, default=0)
    env.add_argument("--check-cases", action="store_true")
    env.set_defaults(func=cmd_envelop)

    op = sub.add_parser("op", help="dump an operator matrix")
    common(op)
    op.add_argument("name", choices=OPERATORS)
    op.add_argument("-j", "--two-j", type=int, required=True, help="2j")
    op.add_argument("-r", type=float, default=0.0)
    op.add_argument("-a", type=int, default=0)
    op.add_argument("-o", "--output")
    op.set_defaults(func=cmd_op)

    st = sub.add_parser("selftest", help="run invariant suites")
    st.add_argument("--suite", choices=("quon", "su2", "mub", "gauss", "wigner", "all"), default="all")
    st.add_argument("--seed", type=int, default=RunConfig.seed)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MubkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
