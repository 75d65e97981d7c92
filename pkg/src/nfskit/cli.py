"""nfskit command line.

Polynomials on the command line and in files are comma-separated integer
coefficients, constant term first: "1,0,0,0,1" is x^4 + 1.
"""
from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from pathlib import Path

from . import complexity, nfsdl, polyselect, quality
from .errors import DomainError, NfsError
from .galois import compute_kappa, find_automorphisms, orbit_partition, orbit_table_csv
from .mathcore import FiniteField, format_poly, parse_poly, signature_of
from .schirokauer import schirokauer_epsilon, sm_build, sm_evaluate


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("NFSKIT_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise DomainError(f"NFSKIT_THREADS={env!r} is not an integer") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_polyselect(args):
    m = args.method
    if m == "jlsv1":
        pair = polyselect.select_jlsv1(args.p, args.n, a_start=args.a_start)
    elif m == "jlsv2":
        if args.g0 is None:
            raise DomainError("jlsv2 needs --g0")
        pair = polyselect.select_jlsv2(args.p, args.n, args.deg or args.n + 1, parse_poly(args.g0))
    elif m == "gjl":
        if args.f is None:
            raise DomainError("gjl needs --f")
        pair = polyselect.select_gjl(args.p, args.n, parse_poly(args.f))
    else:
        family = None
        if args.family == "binomial":
            family = polyselect.binomial_family(args.n)
        elif args.family:
            gu, _, gv = args.family.partition(";")
            family = (parse_poly(gu), parse_poly(gv))
        mus = [parse_poly(args.mu)] if args.mu else None
        pair = polyselect.select_conjugation(args.p, args.n, family, mus)
    _emit(f"# seed: {args.seed}\n" + polyselect.format_poly_file(pair), args.out)
    return 0


def cmd_score(args):
    pair = polyselect.read_poly_file(args.poly)
    params = quality.MurphyParams()
    s = polyselect.default_area_scale(pair)
    if args.improve:
        pair = polyselect.improve_linear_combination(
            pair, polyselect.second_vector(pair), bound=args.bound, threads=_threads(args),
            totally_complex=args.totally_complex)
    af, ag = quality.murphy_alpha(pair.f, params), quality.murphy_alpha(pair.g, params)
    e = quality.murphy_e(pair.f, pair.g, params, s, alpha_f=af, alpha_g=ag)
    print(f"alpha(f) = {af:.6f}")
    print(f"alpha(g) = {ag:.6f}")
    print(f"E = {e:.6e}")
    if args.improve:
        print(f"g = {format_poly(pair.g)}")
        if args.out:
            polyselect.write_poly_file(pair, args.out)
    return 0


def cmd_complexity(args):
    if args.report:
        from .plots import write_report
        for path in write_report(args.report):
            print(path)
        return 0
    if args.curves:
        _emit(complexity.curves_csv(complexity.emit_curves()), args.out)
        return 0
    for name in (complexity.GJL, complexity.CONJ_MEDIUM):
        print(f"{name} {complexity.complexity_constant(name):.12f}")
    best = min(complexity.emit_curves(), key=lambda pt: pt.c)
    print(f"{complexity.CONJ_BOUNDARY} {best.c:.12f} at cp={best.cp:g}, t={best.t}")
    return 0


def cmd_dlog(args):
    pair = polyselect.read_poly_file(args.poly)
    rng = random.Random(args.seed)
    run = nfsdl.run_pipeline(pair, args.B, args.E, args.ell, not args.no_galois, args.seed,
                             _threads(args))
    K = FiniteField(pair.p, pair.phi)
    print(f"seed = {args.seed}")
    print(f"ell = {run.ell}")
    print(f"relations = {len(run.relations)}, matrix = {run.matrix.shape[0]} x "
          f"{run.matrix.shape[1]}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        nfsdl.write_relations(run.relations, out / "relations.txt")
        (out / "logs.txt").write_text(nfsdl.format_log_table(run.table), encoding="utf-8")
    if args.target:
        targets = [K.elt(parse_poly(args.target))]
    else:
        targets = [K.random_element(rng) for _ in range(args.targets)]
    print(f"base = {format_poly(run.generator)}")
    failures = 0
    for i, z in enumerate(targets):
        x = nfsdl.individual_log(pair, run.table, run.fb, z, run.generator, LG=run.LG,
                                 seed=args.seed + i)
        line = f"log({format_poly(z)}) = {x}"
        if args.verify_oracle:
            y = nfsdl.bsgs_oracle(pair.p, pair.n, run.ell, run.generator, z, pair.phi)
            failures += x != y
            line += " ok" if x == y else f" MISMATCH (oracle {y})"
        print(line)
    if args.verify_oracle:
        if failures:
            print(f"{failures} of {len(targets)} targets disagree with the oracle")
            return 1
        print("all targets verified")
    return 0


def _field_poly(args):
    if args.poly:
        return polyselect.read_poly_file(args.poly).f
    if args.f:
        return parse_poly(args.f)
    raise DomainError("give --poly or --f")


def cmd_schirokauer(args):
    f = _field_poly(args)
    r = args.r if args.r is not None else signature_of(f).unit_rank
    smap = sm_build(f, args.ell, r, seed=args.seed)
    print(f"epsilon = {schirokauer_epsilon(f, args.ell)}")
    print(f"maps = {smap.r}")
    for text in args.eval or ():
        vals = sm_evaluate(smap, parse_poly(text))
        print(f"{text}: {','.join(str(v) for v in vals)}")
    return 0


def cmd_galois(args):
    pair = polyselect.read_poly_file(args.poly)
    sides = []
    for name, h in (("F", pair.f), ("G", pair.g)):
        autos = find_automorphisms(h)
        for s in autos:
            try:
                kappa = compute_kappa(pair, s, name)
            except NfsError:
                kappa = None
            print(f"{name}: {s} order {s.order} kappa {kappa}")
        sides.append((name, h, autos))
    if args.orbits:
        sigma = nfsdl.common_automorphism(pair)
        if sigma is None:
            raise DomainError("f and g share no automorphism")
        blocks = []
        for name, h, _ in sides:
            ideals = nfsdl.side_ideals(h, name, args.B)
            blocks.append((name, orbit_partition(ideals, sigma, h)))
        _emit(orbit_table_csv(blocks), args.orbits if args.orbits != "-" else None)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="nfskit", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polyselect", help="select a polynomial pair")
    p.add_argument("--method", choices=polyselect.METHODS, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--deg", type=int, help="degree of f for jlsv2")
    p.add_argument("--family", help="'binomial' or 'g_u;g_v' for conj")
    p.add_argument("--mu", help="quadratic mu for conj")
    p.add_argument("--a-start", type=int, dest="a_start")
    p.add_argument("--g0", help="monic g0 for jlsv2")
    p.add_argument("--f", help="f for gjl")
    p.add_argument("--out")
    p.set_defaults(func=cmd_polyselect)

    p = sub.add_parser("score", help="Murphy alpha and E of a pair")
    p.add_argument("--poly", required=True)
    p.add_argument("--improve", action="store_true")
    p.add_argument("--bound", type=int, default=200)
    p.add_argument("--totally-complex", action="store_true", dest="totally_complex")
    p.add_argument("--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("complexity", help="L(1/3) constants and curves")
    p.add_argument("--curves", action="store_true")
    p.add_argument("--report", help="directory for CSV tables and figures")
    p.add_argument("--out")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("dlog", help="toy NFS discrete logarithm")
    p.add_argument("--poly", required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--B", type=int, default=2000)
    p.add_argument("--E", type=int, default=1000)
    p.add_argument("--target")
    p.add_argument("--targets", type=int, default=5)
    p.add_argument("--verify-oracle", action="store_true", dest="verify_oracle")
    p.add_argument("--no-galois", action="store_true", dest="no_galois")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dlog)

    p = sub.add_parser("schirokauer", help="Schirokauer maps of a field")
    p.add_argument("--poly")
    p.add_argument("--f")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--eval", action="append")
    p.set_defaults(func=cmd_schirokauer)

    p = sub.add_parser("galois", help="automorphisms, kappa and orbits")
    p.add_argument("--poly", required=True)
    p.add_argument("--orbits", help="CSV path, or - for standard output")
    p.add_argument("--B", type=int, default=100)
    p.set_defaults(func=cmd_galois)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads is not None and args.threads < 1:
        ap.error("--threads must be positive")
    try:
        return args.func(args)
    except NfsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
