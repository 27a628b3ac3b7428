"""Command-line surface: certify, survey, hensel, pade, decompose,
max-sigma, audit, scan-huge.

Exit codes: 0 success, 2 invalid input, 3 undecidable rigorous comparison
at the precision cap, 4 internal invariant violation.  Machine-readable
output is canonical JSON (sorted keys, no whitespace), so repeated runs
are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import certifier, decomposer, hensel, pade, survey

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNDECIDABLE = 3
EXIT_INTERNAL = 4


def _parse_sigma(text: str) -> Fraction:
    parts = text.split("/")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"sigma must be a rational 'a/b', got {text!r}")
    try:
        return Fraction(int(parts[0]), int(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}")


def _parse_bigint(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(payload: dict, fmt: str, human_lines, out_path: str | None) -> None:
    if fmt == "json":
        text = _canonical_json(payload)
    elif fmt == "tsv":
        text = payload_to_tsv(payload)
    else:
        text = "\n".join(human_lines)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def payload_to_tsv(payload: dict) -> str:
    if payload.get("schema") == "rnlab.survey/1":
        lines = ["n\tx\tm\tdigits_x\tpassed"]
        for rec in payload["exceptions"]:
            lines.append(f"{rec['n']}\t{rec['x']}\t{rec['m']}"
                         f"\t{rec['digits_x']}\t{rec['passed']}")
        return "\n".join(lines)
    if payload.get("schema") == "rnlab.hensel/1":
        return "\n".join(["root"] + list(payload["roots"]))
    return _canonical_json(payload)


def _fraction_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_certify(args) -> int:
    cert = certifier.certify(args.D, args.p, args.x0, args.n0, args.sigma,
                             args.variant)
    payload = {
        "schema": "rnlab.certificate/1",
        "D": cert.D, "p": cert.p, "x0": cert.x0, "n0": cert.n0,
        "sigma": _fraction_str(cert.sigma),
        "variant": cert.variant,
        "status": cert.status,
        "certified": cert.certified,
        "eta": _fraction_str(cert.eta),
        "exponent": _fraction_str(cert.exponent),
        "beta_enclosure": list(cert.beta_enclosure),
        "threshold_enclosure": list(cert.threshold_enclosure),
        "margin_log10": cert.margin_log10,
        "b_value": _fraction_str(cert.b_value),
        "b_ok": cert.b_ok,
        "M": cert.M,
        "X_star": str(cert.X_star),
        "X_star_digits": len(str(cert.X_star)),
        "x_min_inference_digits": len(str(cert.x_min_inference)),
        "meaning": cert.meaning(),
        "notes": list(cert.notes),
    }
    human = [
        f"status      : {cert.status}",
        f"|beta|      : [{cert.beta_enclosure[0]}, {cert.beta_enclosure[1]}]",
        f"threshold   : [{cert.threshold_enclosure[0]}, {cert.threshold_enclosure[1]}]",
        f"M = 250*n0  : {cert.M}",
        f"X* = p^M    : {len(str(cert.X_star))} digits",
        f"meaning     : {cert.meaning()}",
    ]
    _emit(payload, args.format, human, args.out)
    if cert.status in (certifier.STATUS_NOT_EXACT_POWER,
                       certifier.STATUS_SHARED_FACTOR,
                       certifier.STATUS_SQUARE_D,
                       certifier.STATUS_SMALL_D):
        return EXIT_INVALID
    if cert.status == certifier.STATUS_UNDECIDABLE:
        return EXIT_UNDECIDABLE
    return EXIT_OK


def _cmd_survey(args) -> int:
    resume_state = None
    checkpoint_cb = None
    if args.resume:
        try:
            with open(args.resume) as fh:
                resume_state = survey.restore(fh.read(), expect_D=args.D,
                                              expect_p=args.p)
        except FileNotFoundError:
            resume_state = None

        def checkpoint_cb(state):
            with open(args.resume, "w") as fh:
                fh.write(survey.checkpoint(state))

    rep = survey.run_survey(args.D, args.p, args.sigma, args.n_max,
                            resume=resume_state,
                            checkpoint_cb=checkpoint_cb,
                            checkpoint_every=args.checkpoint_every)
    payload = rep.to_json_dict()
    human = [
        f"survey D={rep.D} p={rep.p} sigma={_fraction_str(rep.sigma)} "
        f"n in [{rep.n_from}, {rep.n_max}]",
        f"records checked : {rep.records_checked}",
        f"exceptions      : {len(rep.exceptions)}",
    ]
    for rec in rep.exceptions:
        human.append(f"  n={rec.n} x={rec.x} m={rec.m}")
    human.append(f"wall time       : {rep.wall_time:.2f}s")
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


def _cmd_hensel(args) -> int:
    try:
        state = hensel.roots_mod_pn(args.D, args.p, args.n)
        roots = [str(r) for r in state.all_roots()]
        payload = {"schema": "rnlab.hensel/1", "D": args.D, "p": args.p,
                   "n": args.n, "roots": roots, "count": len(roots),
                   "reason": ""}
        human = [f"roots of x^2 + {args.D} = 0 (mod {args.p}^{args.n}):"]
        human += [f"  {r}" for r in roots]
    except (hensel.NoSplitError, hensel.NoRootError) as exc:
        reason = ("no_split" if isinstance(exc, hensel.NoSplitError)
                  else "no_root")
        payload = {"schema": "rnlab.hensel/1", "D": args.D, "p": args.p,
                   "n": args.n, "roots": [], "count": 0, "reason": reason}
        human = [f"no roots: {exc}"]
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


def _verify_one_diagonal(arg):
    j, g = arg
    sys_jg = pade.build_diagonal(j, g)
    starred = pade.normalize(sys_jg)
    return {"j": j, "g": g, "identity": sys_jg.identity_holds(),
            "starred_identity": starred.identity_holds(),
            "content": starred.content}


def _verify_one_general(arg):
    a, b, c = arg
    return {"A": a, "B": b, "C": c,
            "identity": pade.build_general(a, b, c).identity_holds()}


def _cmd_pade(args) -> int:
    if args.pade_cmd != "verify":
        raise ValueError(f"unknown pade subcommand {args.pade_cmd!r}")
    diag_args = [(j, g) for j in range(1, args.j_max + 1) for g in (0, 1)]
    gen_args = [(a, b, c)
                for a in range(1, args.abc_max + 1)
                for b in range(1, args.abc_max + 1)
                for c in range(1, args.abc_max + 1)]
    if args.threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            diag = list(pool.map(_verify_one_diagonal, diag_args))
            gen = list(pool.map(_verify_one_general, gen_args))
    else:
        diag = [_verify_one_diagonal(x) for x in diag_args]
        gen = [_verify_one_general(x) for x in gen_args]
    crosses = []
    for j in range(1, args.j_max + 1):
        c = pade.cross_constant(pade.build_diagonal(j, 1),
                                pade.build_diagonal(j, 0))
        crosses.append({"j": j, "degree": 8 * j - 1, "c": str(c)})
    all_ok = (all(d["identity"] and d["starred_identity"] for d in diag)
              and all(g["identity"] for g in gen))
    payload = {"schema": "rnlab.pade-verify/1", "j_max": args.j_max,
               "abc_max": args.abc_max, "diagonal": diag, "general": gen,
               "cross": crosses, "all_ok": all_ok}
    human = [f"diagonal identities j <= {args.j_max}: "
             f"{'ok' if all(d['identity'] for d in diag) else 'FAIL'}",
             f"starred identities: "
             f"{'ok' if all(d['starred_identity'] for d in diag) else 'FAIL'}",
             f"general identities A,B,C <= {args.abc_max}: "
             f"{'ok' if all(g['identity'] for g in gen) else 'FAIL'}",
             f"cross residuals: {len(crosses)} monomials"]
    _emit(payload, args.format, human, args.out)
    return EXIT_OK if all_ok else EXIT_INTERNAL


def _decompose_payload(dec) -> dict:
    return {
        "n": dec.n, "x": str(dec.x), "j": dec.j, "k": dec.k, "l": dec.l,
        "branch": dec.branch, "sign": dec.sign,
        "mu": {"u": str(dec.mu.u), "v": str(dec.mu.v), "D": dec.mu.D},
        "m": str(dec.m),
        "norm_exponent": dec.norm_exponent,
        "norm_mu_digits": len(str(dec.mu.norm())),
    }


def _cmd_decompose(args) -> int:
    xs = ([args.x] if args.x is not None
          else list(hensel.roots_mod_pn(args.D, args.p, args.n).all_roots()))
    decs = [decomposer.decompose(args.D, args.p, args.x0, args.n0, x, args.n)
            for x in xs]
    payload = {"schema": "rnlab.decompose/1", "D": args.D, "p": args.p,
               "x0": args.x0, "n0": args.n0, "n": args.n,
               "decompositions": [_decompose_payload(d) for d in decs]}
    human = []
    for d in decs:
        human.append(f"x={d.x}: j={d.j} k={d.k} l={d.l} branch={d.branch} "
                     f"sign={d.sign:+d} m has {len(str(d.m))} digits")
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


def _cmd_audit(args) -> int:
    cert = certifier.certify(args.D, args.p, args.x0, args.n0, args.sigma,
                             args.variant)
    xs = ([args.x] if args.x is not None
          else list(hensel.roots_mod_pn(args.D, args.p, args.n).all_roots()))
    audits = []
    for x in xs:
        dec = decomposer.decompose(args.D, args.p, args.x0, args.n0, x, args.n)
        for g in (0, 1):
            rep = decomposer.audit_theorem1_chain(cert, dec, g)
            audits.append({
                "x": str(x), "g": g, "j": rep.j, "k": rep.k, "r": rep.r,
                "branch": dec.branch,
                "nonzero_this_g": rep.nonzero_this_g,
                "nonzero_other_g": rep.nonzero_other_g,
                "backbone_exact": rep.backbone_exact,
                "ii_ok": rep.ii_ok, "iii_ok": rep.iii_ok,
                "nine_tenths_ok": rep.nine_tenths_ok,
                "q_lambda_ok": rep.q_lambda_ok,
                "margins": rep.margins,
            })
    payload = {"schema": "rnlab.audit/1", "D": args.D, "p": args.p,
               "x0": args.x0, "n0": args.n0, "n": args.n,
               "certificate_status": cert.status, "audits": audits}
    human = [f"certificate: {cert.status}"]
    for a in audits:
        human.append(f"x={a['x'][:16]}... g={a['g']}: nonzero={a['nonzero_this_g']} "
                     f"backbone={a['backbone_exact']} ii={a['ii_ok']} iii={a['iii_ok']}")
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


def _cmd_max_sigma(args) -> int:
    res = certifier.max_sigma(args.D, args.p, args.x0, args.n0, args.variant)
    payload = {
        "schema": "rnlab.max-sigma/1",
        "D": args.D, "p": args.p, "x0": args.x0, "n0": args.n0,
        "variant": args.variant,
        "empty": res.empty,
        "lo": _fraction_str(res.lo) if res.lo is not None else None,
        "hi": _fraction_str(res.hi) if res.hi is not None else None,
        "lo_decimal": f"{float(res.lo):.9f}" if res.lo is not None else None,
        "hi_decimal": f"{float(res.hi):.9f}" if res.hi is not None else None,
        "beta_floor_ok": res.beta_floor_ok,
        "monotone_checked": res.monotone_checked,
        "reason": res.reason,
    }
    human = [f"max sigma in [{payload['lo_decimal']}, {payload['hi_decimal']}]"
             if not res.empty else f"empty: {res.reason}",
             f"beta floor ({args.variant}) satisfied: {res.beta_floor_ok}"]
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


def _cmd_scan_huge(args) -> int:
    solutions = []
    for n0 in range(1, args.n0_max + 1):
        rest = args.p ** n0 - args.D
        if rest <= 0:
            continue
        x0 = math.isqrt(rest)
        if x0 * x0 == rest and x0 >= 1:
            solutions.append({"x0": str(x0), "n0": n0})
    payload = {"schema": "rnlab.scan-huge/1", "D": args.D, "p": args.p,
               "n0_max": args.n0_max, "solutions": solutions}
    human = [f"base solutions of x^2 + {args.D} = {args.p}^n0, n0 <= {args.n0_max}:"]
    human += [f"  x0={s['x0']} n0={s['n0']}" for s in solutions] or ["  none"]
    _emit(payload, args.format, human, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rnlab",
        description="exact tools for factorizations x^2 + D = p^n * m")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "tsv", "human"),
                       default="human")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--threads", type=int, default=1)

    c = sub.add_parser("certify", help="evaluate the huge-solution condition")
    c.add_argument("--D", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--x0", type=_parse_bigint, required=True)
    c.add_argument("--n0", type=int, required=True)
    c.add_argument("--sigma", type=_parse_sigma, required=True)
    c.add_argument("--variant", choices=("5j", "7j"), default="5j")
    common(c)
    c.set_defaults(func=_cmd_certify)

    s = sub.add_parser("survey", help="survey m = (x^2+D)/p^n against x^sigma")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--sigma", type=_parse_sigma, required=True)
    s.add_argument("--n-max", dest="n_max", type=int, required=True)
    s.add_argument("--resume", default=None,
                   help="checkpoint blob path (read if present, updated)")
    s.add_argument("--checkpoint-every", type=int, default=200)
    common(s)
    s.set_defaults(func=_cmd_survey)

    h = sub.add_parser("hensel", help="roots of x^2 + D = 0 (mod p^n)")
    h.add_argument("--D", type=int, required=True)
    h.add_argument("--p", type=int, required=True)
    h.add_argument("--n", type=int, required=True)
    common(h)
    h.set_defaults(func=_cmd_hensel)

    pv = sub.add_parser("pade", help="polynomial identity sweeps")
    pv.add_argument("pade_cmd", choices=("verify",))
    pv.add_argument("--j-max", dest="j_max", type=int, default=8)
    pv.add_argument("--abc-max", dest="abc_max", type=int, default=4)
    common(pv)
    pv.set_defaults(func=_cmd_pade)

    d = sub.add_parser("decompose", help="factor gamma over the base solution")
    d.add_argument("--D", type=int, required=True)
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--x0", type=_parse_bigint, required=True)
    d.add_argument("--n0", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--x", type=_parse_bigint, default=None,
                   help="specific root (default: all roots at level n)")
    common(d)
    d.set_defaults(func=_cmd_decompose)

    a = sub.add_parser("audit", help="decompose + inequality-chain audit")
    a.add_argument("--D", type=int, required=True)
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--x0", type=_parse_bigint, required=True)
    a.add_argument("--n0", type=int, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--x", type=_parse_bigint, default=None)
    a.add_argument("--sigma", type=_parse_sigma, default=Fraction(1, 10))
    a.add_argument("--variant", choices=("5j", "7j"), default="5j")
    common(a)
    a.set_defaults(func=_cmd_audit)

    ms = sub.add_parser("max-sigma", help="largest certifiable sigma")
    ms.add_argument("--D", type=int, required=True)
    ms.add_argument("--p", type=int, required=True)
    ms.add_argument("--x0", type=_parse_bigint, required=True)
    ms.add_argument("--n0", type=int, required=True)
    ms.add_argument("--variant", choices=("5j", "7j"), default="5j")
    common(ms)
    ms.set_defaults(func=_cmd_max_sigma)

    sc = sub.add_parser("scan-huge", help="brute-force base solutions")
    sc.add_argument("--D", type=int, required=True)
    sc.add_argument("--p", type=int, required=True)
    sc.add_argument("--n0-max", dest="n0_max", type=int, required=True)
    common(sc)
    sc.set_defaults(func=_cmd_scan_huge)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (certifier.UndecidableError,) as exc:
        _print_error("undecidable", exc, args)
        return EXIT_UNDECIDABLE
    except (ValueError, hensel.HenselError, OSError) as exc:
        _print_error("invalid_input", exc, args)
        return EXIT_INVALID
    except RuntimeError as exc:
        # PadeError, NeitherBranch, BothBranchesVanish, NotMonotone, ...
        _print_error("internal_invariant_violation", exc, args)
        return EXIT_INTERNAL


def _print_error(kind: str, exc: Exception, args) -> None:
    if getattr(args, "format", "human") == "json":
        print(_canonical_json({"schema": "rnlab.error/1", "error": kind,
                               "message": str(exc)}))
    else:
        print(f"error ({kind}): {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
