"""Command-line front end.

    qbl specfun C --k 2 --z 0.5
    qbl borel --inputs ups1,ek:1 --z 0.1,0.2 --mode both
    qbl qde derive-ode --compare-printed
    qbl acceptance --suite all

Exit status: 0 on success, 1 when a computation fails (or an acceptance
criterion fails), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import mpmath as mp
import numpy as np


class UsageError(Exception):
    pass


# --- argument helpers ------------------------------------------------------------------


def _floats(s: str):
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}")


def _ints(s: str):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def _positive(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _digits(s: str) -> int:
    v = int(s)
    if v < 30:
        raise argparse.ArgumentTypeError("precision must be at least 30 digits")
    return v


def _weights(s: str):
    """'a1,b1:a2,b2' -> BorelWeights."""
    from .borel import BorelWeights
    try:
        pairs = [tuple(Fraction(x) for x in part.split(",")) for part in s.split(":")]
        if any(len(p) != 2 for p in pairs):
            raise ValueError
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("weights look like 'alpha1,beta1:alpha2,beta2'")
    return BorelWeights(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


# --- output ----------------------------------------------------------------------------


def _num(x, digits):
    """JSON-safe rendering: complex numbers become [re, im] strings.

    mpmath values print with ``digits`` digits, machine floats with their
    shortest round-trip repr.
    """
    if isinstance(x, mp.mpc):
        return [mp.nstr(x.real, digits), mp.nstr(x.imag, digits)]
    if isinstance(x, (complex, np.complexfloating)):
        return [repr(float(x.real)), repr(float(x.imag))]
    if isinstance(x, mp.mpf):
        return mp.nstr(x, digits)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _num(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v, digits) for v in x]
    return x


def _cell(x, digits):
    if isinstance(x, (mp.mpc, complex, np.complexfloating)):
        re, im = _num(x, min(digits, 17))
        return f"{re}{'' if im.startswith('-') else '+'}{im}j"
    if isinstance(x, (list, tuple)):
        return ";".join(str(_cell(v, digits)) for v in x)
    if x is None:
        return ""
    return _num(x, min(digits, 17))


def _emit(args, payload: dict, rows=None):
    digits = args.precision
    if args.format == "csv":
        if rows is None:
            raise UsageError("this command has no tabular output; use --format json")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [])
        w.writeheader()
        w.writerows({k: _cell(v, digits) for k, v in r.items()} for r in rows)
        text = buf.getvalue()
    else:
        doc = {"precision_digits": digits, "command": args.command_line, **payload}
        if rows is not None:
            doc["rows"] = rows
        text = json.dumps(_num(doc, digits), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _c(v):
    """Computed values are reported as complex numbers."""
    if isinstance(v, (mp.mpf, mp.mpc)):
        return mp.mpc(v)
    return complex(v)


def _hankel(args):
    from .contour import HankelContour
    return HankelContour(r=args.hankel_r, eps=args.hankel_eps, R=args.hankel_R)


def _parabola(args):
    from .contour import ParabolicContour
    return ParabolicContour(rho1=args.rho1, rho2=args.rho2, T=args.T)


# --- specfun ---------------------------------------------------------------------------


def cmd_specfun(args):
    from . import specfun as sf

    f = args.function
    need_z = f not in ("zeta", "bell", "beta")
    if need_z and not args.z:
        raise UsageError(f"specfun {f} needs --z")
    rows = []
    if f == "zeta":
        rows.append({"n": args.n, "value": _c(sf.zeta_int(args.n))})
    elif f == "beta":
        rows.append({"n": args.n, "value": _c(sf.beta_seq(args.n))})
    elif f == "bell":
        xs = args.xs or []
        if len(xs) < args.n:
            raise UsageError("bell needs --xs with at least n values")
        rows.append({"n": args.n, "value": _c(sf.bell_complete(args.n, [mp.mpf(x) for x in xs]))})
    for z in args.z or []:
        zl = cmath.log(z) if z < 0 else mp.log(z)
        if f == "C":
            method = {"recurrence": sf.recip_gamma_deriv_recurrence, "bell": sf.recip_gamma_deriv_bell,
                      "auto": sf.recip_gamma_deriv}.get(args.method)
            if args.method == "hankel":
                v = sf.recip_gamma_deriv_hankel(args.k, z, args.tol, _hankel(args))
            else:
                v = method(args.k, z)
            rows.append({"k": args.k, "z": z, "method": args.method, "value": _c(v)})
        elif f == "gamma0":
            rows.append({"z": z, "value": _c(sf.gamma_upper0(zl))})
        elif f == "e":
            rows.append({"s": args.s, "z": z, "value": _c(sf.e_point(args.s, zl))})
        elif f == "ek":
            rows.append({"k": args.k, "z": z, "value": _c(sf.ek_value(args.k, zl))})
        elif f == "ek-closed":
            rows.append({"k": args.k, "z": z, "value": _c(sf.e_closed(args.k, zl))})
        elif f == "T":
            rows.append({"m": args.m, "z": z, "value": _c(sf.t_meijer(args.m, zl))})
        elif f == "g":
            rows.append({"m": args.m, "z": z, "value": _c(sf.g_m(args.m, zl))})
    _emit(args, {"function": f}, rows)


# --- borel -----------------------------------------------------------------------------


def _formal_value(name_a, name_b, weights, z, order):
    from .borel import BLOWUP_WEIGHTS, formal_pair
    from .logseries import ls_eval
    if weights != BLOWUP_WEIGHTS or name_a not in ("ups1", "ups2") or not name_b.startswith("ek:"):
        raise UsageError("the formal route is available for (ups1|ups2, ek:K) with the default weights")
    s = formal_pair(1 if name_a == "ups1" else 2, int(name_b[3:]), order)
    return ls_eval(s, mp.log(z))


def cmd_borel(args):
    from .borel import BLOWUP_WEIGHTS, borel_numeric, builtin_evaluator

    weights = args.weights or BLOWUP_WEIGHTS
    names = [n.strip() for n in args.inputs.split(",")]
    if len(names) != weights.h:
        raise UsageError(f"{len(names)} inputs for {weights.h} weights")
    rows = []
    for z in args.z:
        row = {"z": z}
        if args.mode in ("formal", "both"):
            if len(names) != 2:
                raise UsageError("the formal route takes exactly two inputs")
            row["formal"] = _c(_formal_value(names[0], names[1], weights, z, args.order))
        if args.mode in ("numeric", "both"):
            try:
                evs = [builtin_evaluator(n) for n in names]
            except ValueError as exc:
                raise UsageError(str(exc))
            row["numeric"] = borel_numeric(evs, weights, math.log(z), _hankel(args), args.tol)
        if args.mode == "both":
            row["difference"] = abs(complex(row["formal"]) - complex(row["numeric"]))
        rows.append(row)
    _emit(args, {"inputs": names, "alpha": list(weights.alpha), "beta": list(weights.beta)}, rows)


# --- qde -------------------------------------------------------------------------------


def _model(args):
    from . import qde
    if args.model == "p1":
        return qde.qde_p1()
    return qde.qde_blowup_data(args.q1, args.q2)


def _basis(args):
    from . import qde
    if args.which == "borel":
        return qde.blowup_borel_basis(args.order)
    if args.which == "ifunction":
        I = qde.i_function_blowup(args.order)
        return qde.MasterBasis(list(I.components), "ifunction", list(I.alg.labels))
    if args.which == "p1":
        return qde.MasterBasis([qde.p1_basis(1, 0, args.order), qde.p1_basis(0, 1, args.order)],
                               "p1", ["U1", "U2"])
    raise UsageError(f"unknown basis {args.which!r}")


def cmd_qde(args):
    from . import qde

    a = args.action
    if a == "lambda":
        d = _model(args)
        if args.basis == "presentation" and args.model == "blowup-p2":
            d = d.rebase(qde.PRESENTATION_CHANGE)
        fr = qde.cyclic_frame(d)
        payload = {"model": d.name, "Lambda": fr.Lambda.to_strings(), "detLambda": fr.detLambda.to_str()}
        if args.model == "blowup-p2" and args.basis == "presentation" and (args.q1, args.q2) == (1, 1):
            payload["equals_reference"] = fr.Lambda == qde.reference_lambda_blowup()
        rows = [{"row": i, "col": j, "entry": fr.Lambda[i, j].to_str()}
                for i in range(d.rank) for j in range(d.rank)]
        _emit(args, payload, rows)
    elif a == "derive-ode":
        ode = qde.derive_master_ode(_model(args))
        payload = {"operator": str(ode.op), "order": ode.order, "apparent": ode.apparent.to_str(),
                   "provenance": ode.provenance}
        rows = [{"theta_power": i, "coefficient": c} for i, c in enumerate(ode.op.to_strings())]
        if args.compare_printed:
            if args.model != "blowup-p2":
                raise UsageError("--compare-printed applies to the blowup-p2 model")
            rep = qde.compare_odes(ode, qde.reference_ode_blowup())
            payload["comparison"] = rep
            rows = rep["coefficients"]
        _emit(args, payload, rows)
    elif a == "basis":
        B = _basis(args)
        with mp.workdps(args.precision):
            rows = [dict(member=lab, **r) for lab, s in zip(B.provenance, B.members) for r in s.records()]
        _emit(args, {"basis": B.label, "members": B.provenance}, rows)
    elif a == "verify":
        if args.ode == "printed":
            ode = qde.reference_ode_blowup()
        else:
            ode = qde.derive_master_ode(qde.qde_blowup_data() if args.which != "p1" else qde.qde_p1())
        B = _basis(args)
        rows = []
        for lab, s in zip(B.provenance, B.members):
            r = qde.verify_solution(ode, s, args.tol)
            rows.append({"member": lab, **r.summary()})
        _emit(args, {"ode": ode.provenance.get("source"), "all_passed": all(r["passed"] for r in rows)}, rows)
    elif a == "mb":
        if not args.z:
            raise UsageError("qde mb needs --z")
        if len(args.n) != 1 or len(args.j) != 1:
            raise UsageError("qde mb takes a single --n and --j")
        n, j = args.n[0], args.j[0]
        rows = [{"n": n, "j": j, "z": z,
                 "value": qde.mb_master_pn(n, j, cmath.log(z), args.tol, _parabola(args))}
                for z in args.z]
        _emit(args, {}, rows)
    elif a == "h-integral":
        if not args.z:
            raise UsageError("qde h-integral needs --z")
        ns, ds, js = args.n, args.d, args.j
        rows = [{"z": z, "value": qde.thm_mt22_H(ns, ds, js, args.k, cmath.log(z), args.tol,
                                                 _parabola(args), _hankel(args))} for z in args.z]
        _emit(args, {"n": ns, "d": ds, "j": js, "k": args.k}, rows)


# --- acceptance ------------------------------------------------------------------------


def cmd_acceptance(args):
    from . import acceptance

    if args.suite == "all":
        select = None
    else:
        try:
            select = [int(x) for x in args.suite.split(",")]
        except ValueError:
            raise UsageError("--suite is 'all' or a comma-separated list of criterion numbers")
        bad = [n for n in select if n not in acceptance.CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
    results = []
    for n in select or sorted(acceptance.CRITERIA):
        r = acceptance.run_one(n)
        print(r.line(), file=sys.stderr)
        results.append(r)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.ok, "seconds": round(r.seconds, 2)}
            for r in results]
    payload = {"all_passed": all(r.ok for r in results), "criteria": [r.to_dict() for r in results]}
    _emit(args, payload, rows)
    return 0 if payload["all_passed"] else 1


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_digits, default=50, help="working precision in digits (>= 30)")
    common.add_argument("--tol", type=_positive, default=1e-10)
    common.add_argument("--order", type=int, default=16, help="series truncation order")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--hankel-r", type=_positive, default=1.0)
    common.add_argument("--hankel-eps", type=_positive, default=math.pi / 6)
    common.add_argument("--hankel-R", type=_positive, default=None)
    common.add_argument("--rho1", type=_positive, default=0.25)
    common.add_argument("--rho2", type=_positive, default=0.5)
    common.add_argument("--T", type=_positive, default=8.0)

    p = argparse.ArgumentParser(prog="qbl", description="P^1-bundle quantum differential equation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("specfun", parents=[common], help="special-function values")
    sp.add_argument("function", choices=("zeta", "bell", "beta", "C", "gamma0", "e", "ek", "ek-closed", "T", "g"))
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--s", type=float, default=0.0)
    sp.add_argument("--z", type=_floats)
    sp.add_argument("--xs", type=_floats)
    sp.add_argument("--method", choices=("auto", "recurrence", "bell", "hankel"), default="auto")
    sp.set_defaults(func=cmd_specfun)

    bp = sub.add_parser("borel", parents=[common], help="Borel multitransforms of named series")
    bp.add_argument("--inputs", default="ups1,ek:0", help="comma-separated names: ups1, ups2, exp, ek:K")
    bp.add_argument("--weights", type=_weights, help="alpha1,beta1:alpha2,beta2 (default: blown-up plane)")
    bp.add_argument("--z", type=_floats, default=[0.1, 0.2, 0.4])
    bp.add_argument("--mode", choices=("formal", "numeric", "both"), default="both")
    bp.set_defaults(func=cmd_borel)

    qp = sub.add_parser("qde", parents=[common], help="frames, master equations, bases, integrals")
    qp.add_argument("action", choices=("lambda", "derive-ode", "basis", "verify", "mb", "h-integral"))
    qp.add_argument("--model", choices=("blowup-p2", "p1"), default="blowup-p2")
    qp.add_argument("--q1", type=int, default=1)
    qp.add_argument("--q2", type=int, default=1)
    qp.add_argument("--basis", choices=("presentation", "bundle"), default="presentation")
    qp.add_argument("--compare-printed", action="store_true")
    qp.add_argument("--which", choices=("borel", "ifunction", "p1"), default="borel")
    qp.add_argument("--ode", choices=("derived", "printed"), default="derived")
    qp.add_argument("--n", type=_ints, default=[2], help="comma list for h-integral")
    qp.add_argument("--d", type=_ints, default=[1], help="comma list for h-integral")
    qp.add_argument("--j", type=_ints, default=[0], help="comma list for h-integral")
    qp.add_argument("--k", type=int, default=0)
    qp.add_argument("--z", type=_floats)
    qp.set_defaults(func=cmd_qde)

    ap = sub.add_parser("acceptance", parents=[common], help="run the acceptance criteria")
    ap.add_argument("--suite", default="all")
    ap.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    args.command_line = " ".join(["qbl"] + argv)
    saved = os.environ.get("QBL_PRECISION")
    os.environ["QBL_PRECISION"] = str(args.precision)
    try:
        with mp.workdps(args.precision):
            code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qbl: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"qbl: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        if saved is None:
            os.environ.pop("QBL_PRECISION", None)
        else:
            os.environ["QBL_PRECISION"] = saved
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
