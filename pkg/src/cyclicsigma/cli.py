"""Command-line interface: ``cyclicsigma <command> --curve curve.json ...``.

Exit codes: 0 success, 1 an identity failed (verify), 2 bad input or a setup
failure such as a Legendre violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from math import gcd

import numpy as np

from .abel import abel
from .curve import (CurveSpec, galois_exponents, gap_sequence, lift_points, load_curve,
                    locate, monomial_basis, random_points, young_data)
from .errors import CurveError, NotCoprime, NumericalError
from .periods import period_data, validate_periods
from .primeform import PrimeForm, benney_core_term, family, prime_form_sigma
from .schur import sigma_leading_term
from .sigma import build_sigma, sigma_for
from .theta import ThetaCharacteristic, theta_deriv, theta_eval
from .verify import DEFAULT_TOLERANCES, run_suite

COMMANDS = ("describe", "periods", "theta", "sigma", "prime-form", "verify", "benney-demo")


@dataclass(frozen=True)
class CliConfig:
    command: str
    curve: str
    tol: float | None = None
    seed: int = 1
    out: str | None = None
    json: bool = False


class SetupError(Exception):
    """Raised for failures that map to exit status 2."""


# -- formatting -------------------------------------------------------------------


def cpair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def cmatrix(m) -> list:
    m = np.asarray(m)
    if m.ndim == 1:
        return [cpair(v) for v in m]
    return [cmatrix(row) for row in m]


def parse_vector(text: str, g: int | None = None) -> np.ndarray:
    """Comma separated complex numbers in Python syntax, e.g. "0.1+0.2j, -0.3"."""
    vals = np.array([complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()])
    if g is not None and len(vals) != g:
        raise SetupError(f"expected {g} components, got {len(vals)}")
    return vals


def parse_point(curve: CurveSpec, text: str):
    """"x" (sheet 0), "x;sheet" or "x,y"."""
    text = text.strip()
    if ";" in text:
        x, sheet = text.split(";")
        return lift_points(curve, complex(x.strip()))[int(sheet)]
    if "," in text:
        x, y = (complex(t.strip()) for t in text.split(","))
        return locate(curve, x, y)
    return lift_points(curve, complex(text))[0]


def parse_char(text: str) -> ThetaCharacteristic:
    """"a1 a2 ...;b1 b2 ..." with 0/1 entries (units of one half)."""
    a, b = text.split(";")
    return ThetaCharacteristic(tuple(int(v) for v in a.split()), tuple(int(v) for v in b.split()))


def emit(cfg: CliConfig, payload: dict, text: str | None = None):
    body = json.dumps(payload, indent=2)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(body + "\n")
    if cfg.json or text is None:
        print(body)
    else:
        print(text)


def load_spec(path: str, need_lambda: bool = True) -> CurveSpec:
    if not need_lambda:
        data = json.loads(path) if path.lstrip().startswith("{") else json.load(open(path))
        if "lambda" not in data:
            r, s = int(data["r"]), int(data["s"])
            if gcd(r, s) != 1:
                raise NotCoprime(f"gcd({r}, {s}) = {gcd(r, s)}")
            if r < 2 or r >= s:
                raise CurveError(f"need 2 <= r < s, got ({r}, {s})")
            return CurveSpec(r, s, ())
    return load_curve(path)


# -- commands ------------------------------------------------------------------------


def cmd_describe(cfg, args):
    curve = load_spec(cfg.curve, need_lambda=False)
    g = curve.genus
    yd = young_data(curve)
    exps, sexp = galois_exponents(curve)
    basis = monomial_basis(curve, 2 * g - 1 if g else 0)
    payload = {
        "r": curve.r, "s": curve.s, "genus": g,
        "gaps": gap_sequence(curve),
        "N": basis.orders,
        "phi": [f"x^{m.sx} y^{m.ry}" for m in basis],
        "Lambda": list(yd.rows),
        "Lambda_size": yd.size,
        "hooks": list(yd.hooks),
        "natural": {str(k): list(yd.natural_k(k)) for k in range(g + 1)},
        "N_k": {str(k): yd.n_k(k) for k in range(g + 1)},
        "galois_exponents": list(exps),
        "sigma_galois_exponent": sexp,
        "leading_term": str(sigma_leading_term(curve)),
    }
    lines = [f"({curve.r},{curve.s}) genus {g}",
             "gaps  " + " ".join(map(str, payload["gaps"])),
             "N     " + " ".join(map(str, payload["N"])),
             "Lambda " + str(payload["Lambda"]) + f"  |Lambda| = {yd.size}",
             "hooks " + " ".join(map(str, yd.hooks))]
    lines += [f"natural_{k} = {{{', '.join(map(str, yd.natural_k(k)))}}}" for k in range(g + 1)]
    lines.append("galois " + " ".join(map(str, exps)) + f"  sigma -> zeta^{sexp} sigma")
    lines.append("sigma = " + payload["leading_term"] + " + higher weight")
    emit(cfg, payload, "\n".join(lines))
    return 0


def _periods(cfg, args):
    curve = load_spec(cfg.curve)
    data = period_data(curve)
    eps = getattr(args, "perturb_eta", 0.0) or 0.0
    if eps:
        data = validate_periods(replace(data, eta1=data.eta1 * (1.0 + eps)))
    return curve, data


def cmd_periods(cfg, args):
    curve, data = _periods(cfg, args)
    payload = {
        "omega1": cmatrix(data.omega1), "omega2": cmatrix(data.omega2),
        "eta1": cmatrix(data.eta1), "eta2": cmatrix(data.eta2),
        "tau": cmatrix(data.tau), "gamma": cmatrix(data.gamma),
        "riemann_characteristic": {"a": list(data.char[0]), "b": list(data.char[1])},
        "legendre_residual": data.legendre_residual,
    }
    emit(cfg, payload)
    return 0


def cmd_theta(cfg, args):
    curve, data = _periods(cfg, args)
    g = curve.genus
    ch = parse_char(args.char) if args.char else ThetaCharacteristic(*data.char)
    z = parse_vector(args.z, g)
    tol = cfg.tol or 1e-15
    payload = {"char": str(ch), "z": cmatrix(z), "value": cpair(theta_eval(ch, z, data.tau, tol))}
    if args.order:
        order = tuple(int(v) - 1 for v in args.order.split(","))
        payload["derivative"] = {"order": [i + 1 for i in order],
                                 "value": cpair(theta_deriv(ch, z, data.tau, order, tol))}
    emit(cfg, payload)
    return 0


def cmd_sigma(cfg, args):
    curve, data = _periods(cfg, args)
    ev = build_sigma(curve, data) if args.perturb_eta else sigma_for(curve)
    u = parse_vector(args.u, curve.genus)
    yd = young_data(curve)
    derivs = {f"sigma_{i + 1}": cpair(ev.partial((i + 1,), u)) for i in range(curve.genus)}
    for k in range(1, curve.genus):
        idx = yd.natural_k(k)
        derivs["natural_" + str(k) + "=" + ",".join(map(str, idx))] = cpair(ev.partial(idx, u))
    emit(cfg, {"u": cmatrix(u), "value": cpair(ev.value(u)), "c": cpair(ev.c), "derivs": derivs})
    return 0


def cmd_prime_form(cfg, args):
    curve = load_spec(cfg.curve)
    family(curve)
    ev = sigma_for(curve)
    P = abel(curve, parse_point(curve, args.p))
    Q = abel(curve, parse_point(curve, args.q))
    pf = PrimeForm(ev)
    E = pf.E(P, Q).scalar
    cE = pf.cal_E(P, Q).scalar
    sg = prime_form_sigma(ev, P, Q).scalar
    payload = {
        "P": cpair(P.x) + cpair(P.y), "Q": cpair(Q.x) + cpair(Q.y),
        "trivialization": "du_1 at P and Q",
        "odd_characteristic": str(pf.char),
        "E": cpair(E), "cal_E": cpair(cE), "sigma_form": cpair(sg),
        "sigma_over_cal_E": cpair(sg / cE),
        "antisymmetry_residual": float(abs(cE + pf.cal_E(Q, P).scalar) / abs(cE)),
    }
    emit(cfg, payload)
    return 0


def read_tolerances(cfg, args) -> dict:
    tol = {}
    if cfg.tol is not None:
        tol = {k: cfg.tol for k in DEFAULT_TOLERANCES}
    if args.tol_file:
        with open(args.tol_file) as fh:
            extra = json.load(fh)
        unknown = set(extra) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise SetupError(f"unknown identities in tolerance file: {sorted(unknown)}")
        tol.update({k: float(v) for k, v in extra.items()})
    return tol


def cmd_verify(cfg, args):
    curve, data = _periods(cfg, args)
    family(curve)
    tol = read_tolerances(cfg, args)
    ev = build_sigma(curve, data) if args.perturb_eta else sigma_for(curve)
    report = run_suite(curve, cfg.seed, tol, ev=ev)
    lines = [f"{'PASS' if e.passed else 'FAIL'}  {e.identity_id:30s} {e.max_rel_residual:.3e}"
             f"  (tol {e.tolerance:.0e}, n={e.samples})" for e in report.entries]
    emit(cfg, report.to_dict(), "\n".join(lines))
    return 0 if report.all_pass else 1


def cmd_benney(cfg, args):
    curve = load_spec(cfg.curve)
    ev = sigma_for(curve)
    rng = np.random.default_rng(cfg.seed)
    g = curve.genus
    base = sum(abel(curve, p).abel for p in random_points(curve, g, rng))
    v = abel(curve, random_points(curve, 1, rng)[0]).abel
    rows = []
    for s in np.linspace(-args.span, args.span, args.samples):
        u = base + s * np.eye(g)[0]
        try:
            val = benney_core_term(ev, u, v)
        except NumericalError:
            val = complex("nan")
        rows.append((u[0].real, u[0].imag, val.real, val.imag))
    out = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["u1_re", "u1_im", "core_re", "core_im"])
    writer.writerows(rows)
    if cfg.out:
        out.close()
    return 0


HANDLERS = {
    "describe": cmd_describe, "periods": cmd_periods, "theta": cmd_theta,
    "sigma": cmd_sigma, "prime-form": cmd_prime_form, "verify": cmd_verify,
    "benney-demo": cmd_benney,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", required=True,
                        help='curve JSON file or inline JSON {"r":..,"s":..,"lambda":[[re,im],..]}')
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--seed", type=int, default=1, help="random seed (default 1)")
    common.add_argument("--out", default=None, help="also write the output to this file")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--perturb-eta", type=float, default=0.0,
                        help="scale eta' by (1 + value) before use (fault injection)")

    parser = argparse.ArgumentParser(prog="cyclicsigma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common], help="gap sequence, Young diagram, natural multi-indices")
    sub.add_parser("periods", parents=[common], help="period matrices as JSON")
    p = sub.add_parser("theta", parents=[common], help="evaluate theta with characteristic")
    p.add_argument("--z", required=True, help="comma separated complex vector")
    p.add_argument("--char", default=None, help='"a1 a2;b1 b2" (default: Riemann characteristic)')
    p.add_argument("--order", default=None, help="1-based derivative indices, e.g. 1,2")
    p = sub.add_parser("sigma", parents=[common], help="sigma and its derivatives at u")
    p.add_argument("--u", required=True, help="comma separated complex vector")
    p = sub.add_parser("prime-form", parents=[common], help="E, cal-E and the sigma form at (P, Q)")
    p.add_argument("--p", required=True, help='"x", "x;sheet" or "x,y"')
    p.add_argument("--q", required=True, help='"x", "x;sheet" or "x,y"')
    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--tol-file", default=None, help="JSON map identity id -> tolerance")
    p = sub.add_parser("benney-demo", parents=[common], help="CSV of the logarithmic-derivative sum")
    p.add_argument("--samples", type=int, default=41)
    p.add_argument("--span", type=float, default=0.5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(args.command, args.curve, args.tol, args.seed, args.out, args.json)
    try:
        return HANDLERS[args.command](cfg, args)
    except (CurveError, NumericalError, SetupError, OSError, KeyError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
