"""Command-line front end: ``wignerosp <subcommand> [flags]``.

Every table command writes CSV (header row, ``re``/``im`` column pairs for
complex values) or JSON (an array of flat records).  Numbers are rounded to
``--precision`` significant digits before either format is written, so both
carry identical values.

Exit codes: 0 success, 1 failed checks, 2 bad arguments or parameters,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .exceptions import DomainError, WignerOspError

DEFAULTS = {"a": 0.5, "trunc": 128, "margin": 4, "tol": 1e-9}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:count`` with inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    if count < 1 or (count > 1 and not hi > lo):
        raise argparse.ArgumentTypeError("grid needs count >= 1 and hi > lo")
    return np.linspace(lo, hi, count)


def parse_complex(text: str) -> complex:
    """Complex literal such as ``0.6+0.8i``, ``-i`` or ``1``."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if s.endswith("i") and s[:-1] in ("", "+", "-"):
        s = s[:-1] + "1i"
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_precision(text: str) -> int:
    k = int(text)
    if not 4 <= k <= 17:
        raise argparse.ArgumentTypeError("precision must lie in [4, 17]")
    return k


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _round(v, k: int):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return v
    return float(f"{v:.{k}g}")


def _flatten(record: dict) -> dict:
    out = {}
    for key, val in record.items():
        if isinstance(val, (complex, np.complexfloating)):
            prefix = "" if key == "value" else key + "_"
            out[prefix + "re"] = val.real
            out[prefix + "im"] = val.imag
        else:
            out[key] = val
    return out


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(records: list, fmt: str, precision: int, path: str | None) -> None:
    rows = [{k: _round(v, precision) for k, v in _flatten(r).items()} for r in records]
    if fmt == "json":
        text = json.dumps(rows, indent=1, allow_nan=True) + "\n"
    else:
        buf = io.StringIO()
        fields = list(rows[0]) if rows else []
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_cell(r[f]) for f in fields])
        text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_poly(args) -> list:
    from .orthopoly import Family, PolyFamily, genhermite_table, laguerre_table, mp_table, recurrence_table

    fam = PolyFamily(Family(args.family), args.a)
    table_fn = {Family.MEIXNER_POLLACZEK: mp_table, Family.LAGUERRE: laguerre_table,
                Family.GEN_HERMITE: genhermite_table}[fam.kind]
    if args.method == "recurrence":
        if not args.normalized:
            raise UsageError("--method recurrence evaluates the normalized functions; add --normalized")
        table = recurrence_table(fam, args.nmax, args.grid)
    else:
        table = np.stack([table_fn(args.nmax, args.a, float(x), args.normalized) for x in args.grid], axis=1)
    return [{"degree": n, "point": float(x), "value": float(table[n, j])}
            for n in range(args.nmax + 1) for j, x in enumerate(args.grid)]


_OPERATORS = ("x", "p", "hb", "hf", "bplus", "bminus", "h", "e", "f")


def cmd_operators(args) -> list:
    from .osprep import RepParams, even_triple, ladder_ops, observable

    params = RepParams(args.a, args.trunc)
    if args.which in ("bplus", "bminus"):
        op = ladder_ops(params)[0 if args.which == "bplus" else 1]
    elif args.which in ("h", "e", "f"):
        op = even_triple(params)["hef".index(args.which)]
    else:
        op = observable(params, args.which)
    m = op.entries
    return [{"row": i, "col": j, "value": complex(m[i, j])}
            for i in range(op.dim) for j in range(op.dim)]


def cmd_spectrum(args) -> list:
    from .osprep import RepParams, observable
    from .spectral import Generator, coefficient_vector, eigen_residual

    gen = Generator(args.generator)
    v = coefficient_vector(gen, args.a, args.s, args.trunc, args.method)
    if args.residual:
        which = {"alpha": "hb", "beta": "x", "gamma": "p", "epsilon": "hf"}[gen.label]
        H = observable(RepParams(args.a, args.trunc), which)
        return [{"generator": gen.value, "eigenvalue": args.s,
                 "residual": eigen_residual(H, v, margin=args.margin)}]
    return [{"index": k, "value": complex(c)} for k, c in enumerate(v.values)]


def cmd_wavefunction(args) -> list:
    from .wavefunc import WaveParams, inner_x_p, psi_bk, psi_free

    if args.system == "xp":
        if args.p is None:
            raise UsageError("--system xp needs --p")
        return [{"x": float(x), "value": inner_x_p(args.a, float(x), args.p)} for x in args.grid]
    if args.E is None:
        raise UsageError(f"--system {args.system} needs --E")
    params = WaveParams(args.a, args.A, args.B)
    fn = psi_bk if args.system == "bk" else psi_free
    return [{"x": float(x), "value": complex(fn(params, float(x), args.E))} for x in args.grid]


def cmd_kernel(args) -> list:
    from .spectral import delta_kernel
    from .wavefunc import kernel_p_z

    if args.kind == "delta":
        return [{"s": args.s, "s_prime": float(t),
                 "value": delta_kernel(args.generator, args.a, args.s, float(t), args.trunc)}
                for t in args.grid]
    if args.p is None:
        raise UsageError("--kind p_z needs --p")
    return [{"E": float(E), "value": kernel_p_z(args.a, args.p, float(E), args.trunc, args.parity)}
            for E in args.grid]


def cmd_gram(args) -> list:
    from .orthopoly import Family, PolyFamily, gram_matrix

    G = gram_matrix(PolyFamily(Family(args.family), args.a), args.max_degree)
    return [{"m": m, "n": n, "value": float(G[m, n])}
            for m in range(G.shape[0]) for n in range(G.shape[1])]


def verify_records(a: float, trunc: int, margin: int, tol: float) -> list:
    """Named residuals of every structural check at parameter ``a``."""
    from .orthopoly import Family, PolyFamily, gram_matrix
    from .osprep import RepParams, observable, relation_report
    from .spectral import (alpha_coeffs, beta_coeffs, eigen_residual, epsilon_coeffs,
                           gamma_coeffs, lambda_check)

    params = RepParams(a, trunc, margin)
    records = []

    def add(name, residual):
        records.append({"check": name, "residual": float(residual), "tol": tol,
                        "pass": bool(residual < tol)})

    for name, r in relation_report(params, margin).residuals.items():
        add(f"relation:{name}", r)
    consts = {Family.MEIXNER_POLLACZEK: (a, 0.5), Family.LAGUERRE: (a - 1, 2.0),
              Family.GEN_HERMITE: (a, 1.0)}
    for fam, (param, c) in consts.items():
        G = gram_matrix(PolyFamily(fam, param), 6)
        add(f"gram:{fam.value}", np.max(np.abs(G - c * np.eye(7))))
    ops = {w: observable(params, w) for w in ("hb", "x", "p", "hf")}
    vectors = [
        ("hb", "u0", lambda s: alpha_coeffs(a, s, trunc, "V0"), (-1.5, 0.0, 2.0)),
        ("hb", "u1", lambda s: alpha_coeffs(a, s, trunc, "V1"), (-1.5, 0.0, 2.0)),
        ("x", "v", lambda s: beta_coeffs(a, s, trunc), (-1.2, 0.7, 1.9)),
        ("p", "w", lambda s: gamma_coeffs(a, s, trunc), (-1.2, 0.7, 1.9)),
        ("hf", "z0", lambda s: epsilon_coeffs(a, s, trunc, "V0"), (0.3, 1.0, 2.5)),
        ("hf", "z1", lambda s: epsilon_coeffs(a, s, trunc, "V1"), (0.3, 1.0, 2.5)),
    ]
    for which, label, make, points in vectors:
        worst = max(eigen_residual(ops[which], make(s), s, margin) for s in points)
        add(f"eigen:{which}:{label}", worst)
    if trunc >= 16:
        add("lambda_intertwiner", max(lambda_check(a, n, np.linspace(-3, 3, 7), trunc) for n in range(4)))
    return records


def cmd_verify(args) -> tuple[list, int]:
    records = verify_records(args.a, args.trunc, args.margin, args.tol)
    return records, 0 if all(r["pass"] for r in records) else 1


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed, echo=print)
    failed = [r for r in results if not r.passed]
    total = sum(r.seconds for r in results)
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed in {total:.1f} s")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(defaults: bool) -> argparse.ArgumentParser:
    # shared output flags; subparsers use SUPPRESS so top-level values survive
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=("csv", "json"), default=d(None), help="output format")
    p.add_argument("--out", metavar="PATH", default=d(None), help="write to PATH instead of stdout")
    p.add_argument("--precision", type=parse_precision, default=d(12), metavar="K",
                   help="significant digits, 4..17 (default 12)")
    p.add_argument("--seed", type=int, default=d(None), help="seed for randomised sweeps")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerosp",
        description="Wigner quantization of xp and p^2/2 in the osp(1|2) positive discrete series.",
        parents=[_common(True)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("poly", "orthogonal polynomial tables")
    p.add_argument("--family", choices=("mp", "laguerre", "genhermite"), required=True)
    p.add_argument("--a", type=float, default=DEFAULTS["a"], help="family parameter (alpha for Laguerre)")
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("-2:2:5"))
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--method", choices=("closed", "recurrence"), default="closed")
    p.set_defaults(func=cmd_poly)

    p = add("operators", "dump a truncated operator matrix")
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--trunc", type=int, default=DEFAULTS["trunc"])
    p.add_argument("--which", choices=_OPERATORS, default="x")
    p.set_defaults(func=cmd_operators)

    p = add("spectrum", "eigenvector coefficients or their residual")
    p.add_argument("--generator", choices=("alpha_V0", "alpha_V1", "beta", "gamma", "epsilon_V0", "epsilon_V1"),
                   default="alpha_V0")
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--s", type=float, default=1.0, help="eigenvalue (E, x or p)")
    p.add_argument("--trunc", type=int, default=DEFAULTS["trunc"])
    p.add_argument("--margin", type=int, default=DEFAULTS["margin"])
    p.add_argument("--method", choices=("closed", "recurrence"), default="closed")
    p.add_argument("--residual", action="store_true", help="report the eigen-residual instead")
    p.set_defaults(func=cmd_spectrum)

    p = add("wavefunction", "wave-function samples on a grid")
    p.add_argument("--system", choices=("bk", "free", "xp"), default="bk")
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--E", type=float, default=None)
    p.add_argument("--p", type=float, default=None, help="momentum for --system xp")
    p.add_argument("--A", type=parse_complex, default=1 + 0j)
    p.add_argument("--B", type=parse_complex, default=0j)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("0.5:3:6"))
    p.set_defaults(func=cmd_wavefunction)

    p = add("kernel", "partial-sum kernels")
    p.add_argument("--kind", choices=("delta", "p_z"), default="delta")
    p.add_argument("--generator", choices=("alpha_V0", "alpha_V1", "beta", "gamma", "epsilon_V0", "epsilon_V1"),
                   default="beta")
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--trunc", type=int, default=DEFAULTS["trunc"])
    p.add_argument("--grid", type=parse_grid, default=parse_grid("0.5:1.5:5"))
    p.set_defaults(func=cmd_kernel)

    p = add("gram", "Gram matrix of a normalized family")
    p.add_argument("--family", choices=("mp", "laguerre", "genhermite"), required=True)
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--max-degree", type=int, default=6)
    p.set_defaults(func=cmd_gram)

    p = add("verify", "run every structural check; exit 0 iff all pass")
    p.add_argument("--a", type=float, default=DEFAULTS["a"])
    p.add_argument("--trunc", type=int, default=DEFAULTS["trunc"])
    p.add_argument("--margin", type=int, default=DEFAULTS["margin"])
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    p.set_defaults(func=cmd_verify)

    p = add("selftest", "run the acceptance suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def _join_values(parser: argparse.ArgumentParser, argv: list) -> list:
    # let value flags take arguments that start with '-' (e.g. --grid -2:2:5)
    takes_value = set()
    stack = [parser]
    while stack:
        p = stack.pop()
        for act in p._actions:
            if isinstance(act, argparse._SubParsersAction):
                stack.extend(act.choices.values())
            elif act.option_strings and act.nargs is None and not isinstance(
                    act, (argparse._StoreTrueAction, argparse._VersionAction, argparse._HelpAction)):
                takes_value.update(act.option_strings)
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in takes_value and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_join_values(parser, argv))
    from .acceptance import DEFAULT_SEED

    if args.seed is None:
        args.seed = DEFAULT_SEED
    fmt = args.format or ("json" if args.command == "verify" else "csv")
    try:
        if args.command == "selftest":
            return cmd_selftest(args)
        out = args.func(args)
        code = 0
        if isinstance(out, tuple):
            out, code = out
        emit(out, fmt, args.precision, args.out)
        return code
    except (DomainError, UsageError, ValueError) as exc:
        print(f"wignerosp {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (WignerOspError, ArithmeticError) as exc:
        print(f"wignerosp {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
