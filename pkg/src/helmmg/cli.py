"""Command-line interface: ``helmmg solve | certify | bench``.

Exit codes: 0 success, 2 usage / configuration error, 3 solver divergence
or non-convergence, 4 dense-size limit exceeded.
"""

import argparse
import sys

import numpy as np

from . import presets
from .certificate import TwoGridConfig, certify, omega_sweep, table_entry
from .linalg import DenseLimitError
from .mg import CycleConfig, build_hierarchy, history_csv, solve
from .problem import (
    ProblemSpec,
    ShiftSpec,
    assemble_helmholtz,
    assemble_rhs,
    build_wavenumber_field,
    nodes_for_wavenumber,
    spec_to_config,
)
from .smoothing import SmootherConfig
from .transfer import build_transfer_2d

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGED = 3
EXIT_DENSE_LIMIT = 4


class CliError(Exception):
    """Configuration error reported with exit code 2."""


def _add_problem_args(p):
    p.add_argument("--k", type=float, help="constant wavenumber (MP 2-A)")
    p.add_argument("--k-min", type=float, help="minimum wavenumber (MP 2-B)")
    p.add_argument("--k-max", type=float, help="maximum wavenumber (MP 2-B)")
    p.add_argument("--profile", choices=["constant", "smooth", "sharp"],
                   default="smooth",
                   help="spatial profile of the wavenumber field")
    p.add_argument("--seed", type=int, default=1,
                   help="seed for the reproducible wavenumber field")
    p.add_argument("--ppw", type=float, default=None,
                   help="resolution rule as max k*h (default 0.625)")
    p.add_argument("--n", type=int, default=None,
                   help="nodes per dimension (odd); overrides the ppw rule")
    p.add_argument("--shift", default="0.7",
                   help="CSL shift beta2: a number, 'inv-k', or 'zero'")
    p.add_argument("--transfer", choices=["linear", "bezier"], default="bezier",
                   help="interpolation scheme for P")
    p.add_argument("--coarsen-on", choices=["csl", "original"], default="csl",
                   help="operator used to build the Galerkin coarse chain")


def _add_smoother_args(p):
    p.add_argument("--smoother", choices=["jacobi", "gmres3"], default="jacobi")
    p.add_argument("--omega", type=float, default=4.5,
                   help="Jacobi damping: X = omega * diag(A)")
    p.add_argument("--nu", type=int, default=1, help="post-smoothing steps")
    p.add_argument("--nu-pre", type=int, default=0, help="pre-smoothing steps")


def _shift_spec(text):
    text = text.strip()
    if text == "inv-k":
        return ShiftSpec(kind="inverse-k")
    if text == "zero":
        return ShiftSpec(kind="zero")
    try:
        beta2 = float(text)
    except ValueError:
        raise CliError(f"--shift must be a number, 'inv-k' or 'zero', got {text!r}")
    if beta2 == 0.0:
        return ShiftSpec(kind="zero")
    return ShiftSpec(kind="fixed", beta2=beta2)


def _problem_spec(args):
    shift = _shift_spec(args.shift)
    ppw = args.ppw if args.ppw is not None else 0.625
    if args.k is not None:
        if args.k_min is not None or args.k_max is not None:
            raise CliError("give either --k or --k-min/--k-max, not both")
        n = args.n or nodes_for_wavenumber(args.k, ppw)
        kwargs = dict(kind="constant-k", k=args.k)
    elif args.k_min is not None and args.k_max is not None:
        if args.profile == "constant":
            raise CliError("--profile constant requires --k, not --k-min/--k-max")
        n = args.n or nodes_for_wavenumber(args.k_max, ppw)
        kwargs = dict(kind="variable-k", k_min=args.k_min, k_max=args.k_max,
                      profile=args.profile, seed=args.seed)
    else:
        raise CliError("a problem needs --k or both --k-min and --k-max")
    try:
        return ProblemSpec(nodes_per_dim=n, shift=shift, **kwargs)
    except ValueError as exc:
        raise CliError(str(exc))


def _smoother_config(args):
    kind = "gmres" if args.smoother == "gmres3" else "jacobi"
    try:
        return SmootherConfig(kind=kind, omega=args.omega, m=3,
                              nu=args.nu, nu_pre=args.nu_pre)
    except ValueError as exc:
        raise CliError(str(exc))


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _dump_solution_csv(f, spec, u):
    """Solution field as CSV 'x,y,re,im' rows, row-major (x fastest)."""
    n = spec.nodes_per_dim
    xs = np.linspace(0.0, 1.0, n)
    f.write("x,y,re,im\n")
    for j in range(n):
        for i in range(n):
            v = u[j * n + i]
            f.write(f"{xs[i]:.10g},{xs[j]:.10g},{v.real:.10e},{v.imag:.10e}\n")


def cmd_solve(args):
    spec = _problem_spec(args)
    sm = _smoother_config(args)
    try:
        cfg = CycleConfig(gamma=2 if args.cycle == "w" else 1, smoother=sm,
                          tol=args.tol, max_cycles=args.max_cycles)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.dump_config:
        sys.stdout.write(spec_to_config(spec))
        sys.stdout.write(f"transfer = {args.transfer}\n"
                         f"coarsen_on = {args.coarsen_on}\n"
                         f"smoother = {args.smoother}\n"
                         f"omega = {args.omega!r}\nnu = {args.nu}\n"
                         f"nu_pre = {args.nu_pre}\ncycle = {args.cycle}\n"
                         f"tol = {args.tol!r}\nmax_cycles = {args.max_cycles}\n")
        return EXIT_OK
    h = build_hierarchy(spec, scheme=args.transfer, coarsen_on=args.coarsen_on)
    b = assemble_rhs(spec)
    res = solve(h, b, cfg)
    if args.field_dump:
        with open(args.field_dump, "w") as f:
            _dump_solution_csv(f, spec, res.u)
    final = res.residual_history[-1] if res.residual_history else 0.0
    print(f"status={res.status} cycles={res.cycles} relres={final:.4e} "
          f"n={spec.nodes_per_dim} levels={h.nlevels}")
    if args.out:
        with open(args.out, "w") as f:
            history_csv(f, res.residual_history)
    return EXIT_OK if res.converged else EXIT_DIVERGED


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def _two_grid_config(spec, scheme, coarsen_on, omega, nu):
    fieldvals = build_wavenumber_field(spec)
    A = assemble_helmholtz(spec, fieldvals, shift_on=False)
    B = assemble_helmholtz(spec, fieldvals, shift_on=True) if coarsen_on == "csl" else A
    pair = build_transfer_2d(spec.nodes_per_dim, scheme)
    return TwoGridConfig(A=A, coarse_build_op=B, pair=pair, omega=omega, nu=nu)


def cmd_certify(args):
    if args.table == "conv1":
        return _certify_conv1(args)
    if args.table == "opt1":
        return _certify_opt1(args)
    spec = _problem_spec(args)
    cfg = _two_grid_config(spec, args.transfer, args.coarsen_on,
                           args.omega, args.nu)
    report = certify(cfg)
    print(report.to_text())
    if args.out:
        with open(args.out, "w") as f:
            f.write(report.CSV_HEADER + "\n")
            f.write(report.to_csv_row() + "\n")
    return EXIT_OK


def _conv1_rows(omega):
    rows = []
    for k in presets.CONV1_KS:
        spec = ProblemSpec(kind="constant-k", k=float(k),
                           nodes_per_dim=nodes_for_wavenumber(k),
                           shift=ShiftSpec(kind="fixed", beta2=0.7))
        fieldvals = build_wavenumber_field(spec)
        A = assemble_helmholtz(spec, fieldvals, shift_on=False)
        C = assemble_helmholtz(spec, fieldvals, shift_on=True)
        row = {"k": k}
        for scheme in ("linear", "bezier"):
            pair = build_transfer_2d(spec.nodes_per_dim, scheme)
            for coarsen in ("original", "csl"):
                cfg = TwoGridConfig(A=A, coarse_build_op=C if coarsen == "csl"
                                    else A, pair=pair, omega=omega, nu=1)
                hpd, t0 = table_entry(cfg)
                row[(scheme, coarsen)] = (hpd.ok, t0)
        rows.append(row)
    return rows


def _certify_conv1(args):
    omega = presets.CONV1_OMEGA if args.omega == 4.5 else args.omega
    rows = _conv1_rows(omega)
    cols = [("linear", "original"), ("linear", "csl"),
            ("bezier", "original"), ("bezier", "csl")]
    print(f"two-grid certificate table (omega = {omega}, nu = 1)")
    print("k    lin/A            lin/C            bez/A            bez/C")
    failures = 0
    for i, row in enumerate(rows):
        cells = []
        for col in cols:
            ok, t0 = row[col]
            mark = "+" if ok else "x"
            cells.append(f"{mark} ||T0||={t0:7.3f}")
            if args.regress:
                ref_ok, ref_t0 = presets.CONV1_REFERENCE[col][i]
                if ok != ref_ok or abs(t0 - ref_t0) > 0.15 * ref_t0:
                    failures += 1
        print(f"{row['k']:<4} " + "  ".join(cells))
    if args.regress:
        print(f"regression: {failures} cell(s) outside the verdict/15% band")
        return EXIT_OK if failures == 0 else EXIT_DIVERGED
    return EXIT_OK


def _certify_opt1(args):
    ks = presets.CONV1_KS
    print("||Gamma-tilde||_1 / kappa_1(Gamma-tilde) (nu = 1, 2 per cell)")
    header = "k    " + "  ".join(f"omega={w:<4}" for w in presets.OPT1_OMEGAS)
    print(header)
    failures = 0
    for k in ks:
        spec = ProblemSpec(kind="constant-k", k=float(k),
                           nodes_per_dim=nodes_for_wavenumber(k),
                           shift=ShiftSpec(kind="fixed", beta2=0.7))
        fieldvals = build_wavenumber_field(spec)
        A = assemble_helmholtz(spec, fieldvals, shift_on=False)
        C = assemble_helmholtz(spec, fieldvals, shift_on=True)
        pair = build_transfer_2d(spec.nodes_per_dim, "bezier")

        def make_cfg(omega, nu, A=A, C=C, pair=pair):
            return TwoGridConfig(A=A, coarse_build_op=C, pair=pair,
                                 omega=omega, nu=nu)

        rows = omega_sweep(make_cfg, presets.OPT1_OMEGAS, presets.OPT1_NUS)
        vals = {(r["omega"], r["nu"]): r["ratio"] for r in rows}
        cells = []
        for w in presets.OPT1_OMEGAS:
            v1, v2 = vals[(w, 1)], vals[(w, 2)]
            cells.append(f"{v1:.3f}/{v2:.3f}")
            if args.regress:
                r1, r2 = presets.OPT1_REFERENCE[k][w]
                for got, ref in ((v1, r1), (v2, r2)):
                    if abs(got - ref) > 0.15 * max(abs(ref), 1e-3):
                        failures += 1
        print(f"{k:<4} " + "  ".join(cells))
    if args.regress:
        print(f"regression: {failures} cell(s) outside the 15% band")
        return EXIT_OK if failures == 0 else EXIT_DIVERGED
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(args):
    if args.preset not in presets.PRESETS:
        raise CliError(
            f"unknown preset {args.preset!r}; choose from "
            + ", ".join(sorted(presets.PRESETS))
        )
    cases = presets.PRESETS[args.preset]()
    if args.case:
        cases = [c for c in cases if args.case in c["name"]]
        if not cases:
            raise CliError(f"no case in preset {args.preset!r} matches {args.case!r}")
    out = open(args.out, "w") if args.out else None
    if out:
        out.write("case,expected,measured,status,within_band\n")
    failures = 0
    diverged = 0
    for case in cases:
        cfg = case["cfg"]
        if args.max_cycles:
            cfg = CycleConfig(gamma=cfg.gamma, smoother=cfg.smoother,
                              tol=cfg.tol, max_cycles=args.max_cycles)
        h = build_hierarchy(case["spec"], scheme=case["scheme"],
                            coarsen_on=case["coarsen_on"])
        res = solve(h, assemble_rhs(case["spec"]), cfg)
        ok = res.converged and presets.band_allows(case["expected"], res.cycles,
                                                   case["band"])
        if not res.converged:
            diverged += 1
        if args.regress and not ok:
            failures += 1
        tag = "ok" if ok else "MISS"
        print(f"{case['name']:<24} expected={case['expected']:<4} "
              f"measured={res.cycles:<4} status={res.status:<10} {tag}")
        if out:
            out.write(f"{case['name']},{case['expected']},{res.cycles},"
                      f"{res.status},{int(ok)}\n")
    if out:
        out.close()
    if args.regress:
        print(f"regression: {failures} of {len(cases)} case(s) outside band")
        return EXIT_OK if failures == 0 else EXIT_DIVERGED
    return EXIT_DIVERGED if diverged else EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="helmmg",
        description="Geometric multigrid solver and convergence certificates "
                    "for the 2D indefinite Helmholtz equation",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the multigrid solver on one problem")
    _add_problem_args(ps)
    _add_smoother_args(ps)
    ps.add_argument("--cycle", choices=["v", "w"], default="v")
    ps.add_argument("--tol", type=float, default=1e-5)
    ps.add_argument("--max-cycles", type=int, default=1000)
    ps.add_argument("--out", help="write the residual history CSV here")
    ps.add_argument("--field-dump", help="write the wavenumber field CSV here")
    ps.add_argument("--dump-config", action="store_true",
                    help="print the resolved configuration and exit")
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser("certify", help="two-grid convergence certificates")
    _add_problem_args(pc)
    pc.add_argument("--omega", type=float, default=4.5)
    pc.add_argument("--nu", type=int, default=1)
    pc.add_argument("--table", choices=["conv1", "opt1"],
                    help="reproduce a published certificate table instead of "
                         "certifying a single configuration")
    pc.add_argument("--regress", action="store_true",
                    help="compare table values against bundled references")
    pc.add_argument("--out", help="write the report CSV here")
    pc.set_defaults(func=cmd_certify)

    pb = sub.add_parser("bench", help="run an experiment preset")
    pb.add_argument("preset", help="preset name: " + ", ".join(sorted(presets.PRESETS)))
    pb.add_argument("--case", help="substring filter on case names")
    pb.add_argument("--max-cycles", type=int, default=None,
                    help="override the per-case cycle cap")
    pb.add_argument("--regress", action="store_true",
                    help="fail (exit 3) when any case leaves its band")
    pb.add_argument("--jobs", type=int, default=1,
                    help="accepted for interface compatibility; runs serially")
    pb.add_argument("--out", help="write per-case results CSV here")
    pb.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DenseLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DENSE_LIMIT
    except np.linalg.LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
