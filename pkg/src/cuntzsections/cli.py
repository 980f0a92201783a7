"""Command line entry point: ``cuntz-sections <command> [options] [EXPR]``.

Exit codes: 0 success, 2 input error, 3 computational failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .catalog import random_element
from .extended import (
    CompactBlock,
    ExtendedSequenceSpec,
    fredholm_analysis,
    two_symbol_stability_verdict,
)
from .parser import parse_element
from .sections import (
    SizeSchedule,
    element_matrix,
    fractal_witness,
    initial_projection_size,
    power_exponent,
    projection_matrix,
)
from .spectral import (
    SpectralComputationError,
    pseudospectrum_grid,
    spectral_convergence_report,
)
from .symbol import block_projection_matrix, lifting_vs_symbol_check, p1_sequence, symbol_truncation
from .symbolic import MultiIndex, format_element

log = logging.getLogger("cuntzsections")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3


class InputError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, default=2, help="number of generators (default 2)")
    common.add_argument("--max-power", type=int, default=8, help="schedule sizes N^0..N^p (default 8)")
    common.add_argument("--schedule", choices=["powers", "arithmetic", "list"], default="powers")
    common.add_argument("--sizes", type=_int_list, default=None, help="comma separated sizes for --schedule list")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--eps", type=_float_list, default=None, help="comma separated pseudospectral levels")
    common.add_argument("--grid", type=int, default=101, help="grid points per axis (default 101)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--seed", type=int, default=None, help="draw a random element when EXPR is omitted")
    common.add_argument("--compact", type=Path, default=None, help="triplet CSV with a compact corner K")
    common.add_argument("--workers", type=int, default=None, help="threads for grid scans")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="cuntz-sections",
        description="Finite sections of Cuntz algebra elements: matrices, symbols, stability and spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, expr=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if expr:
            p.add_argument("expr", nargs="?", help='element, e.g. "I + 0.5*S0"')
        return p

    p = add("matrix", "write the section matrix as triplet CSV")
    p.add_argument("--size", type=int, default=None, help="section size (default N^max-power)")

    add("stability", "sigma_min trends of sections and of the symbol; JSON report")

    p = add("pseudospec", "sigma_min grid scan and epsilon-pseudospectrum; CSV")
    p.add_argument("--size", type=int, default=None, help="section size (default min(N^max-power, 64))")
    p.add_argument("--region", type=float, nargs=4, metavar=("RE0", "RE1", "IM0", "IM1"), default=None)

    add("spectra", "singular values of sections and symbol truncations with Hausdorff distances")

    p = add("symbol", "truncation of the block Toeplitz symbol; triplet CSV")
    p.add_argument("--blocks", type=int, default=4)
    p.add_argument("--inner", type=int, default=8)
    p.add_argument("--sharp", action="store_true", help="use the symbol of the sharp image")

    p = add("fractal-check", "witness sequences of initial projections", expr=False)
    p.add_argument("--max-n", type=int, default=64)

    p = add("fredholm", "splitting index of the leading singular values")
    p.add_argument("--k-max", type=int, default=4)

    p = add("lifting-check", "lifting estimates against symbol blocks")
    p.add_argument("--blocks", type=int, default=2, help="check block indices i, j < blocks")
    p.add_argument("--p1", action="store_true", help="check the sequence T_0^* T_0 against I - Pi_1")
    return parser


def _schedule(args) -> SizeSchedule:
    if args.schedule == "list":
        if not args.sizes:
            raise InputError("--schedule list requires --sizes")
        return SizeSchedule(N=args.N, mode="custom", sizes=tuple(args.sizes))
    return SizeSchedule(N=args.N, mode=args.schedule, max_power=args.max_power)


def _element(args):
    if args.expr:
        return parse_element(args.expr, args.N)
    if args.seed is not None:
        return random_element(args.N, np.random.default_rng(args.seed))
    raise InputError("an expression is required (or --seed for a random element)")


def _compact(args):
    if args.compact is None:
        return CompactBlock.zero()
    try:
        return CompactBlock(io.read_matrix_csv(args.compact))
    except OSError as exc:
        raise InputError(f"cannot read {args.compact}: {exc}") from exc


def _inputs(args, a=None) -> dict:
    out = {"N": args.N, "tol": args.tol, "seed": args.seed}
    if a is not None:
        out["element"] = format_element(a)
    if args.compact is not None:
        out["compact"] = str(args.compact)
    return out


def _out(args, name: str) -> Path:
    return args.out / name


def cmd_matrix(args):
    a = _element(args)
    n = args.size or args.N**args.max_power
    K = _compact(args)
    M = element_matrix(a, n, K.entries if K.d else None)
    path = _out(args, "matrix.csv")
    io.write_matrix_csv(path, M)
    print(f"wrote {n}x{n} section to {path}")


def cmd_stability(args):
    a = _element(args)
    spec = ExtendedSequenceSpec(a, _compact(args), _schedule(args))
    report = two_symbol_stability_verdict(spec, args.tol)
    body = {
        "sizes": report.sections.sizes,
        "sigma_min": report.sections.sigma_min,
        "symbol_sigma_min": report.symbol.sigma_min,
        "verdict": report.verdict,
        "causes": report.causes,
        "section_verdict": report.sections.verdict,
        "symbol_verdict": report.symbol.verdict,
    }
    io.write_report_json(_out(args, "stability.json"), "stability", _inputs(args, a), body)
    cause = f" (cause: {', '.join(report.causes)})" if report.causes else ""
    print(f"verdict: {report.verdict}{cause}")


def cmd_pseudospec(args):
    a = _element(args)
    n = args.size or min(args.N**args.max_power, 64)
    K = _compact(args)
    M = element_matrix(a, n, K.entries if K.d else None)
    eps_list = args.eps or [0.1]
    if args.region:
        region = tuple(args.region)
    else:
        r = float(np.linalg.norm(M, 2)) + max(eps_list)
        region = (-r, r, -r, r)
    base = pseudospectrum_grid(M, region, args.grid, eps_list[0], workers=args.workers)
    for eps in eps_list:
        g = base.with_eps(eps)
        name = "pseudospec.csv" if len(eps_list) == 1 else f"pseudospec_eps{eps:g}.csv"
        rows = []
        mask = g.mask
        for iy, y in enumerate(g.im):
            for ix, x in enumerate(g.re):
                rows.append([float(x), float(y), float(g.sigma[iy, ix]), int(mask[iy, ix])])
        io.write_table_csv(_out(args, name), ["re", "im", "sigma_min", "in_set"], rows)
        print(f"eps={eps:g}: {int(mask.sum())} of {mask.size} grid points in the pseudospectrum")


def cmd_spectra(args):
    a = _element(args)
    schedule = _schedule(args)
    for n in schedule.values():
        power_exponent(args.N, n)
    rows, spectra = spectral_convergence_report(
        a, schedule, eps_list=args.eps or (), resolution=args.grid, workers=args.workers, with_spectra=True
    )
    sigma_rows = []
    for n, s_sec, s_sym in spectra:
        sigma_rows += [[n, "section", k + 1, float(s)] for k, s in enumerate(s_sec)]
        sigma_rows += [[n, "symbol", k + 1, float(s)] for k, s in enumerate(s_sym)]
    io.write_table_csv(_out(args, "spectra_sigma.csv"), ["n", "side", "k", "sigma"], sigma_rows)
    eps_cols = [f"d_pseudo_{e:g}" for e in (args.eps or ())]
    table = [
        [r.n, r.symbol_shape[0], r.symbol_shape[1], r.d_sigma2] + [r.d_pseudo[e] for e in (args.eps or ())]
        for r in rows
    ]
    io.write_table_csv(_out(args, "spectra_hausdorff.csv"), ["n", "B", "M", "d_sigma2"] + eps_cols, table)
    for r in rows:
        print(f"n={r.n}: d_H(sigma_2) = {r.d_sigma2:.6g}")


def cmd_symbol(args):
    a = _element(args)
    st = symbol_truncation(a, args.blocks, args.inner, apply_sharp=args.sharp)
    io.write_matrix_csv(_out(args, "symbol.csv"), st.entries)
    print(f"wrote {st.shape[0]}x{st.shape[1]} symbol truncation (B={st.B}, M={st.M})")


def cmd_fractal_check(args):
    N = args.N
    rows = []
    ok = True
    for n in range(1, args.max_n + 1):
        W = fractal_witness(N, n)
        j, r = divmod(n, N)
        expected = np.zeros((n, n))
        if r == 1:
            expected = np.diag((np.arange(n) == j).astype(float))
        match = np.array_equal(W, expected)
        ok &= match
        rows.append([n, "first", float(np.linalg.norm(W, 2)), float(np.linalg.norm(expected, 2)), int(match)])
    # second sequence along n = mN, squared generators
    for m in range(1, args.max_n // N + 1):
        n = m * N
        W = fractal_witness(N, n, power=2)
        m0 = initial_projection_size(MultiIndex(N, (0, 0)), n)
        m1 = initial_projection_size(MultiIndex(N, (1, 1)), n)
        expected = projection_matrix(m0, n) - projection_matrix(m1, n)
        match = np.array_equal(W, expected)
        ok &= match
        rows.append([n, "second", float(np.linalg.norm(W, 2)), float(np.linalg.norm(expected, 2)), int(match)])
    io.write_table_csv(_out(args, "fractal.csv"), ["n", "sequence", "norm", "expected_norm", "match"], rows)
    print("witness sequences match their closed forms" if ok else "witness MISMATCH")
    if not ok:
        return EXIT_COMPUTE


def cmd_fredholm(args):
    a = _element(args)
    spec = ExtendedSequenceSpec(a, _compact(args), _schedule(args))
    alpha, report = fredholm_analysis(spec, args.k_max, args.tol)
    body = {"alpha": alpha, "sizes": report.sizes, "sigma": report.sigma, "floor": report.floor}
    io.write_report_json(_out(args, "fredholm.json"), "fredholm", _inputs(args, a), body)
    header = ["n"] + [f"sigma_{k + 1}" for k in range(args.k_max + 1)]
    io.write_table_csv(_out(args, "fredholm_sigma.csv"), header, [[n] + s for n, s in zip(report.sizes, report.sigma)])
    print(f"alpha = {alpha if alpha is not None else 'none'}")


def cmd_lifting_check(args):
    n = args.N**args.max_power
    B = args.blocks
    results = []
    if args.p1:
        target = p1_sequence(args.N)
        ref = np.eye(B * n) - block_projection_matrix(1, B, n)
        a = None
    else:
        a = _element(args)
        target = a
    length = 1 if a is None else a.max_length
    for i in range(B):
        for j in range(B):
            if args.max_power < i + j + length:
                continue
            reference = ref[i * n:(i + 1) * n, j * n:(j + 1) * n] if a is None else None
            c = lifting_vs_symbol_check(target, i, j, n, reference=reference, N=args.N, length=length)
            results.append({"i": i, "j": j, "n": n, "window": c.window, "deviation": c.deviation, "match": c.match})
    inputs = _inputs(args, a)
    inputs["p1"] = args.p1
    io.write_report_json(_out(args, "lifting.json"), "lifting-check", inputs, {"checks": results})
    bad = [r for r in results if not r["match"]]
    print(f"{len(results) - len(bad)} of {len(results)} blocks match on their windows")


COMMANDS = {
    "matrix": cmd_matrix,
    "stability": cmd_stability,
    "pseudospec": cmd_pseudospec,
    "spectra": cmd_spectra,
    "symbol": cmd_symbol,
    "fractal-check": cmd_fractal_check,
    "fredholm": cmd_fredholm,
    "lifting-check": cmd_lifting_check,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        probe = args.out / ".write_probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory {args.out} is not writable: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code = COMMANDS[args.command](args)
    except (SpectralComputationError, np.linalg.LinAlgError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code or EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
