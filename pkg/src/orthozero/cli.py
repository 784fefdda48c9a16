"""Command-line front end.

Subcommands: mrs, density, recurrence, kac, simulate, verify.  Output is
CSV with 17-significant-digit floats (plus JSON summaries with sorted
keys), so identical invocations produce byte-identical artifacts.  A
--config file of key=value lines supplies defaults; explicit flags win.
Exit codes: 0 success, 1 numerical budget failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import acceptance, kac, montecarlo, orthopoly, scaling, weights
from .errors import (
    BracketError,
    BudgetError,
    DegenerateInputError,
    DegenerateSampleError,
    DiscretizationError,
    DomainError,
)

SUBCOMMANDS = ("mrs", "density", "recurrence", "kac", "simulate", "verify")


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class ExperimentConfig:
    """Canonical view of one invocation (subcommand plus its parameters)."""

    subcommand: str
    params: tuple[tuple[str, str], ...]

    def canonical(self) -> str:
        lines = [f"subcommand={self.subcommand}"]
        lines += [f"{k}={v}" for k, v in sorted(self.params)]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_namespace(ns: argparse.Namespace) -> "ExperimentConfig":
        skip = {"subcommand", "config", "output", "func"}
        params = tuple(sorted(
            (k, str(v)) for k, v in vars(ns).items()
            if k not in skip and v is not None))
        return ExperimentConfig(subcommand=ns.subcommand, params=params)

    @staticmethod
    def parse_canonical(text: str) -> "ExperimentConfig":
        sub = ""
        params = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line {line!r}, expected key=value")
            k, v = line.split("=", 1)
            if k.strip() == "subcommand":
                sub = v.strip()
            else:
                params.append((k.strip(), v.strip()))
        return ExperimentConfig(subcommand=sub, params=tuple(sorted(params)))


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line {line!r}, expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _write(output, text: str) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mrs(ns) -> int:
    spec = weights.parse_weight(ns.weight)
    rows = ["n,a_n,residual"]
    for n in ns.n:
        info = scaling.solve_mrs(spec, n, tol=ns.tol)
        rows.append(f"{n},{fmt(info.a_n)},{fmt(info.residual)}")
    _write(ns.output, "\n".join(rows) + "\n")
    return 0


def cmd_density(ns) -> int:
    spec = weights.parse_weight(ns.weight)
    info = scaling.solve_mrs(spec, ns.n)
    s = np.linspace(-1.0, 1.0, ns.points + 2)[1:-1]
    sig = scaling.normalized_density_many(spec, info, s, tol=ns.tol)
    rows = ["s,sigma_star,limit_density"]
    for si, v in zip(s, sig):
        mu = scaling.ullman_density(spec.alpha, float(si), tol=ns.tol)
        rows.append(f"{fmt(si)},{fmt(v)},{fmt(mu)}")
    _write(ns.output, "\n".join(rows) + "\n")
    return 0


def cmd_recurrence(ns) -> int:
    spec = weights.parse_weight(ns.weight)
    table = orthopoly.build_recurrence(spec, ns.n_max, pad=ns.pad)
    if ns.cache:
        orthopoly.save_table(table, ns.cache)
    lead = table.leading
    rows = ["k,a_k,b_k,gamma_k", f"0,{fmt(0.0)},,{fmt(lead[0])}"]
    for k in range(1, ns.n_max + 1):
        a_k = table.diag[k] if k < ns.n_max else 0.0
        rows.append(f"{k},{fmt(a_k)},{fmt(table.off_diag[k - 1])},{fmt(lead[k])}")
    rows.append(f"# ortho_residual={fmt(table.ortho_residual)}")
    _write(ns.output, "\n".join(rows) + "\n")
    return 0


def cmd_kac(ns) -> int:
    if ns.basis == "monomial":
        if ns.scaled:
            raise DomainError("--scaled applies to the orthonormal basis")
        prof = kac.expected_zeros_monomial(
            ns.n, None if ns.full_line else tuple(ns.interval), tol=ns.tol)
    else:
        spec = weights.parse_weight(ns.weight)
        table = orthopoly.get_table(spec, ns.n + 1)
        info = scaling.solve_mrs(spec, ns.n + 1)
        if ns.scaled:
            if ns.full_line or ns.interval is None:
                raise DomainError("--scaled needs --interval inside (-1, 1)")
            val = kac.scaled_expected_zeros(
                spec, table, ns.n, ns.interval[0], ns.interval[1], tol=ns.tol)
            _write(ns.output, "scaled_expected_zeros_per_n\n" + fmt(val) + "\n")
            return 0
        if ns.full_line:
            prof = kac.expected_zeros_full(table, ns.n, tol=ns.tol,
                                           pad=ns.pad, edge=info.a_n)
        else:
            prof = kac.expected_zeros(table, ns.n, tuple(ns.interval),
                                      tol=ns.tol, edge=info.a_n)
    rows = ["x,density"]
    rows += [f"{fmt(x)},{fmt(d)}"
             for x, d in zip(prof.samples_x, prof.samples_density)]
    rows.append(f"expected_count,{fmt(prof.expected_count)}")
    rows.append(f"error,{fmt(prof.quadrature_error)}")
    _write(ns.output, "\n".join(rows) + "\n")
    return 0


def cmd_simulate(ns) -> int:
    spec = weights.parse_weight(ns.weight)
    dist = montecarlo.parse_dist(ns.dist)
    table = orthopoly.get_table(spec, ns.n)
    partition = tuple(ns.partition) if ns.partition else None
    res = montecarlo.mc_expected_zeros(spec, table, ns.n, ns.trials, dist,
                                       ns.seed, partition=partition)
    info_n = scaling.solve_mrs(spec, ns.n)
    imag_tol = ns.imag_tol if ns.imag_tol is not None else 1e-8 * info_n.a_n
    ks_vals = []
    cfrac = []
    for t in range(ns.trials):
        s = montecarlo.sample_coeffs(dist, ns.seed, t, ns.n)
        z = montecarlo.all_zeros(table, s)
        m = montecarlo.empirical_measure(z, info_n, imag_tol=imag_tol)
        ks_vals.append(montecarlo.ks_to_ullman(m, spec.alpha))
        cfrac.append(m.complex_count / m.total)
    rows = ["trial,count"]
    rows += [f"{t},{int(c)}" for t, c in enumerate(res.counts)]
    summary = {
        "complex_fraction_mean": float(np.mean(cfrac)),
        "imag_tol": imag_tol,
        "ks_mean": float(np.mean(ks_vals)),
        "mean": res.mean,
        "seed": ns.seed,
        "stderr": res.stderr,
        "trials": ns.trials,
    }
    if res.partition_fractions is not None:
        summary["partition_edges"] = list(res.partition)
        summary["partition_fractions"] = [float(v)
                                          for v in res.partition_fractions]
    text = "\n".join(rows) + "\n" + json.dumps(summary, sort_keys=True) + "\n"
    _write(ns.output, text)
    return 0


def cmd_verify(ns) -> int:
    only = set(ns.only) if ns.only else None
    results = acceptance.run_all(only=only)
    lines = [r.line() for r in results]
    _write(ns.output, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orthozero",
        description="Expected real zeros of random orthogonal polynomials "
                    "for exponential weights")
    p.add_argument("--config", help="key=value file supplying flag defaults")
    sub = p.add_subparsers(dest="subcommand", required=True,
                           metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def add_common(sp):
        sp.add_argument("--weight", default="freud:0.5:2",
                        help="weight registry key, e.g. freud:1:2")
        sp.add_argument("--output", help="write to this path instead of stdout")

    sp = sub.add_parser("mrs", help="support radius a_n")
    add_common(sp)
    sp.add_argument("--n", type=_int_list, required=True,
                    help="degree or comma list of degrees")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_mrs)

    sp = sub.add_parser("density", help="normalized equilibrium density table")
    add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--points", type=int, default=101)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("recurrence", help="recurrence coefficient table")
    add_common(sp)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--pad", type=float, default=1.5)
    sp.add_argument("--cache", help="also save the table to this npz file")
    sp.set_defaults(func=cmd_recurrence)

    sp = sub.add_parser("kac", help="expected real zeros by quadrature")
    add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--full-line", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--pad", type=float, default=1.5)
    sp.add_argument("--basis", choices=("orthonormal", "monomial"),
                    default="orthonormal")
    sp.add_argument("--scaled", action="store_true",
                    help="report (1/n) E[N] over the expanded interval")
    sp.set_defaults(func=cmd_kac)

    sp = sub.add_parser("simulate", help="seeded Monte Carlo zero counts")
    add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--dist", default="gaussian",
                    help="gaussian[:sigma] | rademacher | uniform")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--partition", type=_float_list,
                    help="comma list of interval edges in [-1, 1]; use "
                         "--partition=-1,0,1 when the first edge is negative")
    sp.add_argument("--imag-tol", type=float,
                    help="absolute real/complex threshold (default 1e-8 a_n)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--only", type=_int_list,
                    help="comma list of criterion numbers")
    sp.add_argument("--output", help="write to this path instead of stdout")
    sp.set_defaults(func=cmd_verify)
    return p


def _merge_config(argv: list[str]) -> list[str]:
    """Inject config key=value pairs as flags right after the subcommand;
    explicit flags come later in argv, so they win."""
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise DomainError("--config needs a path")
    cfg = read_config(argv[i + 1])
    del argv[i:i + 2]
    sub_at = next((j for j, a in enumerate(argv) if not a.startswith("-")), None)
    if sub_at is None:
        return argv
    injected = []
    for k, v in sorted(cfg.items()):
        flag = "--" + k.replace("_", "-")
        if v.lower() in ("true", "false"):
            if v.lower() == "true":
                injected.append(flag)
        else:
            injected.append(f"{flag}={v}")
    return argv[: sub_at + 1] + injected + argv[sub_at + 1:]


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(_merge_config(argv))
        return ns.func(ns)
    except (DomainError, DegenerateInputError, DegenerateSampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, BracketError, DiscretizationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
