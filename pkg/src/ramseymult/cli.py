"""Command-line front end.

Every subcommand computes one artefact, writes it to ``--out`` (CSV by
default, JSON on request), and prints a one-line summary.  The resolved
configuration is embedded in the output, as a ``# config = {...}`` comment
line in CSV and a top-level key in JSON, so results are reproducible from
the file alone.  Outputs are byte-deterministic for a fixed configuration.

Exit codes: 0 on success, 2 for validation problems (bad arguments,
out-of-range queries, refused sizes), 3 for numeric failures (singular
fields, lost brackets, degenerate fits, blown budgets of the solvers).
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import analytic, lattice, oracle, recurrence
from .numerics import Degenerate, NoBracket, SingularField

_VALIDATION_ERRORS = (
    ValueError,
    lattice.TooMany,
    lattice.OutOfRange,
    oracle.TooLarge,
    analytic.InvalidEpsilon,
    recurrence.BudgetExceeded,
)
_NUMERIC_ERRORS = (
    SingularField,
    NoBracket,
    Degenerate,
    analytic.Overflow,
    recurrence.WindowTooSmall,
)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; None marks options a subcommand lacks."""

    subcommand: str
    out: str
    format: str
    t_max: int | None = None
    k: int | None = None
    l: int | None = None
    mode: str | None = None
    thresholds: str | None = None
    q: int | None = None
    t: int | None = None
    n: int | None = None
    n_max: int | None = None
    w: int | None = None
    epsilon: float | None = None
    eps_min: float | None = None
    tol: float | None = None
    max_diff: float | None = None
    max_cells: int | None = None
    samples: int | None = None
    seed: int | None = None
    complement: bool | None = None
    large: bool | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_cell(v):
    return f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v


def _emit(cfg: RunConfig, columns: list[str], rows: list[tuple], extras: dict) -> str:
    """Write the artefact in the configured format; returns the path."""
    path = cfg.out
    if cfg.format == "csv":
        lines = [f"# config = {json.dumps(cfg.to_dict(), sort_keys=True)}"]
        for key in sorted(extras):
            lines.append(f"# {key} = {_fmt(extras[key])}")
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "config": cfg.to_dict(),
            "columns": columns,
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        payload.update(extras)
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text)
    return path


def _threshold_table(kind: str, size: int, epsilon: float, w: int | None, tol: float):
    if kind == "uniform":
        return lattice.ThresholdSequence.uniform(size)
    if kind == "erdos-szekeres":
        return lattice.ThresholdSequence.erdos_szekeres(size)
    if kind == "optimal":
        return recurrence.optimal_thresholds(recurrence.build_table(size))
    if kind == "patched":
        return analytic.assemble_patched_thresholds(epsilon, size, w=w, tol=tol)
    raise ValueError(f"unknown threshold kind {kind!r}")


def _epsilon_ladder(eps_min: float) -> list[float]:
    """Decades from 1e-2 down to, and including, eps_min."""
    if not 0.0 < eps_min < 1.0:
        raise ValueError(f"eps-min must lie in (0, 1), got {eps_min!r}")
    ladder = []
    e = 1e-2
    while e > eps_min * (1.0 + 1e-9):
        ladder.append(e)
        e /= 10.0
    ladder.append(eps_min)
    return ladder


def _cmd_recurrence(cfg: RunConfig) -> tuple[list, list, dict, str]:
    table = recurrence.build_table(cfg.t_max)
    rows = list(table.entries())
    corner = table.neglog(cfg.t_max, cfg.t_max)
    return (
        ["k", "l", "neglog_value"],
        rows,
        {},
        f"recurrence table to t_max={cfg.t_max}; negLog M[{cfg.t_max},{cfg.t_max}] = {corner!r}",
    )


def _cmd_thresholds(cfg: RunConfig) -> tuple[list, list, dict, str]:
    thr = recurrence.optimal_thresholds(recurrence.build_table(cfg.t_max))
    rows = [
        (i, j, thr.lookup(i, j))
        for i in range(2, cfg.t_max + 1)
        for j in range(2, i + 1)
    ]
    return (
        ["i", "j", "threshold"],
        rows,
        {},
        f"optimal thresholds to size {cfg.t_max}; t[{cfg.t_max},2] = {thr.lookup(cfg.t_max, 2)!r}",
    )


def _cmd_dp(cfg: RunConfig) -> tuple[list, list, dict, str]:
    size = max(cfg.k, cfg.l)
    thr = _threshold_table(cfg.thresholds, size, cfg.epsilon, cfg.w, cfg.tol)
    table = lattice.dp_min_weight(cfg.k, cfg.l, thr, exponent=cfg.mode)
    corner = table.neglog(cfg.k, cfg.l)
    return (
        ["k", "l", "neglog_value"],
        list(table.entries()),
        {},
        f"min-weight DP ({cfg.thresholds} thresholds, mode {cfg.mode}); "
        f"negLog S[{cfg.k},{cfg.l}] = {corner!r}",
    )


def _cmd_ramsey(cfg: RunConfig) -> tuple[list, list, dict, str]:
    size = max(cfg.k, cfg.l)
    thr = _threshold_table(cfg.thresholds, size, cfg.epsilon, cfg.w, cfg.tol)
    table = lattice.ramsey_table(cfg.k, cfg.l, thr)
    corner = table.value(cfg.k, cfg.l)
    return (
        ["k", "l", "value"],
        list(table.entries()),
        {},
        f"max-form bound ({cfg.thresholds} thresholds); R[{cfg.k},{cfg.l}] = {corner!r}",
    )


def _cmd_ode(cfg: RunConfig) -> tuple[list, list, dict, str]:
    traj = analytic.solve_threshold_ode(cfg.epsilon, cfg.tol)
    rows = [(x, y) for x, y in traj.samples]
    return (
        ["x", "t"],
        rows,
        {"t1": traj.final_value},
        f"threshold profile from epsilon={cfg.epsilon!r}: "
        f"t(1) = {traj.final_value!r} over {len(rows)} samples",
    )


def _cmd_constants(cfg: RunConfig) -> tuple[list, list, dict, str]:
    est = analytic.estimate_limit_constants(_epsilon_ladder(cfg.eps_min), cfg.tol)
    rows = [(e, t1) for e, t1 in est.epsilon_series]
    extras = {
        "t1_limit": est.t1_limit,
        "c": est.c,
        "error_bar": est.error_bar,
    }
    return (
        ["epsilon", "t1"],
        rows,
        extras,
        f"profile limit t1 = {est.t1_limit!r}, C = {est.c!r} "
        f"(spread {est.error_bar:.2e})",
    )


def _cmd_patch(cfg: RunConfig) -> tuple[list, list, dict, str]:
    thr = analytic.assemble_patched_thresholds(
        cfg.epsilon, cfg.t_max, w=cfg.w, tol=cfg.tol
    )
    rows = [
        (i, j, thr.lookup(i, j))
        for i in range(2, cfg.t_max + 1)
        for j in range(1, i + 1)
    ]
    k = cfg.t_max
    w_eff = cfg.w if cfg.w is not None else analytic.default_patch_width(k)
    return (
        ["i", "j", "threshold"],
        rows,
        {"w": w_eff},
        f"patched thresholds to size {k} (w={w_eff}); "
        f"a_w = {thr.lookup(k, k - w_eff)!r}, t[{k},1] = {thr.lookup(k, 1)!r}",
    )


def _cmd_multicolor(cfg: RunConfig) -> tuple[list, list, dict, str]:
    table = recurrence.multicolor_table(cfg.q, cfg.t_max, cfg.max_cells)
    columns = [f"i{d + 1}" for d in range(cfg.q)] + ["neglog_value"]
    rows = [idx + (v,) for idx, v in table.entries()]
    diag = table.neglog_at((cfg.t_max,) * cfg.q)
    return (
        columns,
        rows,
        {},
        f"{cfg.q}-colour table to t_max={cfg.t_max}; "
        f"negLog M[diag] = {diag!r}",
    )


def _cmd_alpha(cfg: RunConfig) -> tuple[list, list, dict, str]:
    value = recurrence.alpha_estimate(cfg.q, cfg.t)
    return (
        ["q", "t", "alpha"],
        [(cfg.q, cfg.t, value)],
        {},
        f"alpha(q={cfg.q}, t={cfg.t}) = {value!r}",
    )


def _cmd_bruteforce(cfg: RunConfig) -> tuple[list, list, dict, str]:
    rep = oracle.exact_min(cfg.n, cfg.t, large=cfg.large)
    rows = [
        (
            rep.n,
            rep.t,
            rep.kmin,
            rep.ratio,
            format(rep.witness.red_mask, "#x"),
        )
    ]
    return (
        ["n", "t", "kmin", "ratio", "witness_mask"],
        rows,
        {"witness": rep.to_payload()} if cfg.format == "json" else {},
        f"exhaustive minimum k_{cfg.t}({cfg.n}) = {rep.kmin} "
        f"(ratio {rep.ratio}, witness {format(rep.witness.red_mask, '#x')})",
    )


def _cmd_ratios(cfg: RunConfig) -> tuple[list, list, dict, str]:
    series = oracle.ratio_series(cfg.t, cfg.n_max, large=cfg.large)
    rows = [(n, kmin, ratio) for n, kmin, ratio in series]
    last = rows[-1]
    return (
        ["n", "kmin", "ratio"],
        rows,
        {},
        f"minimum ratios for t={cfg.t} up to n={cfg.n_max}; "
        f"last = {last[2]} ({float(last[2]):.6f})",
    )


def _cmd_sample(cfg: RunConfig) -> tuple[list, list, dict, str]:
    rep = oracle.sample_against_bounds(
        cfg.n,
        cfg.t,
        samples=cfg.samples,
        seed=cfg.seed,
        complement=cfg.complement,
        large=cfg.large,
    )
    rows = [
        (
            rep.n,
            rep.t,
            rep.samples,
            rep.mean_fraction,
            rep.expected_fraction,
            rep.stderr,
            rep.min_count,
        )
    ]
    return (
        ["n", "t", "samples", "mean_fraction", "expected_fraction", "stderr", "min_count"],
        rows,
        {"report": rep.to_payload()} if cfg.format == "json" else {},
        f"sampled mono fraction {rep.mean_fraction:.6f} vs expected "
        f"{rep.expected_fraction:.6f} (stderr {rep.stderr:.2e})",
    )


def _cmd_crosscheck(cfg: RunConfig) -> tuple[list, list, dict, str]:
    rec_est = recurrence.estimate_growth_constant(recurrence.build_table(cfg.t_max))
    ode_est = analytic.estimate_limit_constants(_epsilon_ladder(cfg.eps_min), cfg.tol)
    diff = abs(rec_est.c - ode_est.c)
    rows = [
        ("recurrence", rec_est.c, rec_est.ln_c),
        ("ode", ode_est.c, math.log(ode_est.c)),
    ]
    extras = {"abs_diff": diff, "max_diff": cfg.max_diff}
    summary = (
        f"C(recurrence) = {rec_est.c!r}, C(ode) = {ode_est.c!r}, "
        f"|diff| = {diff:.2e} (allowed {cfg.max_diff})"
    )
    return (["route", "c", "ln_c"], rows, extras, summary)


_HANDLERS = {
    "recurrence": _cmd_recurrence,
    "thresholds": _cmd_thresholds,
    "dp": _cmd_dp,
    "ramsey": _cmd_ramsey,
    "ode": _cmd_ode,
    "constants": _cmd_constants,
    "patch": _cmd_patch,
    "multicolor": _cmd_multicolor,
    "alpha": _cmd_alpha,
    "bruteforce": _cmd_bruteforce,
    "ratios": _cmd_ratios,
    "sample": _cmd_sample,
    "crosscheck": _cmd_crosscheck,
}


def build_parser():
    import argparse

    p = argparse.ArgumentParser(
        prog="ramseymult",
        description="Lower bounds for Ramsey multiplicity via threshold "
        "dynamic programs, recurrences, and an ODE limit.",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_: str):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default=None, help="output path (default <subcommand>.<format>)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        return sp

    sp = add("recurrence", "optimal-threshold recurrence table")
    sp.add_argument("--t-max", type=int, default=400)

    sp = add("thresholds", "optimal thresholds implied by the recurrence")
    sp.add_argument("--t-max", type=int, default=400)

    sp = add("dp", "minimum path-weight dynamic program")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--mode", choices=lattice.EXPONENT_MODES, default="max")
    sp.add_argument(
        "--thresholds",
        choices=("uniform", "erdos-szekeres", "optimal", "patched"),
        default="uniform",
    )
    sp.add_argument("--epsilon", type=float, default=1e-3)
    sp.add_argument("--w", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("ramsey", "max-form Ramsey-number bound table")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument(
        "--thresholds", choices=("uniform", "erdos-szekeres"), default="uniform"
    )

    sp = add("ode", "threshold profile trajectory")
    sp.add_argument("--epsilon", type=float, default=1e-3)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("constants", "profile limit and growth constant")
    sp.add_argument("--eps-min", type=float, default=1e-7)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("patch", "assembled threshold table (ODE profile + patch)")
    sp.add_argument("--epsilon", type=float, default=1e-3)
    sp.add_argument("--t-max", type=int, default=100)
    sp.add_argument("--w", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("multicolor", "q-colour recurrence table")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--t-max", type=int, default=20)
    sp.add_argument("--max-cells", type=int, default=recurrence.DEFAULT_CELL_BUDGET)

    sp = add("alpha", "normalised q-colour diagonal exponent")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--t", type=int, default=100)

    sp = add("bruteforce", "exhaustive minimum over colourings of K_n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--large", action="store_true")

    sp = add("ratios", "exhaustive minimum ratios across n")
    sp.add_argument("--t", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=7)
    sp.add_argument("--large", action="store_true")

    sp = add("sample", "random-colouring statistics against expectations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--complement", action="store_true")
    sp.add_argument("--large", action="store_true")

    sp = add("crosscheck", "compare recurrence and ODE growth constants")
    sp.add_argument("--t-max", type=int, default=400)
    sp.add_argument("--eps-min", type=float, default=1e-7)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-diff", type=float, default=0.02)

    return p


def _resolve(args) -> RunConfig:
    d = vars(args).copy()
    sub = d.pop("subcommand")
    out = d.pop("out") or f"{sub}.{d['format']}"
    return RunConfig(subcommand=sub, out=out, **d)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _resolve(args)
    try:
        columns, rows, extras, summary = _HANDLERS[cfg.subcommand](cfg)
        path = _emit(cfg, columns, rows, extras)
    except _VALIDATION_ERRORS as exc:
        print(f"ramseymult {cfg.subcommand}: invalid request: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"ramseymult {cfg.subcommand}: numeric failure: {exc}", file=sys.stderr)
        return 3
    print(f"{summary} -> {path}")
    if cfg.subcommand == "crosscheck" and extras["abs_diff"] > cfg.max_diff:
        print(
            f"ramseymult crosscheck: routes disagree by {extras['abs_diff']!r}",
            file=sys.stderr,
        )
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
