"""Command-line experiment runner.

Every subcommand writes JSON lines (or CSV where noted) to stdout or
``--output``. Exit status: 0 when no verdict is ``violated``, 1 otherwise,
2 on configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dirichlet as dl
from . import forms, interpolate, lowerbounds
from ._rng import make_rng
from .bhlab import BHConstantTable, all_ids, greedy_partition, is_partition, run_trials
from .bhlab.report import VIOLATED, _jsonable
from .bhlab.trials import random_tensor
from .bhlab.verifiers import verify_lem2
from .errors import LabError
from .lorentz import LorentzParams, lorentz_norm, lp_norm, marcinkiewicz_norm, weak_norm
from .mixed import CoefficientTensor, aggregate_norm, block_norm


class ConfigError(Exception):
    pass


def _range(text: str) -> list:
    """'2..8' -> [2..8]; '2,4,8' -> [2, 4, 8]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad range {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True)


def _load_tensor(path):
    with open(path) as fh:
        return forms.from_json(fh.read())


def _constants(pairs) -> BHConstantTable:
    kw = {}
    table = BHConstantTable()
    for item in pairs or []:
        key, _, val = item.partition("=")
        try:
            v = float(val)
        except ValueError:
            raise ConfigError(f"bad constant override {item!r}") from None
        if key in ("ksz_constant", "kappa", "L", "envelope_C"):
            kw[key] = v
        elif key.startswith("C") and key[1:]:
            kw.setdefault("Cq", dict(table.Cq))[float(key[1:])] = v
        elif key.startswith("BH") and key[2:]:
            kw.setdefault("bh_mult", dict(table.bh_mult))[int(key[2:])] = v
        else:
            raise ConfigError(f"unknown constant {key!r}")
    return table.with_overrides(**kw)


# -- subcommands ------------------------------------------------------------------


def cmd_norm(args, out):
    obj = _load_tensor(args.input)
    vals = obj.values
    space = args.space
    if space == "lorentz":
        v = lorentz_norm(vals, args.p, args.q, args.scheme)
    elif space == "weak":
        v = weak_norm(vals, args.p)
    elif space == "marcinkiewicz":
        v = marcinkiewicz_norm(vals, args.p)
    elif space == "lp":
        v = lp_norm(vals, args.p)
    elif space in ("mixed", "aggregate"):
        if not isinstance(obj, CoefficientTensor):
            raise ConfigError("mixed norms need a full tensor")
        if space == "mixed":
            S = tuple(int(c) for c in args.S.split(",")) if args.S else (1,)
            v = block_norm(obj, S, args.p, args.q)
        else:
            v = aggregate_norm(obj, args.k, args.p, args.q)
    else:
        raise ConfigError(f"unknown space {space!r}")
    out.write(_dump({"space": space, "p": args.p, "q": args.q, "norm": v}) + "\n")
    return 0


def cmd_supnorm(args, out):
    obj = _load_tensor(args.input)
    if isinstance(obj, CoefficientTensor):
        est = forms.supnorm_form(obj, starts=args.starts, seed=args.seed)
    else:
        est = forms.supnorm_poly(obj, starts=args.starts, seed=args.seed, grid=args.grid)
    out.write(_dump({"lower": est.lower, "upper": est.upper, "method": est.method,
                     "witness": [[[z.real, z.imag] for z in w] for w in est.witness]}) + "\n")
    return 0


def cmd_partition(args, out):
    if args.input:
        a = _load_tensor(args.input)
    else:
        a = random_tensor(make_rng(args.seed, 0), args.m, args.n)
    part = greedy_partition(a, args.q)
    rep = verify_lem2(a, args.q, part)
    out.write(_dump({"labels": (part.labels + 1).ravel().tolist(), "rounds": part.rounds,
                     "is_partition": is_partition(part), **rep.to_dict()}) + "\n")
    return 1 if rep.verdict == VIOLATED or not is_partition(part) else 0


def cmd_verify(args, out):
    lemma = args.lemma or args.lemma_id
    if not lemma:
        raise ConfigError("verify needs a lemma id")
    opts = {k: getattr(args, k) for k in ("k", "q", "t", "family", "heuristic") if getattr(args, k) is not None}
    if args.samples:
        opts["samples"] = args.samples
    summary = run_trials(lemma, args.m, args.n, args.trials, args.seed, _constants(args.const), **opts)
    for r in summary.reports:
        out.write(r.to_json() + "\n")
    out.write(_dump({"summary": summary.to_dict()}) + "\n")
    return 1 if summary.violated else 0


def cmd_optimality(args, out):
    m = args.m
    p = args.p if args.p is not None else 2 * m / (m + 1)
    rows = lowerbounds.optimality_experiment(_range(args.N), m, LorentzParams(p, args.q), args.starts, args.seed)
    if args.format == "csv":
        out.write(lowerbounds.rows_to_csv(rows))
    else:
        for r in rows:
            out.write(_dump(r) + "\n")
        out.write(_dump({"slope": lowerbounds.loglog_slope(rows) if len(rows) > 1 else None}) + "\n")
    return 0


def cmd_ksz(args, out):
    res = lowerbounds.ksz_random_poly(args.N, args.m, args.trials, args.seed, args.starts)
    out.write(_dump({"N": args.N, "m": args.m, "trials": args.trials, "signs": res.signs.tolist(),
                     "sup_lower": res.estimate.lower, "sup_upper": res.estimate.upper, "bound": res.bound,
                     "fitted_constant": res.fitted_constant}) + "\n")
    return 0


def cmd_dirichlet(args, out):
    g = dl.non_embedding_witnesses(args.m, args.N_max, args.N_sum, args.N_min, args.points)
    if args.format == "csv":
        out.write("table,x,value,value_alt\n")
        for r in g.atoms:
            out.write(f"atoms,{r['n']},{r['value']!r},{r['value_alt']!r}\n")
        for r in g.sums:
            out.write(f"sums,{r['N']},{r['ratio']!r},{r['weight_sum']!r}\n")
    else:
        for r in g.atoms:
            out.write(_dump({"table": "atoms", **r}) + "\n")
        for r in g.sums:
            out.write(_dump({"table": "sums", **r}) + "\n")
        out.write(_dump({"atoms_increasing": g.atoms_increasing, "atoms_growth": g.atoms_growth,
                         "sums_increasing": g.sums_increasing, "sums_growth": g.sums_growth}) + "\n")
    return 0


def cmd_envelope(args, out):
    if args.input:
        xs = [_load_tensor(args.input).values]
    else:
        xs = [np.ones(N) for N in _range(args.indicators)]
    for x in xs:
        rep = interpolate.check_lorentz_envelope(x, args.p0, args.p1, args.theta, args.q)
        out.write(_dump({"size": int(np.size(x)), **rep.to_dict()}) + "\n")
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bhlab", description=__doc__.splitlines()[0])
    ap.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="norm of a tensor/polynomial JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--space", default="lorentz", choices=["lorentz", "weak", "marcinkiewicz", "lp", "mixed", "aggregate"])
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--scheme", default="telescoping", choices=["telescoping", "power"])
    p.add_argument("--S", help="comma-separated coordinates for --space mixed")
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("supnorm", help="sup norm estimate on the polytorus")
    p.add_argument("--input", required=True)
    p.add_argument("--starts", type=int, default=forms.DEFAULT_STARTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=forms.DEFAULT_GRID)
    p.set_defaults(func=cmd_supnorm)

    p = sub.add_parser("partition", help="greedy slice partition of M(m,n)")
    p.add_argument("--input")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="seeded trials of one inequality; ids: " + ", ".join(all_ids()))
    p.add_argument("lemma_id", nargs="?")
    p.add_argument("--lemma")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--family", choices=["rank-one", "monomial", "fourier", "random", "product"])
    p.add_argument("--heuristic", action="store_true", default=None,
                   help="random tensors with heuristic sup norms (failures are inconclusive)")
    p.add_argument("--const", action="append", metavar="NAME=VALUE",
                   help="constant override: L, kappa, ksz_constant, envelope_C, C<q>, BH<k>")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimality", help="Fourier-tensor exponent sweep")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--N", default="2..8")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(func=cmd_optimality)

    p = sub.add_parser("ksz", help="best of random-sign polynomials")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ksz)

    p = sub.add_parser("dirichlet", help="non-embedding growth tables")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--N-max", dest="N_max", type=int, default=10**8)
    p.add_argument("--N-sum", dest="N_sum", type=int, default=10**4)
    p.add_argument("--N-min", dest="N_min", type=int, default=10**2)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--format", default="json", choices=["csv", "json"])
    p.set_defaults(func=cmd_dirichlet)

    p = sub.add_parser("envelope", help="interpolation vs Lorentz norm envelope")
    p.add_argument("--input")
    p.add_argument("--indicators", default="1..64")
    p.add_argument("--p0", type=float, default=1.0)
    p.add_argument("--p1", type=float, default=2.0)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--q", type=float, default=1.0)
    p.set_defaults(func=cmd_envelope)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        return args.func(args, out)
    except (ConfigError, LabError, OSError, json.JSONDecodeError) as exc:
        print(f"bhlab: error: {exc}", file=sys.stderr)
        return 2
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
