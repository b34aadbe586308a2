"""Command-line front end.

Subcommands: construct, verify, sweep, state-info, search.  Families travel
as JSON documents (complex entries as [re, im] pairs, row-major), sweeps as
CSV with a fixed column order, both reproducing values to full double
precision.  Exit codes: 0 success or verification pass, 1 verification fail,
2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import analysis, families, search, states

SCHEMA_VERSION = 1

FAMILY_CHOICES = ("weyl", "five", "f46", "f47", "two-d-minus-one", "d-plus-two", "shift-diag")


def _build_family(name: str, d: int) -> families.EncodingFamily:
    if name == "weyl":
        return families.weyl_family(d)
    if name == "five":
        if d != 3:
            raise ValueError("the five family is defined for d=3")
        return families.qutrit_five_family()
    if name == "f46":
        if d != 4:
            raise ValueError("F_4/6 is defined for d=4")
        return families.family_f46()
    if name == "f47":
        if d != 4:
            raise ValueError("F_4/7 is defined for d=4")
        return families.family_f47()
    if name == "two-d-minus-one":
        return families.family_2dm1(d)
    if name == "d-plus-two":
        return families.family_dp2(d)
    if name == "shift-diag":
        return families.shift_diag_family(d, [np.ones(d)] * d)
    raise ValueError(f"unknown family {name!r}")


def family_to_document(family: families.EncodingFamily) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "d": family.d,
        "label": family.label,
        "target_lambda0": family.target_lambda0,
        "members": [
            [[float(z.real), float(z.imag)] for z in np.asarray(m).reshape(-1)]
            for m in family.members
        ],
    }


def document_to_family(doc: dict) -> families.EncodingFamily:
    if not isinstance(doc, dict):
        raise ValueError("family document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    d = int(doc["d"])
    members = []
    for i, flat in enumerate(doc["members"]):
        if len(flat) != d * d:
            raise ValueError(f"member {i} has {len(flat)} entries, expected {d * d}")
        arr = np.array([complex(re, im) for re, im in flat], dtype=np.complex128).reshape(d, d)
        members.append(arr)
    return families.EncodingFamily(
        d=d,
        members=tuple(members),
        label=str(doc.get("label", "file")),
        target_lambda0=doc.get("target_lambda0"),
    )


def write_family_document(family: families.EncodingFamily, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(family_to_document(family), fh, indent=1)
        fh.write("\n")


def read_family_document(path: str) -> families.EncodingFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return document_to_family(json.load(fh))


def _parse_weight(text: str) -> float:
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def _state_from_weights(raw: list[str]) -> states.SchmidtState:
    lam = [_parse_weight(t) for t in raw]
    return states.make_state(len(lam), lam)


def _config_from_args(args) -> search.SearchConfig:
    kwargs = {"pin_fr": bool(getattr(args, "pin_fr", False))}
    if getattr(args, "restarts", None) is not None:
        kwargs["restarts"] = args.restarts
    if getattr(args, "tol", None) is not None:
        kwargs["accept_tol"] = args.tol
    if getattr(args, "max_k", None) is not None:
        kwargs["max_k"] = args.max_k
    if getattr(args, "seed", None) is not None:
        kwargs["base_seed"] = args.seed
    return search.SearchConfig(**kwargs)


def _cmd_construct(args) -> int:
    family = _build_family(args.family, args.dimension)
    write_family_document(family, args.output)
    target = "none" if family.target_lambda0 is None else repr(family.target_lambda0)
    print(f"wrote {family.label}: K={len(family)} members, d={family.d}, target lambda0={target}")
    return 0


def _cmd_verify(args) -> int:
    family = read_family_document(args.family_path)
    lam = [_parse_weight(t) for t in args.lambdas]
    if len(lam) != family.d:
        raise ValueError(f"family has d={family.d} but {len(lam)} weights were given")
    state = states.make_state(family.d, lam)
    tol = args.tol if args.tol is not None else analysis.VERIFY_TOL
    report = analysis.verify_family(family, state, tol=tol)
    print(f"family: {family.label} (d={family.d}, K={len(family)})")
    print("state lambdas:", " ".join(repr(float(x)) for x in state.lambdas))
    print(f"max pairwise residual:  {report.max_pairwise_residual:.6e}")
    print(f"max unitarity residual: {report.max_unitarity_residual:.6e}")
    print(f"max norm deviation:     {report.max_norm_deviation:.6e}")
    print(f"tolerance:              {tol:.6e}")
    kc = analysis.kc_span_check(family, state)
    if kc.saturated:
        print(f"saturated (lambda0 = d/K): span dim {kc.span_dim}, |m0> residuals:")
        for m, r in enumerate(kc.residuals):
            print(f"  m={m}: {r:.6e}")
    print("result:", "PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


def _cmd_state_info(args) -> int:
    state = _state_from_weights(args.lambdas)
    d = state.d
    print(f"d: {d}")
    print("lambdas:", " ".join(repr(float(x)) for x in state.lambdas))
    print(f"entropy_bits: {states.entropy_bits(state)!r}")
    print(f"wcsg_bound: {analysis.wcsg_bound(state)}")
    print(f"shift_family_obstructed: {analysis.shift_family_obstructed(state)}")
    print(f"diagonal_identity_obstructed: {analysis.diagonal_identity_obstructed(state)}")
    if analysis.bns_excluded(state, d + 1):
        print(f"note: K={d + 1} excluded by strict bound (lambda0 >= d/(d+1))")
    return 0


def _cmd_search(args) -> int:
    state = _state_from_weights(args.lambdas)
    cfg = _config_from_args(args)
    result = search.estimate_nmax(state, cfg)
    print(f"state: d={state.d} lambdas=" + " ".join(repr(float(x)) for x in state.lambdas))
    print(f"seed: {cfg.base_seed}  restarts: {cfg.restarts}  accept_tol: {cfg.accept_tol:.1e}")
    for attempt in result.attempts:
        if attempt.status == "found":
            print(
                f"K={attempt.k}: found  objective={attempt.best_objective:.3e}"
                f"  max pair residual={attempt.max_pair_residual:.3e}"
            )
        elif attempt.best_objective is not None:
            print(f"K={attempt.k}: {attempt.status}  best objective={attempt.best_objective:.3e}")
        else:
            print(f"K={attempt.k}: {attempt.status}")
    print(f"n_max estimate: {result.n_max_estimate}")
    return 0


SWEEP_COLUMNS = (
    "lambda0",
    "lambda1",
    "lambda2",
    "entropy_bits",
    "wcsg_bound",
    "n_max_estimate",
    "best_objective_at_refusal",
    "seed",
)


def write_sweep_csv(region: search.RegionMap, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for cell in region.cells:
            refusal = "" if cell.best_objective_at_refusal is None else repr(cell.best_objective_at_refusal)
            writer.writerow(
                [
                    repr(cell.lambda0),
                    repr(cell.lambda1),
                    repr(cell.lambda2),
                    repr(cell.entropy_bits),
                    cell.wcsg_bound,
                    cell.n_max_estimate,
                    refusal,
                    cell.seed,
                ]
            )


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    # fail on an unwritable destination before the expensive sweep runs
    with open(args.output, "w", encoding="utf-8"):
        pass
    region = search.region_sweep(args.resolution, cfg, d=args.dimension)
    write_sweep_csv(region, args.output)
    print(f"wrote {len(region.cells)} cells to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dc-lab",
        description="Construct, verify, and search encoding-unitary families for dense coding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named family and write it as JSON")
    p.add_argument("family", choices=FAMILY_CHOICES)
    p.add_argument("-d", "--dimension", type=int, required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="verify a family document against a state")
    p.add_argument("family_path")
    p.add_argument("--lambdas", nargs="+", required=True, help="weights, e.g. 2/3 1/3 0 0")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="map N_max over the weight triangle to CSV")
    p.add_argument("-d", "--dimension", type=int, default=3)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", required=True)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--pin-fr", action="store_true")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("state-info", help="entropy, bounds, and obstruction flags for a state")
    p.add_argument("--lambdas", nargs="+", required=True)
    p.set_defaults(func=_cmd_state_info)

    p = sub.add_parser("search", help="estimate the largest supported family size for a state")
    p.add_argument("--lambdas", nargs="+", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--pin-fr", action="store_true")
    p.set_defaults(func=_cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
