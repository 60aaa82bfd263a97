"""Command-line front end.

Subcommands: ``ring`` (chain-ring summary), ``irreps list`` (Heisenberg
irreducible catalog), ``minfaith`` (minimal faithful dimension by
closed form, explicit construction, and/or oracle), ``oracle``
(character tables and exact minimum search for any supported group
specifier), and ``verify`` (full cross-validation suite).

Output formats: human (default), csv, json.  JSON payloads follow the
shipped schema (data/output_schema.json) and are emitted with sorted
keys so identical inputs produce identical bytes.  Exit codes: 0 on
success, 1 on mismatches or failed computations, 2 on parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys


class SpecParseError(ValueError):
    pass


def _parse_e(text):
    if text == "inf":
        return "inf"
    try:
        return int(text)
    except ValueError:
        raise SpecParseError(f"--e must be a positive integer or 'inf', got {text!r}")


def _ring_from_args(args):
    from .chain_ring import make_ring

    return make_ring(args.p, args.f, _parse_e(args.e), args.n)


def _e_repr(e):
    import math

    return "inf" if e == math.inf else int(e)


def parse_group_spec(spec: str, cap=None):
    """'family:key=value,...' -> (AbstractGroup, description).

    Families: heis, unitri, aff, gl2, semidirect, quaternion, table.
    """
    from .chain_ring import make_ring
    from .group_models import (
        AbstractGroup,
        AffineGroup,
        HeisenbergGroup,
        UnitriangularGroup,
        general_linear_2,
        quaternion_group,
        semidirect_cyclic,
        semidirect_cyclic_hom,
    )

    if ":" not in spec:
        raise SpecParseError(f"group spec {spec!r} lacks a 'family:' prefix")
    family, _, rest = spec.partition(":")
    kv = {}
    if rest:
        for part in rest.split(","):
            if "=" not in part:
                raise SpecParseError(f"bad key=value field {part!r} in {spec!r}")
            k, _, v = part.partition("=")
            kv[k.strip()] = v.strip()

    def geti(key, default=None):
        if key not in kv:
            if default is None:
                raise SpecParseError(f"group spec {spec!r} is missing {key}=")
            return default
        try:
            return int(kv[key])
        except ValueError:
            raise SpecParseError(f"{key}= must be an integer in {spec!r}")

    try:
        if family == "heis":
            R = make_ring(geti("p"), geti("f", 1), _parse_e(kv.get("e", "1")), geti("n", 1))
            k = geti("k", 1)
            return HeisenbergGroup(R, k).to_abstract(cap=cap), f"heis k={k} over {R!r}"
        if family == "unitri":
            R = make_ring(geti("p"), geti("f", 1), _parse_e(kv.get("e", "1")), geti("n", 1))
            size = geti("size")
            return UnitriangularGroup(R, size).to_abstract(cap=cap), f"unitri size={size} over {R!r}"
        if family == "aff":
            R = make_ring(geti("p"), geti("f", 1), _parse_e(kv.get("e", "1")), geti("n", 1))
            return AffineGroup(R).to_abstract(cap=cap), f"aff over {R!r}"
        if family == "gl2":
            R = make_ring(geti("p"), geti("f", 1), 1, 1)
            return general_linear_2(R), f"gl2 over {R!r}"
        if family == "semidirect":
            modulus = geti("modulus")
            mults = [int(x) for x in kv.get("multipliers", "").split("|") if x]
            if not mults:
                raise SpecParseError(f"semidirect spec {spec!r} needs multipliers=a|b|...")
            if "h_order" in kv:
                return (
                    semidirect_cyclic_hom(modulus, mults[0], geti("h_order")),
                    f"Z/{modulus} by Z/{kv['h_order']} via {mults[0]}",
                )
            return semidirect_cyclic(modulus, mults), f"Z/{modulus} by units {mults}"
        if family == "quaternion":
            return quaternion_group(), "quaternion order 8"
        if family == "table":
            path = kv.get("path") or rest
            with open(path) as fh:
                obj = json.load(fh)
            return AbstractGroup.from_json(obj, cap=cap), f"table from {path}"
    except SpecParseError:
        raise
    except (ValueError, OSError) as exc:
        raise SpecParseError(f"cannot build group from {spec!r}: {exc}")
    raise SpecParseError(f"unknown group family {family!r}")


# -- emission ---------------------------------------------------------


def _emit_json(command, parameters, result):
    print(json.dumps({"command": command, "parameters": parameters, "result": result}, sort_keys=True))


def _emit_csv(rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    for row in rows:
        w.writerow(row)


# -- subcommand bodies ------------------------------------------------


def _cmd_ring(args) -> int:
    R = _ring_from_args(args)
    result = {
        "p": R.p,
        "f": R.f,
        "e": _e_repr(R.e),
        "n": R.n,
        "q": R.q,
        "xi": R.xi,
        "size": R.size,
        "unit_count": R.unit_count(),
        "d_invariant": R.d_invariant,
        "omega1_generators": [g.index for g in R.omega1_generators()],
    }
    if args.format == "json":
        _emit_json("ring", _ring_params(args), result)
    elif args.format == "csv":
        _emit_csv([list(result.keys())[:-1] + ["omega1_generators"]])
        _emit_csv([
            [result[k] for k in list(result.keys())[:-1]]
            + ["|".join(str(x) for x in result["omega1_generators"])]
        ])
    else:
        for k, v in result.items():
            print(f"{k}: {v}")
    return 0


def _ring_params(args):
    out = {"p": args.p, "f": args.f, "e": args.e, "n": args.n}
    if getattr(args, "k", None) is not None:
        out["k"] = args.k
    return out


def _cmd_irreps(args) -> int:
    from .group_models import HeisenbergGroup
    from .mackey_irreps import irrep_catalog

    R = _ring_from_args(args)
    H = HeisenbergGroup(R, args.k)
    catalog = irrep_catalog(H)
    agg = {}
    for d in catalog:
        key = (d.orbit_rep, d.level, d.dim)
        agg[key] = agg.get(key, 0) + 1
    rows = []
    for (orbit_rep, level, dim), mult in sorted(agg.items()):
        b_vec, b = orbit_rep
        rows.append(
            {
                "orbit_rep": list(b_vec) + [b],
                "b": b,
                "level": level,
                "dim": dim,
                "multiplicity": mult,
            }
        )
    order = R.size ** (2 * args.k + 1)
    total = sum(d.dim**2 for d in catalog)
    assert total == order
    result = {
        "order": order,
        "irrep_count": len(catalog),
        "dim_sq_total": total,
        "catalog": rows,
    }
    if args.format == "json":
        _emit_json("irreps", _ring_params(args), result)
    elif args.format == "csv":
        out = [["orbit_rep", "level", "dim", "multiplicity"]]
        for r in rows:
            out.append(["|".join(str(x) for x in r["orbit_rep"]), r["level"], r["dim"], r["multiplicity"]])
        _emit_csv(out)
    else:
        print(f"order {order}, {len(catalog)} irreducibles, sum dim^2 = {total}")
        for r in rows:
            print(
                f"orbit_rep={tuple(r['orbit_rep'])} level={r['level']} "
                f"dim={r['dim']} multiplicity={r['multiplicity']}"
            )
    return 0


def _minfaith_values(args, family):
    """(values dict, solution json or None) for the requested modes."""
    from . import minfaith_solver as solver
    from . import oracle as orc

    mode = args.mode
    values = {}
    solution = None
    if family == "heisenberg":
        R = _ring_from_args(args)
        if mode in ("formula", "all"):
            values["formula"] = solver.formula_heisenberg(R.p, R.f, R.e, R.n, args.k)
        if mode in ("construct", "all"):
            sol = solver.construct_faithful_heisenberg(R, args.k)
            values["construct"] = sol.total_dim
            solution = sol.to_json()
        if mode in ("oracle", "all"):
            from .group_models import HeisenbergGroup

            order = R.size ** (2 * args.k + 1)
            if mode == "oracle" or order <= orc.group_cap():
                T = orc.CharacterTable(HeisenbergGroup(R, args.k).to_abstract())
                values["oracle"], _ = orc.min_faithful_exhaustive(T)
    elif family == "unitriangular":
        R = _ring_from_args(args)
        if mode in ("formula", "all"):
            values["formula"] = solver.formula_unitriangular(R.p, R.f, R.e, R.n, args.size)
        if mode in ("oracle", "all"):
            from .group_models import UnitriangularGroup

            order = R.size ** (args.size * (args.size - 1) // 2)
            if mode == "oracle" or order <= orc.group_cap():
                T = orc.CharacterTable(UnitriangularGroup(R, args.size).to_abstract())
                values["oracle"], _ = orc.min_faithful_exhaustive(T)
    elif family == "affine":
        R = _ring_from_args(args)
        if mode in ("formula", "all"):
            values["formula"] = solver.formula_affine(R.p, R.f, R.n)
        if mode in ("construct", "all"):
            sol = solver.construct_faithful_affine(R)
            values["construct"] = sol.total_dim
            solution = sol.to_json()
        if mode in ("oracle", "all"):
            from .group_models import AffineGroup

            order = R.size * R.unit_count()
            if mode == "oracle" or order <= orc.group_cap():
                T = orc.CharacterTable(AffineGroup(R).to_abstract())
                values["oracle"], _ = orc.min_faithful_exhaustive(T)
    elif family == "two-step":
        from .group_models import AbstractGroup

        with open(args.table) as fh:
            G = AbstractGroup.from_json(json.load(fh))
        if mode in ("formula", "all"):
            values["formula"] = solver.formula_two_step(G)
        if mode in ("construct", "all"):
            sol = solver.construct_faithful_two_step(G)
            values["construct"] = sol.total_dim
            solution = sol.to_json()
        if mode in ("oracle", "all"):
            T = orc.CharacterTable(G)
            values["oracle"], _ = orc.min_faithful_exhaustive(T)
    return values, solution


def _cmd_minfaith(args) -> int:
    family = args.target
    values, solution = _minfaith_values(args, family)
    agree = len(set(values.values())) <= 1
    m = next(iter(values.values())) if values else None
    result = {"family": family, "values": values, "agree": agree}
    if m is not None:
        result["m"] = m
    if solution is not None:
        result["solution"] = solution
    params = dict(vars(args))
    for drop in ("func", "format", "target"):
        params.pop(drop, None)
    if args.format == "json":
        _emit_json("minfaith", params, result)
    elif args.format == "csv":
        keys = sorted(values)
        _emit_csv([["family"] + keys, [family] + [values[k] for k in keys]])
    else:
        if m is not None:
            print(m)
        for k in sorted(values):
            print(f"{k}: {values[k]}")
        if solution is not None and solution.get("verified_faithful") is not None:
            print(f"construction faithful: {solution['verified_faithful']}")
        if not agree:
            print("MISMATCH between routes", file=sys.stderr)
    return 0 if agree else 1


def _cmd_oracle(args) -> int:
    from . import oracle as orc

    G, desc = parse_group_spec(args.group)
    T = orc.CharacterTable(G)
    if args.action == "table":
        classes = [
            {"rep": (T.group.names[g] if T.group.names else int(g)), "size": T.sizes[j]}
            for j, g in enumerate(T.reps)
        ]
        rows = [[str(x) for x in row] for row in T.to_rows()]
        result = {
            "order": G.order,
            "prime": T.prime,
            "exponent": T.exponent,
            "classes": [
                {"rep": str(c["rep"]), "size": int(c["size"])} for c in classes
            ],
            "dims": list(T.dims),
            "rows": rows,
        }
        if args.format == "json":
            _emit_json("oracle-table", {"group": args.group}, result)
        elif args.format == "csv":
            out = [["dim"] + [f"C{j}(size {s})" for j, s in enumerate(T.sizes)]]
            out += rows
            _emit_csv(out)
        else:
            print(f"{desc}: order {G.order}, {T.r} classes, prime {T.prime}")
            for row in rows:
                print("  ".join(row))
        return 0
    m, sel = orc.min_faithful_exhaustive(T)
    result = {
        "m": m,
        "selection_rows": list(sel),
        "selection_dims": [T.dims[c] for c in sel],
    }
    if args.format == "json":
        _emit_json("oracle-minfaith", {"group": args.group}, result)
    elif args.format == "csv":
        _emit_csv([["m", "selection_dims"], [m, "|".join(str(d) for d in result["selection_dims"])]])
    else:
        print(m)
        print(f"selection dims: {result['selection_dims']}")
    return 0


def load_default_suite() -> dict:
    from importlib import resources

    with resources.files("chainrep.data").joinpath("default_suite.json").open() as fh:
        return json.load(fh)


def _cmd_verify(args) -> int:
    from . import oracle as orc

    if args.suite == "default":
        suite = load_default_suite()
    else:
        with open(args.suite) as fh:
            suite = json.load(fh)
    report = orc.cross_validate(suite)
    if args.format == "json":
        _emit_json("verify", {"suite": args.suite}, report)
    elif args.format == "csv":
        out = [["name", "match", "expected", "values"]]
        for rr in report["results"]:
            out.append(
                [
                    rr["name"],
                    rr["match"],
                    rr.get("expected", ""),
                    "|".join(f"{k}={v}" for k, v in sorted(rr.get("values", {}).items())),
                ]
            )
        _emit_csv(out)
    else:
        for rr in report["results"]:
            vals = " ".join(
                f"{k}={v}" for k, v in sorted(rr.get("values", {}).items()) if not k.endswith("_dims")
            )
            status = "ok" if rr["match"] else "MISMATCH"
            extra = f"  [{rr['error']}]" if "error" in rr else ""
            print(f"{rr['name']}: {status}  {vals}{extra}")
        print(f"suite {report['suite']}: {'all match' if report['ok'] else 'MISMATCHES: ' + ', '.join(report['mismatches'])}")
    return 0 if report["ok"] else 1


# -- argument parsing -------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chainrep",
        description="Minimal faithful dimensions of nilpotent groups over finite chain rings",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def ring_flags(p, with_k=False):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--f", type=int, default=1)
        p.add_argument("--e", default="1", help="ramification index or 'inf'")
        p.add_argument("--n", type=int, default=1)
        if with_k:
            p.add_argument("--k", type=int, default=1)

    def fmt_flag(p):
        p.add_argument("--format", choices=["human", "csv", "json"], default="human")

    p_ring = sub.add_parser("ring", help="chain ring summary")
    ring_flags(p_ring)
    fmt_flag(p_ring)
    p_ring.set_defaults(func=_cmd_ring)

    p_ir = sub.add_parser("irreps", help="Heisenberg irreducible catalog")
    ir_sub = p_ir.add_subparsers(dest="action", required=True)
    p_list = ir_sub.add_parser("list")
    ring_flags(p_list, with_k=True)
    fmt_flag(p_list)
    p_list.set_defaults(func=_cmd_irreps)

    p_mf = sub.add_parser("minfaith", help="minimal faithful dimension")
    mf_sub = p_mf.add_subparsers(dest="target", required=True)
    for fam, with_k, extra in (
        ("heisenberg", True, None),
        ("unitriangular", False, "size"),
        ("affine", False, None),
    ):
        pp = mf_sub.add_parser(fam)
        ring_flags(pp, with_k=with_k)
        if extra:
            pp.add_argument(f"--{extra}", type=int, required=True)
        pp.add_argument("--mode", choices=["formula", "construct", "oracle", "all"], default="formula")
        fmt_flag(pp)
        pp.set_defaults(func=_cmd_minfaith)
    pp = mf_sub.add_parser("two-step")
    pp.add_argument("--table", required=True, help="JSON file with a multiplication table")
    pp.add_argument("--mode", choices=["formula", "construct", "oracle", "all"], default="formula")
    fmt_flag(pp)
    pp.set_defaults(func=_cmd_minfaith)

    p_or = sub.add_parser("oracle", help="character tables and exact search")
    or_sub = p_or.add_subparsers(dest="action", required=True)
    for action in ("table", "minfaith"):
        pp = or_sub.add_parser(action)
        pp.add_argument("--group", required=True, help="heis:p=3,f=1,e=1,n=2,k=1 / unitri:... / aff:... / gl2:p=3 / semidirect:modulus=8,multipliers=5|7 / quaternion: / table:path")
        fmt_flag(pp)
        pp.set_defaults(func=_cmd_oracle)

    p_v = sub.add_parser("verify", help="cross-validation suite")
    p_v.add_argument("--suite", default="default", help="'default' or a JSON suite path")
    fmt_flag(p_v)
    p_v.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own errors on code 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
