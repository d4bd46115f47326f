"""Command line entry point: every subsystem behind one dispatcher.

Reports are deterministic JSON (exact numbers rendered as integer or
fraction strings, never floats); wall-clock timing is segregated under its
own key so the rest of the report is byte-stable for identical inputs.
Exit codes: 0 pass, 1 verified violation or negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import actions, artin, continuity, families, weights
from .complex import complex_from_json, complex_to_json, validate_complex
from .errors import CubexError, InputError
from .measures import format_exact

SCHEMA = "cubical-exactness/1"


def load_complex(spec_text, ambient=None):
    if spec_text.startswith("file:"):
        path = spec_text[len("file:") :]
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON in {path}: {exc}") from exc
        c = complex_from_json(data)
    else:
        c = families.build_family(families.parse_family(spec_text))
    if ambient is not None:
        c = c.with_ambient_dim(ambient)
    return c


def load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON in {what} {path}: {exc}") from exc


def resolve_vertex(c, text):
    if text in c.vertices:
        return text
    wrapped = "(%s)" % text
    if wrapped in c.vertices:
        return wrapped
    raise InputError(f"unknown vertex {text!r}")


def resolve_target(c, text):
    if text.startswith("ideal:"):
        label = text[len("ideal:") :]
        if c.family is not None:
            for spec in c.family.ideal_points:
                if spec.label == label:
                    return spec.restrict(c)
        raise InputError(f"no ideal point labeled {label!r}")
    return c.vector(resolve_vertex(c, text))


# -- handlers (each returns (exit_code, payload)) ---------------------------


def cmd_validate(args):
    c = load_complex(args.complex, args.ambient)
    report = validate_complex(c, seed=args.seed)
    return (0 if report.ok else 1), {"validation": report.to_json()}


def cmd_median(args):
    c = load_complex(args.complex, args.ambient)
    med = c.median(
        resolve_vertex(c, args.x), resolve_vertex(c, args.y), resolve_vertex(c, args.z)
    )
    return 0, {
        "median": c.name_of(med),
        "signs": {h: med.sign(h) for h in c.hyperplanes},
    }


def cmd_admissible(args):
    c = load_complex(args.complex, args.ambient)
    result = c.enumerate_admissible(args.limit)
    originals = frozenset(c.vertices.values())
    payload = {
        "count": len(result.vectors),
        "complete": result.complete,
        "equals_original_vertices": result.vectors == originals,
        "vectors": sorted(sorted(v.neg) for v in result.vectors),
    }
    code = 0 if result.complete and result.vectors == originals else 1
    return code, payload


def cmd_family(args):
    if args.action != "truncate":
        raise InputError(f"unknown family action {args.action!r}")
    c = families.build_family(families.parse_family(args.family), args.ambient)
    payload = {"complex": complex_to_json(c)}
    if c.family is not None:
        payload["ideal_points"] = [
            {
                "label": spec.label,
                "signs": [spec.rule(h) for h in c.hyperplanes],
                "adjacency_infinite": spec.adjacency_infinite,
            }
            for spec in c.family.ideal_points
        ]
        payload["infinite_adjacency"] = sorted(c.family.infinite_adjacency)
    return 0, payload


def cmd_weights(args):
    c = load_complex(args.complex, args.ambient)
    source = resolve_vertex(c, args.source)
    target = resolve_target(c, args.target)
    wv = weights.weight_vector(c, args.n, source, target)
    mass = weights.expected_mass(args.n, c.ambient_dim)
    checks = [
        {"check": "mass", "expected": str(mass), "actual": str(wv.total_mass())},
        {
            "check": "support-in-ball-interval",
            "ok": wv.support() <= c.ball(source, args.n)
            and all(c.in_interval(a, source, target) for a in wv.support()),
        },
    ]
    if args.normalized:
        measure = wv.normalized()
        values = {v: format_exact(p) for v, p in sorted(measure.items())}
    else:
        values = {v: str(w) for v, w in sorted(wv.values.items())}
    status = 0 if str(mass) == str(wv.total_mass()) else 1
    return status, {"values": values, "mass": str(mass), "checks": checks}


def _thm31_chunk(payload):
    c, n_max, sources = payload
    return weights.verify_weight_identities(c, n_max, sources=sources)


def cmd_verify_thm31(args):
    c = load_complex(args.complex, args.ambient)
    action = None
    if args.action:
        data = load_json(args.action, "action")
        action = actions.validate_action(c, data["generators"], seed=args.seed)
    if args.jobs > 1 and action is None:
        chunks = [list(c.vertex_names)[i :: args.jobs] for i in range(args.jobs)]
        chunks = [chunk for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = list(
                pool.map(_thm31_chunk, [(c, args.max_n, chunk) for chunk in chunks])
            )
        report = parts[0]
        for part in parts[1:]:
            report.merge(part)
    else:
        report = weights.verify_weight_identities(c, args.max_n, action=action)
    return (0 if report.ok else 1), {"verification": report.to_json()}


def cmd_continuity(args):
    spec_text = args.family or args.complex
    c = load_complex(spec_text, args.ambient)
    x = resolve_vertex(c, args.x)
    a = resolve_vertex(c, args.a)
    q = continuity.TargetFunction(c, x, a, args.n)
    probe = continuity.default_probe(c)
    partition = continuity.level_sets(q, probe)
    zres = continuity.zero_set(c, x, a, probe)
    target_label = args.z if args.z is not None else a
    zv = resolve_target(
        c, target_label if target_label.startswith("ideal:") else target_label
    )
    classification = continuity.continuity_classify(q, zv)
    payload = {
        "partition": {
            str(value): sorted(cell) for value, cell in partition.cells.items()
        },
        "partition_checks": {
            "values_in_predicted_list": partition.values_ok,
            "levelset_identity": partition.levelset_ok,
            "superlevel_identity": partition.superlevel_ok,
        },
        "zero_set": {
            "members": sorted(zres.members),
            "certificate_ok": zres.certificate_ok,
        },
        "classification": {
            "point": target_label,
            "verdict": classification.verdict,
            "rule": classification.rule,
            "detail": classification.detail,
        },
    }
    if args.witness:
        witness = continuity.discontinuity_witness(q, zv, args.witness)
        payload["witness"] = (
            None
            if witness is None
            else {
                "target": witness.target,
                "partial": witness.partial,
                "steps": [
                    {
                        "point": s.point,
                        "hyperplane": s.hyperplane,
                        "perturbed": s.perturbed,
                        "deficiency_before": s.deficiency_before,
                        "deficiency_after": s.deficiency_after,
                    }
                    for s in witness.steps
                ],
            }
        )
    ok = (
        partition.values_ok
        and partition.levelset_ok
        and partition.superlevel_ok is not False
        and zres.certificate_ok
    )
    return (0 if ok else 1), payload


def cmd_property_a(args):
    c = load_complex(args.complex, args.ambient)
    data = load_json(args.action, "action")
    action = actions.validate_action(c, data["generators"], seed=args.seed)
    orbit_data = actions.orbit_transversal(action)
    if args.nu != "uniform":
        raise InputError("only the uniform stabilizer family is available here")
    gens = [g.strip() for g in args.gen_set.split(",") if g.strip()]
    test_set = {action.identity}
    for name in gens:
        if name not in action.generators:
            raise InputError(f"unknown generator {name!r} in test set")
        g = action.element(name)
        test_set.add(g)
        test_set.add(action.inv(g))
    basepoint = resolve_vertex(c, args.basepoint) if args.basepoint else c.base
    params = actions.CertificateParams(
        tuple(sorted(test_set, key=lambda g: g.sort_key)),
        Fraction(args.epsilon),
        args.n,
        basepoint,
    )
    cert = actions.build_certificate(action, orbit_data, params)
    check = actions.verify_certificate(cert)
    coset_report = actions.verify_coset_identities(orbit_data)
    payload = {
        "group_order": len(action.elements),
        "transversal": list(orbit_data.transversal),
        "active_transversal": list(cert.active_transversal),
        "support_bound_size": len(cert.support_bound),
        "deviations": {
            s.label(): format_exact(v) for s, v in check.deviations.items()
        },
        "eta_deviations": {
            s.label(): format_exact(v) for s, v in check.eta_deviations.items()
        },
        "nu_deviation": format_exact(check.nu_deviation),
        "epsilon": format_exact(params.epsilon),
        "meets_epsilon": check.meets_epsilon,
        "checks": check.report.to_json(),
        "coset_identities": coset_report.to_json(),
        "measures": {
            x.label(): {g.label(): format_exact(v) for g, v in sorted(
                values.items(), key=lambda kv: kv[0].sort_key
            )}
            for x, values in cert.measures.items()
        },
    }
    ok = check.report.ok and coset_report.ok and check.meets_epsilon
    return (0 if ok else 1), payload


def cmd_artin(args):
    matrix = artin.validate_matrix(load_json(args.matrix, "matrix"))
    if args.action == "fc":
        verdict = artin.fc_check(matrix)
        payload = {
            "fc": verdict.is_fc,
            "witness": list(verdict.witness) if verdict.witness else None,
            "cliques": [
                {
                    "clique": list(r.clique),
                    "spherical": r.classification.spherical,
                    "type": r.classification.describe(),
                }
                for r in verdict.records
            ],
        }
        return (0 if verdict.is_fc else 1), payload
    if args.action == "report":
        report = artin.exactness_report(matrix)
        return (0 if report.is_fc else 1), report.to_json()
    raise InputError(f"unknown artin action {args.action!r}")


# -- dispatcher ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubex",
        description="Exact combinatorics of cube complexes: medians, weights, "
        "certificates for group actions, and FC verdicts for Coxeter data.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--ambient", "--N", dest="ambient", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(handler=fn)
        return p

    p = add("validate", cmd_validate, help="check the structural invariants of a complex")
    p.add_argument("--complex", required=True)

    p = add("median", cmd_median, help="median of three vertices")
    p.add_argument("--complex", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)

    p = add("admissible", cmd_admissible, help="enumerate admissible sign vectors")
    p.add_argument("--complex", required=True)
    p.add_argument("--limit", type=int, default=100_000)

    p = add("family", cmd_family, help="emit a family truncation as JSON")
    p.add_argument("action", choices=["truncate"])
    p.add_argument("--family", required=True)

    p = add("weights", cmd_weights, help="one weight vector, raw or normalized")
    p.add_argument("--complex", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--normalized", action="store_true")

    p = add("verify-thm31", cmd_verify_thm31, help="exhaustive weight-identity sweep")
    p.add_argument("--complex", required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--action", default=None, help="action JSON for the equivariance check")

    p = add("continuity", cmd_continuity, help="level sets and continuity certificates")
    p.add_argument("--complex", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--x", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", default=None, help="classification point (default: the probe vertex)")
    p.add_argument("--witness", type=int, default=0, help="witness prefix length to search")

    p = add("property-a", cmd_property_a, help="build and verify a certificate")
    p.add_argument("--complex", required=True)
    p.add_argument("--action", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--gen-set", required=True)
    p.add_argument("--nu", default="uniform")
    p.add_argument("--basepoint", default=None)

    p = add("artin", cmd_artin, help="FC verdicts for Coxeter matrices")
    p.add_argument("action", choices=["fc", "report"])
    p.add_argument("--matrix", required=True)

    return parser


def dispatch(argv) -> tuple[int, dict]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), {"error": "usage"}
    started = time.monotonic()
    report = {"schema": SCHEMA, "command": list(argv)}
    try:
        if args.command == "continuity" and not (args.family or args.complex):
            raise InputError("continuity needs --family or --complex")
        code, payload = args.handler(args)
        report.update(payload)
        report["status"] = "pass" if code == 0 else "fail"
    except CubexError as exc:
        code = 2
        report["status"] = "error"
        report["error"] = str(exc)
    report["timing"] = {"seconds": round(time.monotonic() - started, 6)}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code, report


def main() -> None:
    code, _ = dispatch(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
