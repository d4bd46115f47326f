#!/usr/bin/env python3
"""Measure how certificate deviations shrink as the time parameter grows.

For each built-in action (the involution on an edge, the dihedral group of
the square, the order-48 symmetry group of the 3-cube) this builds the
certificate at a doubling sequence of time parameters and prints the worst
deviation per test element, the basepoint-measure deviation, and the size of
the predicted support.  Everything is exact; the decimal column is only for
reading.
"""

import argparse
from fractions import Fraction

from cubex import build_family, parse_family
from cubex.actions import (
    CertificateParams,
    build_certificate,
    orbit_transversal,
    validate_action,
    verify_certificate,
)


def edge_case():
    edge = build_family(parse_family("cube:1"))
    return "involution on an edge", validate_action(edge, {"s": {"0": "1", "1": "0"}})


def square_case():
    square = build_family(parse_family("cube:2"))
    gens = {
        "r": {"00": "00", "01": "10", "10": "01", "11": "11"},
        "f": {"00": "10", "01": "11", "10": "00", "11": "01"},
    }
    return "dihedral group of the square", validate_action(square, gens)


def cube_case():
    cube = build_family(parse_family("cube:3"))

    def perm(fn):
        return {v: fn(v) for v in cube.vertex_names}

    gens = {
        "c": perm(lambda b: b[2] + b[0] + b[1]),
        "t": perm(lambda b: b[1] + b[0] + b[2]),
        "f": perm(lambda b: ("1" if b[0] == "0" else "0") + b[1:]),
    }
    return "symmetry group of the 3-cube", validate_action(cube, gens)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--times", default="2,4,8,16,32", help="comma separated")
    args = parser.parse_args()
    times = [int(t) for t in args.times.split(",")]

    for label, action in (edge_case(), square_case(), cube_case()):
        data = orbit_transversal(action)
        test_set = {action.identity}
        for name in action.generators:
            g = action.element(name)
            test_set |= {g, action.inv(g)}
        print(f"\n{label}  (order {len(action.elements)})")
        print(f"  {'n':>4}  {'max dev':>12}  {'~':>8}  {'max basepoint dev':>18}  {'support':>8}")
        for n in times:
            params = CertificateParams(
                tuple(sorted(test_set, key=lambda g: g.sort_key)),
                Fraction(1),
                n,
                action.complex.base,
            )
            cert = build_certificate(action, data, params)
            check = verify_certificate(cert)
            if not check.report.ok:
                raise SystemExit(f"verification failed at n={n}: {check.report.to_json()}")
            worst = max(check.deviations.values(), default=Fraction(0))
            eta = max(check.eta_deviations.values(), default=Fraction(0))
            print(
                f"  {n:>4}  {str(worst):>12}  {float(worst):>8.4f}  "
                f"{str(eta):>18}  {len(cert.support_bound):>8}"
            )


if __name__ == "__main__":
    main()
