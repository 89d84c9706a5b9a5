"""Sweep the two-sided theorem verifiers across the bundled example corpus.

Usage: python scripts/verify_theorems.py [--fast]

--fast lowers the degree windows so the sweep finishes in under a minute.
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from koszulity.algebra import trivial_extension
from koszulity.presentation import parse_algebra_file
from koszulity import modules as mo
from koszulity import verify as vf

DATA = os.path.join(os.path.dirname(__file__), "..", "tests", "data")


def load(name, bound=4):
    return parse_algebra_file(os.path.join(DATA, name), bound)[0]


def main(fast=False):
    d_big = 3 if fast else 5
    d_mid = 2 if fast else 4
    kron = load("kron.alg")
    a2 = load("a2.alg")
    x3 = load("x3.alg")
    a4 = load("a4.alg")
    point = load("point.alg")

    delta_a4 = trivial_extension(a4)
    t_parts = [mo.parse_module_file(os.path.join(DATA, f), a4)
               for f in ("T1.mod", "T2.mod", "T3.mod", "T4.mod")]
    t_parts = [mo.inflate_module(m, delta_a4) for m in t_parts]
    k3 = mo.simple_module(x3, 1, 0)

    def reg(base):
        delta = trivial_extension(base)
        return delta, [mo.inflate_module(mo.projective_module(base, v), delta)
                       for v in base.vertices]

    delta_kron, kron_parts = reg(kron)
    delta_a2, a2_parts = reg(a2)

    jobs = [
        ("characterization / diamond", lambda: vf.verify_characterization(
            delta_a4, t_parts, 2, i_max=6)),
        ("characterization / kronecker", lambda: vf.verify_characterization(
            delta_kron, kron_parts, 2, i_max=6)),
        ("characterization / a2 (negative)", lambda: vf.verify_characterization(
            delta_a2, a2_parts, 2, i_max=6)),
        ("trivext-koszul / kronecker", lambda: vf.verify_trivext_koszul(kron, 1)),
        ("trivext-koszul / a2", lambda: vf.verify_trivext_koszul(a2, 1)),
        ("trivext-koszul / point", lambda: vf.verify_trivext_koszul(point, 1)),
        ("trivext-dual / kronecker", lambda: vf.verify_trivext_dual(
            kron, 1, d_max=d_big)),
        ("trivext-dual / a2", lambda: vf.verify_trivext_dual(a2, 1, d_max=4)),
        ("nrepfin-char / x3", lambda: vf.verify_nrepfin_char(x3, [k3], 1)),
        ("nrepfin-char / delta a2", lambda: vf.verify_nrepfin_char(
            delta_a2, a2_parts, 2)),
        ("param-consistency / delta a2", lambda: vf.verify_param_consistency(
            delta_a2, a2_parts, 2)),
        ("serre-identity / x3", lambda: vf.verify_serre_identity(x3, [k3], 1)),
        ("preproj-veronese / x3", lambda: vf.verify_preproj_veronese(
            x3, [k3], 1, d_max=d_mid)),
        ("preproj-veronese / diamond", lambda: vf.verify_preproj_veronese(
            delta_a4, t_parts, 2, d_max=d_mid)),
    ]
    failures = 0
    for name, job in jobs:
        t0 = time.time()
        rep = job()
        verdict = ("agree" if rep.agree else
                   "INCONCLUSIVE" if rep.agree is None else "DISAGREE")
        print(f"{name:40s} {verdict:12s} ({time.time() - t0:5.1f}s)")
        if rep.agree is not True:
            failures += 1
    print("all verifications agree" if not failures
          else f"{failures} verifications did not agree")
    return 0 if not failures else 1


if __name__ == "__main__":
    sys.exit(main(fast="--fast" in sys.argv[1:]))
