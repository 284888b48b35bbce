"""Equality cases of the two-sided chain across join(K_p, empty(q)).

For U = the clique and U = clique plus one independent vertex the upper
side is tight; for U = the independent set the lower side is tight. The
table shows each side's slack and whether the certificate confirms it.
"""

import argparse

from lapsum.bounds import basic_chain, certify_equality
from lapsum.graph import complete, empty, join


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=6, help="largest p and q")
    args = ap.parse_args()
    print(f"{'p':>3}{'q':>3}  {'U':<22}{'side':<7}{'lhs':>9}{'rhs':>9}{'slack':>11}  cert  b")
    for p in range(1, args.max + 1):
        for q in range(2, args.max + 1):
            g = join(complete(p), empty(q))
            n = p + q
            cases = [
                (tuple(range(p)), "upper"),
                (tuple(range(p + 1)), "upper"),
                (tuple(range(p, n)), "lower"),
            ]
            for u, side in cases:
                rep = getattr(basic_chain(g, u), side)
                cert = certify_equality(g, u, side)
                label = f"{{0..{u[-1]}}}" if u[0] == 0 else f"{{{u[0]}..{u[-1]}}}"
                print(f"{p:>3}{q:>3}  {label:<22}{side:<7}{rep.lhs:>9.4f}{rep.rhs:>9.4f}{rep.slack:>11.2e}  "
                      f"{'yes' if cert.certified else 'no ':<4}  {cert.b}")


if __name__ == "__main__":
    main()
