"""Probability that a small router network survives a malware outbreak.

Run with ``python3 scripts/network_resilience.py [--p 1/10]``.
"""

import argparse
from fractions import Fraction
from pathlib import Path

from gdlog import InferenceConfig, atom, infer, parse_database, parse_program, query

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=Fraction, default=Fraction(1, 10), help="infection probability per edge")
    args = ap.parse_args()
    text = (PROGRAMS / "network.gdl").read_text().replace("flip<0.1>", f"flip<{args.p}>")
    prog = parse_program(text)
    db = parse_database((PROGRAMS / "network.facts").read_text())
    dist = infer(prog, db, InferenceConfig(project=True))
    print(f"infection probability per edge: {args.p}")
    print(f"outcomes without a stable model: {dist.mass(())}")
    print(f"network survives:                {query(dist, 'has-stable-model')}")
    for router in (2, 3):
        print(f"router {router} infected:              {query(dist, 'atom-brave', atom('Infected', router, 1))}")


if __name__ == "__main__":
    main()
