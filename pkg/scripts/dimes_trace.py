"""Stratum-by-stratum perfect grounding of the dimes and quarters program.

Prints the trace for the empty choice set and for one where every dime shows
tail, then compares the perfect and simple chase trees.
"""

from fractions import Fraction
from pathlib import Path

from gdlog import ChoiceSet, PerfectGrounder, SimpleGrounder, attach_database, explore, parse_database, parse_program
from gdlog.ground import atr_rule, is_compatible
from gdlog.model import atom, format_rules

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"
ORDER = [{"Dime"}, {"Quarter"}, {"DimeTail"}, {"SomeDimeTail"}, {"QuarterTail"}]


def show(g: PerfectGrounder, choices: ChoiceSet, title: str):
    print(f"== {title}")
    for comp, step in zip(g.order, g.trace(choices)):
        print(f"-- up to {{{', '.join(sorted(comp))}}}: {len(step)} rules")
    rules = g(choices)
    print(format_rules(rules))
    print(f"compatible: {is_compatible(choices, rules)}\n")


def main():
    prog = attach_database(parse_program((PROGRAMS / "dimes.gdl").read_text()),
                           parse_database((PROGRAMS / "dimes.facts").read_text()))
    g = PerfectGrounder(prog, order=ORDER)
    show(g, ChoiceSet(), "no choices yet")
    tails = ChoiceSet([atr_rule(atom("__active__flip__1", Fraction(1, 2), d), 1) for d in (1, 2)])
    show(g, tails, "both dimes show tail")
    for grounder in (g, SimpleGrounder(prog)):
        res = explore(grounder)
        print(f"{grounder.name}: {len(res.complete)} complete paths, mass {res.complete_mass}")


if __name__ == "__main__":
    main()
