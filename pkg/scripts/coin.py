"""Outcome distribution of the coin program, grouped by sets of stable models."""

from pathlib import Path

from gdlog import InferenceConfig, infer, parse_program

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def main():
    dist = infer(parse_program((PROGRAMS / "coin.gdl").read_text()), config=InferenceConfig(project=True))
    for c in dist.sorted_classes():
        models = " | ".join("{" + ", ".join(map(str, m)) + "}" for m in c.sms) or "no stable model"
        print(f"{c.mass}\t{models}")


if __name__ == "__main__":
    main()
