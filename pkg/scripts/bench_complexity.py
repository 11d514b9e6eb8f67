"""Cell-update counts and wall time for the hmm, star and fan families.

Prints the CSV produced by `bnet bench` plus the doubling ratio per family.
"""
import argparse
import io

from bnet.cli import run_cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    plans = {"hmm": "8,16,32,64,128,256", "star": "2,4,8", "fan": "2,4,8"}
    for family, sizes in plans.items():
        out = io.StringIO()
        code = run_cli(["bench", "--family", family, "--sizes", sizes, "--states", str(args.states),
                        "--repeat", str(args.repeat)], out, io.StringIO())
        if code:
            raise SystemExit(code)
        lines = out.getvalue().splitlines()
        print("\n".join(lines if family == "hmm" else lines[1:]))
        cells = [int(l.split(",")[3]) for l in lines[1:]]
        ratios = ", ".join(f"{b / a:.3f}" for a, b in zip(cells, cells[1:]))
        print(f"# {family} doubling ratios: {ratios}")


if __name__ == "__main__":
    main()
