"""Exhaustive XOR-mask check of every compiled permutation, printed as JSON."""

import argparse

from gmzi_fabric.golden import render, xor_reports


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[4, 8, 16, 32])
    args = parser.parse_args()
    print(render(xor_reports(tuple(args.n))), end="")


if __name__ == "__main__":
    main()
