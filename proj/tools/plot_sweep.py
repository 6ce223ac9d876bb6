#!/usr/bin/env python3
"""Plot `gausspid sweep` CSV output: WMS and the MMI terms against b."""
import argparse
import csv
import sys


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="+", help="sweep CSV files, '-' for stdin")
    parser.add_argument("--out", help="write the figure here instead of showing it")
    parser.add_argument("--terms", action="store_true", help="also plot redundancy and synergy")
    args = parser.parse_args()

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for path in args.csv:
        with (sys.stdin if path == "-" else open(path, newline="")) as f:
            rows = list(csv.DictReader(f))
        b = [float(r["b"]) for r in rows]
        ax.plot(b, [float(r["wms"]) for r in rows], label=f"WMS ({path})")
        if args.terms:
            ax.plot(b, [float(r["redundancy"]) for r in rows], "--", label=f"R ({path})")
            ax.plot(b, [float(r["synergy"]) for r in rows], ":", label=f"S ({path})")
    ax.axhline(0.0, color="grey", linewidth=0.5)
    ax.set_xlabel("b")
    ax.set_ylabel("information")
    ax.legend(fontsize="small")
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
