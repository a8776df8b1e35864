"""Regenerate all four figure kinds from the shipped sample CSVs.

Usage: python scripts/regenerate_figures.py [out_dir]   (default: figures/)
"""

import os
import sys

from biharm2d_plots import plot_condition, plot_convergence, plot_heatmap

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "samples")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else \
        os.path.join(os.path.dirname(__file__), "..", "figures")
    os.makedirs(out, exist_ok=True)

    def s(name):
        return os.path.join(SAMPLES, name)

    made = [
        plot_convergence(s("convergence_simply.csv"),
                         os.path.join(out, "convergence_simply.png"),
                         title="Simply connected convergence"),
        plot_convergence(s("convergence_multi.csv"),
                         os.path.join(out, "convergence_multi.png"),
                         title="Multiply connected convergence"),
        plot_condition(s("condition.csv"),
                       os.path.join(out, "condition.png")),
        plot_heatmap(s("grid.csv"), os.path.join(out, "potential.png"),
                     column="w", title="computed deflection $w$"),
        plot_heatmap(s("grid.csv"), os.path.join(out, "error.png"),
                     column="abs_err", log_scale=True,
                     title="absolute pointwise error"),
        plot_heatmap(s("greens.csv"), os.path.join(out, "greens.png"),
                     column="w", title="domain Green's function"),
    ]
    for path in made:
        print(path)


if __name__ == "__main__":
    main()
