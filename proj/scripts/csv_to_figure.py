#!/usr/bin/env python3
"""Plot nanorevival trace or torque CSVs.

    csv_to_figure.py trace.csv [more.csv ...] -o fig.png [--tau-range 0 3]
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load(path):
    manifest = {}
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[2:].strip().partition(" ")
            manifest[key] = value
    return pd.read_csv(path, comment="#"), manifest


def plot_trace(ax, df, label):
    ax.plot(df["tau"], df["alignment_decohered"], lw=1.0, label=f"{label} quantum")
    ax.plot(df["tau"], df["alignment_classical"], "--", lw=1.0, label=f"{label} classical")


def plot_torque(ax, df, label):
    nonzero = df[df["n_ext_Nm"] > 0]
    ax.semilogx(nonzero["n_ext_Nm"], nonzero["revival_alignment"], "o-", label=label)
    if (df["n_ext_Nm"] == 0).any():
        ax.axhline(df.loc[df["n_ext_Nm"] == 0, "revival_alignment"].iloc[0], color="gray", lw=0.8)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--out", default="figure.png")
    ap.add_argument("--tau-range", nargs=2, type=float)
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4))
    torque = False
    for path in args.csv:
        df, manifest = load(path)
        label = manifest.get("command", "") + " " + path.rsplit("/", 1)[-1]
        if "revival_alignment" in df.columns:
            torque = True
            plot_torque(ax, df, label)
        else:
            plot_trace(ax, df, label)
    if torque:
        ax.set_xlabel("N_ext [N m]")
        ax.set_ylabel("revival alignment")
    else:
        ax.set_xlabel("t / T_rev")
        ax.set_ylabel("<cos^2 beta>")
        if args.tau_range:
            ax.set_xlim(*args.tau_range)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
