#!/usr/bin/env python3
# Copyright 2026 The lsmrac Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Plots a trace written by `lsmrac run` or `lsmrac compare`."""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_run(trace: pd.DataFrame, out: pathlib.Path, label: str) -> list[pathlib.Path]:
    robots = sorted(trace["robot"].unique())
    e_cols = [c for c in trace.columns if c.startswith("e_")]
    written = []

    fig, ax = plt.subplots(figsize=(7, 4))
    for r in robots:
        rows = trace[trace["robot"] == r]
        ax.plot(rows["step"], rows[e_cols].abs().max(axis=1), label=f"robot {r + 1}")
    ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("max |x - x_m|")
    ax.legend()
    written.append(out / f"{label}_tracking_error.png")
    fig.savefig(written[-1], dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 5))
    for r in robots:
        rows = trace[trace["robot"] == r]
        ax.plot(rows["x_0"], rows["x_1"], label=f"robot {r + 1}")
        ax.plot(rows["x_m_0"], rows["x_m_1"], "k:", linewidth=0.8)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend()
    written.append(out / f"{label}_paths.png")
    fig.savefig(written[-1], dpi=120)
    plt.close(fig)

    per_step = trace.groupby("step")["min_surface_distance"].first()
    if per_step.notna().any():
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(per_step.index, per_step.values)
        ax.axhline(0.0, color="r", linewidth=0.8)
        ax.set_xlabel("step")
        ax.set_ylabel("min surface distance [m]")
        written.append(out / f"{label}_distance.png")
        fig.savefig(written[-1], dpi=120)
        plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    for r in robots:
        rows = trace[trace["robot"] == r]
        ax.plot(rows["step"], rows["eps_norm"], label=f"robot {r + 1}")
    ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("|eps|")
    ax.legend()
    written.append(out / f"{label}_eps.png")
    fig.savefig(written[-1], dpi=120)
    plt.close(fig)
    return written


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dir", type=pathlib.Path, help="output directory of run or compare")
    args = parser.parse_args()
    traces = sorted(args.dir.glob("trace*.csv"))
    if not traces:
        raise SystemExit(f"no trace*.csv in {args.dir}")
    for path in traces:
        for written in plot_run(pd.read_csv(path), args.dir, path.stem):
            print(written)
    series = args.dir / "comparison_series.csv"
    if series.exists():
        df = pd.read_csv(series)
        fig, ax = plt.subplots(figsize=(7, 4))
        for col in df.columns[1:3]:
            ax.plot(df["step"], df[col], label=col)
        ax.set_yscale("symlog", linthresh=1e-6)
        ax.set_xlabel("step")
        ax.legend()
        fig.savefig(args.dir / "comparison.png", dpi=120)
        plt.close(fig)
        print(args.dir / "comparison.png")


if __name__ == "__main__":
    main()
