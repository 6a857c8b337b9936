#!/usr/bin/env python3
# Copyright 2026 The uqnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the quarterly fixture series in data/ (deterministic)."""

import argparse
import csv
import math
import pathlib

import numpy as np


def quarters(start_year=2012, end_year=2021):
    return [f"{y}-Q{q}" for y in range(start_year, end_year + 1) for q in range(1, 5)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data", type=pathlib.Path)
    parser.add_argument("--seed", default=2012, type=int)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    labels = quarters()
    n = len(labels)
    t = np.arange(n)
    season = np.cos(2 * math.pi * t / 4)  # peaks in Q1

    # Raw units: prod/imports/storage in GWh per quarter, coal in p/kWh,
    # ETS in EUR/tCO2, offshore wind as % of generation.
    prod = 1.20e5 - 6.0e2 * t + 8.0e3 * season + rng.normal(0, 2.5e3, n)
    imports = 1.10e5 + 5.0e2 * t + 2.0e4 * season + rng.normal(0, 4.0e3, n)
    storage = 2.5e4 - 1.0e4 * season + rng.normal(0, 1.5e3, n)
    coal = 0.9 + 0.12 * np.sin(t / 5.0) + np.where(t >= 36, 0.3 * (t - 35), 0) + rng.normal(0, 0.03, n)
    gas = (2.3 - 0.6 * prod * 1e-5 + 0.4 * imports * 1e-5 - 1.0 * storage * 1e-5 + 0.5 * coal
           + np.cumsum(rng.normal(0, 0.03, n)) + rng.normal(0, 0.04, n))

    ets = np.concatenate([np.linspace(7, 5, 12), np.linspace(5, 6, 12), np.linspace(15, 25, 8), np.linspace(30, 60, 8)])
    ets = ets + rng.normal(0, 0.5, n)
    wind = 5.0 + 0.45 * t + 2.0 * season + rng.normal(0, 0.6, n)
    elec = 6.0 + 2.6 * gas + 0.07 * ets - 0.12 * wind + rng.normal(0, 0.15, n)

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "gas_factors.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "gas_price", "prod", "imports", "storage", "coal"])
        for i in range(n):
            w.writerow([labels[i], f"{gas[i]:.4f}", f"{prod[i]:.0f}", f"{imports[i]:.0f}", f"{storage[i]:.0f}",
                        f"{coal[i]:.4f}"])
    with open(args.out / "elec_factors.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "elec_price", "gas_price", "ets", "offshore_wind"])
        for i in range(n):
            w.writerow([labels[i], f"{elec[i]:.4f}", f"{gas[i]:.4f}", f"{ets[i]:.2f}", f"{wind[i]:.2f}"])


if __name__ == "__main__":
    main()
