#!/usr/bin/env python3
"""Worked moment-transfer runs, printed as the CLI's JSON reports.

Takes the basis moments of a point mass (half-line) and of the uniform
density on [0, 1], recovers an atomic measure from each, and prints the
full pipeline reports.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from expmoments import (
    AtomicMeasure,
    Frequencies,
    UNIT_INTERVAL,
    Uniform,
    verify_transfer,
)
from expmoments.serialize import dumps, transfer_to_json

freq = Frequencies((1.0, 2.0, 3.0, 4.0))

print("# point mass at 1, half-line")
print(dumps(transfer_to_json(verify_transfer(freq, AtomicMeasure.delta(1)))))

print("# uniform density on [0, 1]")
print(dumps(transfer_to_json(verify_transfer(freq, Uniform(0, 1), UNIT_INTERVAL))))
