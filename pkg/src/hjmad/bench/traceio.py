"""Trace persistence as CSV.

Header ``k,t,f,gnorm,u_est,cum_evals,x0,...,x{n-1}``; floats are written with
17 significant digits so a file parses back to the identical doubles.
"""

from __future__ import annotations

import csv

import numpy as np

from ..errors import InvalidArgumentError
from ..solver import IterateRecord, Trace

__all__ = ["write_trace_csv", "read_trace_csv"]


def _fmt(v):
    return format(float(v), ".17g")


def write_trace_csv(trace: Trace, path) -> None:
    if not trace.records:
        raise InvalidArgumentError("cannot write an empty trace")
    n = trace.records[0].x.size
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "t", "f", "gnorm", "u_est", "cum_evals"] + [f"x{i}" for i in range(n)])
        for r in trace.records:
            w.writerow([r.k, _fmt(r.t), _fmt(r.f_x), _fmt(r.g_norm), _fmt(r.u_est), r.cum_evals]
                       + [_fmt(v) for v in r.x])


def read_trace_csv(path):
    """Parse a file written by :func:`write_trace_csv` into a list of records."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    n = len(header) - 6
    out = []
    for row in body:
        out.append(IterateRecord(
            k=int(row[0]),
            x=np.array([float(v) for v in row[6:6 + n]]),
            f_x=float(row[2]),
            t=float(row[1]),
            g_norm=float(row[3]),
            u_est=float(row[4]),
            cum_evals=int(row[5]),
        ))
    return out
