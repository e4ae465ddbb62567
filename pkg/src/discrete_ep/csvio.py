"""Trajectory CSV format.

One header row, then one row per step ``k = 0..N``::

    step, t, f11..f33, Pi1, Pi2, Pi3, g11..g33, casimir_group, casimir_dual, energy

``f`` is the relative rotation taking step k to k+1, so it (and the
quantities derived from it) is blank on the last row. ``g`` columns are blank
when attitudes were not reconstructed. Floats use 17 significant digits.
"""

import csv

import numpy as np

from .integrators import TrajectoryRecord

_IDX = [f"{i}{j}" for i in range(1, 4) for j in range(1, 4)]
HEADER = (
    ["step", "t"]
    + [f"f{ij}" for ij in _IDX]
    + ["Pi1", "Pi2", "Pi3"]
    + [f"g{ij}" for ij in _IDX]
    + ["casimir_group", "casimir_dual", "energy"]
)


def fmt(x):
    return format(float(x), ".17g")


def write_trajectory(path, traj, invariants=None):
    invariants = invariants or {}
    n = traj.n_steps
    cg = invariants.get("casimir_group")
    cd = invariants.get("casimir_dual")
    en = invariants.get("energy")
    blank9 = [""] * 9
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for k in range(n + 1):
            row = [str(k), fmt(k * traj.h)]
            row += [fmt(x) for x in traj.f_seq[k].ravel()] if k < n else blank9
            row += [fmt(x) for x in traj.pi_seq[k]]
            row += [fmt(x) for x in traj.g_seq[k].ravel()] if traj.g_seq is not None else blank9
            row.append(fmt(cg[k]) if cg is not None and k < n else "")
            row.append(fmt(cd[k]) if cd is not None else "")
            row.append(fmt(en[k]) if en is not None and k < n else "")
            w.writerow(row)


def read_trajectory(path):
    """Read a trajectory CSV back into a :class:`TrajectoryRecord`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != HEADER:
        raise ValueError(f"{path}: not a trajectory CSV (header mismatch)")
    body = rows[1:]
    if len(body) < 2:
        raise ValueError(f"{path}: need at least one step")
    col = {name: i for i, name in enumerate(HEADER)}
    h = float(body[1][col["t"]])
    f_seq = np.array([[float(r[col[f"f{ij}"]]) for ij in _IDX] for r in body[:-1]]).reshape(-1, 3, 3)
    pi_seq = np.array([[float(r[col[c]]) for c in ("Pi1", "Pi2", "Pi3")] for r in body])
    g_seq = None
    if body[0][col["g11"]] != "":
        g_seq = np.array([[float(r[col[f"g{ij}"]]) for ij in _IDX] for r in body]).reshape(-1, 3, 3)
    return TrajectoryRecord(h, f_seq, pi_seq, g_seq)


def write_convergence(path, table):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["h", "error", "order"])
        for h, err, order in table.rows:
            w.writerow([fmt(h), fmt(err), "" if order is None else fmt(order)])
