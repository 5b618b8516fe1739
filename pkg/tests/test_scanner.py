import numpy as np
import pytest

from get_signals import fundamental_cell
from lattice import separable_lattice
from locop import construct_multiwindow_frame
from phase_space import Window, gaussian_window
from scanner import SWEEP_COLUMNS, construction_sweep, n_sweep


def test_n_sweep_reaches_tight_frame():
    n = 8
    lattice = separable_lattice(n, 2, 2)
    df = n_sweep(fundamental_cell(lattice), gaussian_window(n), lattice)
    assert df["n"].tolist() == list(range(1, n + 1))
    assert (np.diff(df["eigenvalue"]) <= 1e-12).all()
    assert (np.diff(df["A"]) >= -1e-9).all()
    # every eigenfunction together gives S = |L| I
    last = df.iloc[-1]
    assert last["A"] == pytest.approx(lattice.size) and last["B"] == pytest.approx(lattice.size)
    assert bool(last["is_frame"])


def test_n_sweep_agrees_with_construction():
    n = 8
    lattice = separable_lattice(n, 2, 2)
    sigma, phi = fundamental_cell(lattice), gaussian_window(n)
    result = construct_multiwindow_frame(sigma, phi, lattice)
    df = n_sweep(sigma, phi, lattice)
    row = df.loc[df["n"] == result.n].iloc[0]
    assert bool(row["is_frame"])
    assert row["A"] == pytest.approx(result.report.lower_bound, rel=1e-8)


def test_construction_sweep_small():
    df = construction_sweep(4)
    assert list(df.columns) == SWEEP_COLUMNS
    assert (df["size"] >= 4).all()
    assert (df["status"] == "ok").all()
    assert df["is_frame"].all()


def test_construction_sweep_records_failures():
    df = construction_sweep(4, min_size=8, window=Window(np.zeros(4)))
    assert len(df) > 0
    assert (df["status"] == "ZeroWindowError").all()
    assert df["error"].str.len().gt(0).all()


@pytest.mark.slow
def test_construction_sweep_over_all_lattices_of_z8(regression):
    df = construction_sweep(8)
    assert len(df) > 0
    assert (df["status"] == "ok").all(), df.loc[df["status"] != "ok", ["generators", "error"]]
    assert (df["n_windows"] <= 8).all()
    assert df["is_frame"].all() and df["wexler_raz"].all()
    regression("sweep/N8/lattices", int(len(df)))
