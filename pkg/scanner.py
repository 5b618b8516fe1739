"""
Sweeps over lattices and window counts: the all-lattice construction sweep
and the n-sweep of frame bounds for the top-n eigenfunctions.
"""
from typing import Optional

import numpy as np
import pandas as pd

from errors import TFLocError
from gabor import WindowBundle, frame_bounds, frame_operator
from get_signals import fundamental_cell
from lattice import Lattice, enumerate_lattices
from locop import SymbolLike, construct_multiwindow_frame, localization_operator, spectral_decomposition
from phase_space import Signal, gaussian_window
from unified_logger import get_logger

logger = get_logger(__name__)

SWEEP_COLUMNS = ["generators", "size", "volume", "separable", "status", "n_windows",
                 "A", "B", "condition", "is_frame", "wexler_raz", "error"]


def _lattice_row(lattice: Lattice) -> dict:
    ab = lattice.is_separable()
    return {
        "generators": " ".join(f"({k},{l})" for k, l in lattice.generators),
        "size": lattice.size,
        "volume": float(lattice.volume),
        "separable": f"{ab[0]}x{ab[1]}" if ab else "",
    }


def construction_sweep(n: int, min_size: Optional[int] = None, strategy: str = "first",
                       window: Optional[Signal] = None, target: Optional[float] = None) -> pd.DataFrame:
    """
    Runs the eigenfunction frame construction with sigma = chi_Q over every
    lattice of Z_N^2 with at least `min_size` points (default N). A lattice
    that fails is logged and recorded; the sweep continues.
    """
    min_size = n if min_size is None else min_size
    window = gaussian_window(n) if window is None else window

    # 1. Every subgroup, filtered by size
    lattices = [lat for lat in enumerate_lattices(n) if lat.size >= min_size]
    logger.info(f"Construction sweep over {len(lattices)} lattices of Z_{n}^2 (|L| >= {min_size})")

    rows = []
    for lattice in lattices:
        row = {**_lattice_row(lattice), "status": "ok", "error": ""}
        try:
            # 2. Symbol is the indicator of the lattice's own fundamental cell
            result = construct_multiwindow_frame(fundamental_cell(lattice), window, lattice,
                                                 strategy=strategy, target=target)
            row.update({
                "n_windows": result.n,
                "A": result.report.lower_bound,
                "B": result.report.upper_bound,
                "condition": result.report.condition,
                "is_frame": result.report.is_frame,
                "wexler_raz": result.wexler_raz_passes,
            })
        except TFLocError as e:
            logger.error(f"Construction failed for {lattice}: {e}")
            row.update({"status": type(e).__name__, "error": str(e)})
        rows.append(row)

    # 3. Summary
    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    failures = int((df["status"] != "ok").sum())
    logger.info(f"Sweep done: {len(df) - failures} constructed, {failures} failed")
    return df


def n_sweep(sigma: SymbolLike, phi: Signal, lattice: Lattice) -> pd.DataFrame:
    """
    Frame bounds of the top-n eigenfunction bundle for n = 1..N, grown one
    eigenfunction at a time.
    """
    decomp = spectral_decomposition(localization_operator(sigma, phi))
    size = phi.n
    S = np.zeros((size, size), dtype=complex)
    rows = []
    for j in range(size):
        S = S + frame_operator(WindowBundle((decomp.eigenfunction(j),)), lattice)
        report = frame_bounds(S)
        rows.append({"n": j + 1, "eigenvalue": float(decomp.eigenvalues[j]), "A": report.lower_bound,
                     "B": report.upper_bound, "condition": report.condition, "is_frame": report.is_frame})
    df = pd.DataFrame(rows)
    first = df.loc[df["is_frame"], "n"]
    logger.info(f"n-sweep over {lattice}: first frame at n={int(first.iloc[0]) if len(first) else 'none'}")
    return df
