"""The i-multiplication dualities, and the same workflow from the command line.

Multiplying by i maps Hamiltonian to skew-Hamiltonian and per-Hermitian to
perskew-Hermitian. The solvers for the skew classes reuse this: the returned
form carries ``factor == 1j``.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from structcanon import (
    GenSpec,
    canon_normal_hamiltonian,
    canon_normal_skew_hamiltonian,
    rand_normal_hamiltonian,
)
from structcanon.structure import structure_report

h, _ = rand_normal_hamiltonian(GenSpec(n=4, n1=2, seed=1))
w = 1j * h
print("classify(H):  ", structure_report(h).classify(1e-10))
print("classify(iH): ", structure_report(w).classify(1e-10))

direct = canon_normal_hamiltonian(h)
dual = canon_normal_skew_hamiltonian(w)
print("\nfactor of the skew form:", dual.factor)
for name, a, b in zip(("d1", "d2", "d3"), dual.scaled_data(), (direct.d1, direct.d2, direct.d3)):
    print(f"{name}: max |skew - i * direct| = {np.max(np.abs(a - 1j * b), initial=0):.1e}")

# the CLI writes matrices, a planted sidecar and a JSON run report
with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    cli = [sys.executable, "-m", "structcanon.cli"]
    subprocess.run(cli + ["gen", "skewham", "--n", "4", "--n1", "2", "--seed", "1",
                          "--out", str(tmp / "w.mtx")], check=True)
    print("\nfiles written by gen:", sorted(p.name for p in tmp.iterdir()))
    out = subprocess.run(cli + ["canon", "skewham", str(tmp / "w.mtx"),
                                "--planted", str(tmp / "w.planted.json")],
                         check=True, capture_output=True, text=True).stdout
    report = json.loads(out)
    print("report sections:", sorted(report))
    print("residuals:", report["residuals"])
