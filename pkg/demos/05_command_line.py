"""
The command line
================

Every capability has a ``paraselect`` subcommand reading JSON files and
writing a JSON, CSV or SVG report. Exit status 2 marks a violated
inequality, 3 bad input and 4 an exhausted budget.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from paraselect import PointCloud
from paraselect.benchmarks import two_point_map, vgraph_map, vgraph_start
from paraselect.serialization import dumps

work = Path(tempfile.mkdtemp(prefix="paraselect-demo-"))
phi = vgraph_map(21, step=0.1)
(work / "two_point.json").write_text(dumps(PointCloud([[0.0], [1.0]]).to_dict()))
(work / "vgraph_map.json").write_text(dumps(phi.to_dict()))
(work / "g.json").write_text(dumps(vgraph_start(phi).values))
(work / "two_map.json").write_text(dumps(two_point_map(3).to_dict()))
(work / "half.json").write_text(dumps(np.full((3, 1), 0.5)))


def cli(*args):
    proc = subprocess.run([sys.executable, "-m", "paraselect.cli", *args], cwd=work,
                          capture_output=True, text=True)
    print(f"$ paraselect {' '.join(args)}   -> exit {proc.returncode}")
    text = proc.stdout.strip().splitlines()
    print("\n".join("    " + line for line in text[:6]) + ("\n    ..." if len(text) > 6 else ""))
    return proc.returncode


cli("analyze", "--set", "two_point.json", "--format", "csv")
cli("select", "--map", "vgraph_map.json", "--g", "g.json", "--gamma", "0.6", "--out", "sel.json")
cli("verify", "--trace", "sel.json", "--map", "vgraph_map.json", "--format", "csv")
cli("select", "--map", "two_map.json", "--g", "half.json", "--alpha", "0.5", "--gamma", "0.75",
    "--r0", "0.6", "--format", "csv")
cli("checkps", "--h", "0.4", "--H", "0.5", "--t", "0.5,1", "--format", "csv")
cli("demo-glue-failure", "--n-max", "20", "--format", "csv")
cli("analyze", "--set", "missing.json")
print("files in", work)
