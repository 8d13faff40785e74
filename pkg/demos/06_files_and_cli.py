"""
Files and the command line
==========================

The same steps through the ``irrigopt`` command: validate a scenario, solve
the single-objective models, trace a front, run the baseline, and verify
the written front from the file alone.
"""
import subprocess
import sys


def irrigopt(*args):
    cmd = [sys.executable, "-m", "irrigopt", *args]
    print("$ irrigopt", " ".join(args))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print(proc.stdout + proc.stderr, end="")
    print(f"(exit {proc.returncode})\n")


irrigopt("validate", "representative")
irrigopt("solve-nb", "representative", "--with-target-flow", "--out", "plan_targets.csv")
irrigopt("solve-efd", "representative", "--out", "plan_model2.csv")
irrigopt("front", "representative", "--grid-points", "200", "--out", "front.csv")
irrigopt("report", "front.csv", "--scenario", "representative")
irrigopt("baseline", "toy-kinked", "--pop", "100", "--gens", "200", "--seed", "7", "--out", "ga.csv")
irrigopt("report", "ga.csv")

# Break the front on purpose: a row that an existing row dominates
lines = open("front.csv").read().splitlines()
nb, efd = map(float, lines[10].split(",")[:2])
lines.insert(11, f"{nb - 1e6:.9g},{efd + 1:.9g},,edited")
open("front_edited.csv", "w").write("\n".join(lines) + "\n")
irrigopt("report", "front_edited.csv")
