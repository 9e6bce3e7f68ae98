import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def run(name, *args):
    out = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, check=True)
    return [line.split(",") for line in out.stdout.splitlines()]


def test_oracle_sweep_agrees():
    rows = run("oracle_sweep.py", "--combs", "3", "--seed", "11")
    assert len(rows) == 1 + 3 * 4
    for row in rows[1:]:
        assert row[2] == row[3]
        assert float(row[4]) <= 1e-8
        assert row[5] == "nan" or float(row[5]) <= 1e-6


def test_weyl_asymptotics_converge():
    rows = run("weyl_asymptotics.py", "--decades", "6")
    gaps = {}
    for case, _, *_, gap in rows[1:]:
        gaps.setdefault(case, []).append(float(gap))
    assert set(gaps) == {"bounded", "half_line_plus", "half_line_minus"}
    for g in gaps.values():
        assert g[-1] < 1e-9 and g[-1] < g[0]
