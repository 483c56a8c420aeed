import subprocess
import sys
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[2]
SCENARIO_FILE = REPO / "scenarios" / "evacuation.yaml"


@pytest.fixture(scope="session")
def paper_run_dir(tmp_path_factory):
    """Outputs of one full simulator run on the shipped scenario, produced
    through the simulator CLI so only the file contract is exercised."""
    out = tmp_path_factory.mktemp("paper_run")
    subprocess.run(
        [sys.executable, "-m", "pedflow.cli", "run",
         "--scenario", str(SCENARIO_FILE), "--out", str(out)],
        check=True, capture_output=True,
    )
    return out
