"""Write a study file, then solve it through the command line entry point."""
import sys
import tempfile
from pathlib import Path

from fuzzyprio.cli import main

study = """\
name: supplier choice
hierarchy:
  id: G
  label: pick a supplier
  children:
    - id: price
      children: [{id: unit}, {id: freight}]
    - {id: reliability}
matrices:
  G:
    - {i: reliability, j: price, label: low}
  price:
    - {i: unit, j: freight, crisp: 3}
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "study.yaml"
    path.write_text(study)
    code = main(["validate", str(path)])
    print("validate exit code", code, flush=True)
    code = main(["solve", str(path)])
    print("solve    exit code", code, flush=True)
    code = main(["solve", str(path), "--format", "csv"])
    print("csv      exit code", code, flush=True)

# the bundled case study runs the same way
sys.exit(main(["solve", "paper_study", "--spread", "1.0"]))
