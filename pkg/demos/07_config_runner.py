# %% [markdown]
# # Running an experiment from a config file
#
# The same pipeline is available as `szego <subcommand> --config FILE`.
# Here a KMS experiment is written to YAML and run through `compare`.

# %%
import json
import tempfile
from pathlib import Path

import yaml

from szego.cli import main

work = Path(tempfile.mkdtemp())
config = {
    "spec": {"kind": "kms", "sampling": "midpoint", "symbol": {"diagonals": [
        {"k": 0, "func": {"kind": "poly", "coeffs": [0, 1]}},
        {"k": 1, "func": 1.0}, {"k": -1, "func": 1.0}]}},
    "law": {"kind": "density", "f": {"kind": "linear", "a": 0, "b": 1}},
    "n_grid": [256, 1024, 2048],
    "moments": [[2, 0], [4, 0]],
    "phis": [{"kind": "bump", "center": 0.5, "width": 1.0}],
    "cdf_grid": {"start": -2.5, "stop": 3.5, "step": 0.05},
    "tolerances": {"ks": 0.05},
    "seed": 0,
    "output_dir": str(work / "out"),
}
(work / "kms.yaml").write_text(yaml.safe_dump(config))

# %%
code = main(["compare", "--config", str(work / "kms.yaml")])
print("exit code:", code)
report = json.loads((work / "out" / "report.json").read_text())
for row in report["convergence"]:
    print(row)
print(sorted(p.name for p in (work / "out").iterdir()))
