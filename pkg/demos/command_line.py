# %% [markdown]
# # The command-line tool
#
# `qsuff` reads states and channels from JSON files. Every complex entry is a
# `[re, im]` pair. This script writes a few inputs to a temporary directory and
# runs each subcommand through `qsuff.cli.main`, which is what the `qsuff`
# console script calls.

# %%
import json
import tempfile
from pathlib import Path

import numpy as np

from qsuff import cli, fileio, quantum

work = Path(tempfile.mkdtemp())
fileio.write_doc(fileio.state_to_doc(np.diag([0.75, 0.25])), work / "rho.json")
fileio.write_doc(fileio.state_to_doc(np.array([[0.5, 0.2], [0.2, 0.5]])), work / "sigma.json")
fileio.write_doc(fileio.channel_to_doc(quantum.depolarizing_channel(2, 0.5)), work / "dep.json")
print((work / "rho.json").read_text())

# %% [markdown]
# Relative entropy by both methods, with a provenance block that hashes the
# inputs and echoes the configuration.

# %%
args = ["--rho", str(work / "rho.json"), "--sigma", str(work / "sigma.json")]
cli.main(["entropy", *args, "--out", str(work / "entropy.json")])
print(json.dumps(json.loads((work / "entropy.json").read_text())["report"], indent=2))

# %% [markdown]
# Curves as CSV, with the image-side curves when a channel is given.

# %%
cli.main(["sweep", *args, "--channel", str(work / "dep.json"), "--s-count", "5"])

# %% [markdown]
# The full report. Running it twice gives identical bytes.

# %%
cli.main(["verify", *args, "--channel", str(work / "dep.json"), "--out", str(work / "a.json")])
cli.main(["verify", *args, "--channel", str(work / "dep.json"), "--out", str(work / "b.json")])
doc = json.loads((work / "a.json").read_text())
print("verdict:", doc["verdict"], " identical:", (work / "a.json").read_bytes() == (work / "b.json").read_bytes())

# %% [markdown]
# Recovery maps come out as channel documents that parse back in.

# %%
cli.main(["petz", "--sigma", str(work / "sigma.json"), "--channel", str(work / "dep.json"),
          "--variant", "universal", "--out", str(work / "rec.json")])
rec = fileio.load_channel(work / "rec.json")
print("recovery channel:", rec.dim_in, "->", rec.dim_out, "with", len(rec.kraus), "Kraus operators")
