"""Regenerate the bundled model files in models/.

Run from the repository root: ``python3 scripts/build_models.py``.
"""

import json
import sys
from pathlib import Path

from kmu_verify.cli import main
from kmu_verify.invariants import delta
from kmu_verify.modelfile import ModelFile

OUT = Path(__file__).resolve().parent.parent / "models"

GENERATE = {
    "sasakian": ["sasakian", "--m", "2", "--c", "-3", "--n", "3", "--seed", "3"],
    "kmu_random": ["kmu", "--m", "2", "--kappa", "0.5", "--n", "3", "--seed", "7"],
    "invariant": ["invariant-sub", "--m", "3", "--kappa", "1", "--c", "-3", "--n", "3", "--seed", "1"],
    "equality_shape1": ["equality-case", "--m", "3", "--kappa", "0.5", "--n", "4", "--variant", "shape1",
                        "--a", "2", "--b", "1", "--seed", "2"],
}


def build(out_dir=OUT):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, args in GENERATE.items():
        code = main(["generate", *args, "--model", str(out_dir / f"{name}.json")], out=sys.stderr)
        if code:
            raise SystemExit(f"generate {name} failed with exit code {code}")

    # h^2 = (kappa - 1) phi^2 broken by one entry
    data = json.loads((out_dir / "kmu_random.json").read_text())
    data["ambient"]["h"][0][0] += 0.05
    data["meta"]["name"] = "corrupted_h"
    (out_dir / "corrupted_h.json").write_text(json.dumps(data, indent=1) + "\n")

    # a valid model whose stated delta and equality claims are wrong
    model = ModelFile.load(out_dir / "kmu_random.json")
    true_delta = delta(model.submanifold).value
    model.meta["name"] = "falsified_claims"
    model.claims = {"delta": true_delta + 0.25, "theorem1_equality": True}
    model.save(out_dir / "falsified_claims.json")
    return sorted(p.name for p in out_dir.glob("*.json"))


if __name__ == "__main__":
    print("\n".join(build()))
