#!/usr/bin/env python3
"""Train the desk-scale reference MLP on sklearn digits and export it.

Writes tests/fixtures/digits/{model.json,*.f32,calib.axds,test.axds}.
The engine never trains; rerun this only to regenerate fixtures.
"""
import json
import struct
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits
from sklearn.neural_network import MLPClassifier

SEED = 7


def write_f32(path, arr):
    np.asarray(arr, dtype="<f4").ravel().tofile(path)


def write_axds(path, x, y):
    x = np.asarray(x, dtype="<f4")
    y = np.asarray(y, dtype="<i4")
    with open(path, "wb") as f:
        f.write(b"AXDS")
        f.write(struct.pack("<III", 1, x.shape[0], x.shape[1]))
        f.write(x.tobytes())
        f.write(y.tobytes())


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digits = load_digits()
    x = (digits.data / 16.0).astype(np.float32)
    y = digits.target.astype(np.int32)
    order = np.random.default_rng(SEED).permutation(len(x))
    x, y = x[order], y[order]
    train, calib, test = slice(0, 1200), slice(1200, 1437), slice(1437, None)

    clf = MLPClassifier(hidden_layer_sizes=(32,), activation="relu", max_iter=600,
                        random_state=SEED, alpha=1e-3)
    clf.fit(x[train], y[train])
    print(f"train acc {clf.score(x[train], y[train]):.4f} test acc {clf.score(x[test], y[test]):.4f}")

    hidden = np.maximum(x[calib] @ clf.coefs_[0] + clf.intercepts_[0], 0.0)
    layers = []
    dims = [(64, 32, "relu", x[calib].max()), (32, 10, "none", hidden.max())]
    for i, (fan_in, fan_out, act, in_max) in enumerate(dims):
        lid = f"fc{i + 1}"
        # Engine layout is row-major [out][in].
        write_f32(out / f"{lid}.weight.f32", clf.coefs_[i].T)
        write_f32(out / f"{lid}.bias.f32", clf.intercepts_[i])
        layers.append({
            "id": lid, "kind": "dense", "in_dim": fan_in, "out_dim": fan_out,
            "activation": act, "backend": "Exact", "backend_width": 8,
            "protection": {"msb_triplication": False, "clamp": "none"},
            "weights": f"{lid}.weight.f32", "bias": f"{lid}.bias.f32",
            "input_scale": float(in_max) / 255.0,
        })
    (out / "model.json").write_text(json.dumps({"format": "axrel-model-v1", "layers": layers}, indent=2) + "\n")
    write_axds(out / "calib.axds", x[calib], y[calib])
    write_axds(out / "test.axds", x[test], y[test])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/digits")
