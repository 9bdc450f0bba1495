#!/usr/bin/env python3
# Copyright 2026 The qhybrid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Fetch MNIST training files in IDX format into a data directory.

The canonical training files are tried first. When they cannot be reached,
the 5000-sample MNIST subset bundled with the `mlxtend` wheel is converted
to IDX instead (500 images per digit, drawn from the MNIST training set).
The library itself never touches the network; this script is out of band.
"""

import argparse
import gzip
import io
import pathlib
import struct
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
]
FILES = ["train-images-idx3-ubyte.gz", "train-labels-idx1-ubyte.gz"]


def fetch_canonical(out: pathlib.Path) -> bool:
    for base in MIRRORS:
        try:
            blobs = {}
            for name in FILES:
                with urllib.request.urlopen(base + name, timeout=20) as resp:
                    blobs[name] = resp.read()
        except Exception as exc:  # noqa: BLE001
            print(f"mirror {base} unavailable: {exc}", file=sys.stderr)
            continue
        for name, blob in blobs.items():
            (out / name).write_bytes(blob)
        return True
    return False


def write_idx(out: pathlib.Path, pixels: list, labels: list) -> None:
    n = len(labels)
    images = io.BytesIO()
    images.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
    for row in pixels:
        images.write(bytes(row))
    label_bytes = struct.pack(">II", 0x00000801, n) + bytes(labels)
    # mtime=0 keeps the gzip output byte-stable across runs.
    with open(out / FILES[0], "wb") as f:
        f.write(gzip.compress(images.getvalue(), mtime=0))
    with open(out / FILES[1], "wb") as f:
        f.write(gzip.compress(label_bytes, mtime=0))


def read_subset_csv(wheel: pathlib.Path) -> bytes:
    with zipfile.ZipFile(wheel) as z:
        return gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz"))


def fetch_mlxtend_subset(out: pathlib.Path, wheel: str | None) -> None:
    if wheel:
        raw = read_subset_csv(pathlib.Path(wheel))
    else:
        with tempfile.TemporaryDirectory() as tmp:
            subprocess.run(
                [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                 "-d", tmp, "mlxtend"],
                check=True)
            raw = read_subset_csv(next(pathlib.Path(tmp).glob("mlxtend-*.whl")))
    pixels, labels = [], []
    for line in raw.decode().splitlines():
        fields = [int(float(v)) for v in line.split(",")]
        pixels.append(fields[:-1])
        labels.append(fields[-1])
    write_idx(out, pixels, labels)
    print(f"wrote {len(labels)}-sample subset to {out}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/mnist")
    parser.add_argument("--subset-only", action="store_true",
                        help="skip the canonical mirrors")
    parser.add_argument("--wheel", help="local mlxtend wheel to read from")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if not args.subset_only and fetch_canonical(out):
        print(f"wrote canonical MNIST training files to {out}")
        return 0
    fetch_mlxtend_subset(out, args.wheel)
    return 0


if __name__ == "__main__":
    sys.exit(main())
