#!/usr/bin/env python3
"""Write the 5000-digit MNIST subset shipped with mlxtend as IDX files.

Usage: make_mnist5k.py <mlxtend wheel or mnist_5k.csv.gz> <out dir>

The CSV stores 784 pixel columns followed by the label. Output files:
  mnist5k-images-idx3-ubyte   magic 0x00000803, dims (5000, 28, 28)
  mnist5k-labels-idx1-ubyte   magic 0x00000801, dims (5000,)
"""
import gzip
import io
import os
import struct
import sys
import zipfile

import numpy as np


def read_csv_gz(src):
    if src.endswith(".whl"):
        with zipfile.ZipFile(src) as z:
            raw = z.read("mlxtend/data/data/mnist_5k.csv.gz")
    else:
        with open(src, "rb") as f:
            raw = f.read()
    return np.loadtxt(io.BytesIO(gzip.decompress(raw)), delimiter=",")


def main():
    src, out = sys.argv[1], sys.argv[2]
    table = read_csv_gz(src)
    pixels = table[:, :-1].astype(np.uint8)
    labels = table[:, -1].astype(np.uint8)
    n = pixels.shape[0]
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "mnist5k-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x803, n, 28, 28))
        f.write(pixels.tobytes())
    with open(os.path.join(out, "mnist5k-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x801, n))
        f.write(labels.tobytes())


if __name__ == "__main__":
    main()
