#!/usr/bin/env python3
# The copyright in this software is being made available under the BSD
# License, included below. This software may be subject to other third party
# and contributor rights, including patent rights, and no such rights are
# granted under this license.
#
# Copyright (c) 2026, The ARIC Authors
# All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
#  * Redistributions of source code must retain the above copyright notice,
#    this list of conditions and the following disclaimer.
#  * Redistributions in binary form must reproduce the above copyright notice,
#    this list of conditions and the following disclaimer in the documentation
#    and/or other materials provided with the distribution.
#  * Neither the name of the ARIC Authors nor the names of its contributors may
#    be used to endorse or promote products derived from this software without
#    specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
# ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
# BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
# CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
# SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
# INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
# CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
# ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
# THE POSSIBILITY OF SUCH DAMAGE.

"""Builds a small natural-image corpus from the sample images bundled with scikit-image.

Layout written under --out:
  train/  128x128 PPM crops (training and validation material)
  test/   256x256 PPM crops (held out)

For every source image one 256x256 test window is reserved in the bottom-right corner; training
crops never intersect it, so the two sets share no pixels. The output is a pure function of
--seed.
"""

import argparse
import os
import sys

import numpy as np

SOURCES = [
    "astronaut.png", "coffee.png", "rocket.jpg", "motorcycle_left.png", "motorcycle_right.png",
    "hubble_deep_field.jpg", "retina.jpg", "ihc.png", "camera.png", "brick.png", "grass.png",
    "gravel.png", "moon.png",
]
TRAIN_SIZE = 128
TEST_SIZE = 256


def load_source(name):
    import skimage.data
    import skimage.io
    import skimage.transform

    img = skimage.io.imread(os.path.join(os.path.dirname(skimage.data.__file__), name))
    if img.ndim == 2:
        img = np.stack([img] * 3, axis=-1)
    img = img[..., :3]
    if img.dtype != np.uint8:
        img = (np.clip(img, 0, 1) * 255 + 0.5).astype(np.uint8)
    # very large sources are reduced so crops hold a comparable amount of structure
    h, w = img.shape[:2]
    if min(h, w) > 900:
        img = skimage.transform.rescale(img, 0.5, channel_axis=-1, anti_aliasing=True)
        img = (np.clip(img, 0, 1) * 255 + 0.5).astype(np.uint8)
    return img


def write_ppm(path, rgb):
    h, w = rgb.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", required=True)
    ap.add_argument("--train-per-source", type=int, default=9)
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    train_dir = os.path.join(args.out, "train")
    test_dir = os.path.join(args.out, "test")
    os.makedirs(train_dir, exist_ok=True)
    os.makedirs(test_dir, exist_ok=True)

    n_train = n_test = 0
    for source in SOURCES:
        name = os.path.splitext(source)[0]
        img = load_source(source)
        h, w = img.shape[:2]
        if h < TEST_SIZE + TRAIN_SIZE or w < TEST_SIZE + TRAIN_SIZE:
            print(f"skipping {name}: {w}x{h} too small", file=sys.stderr)
            continue
        ty, tx = h - TEST_SIZE, w - TEST_SIZE
        write_ppm(os.path.join(test_dir, f"{name}.ppm"), img[ty:, tx:])
        n_test += 1

        made = tries = 0
        while made < args.train_per_source and tries < 10000:
            tries += 1
            y = int(rng.integers(0, h - TRAIN_SIZE + 1))
            x = int(rng.integers(0, w - TRAIN_SIZE + 1))
            if y + TRAIN_SIZE > ty and x + TRAIN_SIZE > tx:
                continue
            write_ppm(os.path.join(train_dir, f"{name}_{made:02d}.ppm"), img[y:y + TRAIN_SIZE, x:x + TRAIN_SIZE])
            made += 1
            n_train += 1
    print(f"wrote {n_train} training and {n_test} test images to {args.out}")
    return 0 if n_train >= 100 else 1


if __name__ == "__main__":
    sys.exit(main())
