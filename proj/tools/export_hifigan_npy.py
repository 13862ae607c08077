#!/usr/bin/env python3
# Copyright 2026 The EmoTTS Authors
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

"""Export a published HiFi-GAN generator checkpoint to a directory of .npy files.

The output directory holds one float32 array per generator tensor, named
after the state-dict key (``conv_pre.weight.npy``, ``ups.0.weight.npy``,
``resblocks.4.convs1.2.bias.npy``, ...). Weight-normalised layers may be
exported either folded (``--fold``, writing ``*.weight``) or as the raw
``*.weight_g`` / ``*.weight_v`` pairs; the C++ importer accepts both.

Usage:
    export_hifigan_npy.py g_02500000 out_dir [--config config.json] [--fold]

Requires PyTorch and NumPy. The exported layout keeps PyTorch's tensor
shapes: Conv1d (out, in, kernel) and ConvTranspose1d (in, out, kernel).
"""

import argparse
import json
import os
import sys


def fold_weight_norm(g, v):
    import numpy as np

    axes = tuple(range(1, v.ndim))
    norm = np.sqrt((v.astype(np.float64) ** 2).sum(axis=axes, keepdims=True))
    norm[norm == 0] = 1.0
    return (g * v / norm).astype(np.float32)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("checkpoint", help="generator checkpoint (torch.save file)")
    parser.add_argument("out_dir", help="directory to write .npy files into")
    parser.add_argument("--config", help="generator config.json to copy alongside")
    parser.add_argument("--fold", action="store_true", help="fold weight norm into weights")
    args = parser.parse_args(argv)

    import numpy as np
    import torch

    state = torch.load(args.checkpoint, map_location="cpu")
    if isinstance(state, dict) and "generator" in state:
        state = state["generator"]
    os.makedirs(args.out_dir, exist_ok=True)

    arrays = {k: v.detach().cpu().numpy().astype(np.float32) for k, v in state.items()}
    if args.fold:
        for key in [k for k in arrays if k.endswith(".weight_g")]:
            base = key[: -len(".weight_g")]
            arrays[base + ".weight"] = fold_weight_norm(arrays.pop(key), arrays.pop(base + ".weight_v"))

    for key, value in sorted(arrays.items()):
        np.save(os.path.join(args.out_dir, key + ".npy"), value)
    if args.config:
        with open(args.config) as f:
            cfg = json.load(f)
        mapped = {
            "n_mels": cfg.get("num_mels", 80),
            "upsample_rates": cfg["upsample_rates"],
            "upsample_kernels": cfg["upsample_kernel_sizes"],
            "upsample_initial_channel": cfg["upsample_initial_channel"],
            "resblock_kernels": cfg["resblock_kernel_sizes"],
            "resblock_dilations": cfg["resblock_dilation_sizes"],
        }
        with open(os.path.join(args.out_dir, "generator.json"), "w") as f:
            json.dump(mapped, f, indent=2)
    print(f"wrote {len(arrays)} tensors to {args.out_dir}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
