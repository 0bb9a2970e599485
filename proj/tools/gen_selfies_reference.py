#!/usr/bin/env python3
#
# Project smiself - Copyright 2026 The smiself Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Build tests/data/selfies_v2_reference.tsv from the `selfies` package.

Molecules come from decoding random strings with the reference decoder.
Each row holds:
  smiles            reference decoder output
  our_selfies       `smiself selfies encode` of smiles
  v2_of_ours        our_selfies with index digits rewritten for the
                    reference alphabet
  v2_decoded        reference decode of v2_of_ours
  v2_selfies        reference encode of smiles
  ours_of_v2        v2_selfies with digits rewritten for our alphabet

usage: gen_selfies_reference.py path/to/smiself [out.tsv] [--count N]
"""

import argparse
import random
import re
import subprocess
import sys

import selfies as sf

ELEMENTS = ["C", "N", "O", "F", "S", "P", "Cl", "Br", "I", "B"]

# Our base-16 digit symbols, value order.
OUR_DIGITS = ["[epsilon]", "[F]", "[=O]", "[#N]", "[O]", "[N]", "[=N]", "[C]",
              "[=C]", "[#C]", "[Branch1]", "[Branch2]", "[Branch3]", "[Ring1]",
              "[Ring2]", "[Ring3]"]

LEXEME = re.compile(r"\[[^\]]*\]|\.")
SIZED = re.compile(r"^\[[=#]?(Branch|Ring)([123])\]$")


def v2_digit_symbols():
    from selfies.grammar_rules import INDEX_ALPHABET
    return list(INDEX_ALPHABET[:16])


def rewrite_digits(selfies, source, target):
    out = []
    tokens = LEXEME.findall(selfies)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        out.append(tok)
        i += 1
        m = SIZED.match(tok)
        if not m:
            continue
        for _ in range(int(m.group(2))):
            if i >= len(tokens):
                break
            value = source.index(tokens[i]) if tokens[i] in source else 0
            out.append(target[value])
            i += 1
    return "".join(out)


def neutral_symbols():
    keep = []
    for sym in sorted(sf.get_semantic_robust_alphabet()):
        body = sym.strip("[]").lstrip("=#")
        if body in ELEMENTS or body.startswith(("Branch", "Ring")):
            if not any(c in body for c in "+-@/\\"):
                keep.append(sym)
    return keep


def weight(sym):
    body = sym.strip("[]").lstrip("=#")
    if body.startswith(("Branch", "Ring")):
        return 3
    return 1 if body in ("F", "Cl", "Br", "I") else 4


def sample_molecules(count, rng):
    symbols = neutral_symbols()
    weights = [weight(s) for s in symbols]
    seen = set()
    out = []
    while len(out) < count:
        length = rng.randint(4, 32)
        s = "".join(rng.choices(symbols, weights, k=length))
        smiles = sf.decoder(s)
        if not smiles or "." in smiles or smiles in seen:
            continue
        seen.add(smiles)
        out.append(smiles)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("cli")
    ap.add_argument("out", nargs="?", default="tests/data/selfies_v2_reference.tsv")
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    v2_digits = v2_digit_symbols()
    molecules = sample_molecules(args.count, rng)

    encoded = subprocess.run([args.cli, "selfies", "encode"],
                             input="\n".join(molecules) + "\n",
                             capture_output=True, text=True)
    ours = encoded.stdout.split("\n")[:len(molecules)]
    if len(ours) != len(molecules) or any(not s for s in ours):
        sys.exit("encode failed: " + encoded.stderr)

    with open(args.out, "w") as f:
        f.write("# smiles\tour_selfies\tv2_of_ours\tv2_decoded\tv2_selfies"
                "\tours_of_v2\n")
        f.write("# selfies %s, seed %d\n" % (sf.__version__, args.seed))
        for smiles, our in zip(molecules, ours):
            v2_of_ours = rewrite_digits(our, OUR_DIGITS, v2_digits)
            v2_decoded = sf.decoder(v2_of_ours)
            v2_selfies = sf.encoder(smiles)
            ours_of_v2 = rewrite_digits(v2_selfies, v2_digits, OUR_DIGITS)
            f.write("\t".join([smiles, our, v2_of_ours, v2_decoded,
                               v2_selfies, ours_of_v2]) + "\n")


if __name__ == "__main__":
    main()
