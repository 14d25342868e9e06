#!/usr/bin/env python3
# Copyright 2026 The thunder-tok Authors.
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
"""Freezes reference pre-tokenizations produced by the `regex` engine.

Writes one JSON object per line: {"text", "gpt2", "thunder"}. The C++ tests
compare the hand-written scanners against these splits.
"""

import argparse
import json
import random

import regex

CONTRACTIONS = r"'s|'t|'re|'ve|'m|'ll|'d"
FALLBACK = (r" ?\p{N}+| ?[^\p{White_Space}\p{L}\p{N}]+"
            r"|\p{White_Space}+(?!\P{White_Space})|\p{White_Space}+")
GPT2 = regex.compile(CONTRACTIONS + r"| ?\p{L}+|" + FALLBACK)
THUNDER = regex.compile(r"(?: ?\p{L}+)+[.?!]?|" + CONTRACTIONS + "|" + FALLBACK)

PIECES = [
    "안녕", "하세요", "영어", "사전", "그", "말이", "달린다", "점심", "시간",
    "Just", "drank", "cups", "of", "coffee", "don", "We", "ㄱ", "ㅏ", "漢字",
    "é", "é", "ß", "Ωμέγα", "привет", "١٢٣", "42", "3.14", "²", "Ⅻ",
    "'s", "'re", "'ll", "'d", "'x", "'", "\"", "(", ")", "「", "」", "·",
    "…", ",", ";", "-", "😀", "👍🏽", "#", "$5", "%",
    ".", "?", "!", "?!", "..", ".?",
    " ", " ", "  ", "   ", "\t", "\n", "\r\n", " ", "　", " \t ",
]


def Case(rng):
    n = rng.randint(1, 12)
    return "".join(rng.choice(PIECES) for _ in range(n))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    ap.add_argument("--count", type=int, default=600)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    texts = [
        "Just drank 2 cups of coffee!",
        "그 말이 달린다.",
        "정말?!",
        "안녕하세요!",
        "a  b",
        "",
        "I'll say it's fine",
        "영어 사전",
    ]
    texts += [Case(rng) for _ in range(args.count)]
    with open(args.out, "w", encoding="utf-8") as f:
        for t in texts:
            row = {
                "text": t,
                "gpt2": GPT2.findall(t),
                "thunder": THUNDER.findall(t),
            }
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
