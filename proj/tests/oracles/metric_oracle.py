#!/usr/bin/env python3
# Copyright 2026 The Sticktionary Authors.
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

"""Reference BLEU / ROUGE values for the metric table test.

Computed with exact rational arithmetic where possible and written to
metric_cases.inc. Re-run after editing CASES:

    python3 tests/oracles/metric_oracle.py > tests/oracles/metric_cases.inc
"""


LICENSE_HEADER = """// Copyright 2026 The Sticktionary Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
"""

import math
from collections import Counter
from fractions import Fraction

EPS = 1e-9

# (candidate, [references...]); tokens are space separated.
CASES = [
    ("the cat", ["the cat"]),
    ("a b", ["c d"]),
    ("a b c", ["a b d"]),
    ("a b c", ["a c"]),
    ("happy", ["happy"]),
    ("happy", ["sad"]),
    ("so so happy", ["so happy"]),
    ("lol", ["lol lol lol"]),
    ("good night sweet dreams", ["good night"]),
    ("good night", ["good night sweet dreams"]),
    ("thank you so much", ["thank you very much"]),
    ("cat cat cat cat", ["cat"]),
    ("a b c d e", ["e d c b a"]),
    ("a b a b", ["b a b a"]),
    ("angry cat meme", ["angry dog meme", "grumpy cat"]),
    ("i am so tired", ["so tired", "i am exhausted"]),
    ("x y z", ["x y z w", "x y"]),
    ("big hug", ["hug", "big big hug"]),
    ("crying laughing", ["laughing crying"]),
    ("the quick brown fox", ["the quick brown fox jumps"]),
    ("ok", ["okay", "ok ok"]),
    ("a b c d", ["a b c d"]),
    ("a x b y c", ["a b c"]),
    ("no way", ["no no way"]),
    ("see you later alligator", ["later alligator", "see ya"]),
]


def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(cand, refs, max_n=4):
    if not cand:
        return 0.0
    order = min(max_n, len(cand))
    logs = []
    for n in range(1, order + 1):
        counts = ngrams(cand, n)
        clip = Counter()
        for r in refs:
            clip |= ngrams(r, n)  # element-wise max
        matched = sum(min(c, clip[g]) for g, c in counts.items())
        p = Fraction(matched, sum(counts.values()))
        logs.append(math.log(p) if matched else math.log(EPS))
    c = len(cand)
    r = min((len(x) for x in refs), key=lambda L: (abs(L - c), L))
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * math.exp(sum(logs) / order)


def f1(overlap, nc, nr):
    if overlap == 0 or nc == 0 or nr == 0:
        return Fraction(0)
    p, r = Fraction(overlap, nc), Fraction(overlap, nr)
    return 2 * p * r / (p + r)


def rouge_n(cand, ref, n):
    a, b = ngrams(cand, n), ngrams(ref, n)
    return f1(sum((a & b).values()), sum(a.values()), sum(b.values()))


def lcs(a, b):
    # Memoized recursion, independent of the table-based implementation.
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def rouge_l(cand, ref):
    return f1(lcs(cand, ref), len(cand), len(ref))


def cxx_string_list(items):
    return "{" + ", ".join('"%s"' % s for s in items) + "}"


def main():
    print(LICENSE_HEADER)
    print("// Generated by metric_oracle.py. Do not edit.")
    print("// {candidate, {references}, bleu, rouge1, rouge2, rougeL}"
          " against the first reference.")
    for cand, refs in CASES:
        c = cand.split()
        rs = [r.split() for r in refs]
        vals = [bleu(c, rs), float(rouge_n(c, rs[0], 1)),
                float(rouge_n(c, rs[0], 2)), float(rouge_l(c, rs[0]))]
        print("{%s, %s, %s}," % ('"%s"' % cand, cxx_string_list(refs),
                                 ", ".join("%.17g" % v for v in vals)))


if __name__ == "__main__":
    main()
