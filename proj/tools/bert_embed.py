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

"""Contextual token embeddings for the `precomputed:` metrics provider.

Input: the output of `sticktionary tokens`, one space-joined token sequence
per annotator text. Each token is encoded as a word (its word pieces averaged) by a
transformer encoder; `pooled` is the mean of the token rows.

Usage:
  sticktionary tokens --dataset en.jsonl > en.tokens
  python3 tools/bert_embed.py --model bert-base-uncased en.tokens > en.emb.jsonl
  sticktionary metrics --dataset en.jsonl --provider precomputed:en.emb.jsonl
"""

import argparse
import json
import sys

import torch
from transformers import AutoModel, AutoTokenizer


def embed(lines, tokenizer, model, batch_size):
    for start in range(0, len(lines), batch_size):
        batch = [line.split(" ") for line in lines[start:start + batch_size]]
        enc = tokenizer(batch, is_split_into_words=True, padding=True,
                        truncation=True, return_tensors="pt")
        with torch.no_grad():
            hidden = model(**enc).last_hidden_state
        for i, words in enumerate(batch):
            word_ids = enc.word_ids(i)
            rows = []
            for w in range(len(words)):
                pieces = [j for j, wid in enumerate(word_ids) if wid == w]
                if not pieces:
                    break
                rows.append(hidden[i, pieces].mean(dim=0))
            if len(rows) != len(words):
                print(f"truncated, skipped: {' '.join(words)}", file=sys.stderr)
                continue
            tokens = torch.stack(rows)
            yield {
                "text": " ".join(words),
                "tokens": tokens.tolist(),
                "pooled": tokens.mean(dim=0).tolist(),
            }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("tokens", help="file from `sticktionary tokens`")
    parser.add_argument("--model", default="bert-base-uncased")
    parser.add_argument("--batch-size", type=int, default=32)
    args = parser.parse_args()

    with open(args.tokens, encoding="utf-8") as f:
        lines = [line.rstrip("\n") for line in f if line.strip()]
    tokenizer = AutoTokenizer.from_pretrained(args.model)
    model = AutoModel.from_pretrained(args.model).eval()
    for entry in embed(lines, tokenizer, model, args.batch_size):
        sys.stdout.write(json.dumps(entry, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
