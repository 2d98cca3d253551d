#!/usr/bin/env python3
# Copyright 2026 The AFN Authors.
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
"""Regenerates the committed test fixtures under tests/fixtures/.

  tokenizer_golden.json  reference tokenizer output (tokenizers' BertWordPiece)
  tiny_bert/             random 2-layer BertModel + its hidden states
  golden/<id>/           bert-base-uncased hidden states (only with --model-dir)

Matrices are raw little-endian float32 files with a JSON sidecar describing
the shape; norms are CSV.
"""

import argparse
import csv
import hashlib
import json
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "tests" / "fixtures"

CASE_SENTENCES = {
    "prime_minister_canada": "Who is the prime minister of Canada?",
    "president_france": "Who is the president of France?",
    "president_canada": "Who is the president of Canada?",
    "shift_a_park": "Enjoying a beautiful day at the park!",
    "shift_b_beach": "Enjoying a beautiful walk at the beach!",
    "prompt_summarize": "Summarize The weather is nice today.",
    "prompt_translate": "Translate to French The weather is nice today.",
    "prompt_summarize_sentence": "Summarize the sentence The weather is nice today.",
    "prompt_classify": "Classify sentiment The weather is nice today.",
}

EDGE_CASES = [
    "",
    "unfolds",
    "connoisseur",
    "nonchalant",
    "Café-au-lait",
    "naïve résumé façade",
    "  multiple   spaces\tand\nnewlines  ",
    "中文字符 mixed with English",
    "hello\u0000world​again�",
    "a" * 100,
    "a" * 101,
    "I love 🍕 and ☕!",
    "don't stop-believing U.S.A. $3.50",
    "ﬁnancial Straße İstanbul ÀÉÎÕÜ Σίσυφος",
    "xyzzyqqq blorptastic",
    "ΟΔΟΣ ΣΟΦΟΣ.",
    "a\u0085b\u2028c\u00a0d\u3000e x\u00adz",
    "\u01c4emal \ufb03 \u0130i",
    "The weather is nice today.",
]


def vocab_sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def gen_tokenizer(vocab):
    import tokenizers
    from tokenizers import BertWordPieceTokenizer

    tok = BertWordPieceTokenizer(str(vocab), lowercase=True)
    corpus = [
        line.strip()
        for line in (FIXTURES / "sample_corpus.txt").read_text("utf-8").splitlines()
        if line.strip()
    ]
    texts = list(dict.fromkeys(list(CASE_SENTENCES.values()) + EDGE_CASES + corpus))
    cases = []
    for text in texts:
        enc = tok.encode(text)
        normalized = tok.normalizer.normalize_str(text)
        words = [w for w, _ in tok.pre_tokenizer.pre_tokenize_str(normalized)]
        cases.append({"text": text, "basic_tokens": words, "tokens": enc.tokens, "ids": enc.ids})
    out = {
        "generator": {"tokenizers": tokenizers.__version__, "vocab_sha256": vocab_sha256(vocab)},
        "cases": cases,
    }
    (FIXTURES / "tokenizer_golden.json").write_text(
        json.dumps(out, ensure_ascii=False, indent=1, sort_keys=True) + "\n", "utf-8")


def write_matrix(stem, array, extra):
    array = np.ascontiguousarray(array, dtype="<f4")
    stem.with_suffix(".f32").write_bytes(array.tobytes())
    meta = dict(extra, dtype="F32", shape=list(array.shape))
    stem.with_suffix(".json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


def write_norms(path, tokens, columns):
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["index", "token"] + [f"layer_{layer}" for layer in columns])
        for i, token in enumerate(tokens):
            writer.writerow([i, token] + [f"{float(np.linalg.norm(columns[layer][i])):.6f}"
                                          for layer in columns])


def gen_tiny_model():
    import safetensors.torch
    import torch
    import transformers
    from transformers import BertConfig, BertModel

    torch.manual_seed(20260101)
    config = BertConfig(vocab_size=64, hidden_size=8, num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=16, max_position_embeddings=32, type_vocab_size=2,
                        hidden_act="gelu", layer_norm_eps=1e-12, hidden_dropout_prob=0.0,
                        attention_probs_dropout_prob=0.0, add_pooling_layer=False)
    model = BertModel(config, add_pooling_layer=False).eval()
    with torch.no_grad():
        for name, param in model.named_parameters():
            if "LayerNorm.weight" in name:
                param.copy_(1.0 + 0.2 * torch.randn_like(param))
            else:
                param.copy_(0.5 * torch.randn_like(param))
    out_dir = FIXTURES / "tiny_bert"
    (out_dir / "hidden").mkdir(parents=True, exist_ok=True)
    state = {k: v.contiguous() for k, v in model.state_dict().items() if "position_ids" not in k}
    safetensors.torch.save_file(state, str(out_dir / "model.safetensors"), metadata={"format": "pt"})
    cfg = {k: getattr(config, k) for k in (
        "vocab_size", "hidden_size", "num_hidden_layers", "num_attention_heads", "intermediate_size",
        "max_position_embeddings", "type_vocab_size", "layer_norm_eps", "hidden_act")}
    (out_dir / "config.json").write_text(json.dumps(cfg, indent=1, sort_keys=True) + "\n")

    cases = {
        "four_tokens": ([2, 17, 33, 3], [1, 1, 1, 1]),
        "nine_tokens": ([2, 5, 9, 41, 63, 12, 12, 7, 3], [1] * 9),
        "padded": ([2, 17, 33, 3, 0, 0], [1, 1, 1, 1, 0, 0]),
    }
    for case, (ids, mask) in cases.items():
        with torch.no_grad():
            res = model(input_ids=torch.tensor([ids]), attention_mask=torch.tensor([mask]),
                        token_type_ids=torch.zeros(1, len(ids), dtype=torch.long),
                        output_hidden_states=True)
        stacked = np.stack([h[0].numpy() for h in res.hidden_states])
        write_matrix(out_dir / "hidden" / case, stacked,
                     {"ids": ids, "attention_mask": mask, "layers": list(range(stacked.shape[0])),
                      "generator": {"transformers": transformers.__version__, "torch": torch.__version__}})


def gen_golden(model_dir, vocab):
    import torch
    import transformers
    from tokenizers import BertWordPieceTokenizer
    from transformers import BertModel

    tok = BertWordPieceTokenizer(str(vocab), lowercase=True)
    model = BertModel.from_pretrained(model_dir, add_pooling_layer=False).eval()
    for fixture_id, text in CASE_SENTENCES.items():
        enc = tok.encode(text)
        with torch.no_grad():
            res = model(input_ids=torch.tensor([enc.ids]), output_hidden_states=True)
        out_dir = FIXTURES / "golden" / fixture_id
        out_dir.mkdir(parents=True, exist_ok=True)
        columns = {}
        for layer in (0, 8, 9):
            mat = res.hidden_states[layer][0].numpy()
            columns[layer] = mat
            write_matrix(out_dir / f"layer{layer}", mat,
                         {"text": text, "tokens": enc.tokens, "ids": enc.ids, "layer": layer,
                          "generator": {"model": str(model_dir),
                                        "transformers": transformers.__version__}})
        write_norms(out_dir / "norms.csv", enc.tokens, columns)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vocab", type=pathlib.Path, default=FIXTURES / "vocab.txt")
    parser.add_argument("--model-dir", type=pathlib.Path,
                        help="bert-base-uncased checkpoint directory; enables golden/")
    parser.add_argument("--skip-tiny", action="store_true")
    args = parser.parse_args()
    gen_tokenizer(args.vocab)
    if not args.skip_tiny:
        gen_tiny_model()
    if args.model_dir:
        gen_golden(args.model_dir, args.vocab)


if __name__ == "__main__":
    main()
