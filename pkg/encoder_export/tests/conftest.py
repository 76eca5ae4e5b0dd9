from __future__ import annotations

import pytest
import torch
from transformers import BertConfig, BertForMaskedLM, BertTokenizer

WORDS = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "of", "in", "and", "is", "був",
    "liver", "symptom", "##s", "pain", "doctor", "hospital", "disease",
    "heart", "blood", "test", "cause", "treatment", "patient", "chronic",
    "acute", "fever", "cough", "injury", "bone", "skin", "cell", "organ",
    "stress", "panic", "signs", "distress", "##ed", "##ing",
]


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory) -> str:
    """A miniature BERT masked-LM checkpoint built offline with fixed weights."""
    root = tmp_path_factory.mktemp("tiny-encoder")
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(WORDS) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file))

    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(WORDS),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    model = BertForMaskedLM(config)
    model.eval()
    target = root / "checkpoint"
    model.save_pretrained(target)
    tokenizer.save_pretrained(target)
    return str(target)


@pytest.fixture(scope="session")
def fifty_texts() -> list[tuple[str, str]]:
    subjects = ["liver", "heart", "blood", "bone", "skin"]
    conditions = ["pain", "distress", "fever", "injury", "stress"]
    texts = []
    i = 0
    for subject in subjects:
        for condition in conditions:
            texts.append((f"t{i:03d}", f"symptoms of {subject} {condition}"))
            i += 1
            texts.append((f"t{i:03d}", f"the doctor treats {subject} {condition}"))
            i += 1
    assert len(texts) == 50
    return texts
