"""Model and tokenizer loading.

Two identifier families:

* ``toy:<d_model>`` / ``toy-causal:<d_model>`` build small randomly
  initialized byte-level models locally (T5-architecture encoder-decoder,
  GPT-2-architecture causal LM). Weights are seeded, so a (identifier,
  seed) pair is fully reproducible offline; these are what the tests use.
* anything else is treated as a Hugging Face identifier or local path and
  loaded through ``from_pretrained`` (requires the checkpoint to be
  available locally or downloadable).

Both families share the byte-level tokenizer (256 bytes + specials +
sentinel tokens, no vocabulary files), so any UTF-8 text tokenizes.
"""

from __future__ import annotations

import torch
from transformers import ByT5Tokenizer, GPT2Config, GPT2LMHeadModel, T5Config, T5ForConditionalGeneration

from .errors import ModelLoadError

TOY_PREFIX = "toy:"
TOY_CAUSAL_PREFIX = "toy-causal:"
_BYTE_VOCAB = 384  # 3 specials + 256 bytes + 125 sentinels


def byte_tokenizer() -> ByT5Tokenizer:
    return ByT5Tokenizer()


def _toy_dim(identifier: str, prefix: str) -> int:
    spec = identifier[len(prefix) :]
    try:
        d_model = int(spec)
    except ValueError:
        raise ModelLoadError(f"toy identifier {identifier!r} needs an integer width")
    if d_model < 8 or d_model % 4:
        raise ModelLoadError(f"toy width must be a multiple of 4 and >= 8, got {d_model}")
    return d_model


def load_seq2seq(identifier: str, seed: int = 0):
    """(tokenizer, T5-style encoder-decoder) for embedding and fine-tuning."""
    if identifier.startswith(TOY_PREFIX):
        d_model = _toy_dim(identifier, TOY_PREFIX)
        config = T5Config(
            vocab_size=_BYTE_VOCAB,
            d_model=d_model,
            d_ff=4 * d_model,
            d_kv=d_model // 4,
            num_heads=4,
            num_layers=2,
            num_decoder_layers=2,
            decoder_start_token_id=0,
            pad_token_id=0,
            eos_token_id=1,
        )
        torch.manual_seed(seed)
        model = T5ForConditionalGeneration(config)
    else:
        try:
            model = T5ForConditionalGeneration.from_pretrained(identifier)
        except Exception as exc:
            raise ModelLoadError(f"could not load encoder-decoder {identifier!r}: {exc}")
    model.eval()
    return byte_tokenizer() if identifier.startswith(TOY_PREFIX) else _tokenizer_for(identifier), model


def load_causal(identifier: str, seed: int = 0):
    """(tokenizer, causal LM) for teacher-forced token scoring."""
    if identifier.startswith(TOY_CAUSAL_PREFIX):
        d_model = _toy_dim(identifier, TOY_CAUSAL_PREFIX)
        config = GPT2Config(
            vocab_size=_BYTE_VOCAB,
            n_embd=d_model,
            n_layer=2,
            n_head=4,
            n_positions=2048,
            bos_token_id=1,
            eos_token_id=1,
        )
        torch.manual_seed(seed)
        model = GPT2LMHeadModel(config)
        tokenizer = byte_tokenizer()
    else:
        try:
            from transformers import AutoModelForCausalLM

            model = AutoModelForCausalLM.from_pretrained(identifier)
            tokenizer = _tokenizer_for(identifier)
        except ModelLoadError:
            raise
        except Exception as exc:
            raise ModelLoadError(f"could not load causal model {identifier!r}: {exc}")
    model.eval()
    return tokenizer, model


def _tokenizer_for(identifier: str):
    try:
        from transformers import AutoTokenizer

        return AutoTokenizer.from_pretrained(identifier)
    except Exception as exc:
        raise ModelLoadError(f"could not load tokenizer for {identifier!r}: {exc}")
