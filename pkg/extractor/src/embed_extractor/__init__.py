"""embed-extractor: EMB1 sentence embeddings and token log-probabilities."""

from .emb1 import read_emb1, write_emb1
from .embed import ExtractorConfig, embed_file, embed_lines, finetune, finetune_then_embed
from .errors import ExtractorError, InputError, ModelLoadError
from .models import byte_tokenizer, load_causal, load_seq2seq
from .score import score_lines, score_logprobs

__version__ = "0.1.0"

__all__ = [
    "ExtractorConfig",
    "ExtractorError",
    "InputError",
    "ModelLoadError",
    "byte_tokenizer",
    "embed_file",
    "embed_lines",
    "finetune",
    "finetune_then_embed",
    "load_causal",
    "load_seq2seq",
    "read_emb1",
    "score_lines",
    "score_logprobs",
    "write_emb1",
    "__version__",
]
