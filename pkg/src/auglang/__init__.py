"""auglang: slot/intent data augmentation toolkit.

Converts BIO-labeled corpora to and from an augmented single-string format,
builds generator conditioning prompts, filters generated sentences back
into labeled data, scores generation quality with distribution-level
metrics, and numerically verifies the mixout/tangent-kernel regularization
theory behind the noisy-label training recipe.
"""

from .codec import (
    AugmentedSentence,
    LabeledExample,
    SlotSchema,
    decode,
    encode,
    normalize_label,
    validate_example,
)
from .conditioning import ConditioningInput, MaskPolicy, build_requests
from .genfilter import FilterReport, filter_generations

__version__ = "0.1.0"

__all__ = [
    "AugmentedSentence",
    "ConditioningInput",
    "FilterReport",
    "LabeledExample",
    "MaskPolicy",
    "SlotSchema",
    "build_requests",
    "decode",
    "encode",
    "filter_generations",
    "normalize_label",
    "validate_example",
    "__version__",
]
