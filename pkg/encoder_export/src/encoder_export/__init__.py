"""encoder-export: pretrained sparse-encoder outputs as interchange files."""

from .adapter import ExportConfig, encode, load_checkpoint, vocabulary_tokens

__version__ = "0.1.0"
