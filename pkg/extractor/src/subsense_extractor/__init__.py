"""Masked-LM substitute extraction for the subsense pipeline."""

from .backends import BackendError, HashContextBackend, TransformersBackend, make_backend
from .extract import ExtractorConfig, build_extraction_vocab, eligible, extract, normalize_candidates
from .lemmatizer import lemmatize
from .validate import validate_output

__version__ = "0.1.0"
