"""Substitute-based word sense induction at corpus scale.

Pipeline: substitute records -> inverted index -> per-lemma community
detection over substitute co-occurrence graphs -> Jaccard sense tagging
-> sense-suffixed static embeddings -> evaluation and sense-aware search.
"""

from .embeddings import EmbeddingConfig, EmbeddingMatrix, OovError, TrainError, train, train_file
from .graph import SubstituteGraph, UndefinedModularity, build_graph, modularity
from .index import (
    CorruptIndex,
    IndexBuildError,
    InvertedIndex,
    Posting,
    build_index,
    load_index,
    lookup,
    merge_indexes,
    sample_occurrences,
    save_index,
)
from .induction import (
    InductionConfig,
    SenseCluster,
    SenseInventory,
    build_inventory,
    extract_representatives,
    induce_senses,
    load_inventory,
    save_inventory,
)
from .louvain import Partition, louvain
from .records import (
    CorruptRecord,
    InvalidRecord,
    SentenceStore,
    SubstituteRecord,
    UnknownFormat,
    default_stopwords,
    normalize_substitutes,
    read_records,
    write_records,
)
from .synth import InvalidSpec, SynthCorpus, SynthSpec, generate_synth_corpus
from .tagging import TagError, TaggedCorpus, assign_sense, jaccard, parse_token, tag_corpus, tagged_token
from .vocab import DuplicateLemma, MalformedVocab, VocabTable, load_vocab

__version__ = "0.1.0"
