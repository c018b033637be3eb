"""Query-dependent topic taxonomy generation.

Thin wrapper around the native module: extract topical ngrams from a
corpus, build a weighted co-occurrence graph, and partition query-specific
subgraphs into labeled taxonomies.
"""

try:
    from ._topictax import *  # noqa: F401,F403
    from ._topictax import __doc__ as _native_doc  # noqa: F401
except ImportError:  # development builds keep the module next to the package
    from _topictax import *  # noqa: F401,F403

__all__ = [
    "Document",
    "TopicSet",
    "CooccurrenceCounts",
    "TopicGraph",
    "Subgraph",
    "Taxonomy",
    "normalize",
    "load_corpus",
    "extract_topics",
    "build_graph",
    "jaccard",
    "select_subgraph",
    "build_taxonomy",
    "exact_match",
    "partial_match",
    "build_gold_standard",
    "hac_baseline",
]
