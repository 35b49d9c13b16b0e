"""keytrie: adaptive next-character prediction for text entry.

Weighted tries partitioned by time of day, LRU forgetting, a dynamic
prediction-set bound driven by confidence/diffidence, a deterministic
evaluation simulator, and a local HTTP prediction service.
"""

from .corpus import CorpusFormatError, CorpusStats, Message, load_corpus, load_wordlist
from .engine import EngineConfig, PredictionEngine, StreamOrderError, partition_of
from .oracle import FlatWordOracle
from .simulate import (SimulationPlan, SimulationReport, Variant, precision_score,
                       replay_message, run_simulation)
from .snapshot import load_snapshot, save_snapshot
from .trie import Cursor, PredictionSet, TrieNode, WeightedTrie, WordEndMarker

__version__ = "0.1.0"

__all__ = [
    "CorpusFormatError", "CorpusStats", "Cursor", "EngineConfig", "FlatWordOracle",
    "Message", "PredictionEngine", "PredictionSet", "SimulationPlan",
    "SimulationReport", "StreamOrderError", "TrieNode", "Variant", "WeightedTrie",
    "WordEndMarker", "load_corpus", "load_snapshot", "load_wordlist",
    "partition_of", "precision_score", "replay_message", "run_simulation",
    "save_snapshot",
]
