"""Character n-gram language identification over bundled profiles.

Rank-order profiles of character 1..3-grams are built once per process from
the sample texts shipped in data/langsamples. Classification compares the
document's profile to each language profile with the classic out-of-place
distance, then turns the distances into a posterior-like confidence with a
fixed-temperature softmax. Short or ambiguous text yields ("und", low).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from importlib.resources import files

PROFILE_SIZE = 400
_MAX_CHARS = 4000
_SOFTMAX_TEMPERATURE = 0.02
DEFAULT_MIN_CONFIDENCE = 0.5
MIN_TEXT_CHARS = 20

_WORD_SPLIT_RE = re.compile(r"[\W\d_]+", re.UNICODE)


def _normalize(text: str) -> str:
    return " ".join(_WORD_SPLIT_RE.split(text.lower())).strip()


def _ngram_counts(text: str) -> Counter:
    padded = f" {_normalize(text[:_MAX_CHARS])} "
    counts: Counter[str] = Counter()
    for n in (1, 2, 3):
        for i in range(len(padded) - n + 1):
            gram = padded[i:i + n]
            if gram.strip() or n == 1:
                counts[gram] += 1
    return counts


def _profile(text: str) -> dict[str, int]:
    counts = _ngram_counts(text)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:PROFILE_SIZE]
    return {gram: rank for rank, (gram, _) in enumerate(ranked)}


def _load_profiles() -> dict[str, dict[str, int]]:
    profiles: dict[str, dict[str, int]] = {}
    sample_dir = files("freshcrawl").joinpath("data/langsamples")
    for entry in sample_dir.iterdir():
        name = entry.name
        if not name.endswith(".txt"):
            continue
        profiles[name[:-4]] = _profile(entry.read_text("utf-8"))
    return profiles


_PROFILES: dict[str, dict[str, int]] | None = None


def profiles() -> dict[str, dict[str, int]]:
    global _PROFILES
    if _PROFILES is None:
        _PROFILES = _load_profiles()
    return _PROFILES


def _out_of_place(doc_profile: dict[str, int], lang_profile: dict[str, int]) -> float:
    if not doc_profile:
        return 1.0
    total = 0
    for gram, rank in doc_profile.items():
        other = lang_profile.get(gram)
        total += abs(rank - other) if other is not None else PROFILE_SIZE
    return total / (len(doc_profile) * PROFILE_SIZE)


def detect_language(text: str, min_confidence: float = DEFAULT_MIN_CONFIDENCE) -> tuple[str, float]:
    """Best language code and confidence in [0, 1]; ("und", ...) when unsure."""
    if len(text.strip()) < MIN_TEXT_CHARS:
        return ("und", 0.0)
    doc = _profile(text)
    distances = {code: _out_of_place(doc, prof) for code, prof in profiles().items()}
    if not distances:
        return ("und", 0.0)
    weights = {code: math.exp(-d / _SOFTMAX_TEMPERATURE) for code, d in distances.items()}
    total = sum(weights.values())
    if total <= 0.0:
        return ("und", 0.0)
    best_code = min(distances, key=lambda c: (distances[c], c))
    confidence = weights[best_code] / total
    if confidence < min_confidence:
        return ("und", confidence)
    return (best_code, confidence)
