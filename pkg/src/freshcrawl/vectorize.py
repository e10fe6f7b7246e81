"""Text tokenization and topic vectors for relevance scoring.

A crawl is described by a CrawlSpecification (seeds, keywords, standing
social queries, language). Reference and document vectors are sparse term
frequency vectors over stemmed unigrams and adjacent-pair bigrams; the
reference vector additionally multiplies each term weight by a keyword
overlap boost before cosine comparison.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib.resources import files
from typing import TYPE_CHECKING

from .stem import stemmer_for
from .urls import normalize_url

if TYPE_CHECKING:
    from .injectors import StreamQuery

# unicode letters and digits; underscore excluded on purpose
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_BOOST_FULL = 2.0
DEFAULT_BOOST_PARTIAL = 1.5
DEFAULT_BOOST_DEFAULT = 1.0

_stopword_cache: dict[str, frozenset[str]] = {}


def count_tokens(text: str) -> int:
    """Raw word-token count, before stopword removal or stemming."""
    return len(_TOKEN_RE.findall(text))


def stopwords_for(language: str) -> frozenset[str]:
    """Bundled stopword list for the language; empty set when none is shipped."""
    cached = _stopword_cache.get(language)
    if cached is not None:
        return cached
    words: set[str] = set()
    try:
        raw = files("freshcrawl").joinpath(f"data/stopwords/{language}.txt").read_text("utf-8")
    except (FileNotFoundError, OSError):
        raw = ""
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    result = frozenset(words)
    _stopword_cache[language] = result
    return result


def tokenize(text: str, language: str = "en", stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, split on non-word characters, drop stopwords, stem.

    Raises stem.UnsupportedLanguageError when no stemmer is registered for
    the language code.
    """
    stemmer = stemmer_for(language)
    if stopwords is None:
        stopwords = stopwords_for(language)
    out: list[str] = []
    for match in _TOKEN_RE.finditer(text.lower()):
        token = match.group()
        if token in stopwords:
            continue
        stemmed = stemmer.stem(token)
        if stemmed:
            out.append(stemmed)
    return out


class TermVector:
    """Sparse non-negative term weights.

    Bigram terms are two tokens joined by a single space; the term arity is
    therefore recoverable from the key itself. Zero weights are dropped so
    that equal vectors compare equal regardless of how they were built.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: dict[str, float] | None = None):
        clean: dict[str, float] = {}
        for term, w in (weights or {}).items():
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"invalid weight {w!r} for term {term!r}")
            if w != 0.0:
                clean[term] = w
        self.weights = clean

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))

    def get(self, term: str) -> float:
        return self.weights.get(term, 0.0)

    def items(self):
        return self.weights.items()

    def __len__(self) -> int:
        return len(self.weights)

    def __bool__(self) -> bool:
        return bool(self.weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TermVector):
            return NotImplemented
        return self.weights == other.weights

    def __repr__(self) -> str:
        return f"TermVector({self.weights!r})"


def term_arity(term: str) -> int:
    return term.count(" ") + 1


def cosine_similarity(a: TermVector, b: TermVector) -> float:
    """Cosine of two sparse vectors; 0.0 when either is empty."""
    if not a or not b:
        return 0.0
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    dot = 0.0
    for term, w in small.items():
        other = large.get(term)
        if other:
            dot += w * other
    if dot == 0.0:
        return 0.0
    value = dot / (a.norm() * b.norm())
    # guard against float drift outside the mathematical range
    return min(1.0, max(0.0, value))


def build_document_vector(text: str, language: str = "en",
                          stopwords: frozenset[str] | None = None) -> TermVector:
    """Term frequency vector of stemmed unigrams plus adjacent bigrams."""
    tokens = tokenize(text, language, stopwords)
    counts: Counter[str] = Counter(tokens)
    for first, second in zip(tokens, tokens[1:]):
        counts[f"{first} {second}"] += 1
    return TermVector(counts)


def term_boost(term: str, keyword_phrases: tuple[tuple[str, ...], ...],
               boost_full: float = DEFAULT_BOOST_FULL,
               boost_partial: float = DEFAULT_BOOST_PARTIAL,
               boost_default: float = DEFAULT_BOOST_DEFAULT) -> float:
    """Keyword overlap boost for one term.

    Full boost when every token of the term occurs in a single keyword
    phrase, partial boost when at least one token does, default otherwise.
    Phrases are compared token-wise on the already-normalized forms.
    """
    term_tokens = term.split(" ")
    best = boost_default
    for phrase in keyword_phrases:
        phrase_set = set(phrase)
        hits = sum(1 for t in term_tokens if t in phrase_set)
        if hits == len(term_tokens):
            return boost_full
        if hits and boost_partial > best:
            best = boost_partial
    return best


@dataclass(frozen=True)
class ReferenceVector:
    """Boosted topic vector a crawl compares documents against."""

    vector: TermVector
    keyword_phrases: tuple[tuple[str, ...], ...] = ()
    boost_full: float = DEFAULT_BOOST_FULL
    boost_partial: float = DEFAULT_BOOST_PARTIAL
    boost_default: float = DEFAULT_BOOST_DEFAULT

    def __post_init__(self):
        if not (self.boost_full >= self.boost_partial >= self.boost_default > 0):
            raise ValueError("boosts must satisfy full >= partial >= default > 0")


class EmptyReferenceError(ValueError):
    pass


def build_reference_vector(seed_texts: list[str], keywords: list[str],
                           language: str = "en",
                           boost_full: float = DEFAULT_BOOST_FULL,
                           boost_partial: float = DEFAULT_BOOST_PARTIAL,
                           boost_default: float = DEFAULT_BOOST_DEFAULT,
                           stopwords: frozenset[str] | None = None) -> ReferenceVector:
    """Sum seed document vectors, then boost terms by keyword overlap.

    Bigrams never span document boundaries because each seed is vectorized
    separately before summation. Raises EmptyReferenceError when no seed
    text yields any token.
    """
    total: Counter[str] = Counter()
    for text in seed_texts:
        total.update(build_document_vector(text, language, stopwords).weights)
    if not total:
        raise EmptyReferenceError("seed documents produced an empty reference vector")
    phrases = tuple(p for p in (tuple(tokenize(k, language, stopwords)) for k in keywords) if p)
    boosted = {
        term: freq * term_boost(term, phrases, boost_full, boost_partial, boost_default)
        for term, freq in total.items()
    }
    return ReferenceVector(TermVector(boosted), phrases, boost_full, boost_partial, boost_default)


@dataclass
class CrawlSpecification:
    """What to crawl: seeds, topic keywords, standing social queries, language."""

    seed_urls: list[str]
    keywords: list[str] = field(default_factory=list)
    social_queries: list["StreamQuery"] = field(default_factory=list)
    language: str = "en"

    def __post_init__(self):
        self.seed_urls = [normalize_url(u) for u in self.seed_urls]

    @classmethod
    def from_json(cls, data: dict | str) -> "CrawlSpecification":
        from .injectors import StreamQuery
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValueError("crawl specification must be a JSON object")
        queries_raw = data.get("queries", [])
        if isinstance(queries_raw, dict):
            queries_raw = [queries_raw]
        queries = [StreamQuery.from_json(q) for q in queries_raw]
        return cls(
            seed_urls=list(data.get("seed_urls", [])),
            keywords=list(data.get("keywords", [])),
            social_queries=queries,
            language=data.get("language", "en"),
        )

    def to_json(self) -> dict:
        return {
            "seed_urls": list(self.seed_urls),
            "keywords": list(self.keywords),
            "queries": [q.to_json() for q in self.social_queries],
            "language": self.language,
        }
