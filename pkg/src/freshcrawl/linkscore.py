"""Outlink relevance from anchor, paragraph and whole-document context.

Each outlink of a fetched page is scored as a weighted sum of three cosine
similarities against the crawl's reference vector: the link's anchor text,
the text of its enclosing paragraph-like block, and the full document. The
paragraph context only counts when the block carries enough raw tokens to
say something; below that the component is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urljoin

from .htmltree import Element
from .urls import is_http_url, normalize_url
from .vectorize import (ReferenceVector, TermVector, build_document_vector,
                        cosine_similarity, count_tokens)

DEFAULT_MIN_PARAGRAPH_TOKENS = 50

_BLOCK_TAGS = {"p", "div", "li", "td", "th", "article", "section"}


@dataclass(frozen=True)
class LinkScoreWeights:
    """Mixing weights for the three link contexts; they must sum to 1."""

    anchor_weight: float = 1.0 / 3.0
    paragraph_weight: float = 1.0 / 3.0
    document_weight: float = 1.0 / 3.0
    min_paragraph_tokens: int = DEFAULT_MIN_PARAGRAPH_TOKENS

    def __post_init__(self):
        for w in (self.anchor_weight, self.paragraph_weight, self.document_weight):
            if w < 0:
                raise ValueError("context weights must be non-negative")
        total = self.anchor_weight + self.paragraph_weight + self.document_weight
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"context weights sum to {total!r}, expected 1.0")
        if self.min_paragraph_tokens < 1:
            raise ValueError("min_paragraph_tokens must be at least 1")


@dataclass
class LinkContext:
    """Texts around all anchors of one page pointing at one target URL."""

    target_url: str
    anchor_text: str
    paragraph_text: str


@dataclass
class OutlinkScore:
    target_url: str
    anchor_score: float
    paragraph_score: float
    document_score: float
    combined: float


def _enclosing_paragraph(anchor: Element, min_tokens: int) -> Element | None:
    for ancestor in anchor.ancestors():
        if ancestor.tag in _BLOCK_TAGS and count_tokens(ancestor.text()) >= min_tokens:
            return ancestor
    return None


def extract_link_contexts(root: Element, base_url: str,
                          min_paragraph_tokens: int = DEFAULT_MIN_PARAGRAPH_TOKENS) -> list[LinkContext]:
    """Group anchors by normalized target and collect their context texts.

    Anchors to the same target share one context: anchor texts and (distinct)
    qualifying paragraph blocks are concatenated in document order. Targets
    appear in first-appearance order. Non-http(s) and malformed hrefs are
    dropped.
    """
    order: list[str] = []
    anchors: dict[str, list[str]] = {}
    blocks: dict[str, list[Element]] = {}
    for el in root.iter():
        if el.tag != "a":
            continue
        href = el.get("href")
        if not href:
            continue
        absolute = urljoin(base_url, href.strip())
        if not is_http_url(absolute):
            continue
        try:
            target = normalize_url(absolute)
        except ValueError:
            continue
        if target not in anchors:
            order.append(target)
            anchors[target] = []
            blocks[target] = []
        text = el.text()
        if text:
            anchors[target].append(text)
        block = _enclosing_paragraph(el, min_paragraph_tokens)
        if block is not None and not any(block is b for b in blocks[target]):
            blocks[target].append(block)
    return [
        LinkContext(
            target_url=target,
            anchor_text=" ".join(anchors[target]),
            paragraph_text=" ".join(b.text() for b in blocks[target]),
        )
        for target in order
    ]


def combine_link_score(anchor_score: float, paragraph_score: float,
                       document_score: float, weights: LinkScoreWeights) -> float:
    return (weights.anchor_weight * anchor_score
            + weights.paragraph_weight * paragraph_score
            + weights.document_weight * document_score)


def score_outlinks(contexts: list[LinkContext], document_vector: TermVector,
                   reference: ReferenceVector, weights: LinkScoreWeights,
                   language: str = "en") -> list[OutlinkScore]:
    """Score every link context against the reference vector.

    The document component is computed once for the page and shared by all
    of its outlinks. Empty anchor or paragraph text scores zero for that
    component rather than being skipped.
    """
    document_score = cosine_similarity(document_vector, reference.vector)
    scores: list[OutlinkScore] = []
    for ctx in contexts:
        anchor_score = cosine_similarity(
            build_document_vector(ctx.anchor_text, language), reference.vector,
        ) if ctx.anchor_text else 0.0
        paragraph_score = cosine_similarity(
            build_document_vector(ctx.paragraph_text, language), reference.vector,
        ) if ctx.paragraph_text else 0.0
        scores.append(OutlinkScore(
            target_url=ctx.target_url,
            anchor_score=anchor_score,
            paragraph_score=paragraph_score,
            document_score=document_score,
            combined=combine_link_score(anchor_score, paragraph_score, document_score, weights),
        ))
    return scores
