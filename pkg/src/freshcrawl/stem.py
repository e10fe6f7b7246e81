"""Suffix-stripping stemmers, keyed by ISO 639-1 language code.

English uses the classic Porter algorithm, implemented here so the exact
token forms produced by the pipeline are fixed by this package rather than
by whatever stemmer library happens to be installed. Tokenization fixtures
elsewhere in the test suite are frozen against this implementation.
"""

from __future__ import annotations

_VOWELS = "aeiou"


class PorterStemmer:
    """Classic Porter stemmer (the original five-step algorithm)."""

    def stem(self, word: str) -> str:
        w = word.lower()
        if len(w) <= 2:
            return w
        w = self._step1a(w)
        w = self._step1b(w)
        w = self._step1c(w)
        w = self._step2(w)
        w = self._step3(w)
        w = self._step4(w)
        w = self._step5a(w)
        w = self._step5b(w)
        return w

    # ---- letter classification -------------------------------------------

    def _cons(self, w: str, i: int) -> bool:
        c = w[i]
        if c in _VOWELS:
            return False
        if c == "y":
            # y is a vowel when preceded by a consonant
            return True if i == 0 else not self._cons(w, i - 1)
        return True

    def _measure(self, stem: str) -> int:
        # number of vowel->consonant transitions in [C](VC)^m[V]
        flags = [self._cons(stem, i) for i in range(len(stem))]
        m = 0
        i = 0
        while i < len(flags) and flags[i]:
            i += 1
        while i < len(flags):
            while i < len(flags) and not flags[i]:
                i += 1
            if i >= len(flags):
                break
            m += 1
            while i < len(flags) and flags[i]:
                i += 1
        return m

    def _has_vowel(self, stem: str) -> bool:
        return any(not self._cons(stem, i) for i in range(len(stem)))

    def _ends_double_cons(self, w: str) -> bool:
        return len(w) >= 2 and w[-1] == w[-2] and self._cons(w, len(w) - 1)

    def _cvc(self, w: str) -> bool:
        if len(w) < 3:
            return False
        if not (self._cons(w, len(w) - 3) and not self._cons(w, len(w) - 2) and self._cons(w, len(w) - 1)):
            return False
        return w[-1] not in "wxy"

    # ---- steps -------------------------------------------------------------

    def _step1a(self, w: str) -> str:
        if w.endswith("sses"):
            return w[:-2]
        if w.endswith("ies"):
            return w[:-2]
        if w.endswith("ss"):
            return w
        if w.endswith("s"):
            return w[:-1]
        return w

    def _step1b(self, w: str) -> str:
        if w.endswith("eed"):
            if self._measure(w[:-3]) > 0:
                return w[:-1]
            return w
        stripped = None
        if w.endswith("ed") and self._has_vowel(w[:-2]):
            stripped = w[:-2]
        elif w.endswith("ing") and self._has_vowel(w[:-3]):
            stripped = w[:-3]
        if stripped is None:
            return w
        w = stripped
        if w.endswith(("at", "bl", "iz")):
            return w + "e"
        if self._ends_double_cons(w) and w[-1] not in "lsz":
            return w[:-1]
        if self._measure(w) == 1 and self._cvc(w):
            return w + "e"
        return w

    def _step1c(self, w: str) -> str:
        if w.endswith("y") and self._has_vowel(w[:-1]):
            return w[:-1] + "i"
        return w

    _STEP2 = (
        ("ational", "ate"), ("ization", "ize"), ("iveness", "ive"),
        ("fulness", "ful"), ("ousness", "ous"), ("biliti", "ble"),
        ("tional", "tion"), ("entli", "ent"), ("ousli", "ous"),
        ("ation", "ate"), ("alism", "al"), ("aliti", "al"),
        ("iviti", "ive"), ("enci", "ence"), ("anci", "ance"),
        ("izer", "ize"), ("abli", "able"), ("alli", "al"),
        ("ator", "ate"), ("eli", "e"),
    )

    _STEP3 = (
        ("icate", "ic"), ("ative", ""), ("alize", "al"),
        ("iciti", "ic"), ("ical", "ic"), ("ful", ""), ("ness", ""),
    )

    _STEP4 = (
        "ement", "ance", "ence", "able", "ible", "ment",
        "ant", "ent", "ion", "ism", "ate", "iti", "ous", "ive", "ize",
        "al", "er", "ic", "ou",
    )

    def _longest_suffix(self, w: str, table) -> tuple[str, str] | None:
        best = None
        for entry in table:
            suf = entry[0] if isinstance(entry, tuple) else entry
            if w.endswith(suf) and (best is None or len(suf) > len(best[0])):
                rep = entry[1] if isinstance(entry, tuple) else ""
                best = (suf, rep)
        return best

    def _step2(self, w: str) -> str:
        hit = self._longest_suffix(w, self._STEP2)
        if hit and self._measure(w[: -len(hit[0])]) > 0:
            return w[: -len(hit[0])] + hit[1]
        return w

    def _step3(self, w: str) -> str:
        hit = self._longest_suffix(w, self._STEP3)
        if hit and self._measure(w[: -len(hit[0])]) > 0:
            return w[: -len(hit[0])] + hit[1]
        return w

    def _step4(self, w: str) -> str:
        hit = self._longest_suffix(w, self._STEP4)
        if hit is None:
            return w
        suf = hit[0]
        stem = w[: -len(suf)]
        if self._measure(stem) <= 1:
            return w
        if suf == "ion" and not stem.endswith(("s", "t")):
            return w
        return stem

    def _step5a(self, w: str) -> str:
        if w.endswith("e"):
            stem = w[:-1]
            m = self._measure(stem)
            if m > 1 or (m == 1 and not self._cvc(stem)):
                return stem
        return w

    def _step5b(self, w: str) -> str:
        if w.endswith("l") and self._ends_double_cons(w) and self._measure(w) > 1:
            return w[:-1]
        return w


class UnsupportedLanguageError(LookupError):
    def __init__(self, code: str):
        super().__init__(f"no stemmer registered for language {code!r}")
        self.code = code


_REGISTRY = {"en": PorterStemmer()}


def stemmer_for(code: str) -> PorterStemmer:
    try:
        return _REGISTRY[code]
    except KeyError:
        raise UnsupportedLanguageError(code) from None


def register_stemmer(code: str, stemmer) -> None:
    """Hook for adding stemmers for further languages."""
    _REGISTRY[code] = stemmer
