"""Small rule-based English lemmatizer.

Irregular-form table plus inflectional suffix rules (-s, -es, -ies,
-ed, -ing) with consonant-undoubling and a CVC e-restoration heuristic.
Deliberately conservative: unknown shapes pass through unchanged, and
the asset is recorded in the extraction manifest so outputs stay
attributable to this resource rather than to a parser dependency.
"""

from __future__ import annotations

_IRREGULAR = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be", "been": "be", "being": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "goes": "go", "went": "go", "gone": "go",
    "said": "say", "says": "say",
    "made": "make", "took": "take", "taken": "take", "gave": "give", "given": "give",
    "got": "get", "gotten": "get", "came": "come", "saw": "see", "seen": "see",
    "knew": "know", "known": "know", "thought": "think", "found": "find",
    "caught": "catch", "bought": "buy", "brought": "bring", "taught": "teach",
    "felt": "feel", "kept": "keep", "left": "leave", "lost": "lose",
    "met": "meet", "paid": "pay", "sold": "sell", "told": "tell", "wrote": "write",
    "ran": "run", "running": "run", "men": "man", "women": "woman",
    "children": "child", "feet": "foot", "teeth": "tooth", "mice": "mouse",
    "geese": "goose", "wolves": "wolf", "knives": "knife", "lives": "life",
    "leaves": "leaf", "loaves": "loaf", "shelves": "shelf", "wives": "wife",
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
}

_VOWELS = set("aeiou")


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
        return stem[:-1]
    return stem


def _restore_e(stem: str) -> str:
    # mak -> make, writ -> write: consonant-vowel-consonant tail, short stem.
    if (
        len(stem) >= 3
        and stem[-1] not in _VOWELS
        and stem[-1] not in "wxy"
        and stem[-2] in _VOWELS
        and stem[-3] not in _VOWELS
    ):
        return stem + "e"
    return stem


def lemmatize(word: str) -> str:
    """Lemma of one word form; case of the leading character is kept."""
    if not word:
        return word
    lower = word.lower()
    if lower in _IRREGULAR:
        lemma = _IRREGULAR[lower]
        return lemma.capitalize() if word[0].isupper() else lemma

    def finish(stem: str) -> str:
        return stem if stem else word

    if lower.endswith("ies") and len(lower) > 4:
        return finish(word[:-3] + "y")
    if lower.endswith(("sses", "shes", "ches", "xes", "zes")) and len(lower) > 4:
        return finish(word[:-2])
    if lower.endswith("s") and not lower.endswith(("ss", "us", "is")) and len(lower) > 3:
        return finish(word[:-1])
    if lower.endswith("ied") and len(lower) > 4:
        return finish(word[:-3] + "y")
    if lower.endswith("ed") and len(lower) > 4:
        stem = word[:-2]
        if stem.lower().endswith("e"):
            return finish(stem)
        return finish(_restore_e(_undouble(stem)) if stem == _undouble(stem) else _undouble(stem))
    if lower.endswith("ing") and len(lower) > 5:
        stem = word[:-3]
        undoubled = _undouble(stem)
        if undoubled != stem:
            return finish(undoubled)
        return finish(_restore_e(stem))
    return word
