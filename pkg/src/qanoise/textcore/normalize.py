import re
import string

_ARTICLES = re.compile(r"\b(a|an|the)\b")
_PUNCT = set(string.punctuation)


def normalize_answer(text):
    """SQuAD answer normalization, returned as a token list.

    Lowercase, drop ASCII punctuation, drop the articles a/an/the, split on
    whitespace. Identical to the official v1.1 evaluation script.
    """
    text = text.lower()
    text = "".join(ch for ch in text if ch not in _PUNCT)
    text = _ARTICLES.sub(" ", text)
    return text.split()


def case_pattern(word):
    """Classify the case of ``word`` as "lower", "upper", "title" or "mixed"."""
    letters = [c for c in word if c.isalpha()]
    if not letters:
        return "lower"
    if all(c.islower() for c in letters):
        return "lower"
    if len(letters) > 1 and all(c.isupper() for c in letters):
        return "upper"
    if letters[0].isupper() and all(c.islower() for c in letters[1:]):
        return "title"
    return "mixed"


def apply_case_pattern(source, target):
    """Re-case ``target`` to follow the case pattern of ``source``.

    Mixed-case sources are copied character by character where the
    positions line up; extra target characters are left alone.
    """
    pattern = case_pattern(source)
    if pattern == "lower":
        return target.lower()
    if pattern == "upper":
        return target.upper()
    if pattern == "title":
        return target[:1].upper() + target[1:].lower()
    out = []
    for i, ch in enumerate(target):
        if i < len(source) and source[i].isalpha():
            ch = ch.upper() if source[i].isupper() else ch.lower()
        out.append(ch)
    return "".join(out)


def match_case(original, replacement):
    """Apply the case of a single character ``original`` to ``replacement``."""
    return replacement.upper() if original.isupper() else replacement.lower()
