"""Word-class and named-entity sources.

Taggers expose two methods over a token list from :func:`qanoise.textcore.tokenize`:

- ``word_classes(tokens)`` -> one of ``"function"``, ``"content"`` or ``None`` per token;
- ``entity_spans(tokens)`` -> ``(first, stop, label)`` token-index ranges.

:class:`HeuristicTagger` needs no external data. :class:`SidecarTagger`
reads labels from an annotation sidecar (POS tags and/or NE labels).
"""

from importlib import resources

from ..textcore import WORD

FUNCTION = "function"
CONTENT = "content"
QUESTION = "question"

ENTITY_TYPES = frozenset({"PER", "LOC", "ORG"})
HEURISTIC_ENTITY = "ENT"

_CONTENT_POS = {"NOUN", "PROPN", "ADJ", "NN", "NNS", "NNP", "NNPS", "JJ", "JJR", "JJS"}
_FUNCTION_POS = {"DET", "PRON", "CCONJ", "SCONJ", "CONJ", "DT", "PDT", "PRP", "PRP$", "CC", "WP", "WP$", "WDT"}
_NE_TYPES = {"PER", "PERSON", "LOC", "GPE", "ORG", "MISC"}
_NE_ALIASES = {"PERSON": "PER", "GPE": "LOC"}


def load_closed_class(path=None):
    """word -> category map; the bundled list unless ``path`` is given."""
    if path is None:
        text = resources.files("qanoise.data").joinpath("closed_class.tsv").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        word, _, cat = line.partition("\t")
        table.setdefault(word.strip().casefold(), cat.strip() or "function")
    return table


class HeuristicTagger:
    """Closed-class lexicon for function words; capitalization for entities.

    Function words are closed-class entries other than wh-words. Content
    words are the remaining alphabetic tokens. Entities are maximal runs of
    capitalized non-closed-class words that do not start a sentence, plus
    all-caps acronyms anywhere.
    """

    def __init__(self, closed_class=None):
        self.closed_class = load_closed_class() if closed_class is None else closed_class

    def word_class(self, surface):
        cat = self.closed_class.get(surface.casefold())
        if cat is None:
            return CONTENT
        return QUESTION if cat == QUESTION else FUNCTION

    def word_classes(self, tokens):
        out = []
        for tok in tokens:
            if tok.kind != WORD:
                out.append(None)
                continue
            cls = self.word_class(tok.surface)
            out.append(None if cls == QUESTION else cls)
        return out

    def entity_spans(self, tokens):
        spans = []
        start = None
        sentence_start = True
        for i, tok in enumerate(tokens):
            candidate = False
            if tok.kind == WORD:
                letters = [c for c in tok.surface if c.isalpha()]
                acronym = len(letters) > 1 and all(c.isupper() for c in letters)
                capital = tok.surface[0].isupper() and tok.surface.casefold() not in self.closed_class
                candidate = acronym or (capital and not sentence_start)
                sentence_start = False
            elif tok.surface in ".!?":
                sentence_start = True
            if candidate:
                if start is None:
                    start = i
            elif start is not None:
                spans.append((start, i, HEURISTIC_ENTITY))
                start = None
        if start is not None:
            spans.append((start, len(tokens), HEURISTIC_ENTITY))
        return spans


def _split_labels(label):
    pos, ne = None, None
    for part in label.split(","):
        part = part.strip()
        if not part or part == "O":
            continue
        prefix = part[:2] if part[:2] in ("B-", "I-") else ""
        bare = part[len(prefix):].upper()
        if bare in _NE_TYPES:
            ne = prefix + _NE_ALIASES.get(bare, bare)
        else:
            pos = part
    return pos, ne


class SidecarTagger:
    """Labels for one text, keyed by token index.

    A label is a POS tag, an NE label (``PER``, ``B-LOC``...), or both
    separated by a comma. Tokens with no label have no class.
    """

    def __init__(self, labels):
        self.pos = {}
        self.ne = {}
        for idx, label in labels.items():
            pos, ne = _split_labels(label)
            if pos:
                self.pos[idx] = pos
            if ne:
                self.ne[idx] = ne

    def word_classes(self, tokens):
        out = []
        for i, tok in enumerate(tokens):
            tag = self.pos.get(i)
            if tok.kind != WORD or tag is None:
                out.append(None)
            elif tag.upper() in _CONTENT_POS:
                out.append(CONTENT)
            elif tag.upper() in _FUNCTION_POS:
                out.append(FUNCTION)
            else:
                out.append(None)
        return out

    def entity_spans(self, tokens):
        spans = []
        start, cur = None, None
        for i in range(len(tokens) + 1):
            label = self.ne.get(i) if i < len(tokens) else None
            if label is None:
                typ, begin = None, False
            elif label[:2] in ("B-", "I-"):
                typ, begin = label[2:], label.startswith("B-")
            else:
                typ, begin = label, False
            if start is not None and (typ != cur or begin):
                spans.append((start, i, cur))
                start, cur = None, None
            if typ is not None and start is None:
                start, cur = i, typ
        return spans


class TaggerProvider:
    """Sidecar tagger for keys that have annotations, heuristic tagger otherwise."""

    def __init__(self, sidecar=None, heuristic=None):
        self.sidecar = sidecar
        self.heuristic = heuristic or HeuristicTagger()
        self._cache = {}

    def for_key(self, key=None):
        if self.sidecar is not None and key is not None:
            labels = self.sidecar.get(key)
            if labels is not None:
                if key not in self._cache:
                    self._cache[key] = SidecarTagger(labels)
                return self._cache[key]
        return self.heuristic
