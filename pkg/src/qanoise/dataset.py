"""SQuAD-format datasets, challenge-set sidecars and annotation sidecars."""

import json
import logging
from dataclasses import dataclass, field

log = logging.getLogger(__name__)


class DatasetError(Exception):
    pass


class DatasetFormatError(DatasetError):
    """The file does not have the SQuAD v1.1 layout; ``where`` is the JSON path."""

    def __init__(self, path, where, message):
        self.path = path
        self.where = where
        super().__init__(f"{path}: {where}: {message}")


class SpanMismatchError(DatasetError):
    def __init__(self, path, qids):
        self.qids = list(qids)
        shown = ", ".join(self.qids[:20]) + (" ..." if len(self.qids) > 20 else "")
        super().__init__(f"{path}: answer spans do not match context for {len(self.qids)} question(s): {shown}")


class UnknownQidError(DatasetError):
    def __init__(self, qids):
        self.qids = sorted(qids)
        shown = ", ".join(self.qids[:20]) + (" ..." if len(self.qids) > 20 else "")
        super().__init__(f"{len(self.qids)} qid(s) not in base dataset: {shown}")


@dataclass(frozen=True)
class ContextParagraph:
    context_id: str
    text: str
    article_title: str


@dataclass(frozen=True)
class Answer:
    text: str
    answer_start: int


@dataclass(frozen=True)
class QuestionRecord:
    qid: str
    question: str
    answers: tuple
    context_id: str

    def answer_texts(self):
        return [a.text for a in self.answers]


@dataclass
class Dataset:
    """Contexts plus questions, in file order.

    ``context_id`` is ``"<article index>-<paragraph index>"``, so ids are
    stable across a load/emit round trip.
    """

    contexts: dict
    questions: list
    version: str = "1.1"
    _by_qid: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self._by_qid = {q.qid: q for q in self.questions}
        if len(self._by_qid) != len(self.questions):
            seen, dups = set(), set()
            for q in self.questions:
                (dups if q.qid in seen else seen).add(q.qid)
            raise DatasetError(f"duplicate qids: {sorted(dups)[:20]}")

    def __len__(self):
        return len(self.questions)

    def __contains__(self, qid):
        return qid in self._by_qid

    def __getitem__(self, qid):
        return self._by_qid[qid]

    def qids(self):
        return [q.qid for q in self.questions]

    def context_of(self, qid):
        return self.contexts[self._by_qid[qid].context_id]

    def with_questions(self, questions):
        return Dataset(dict(self.contexts), list(questions), self.version)


def _require(obj, key, kind, path, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DatasetFormatError(path, where, f"missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise DatasetFormatError(path, f"{where}.{key}", f"expected {kind.__name__}")
    return value


def parse_squad(obj, path="<memory>", validate=True):
    """Build a :class:`Dataset` from an already-decoded SQuAD JSON object."""
    articles = _require(obj, "data", list, path, "$")
    contexts, questions, bad_spans = {}, [], []
    for ai, article in enumerate(articles):
        where = f"data[{ai}]"
        if not isinstance(article, dict):
            raise DatasetFormatError(path, where, "expected object")
        title = article.get("title", "")
        paragraphs = _require(article, "paragraphs", list, path, where)
        for pi, para in enumerate(paragraphs):
            pwhere = f"{where}.paragraphs[{pi}]"
            text = _require(para, "context", str, path, pwhere)
            if not text:
                raise DatasetFormatError(path, f"{pwhere}.context", "empty context")
            cid = f"{ai}-{pi}"
            contexts[cid] = ContextParagraph(cid, text, title)
            for qi, qa in enumerate(_require(para, "qas", list, path, pwhere)):
                qwhere = f"{pwhere}.qas[{qi}]"
                qid = _require(qa, "id", str, path, qwhere)
                question = _require(qa, "question", str, path, qwhere)
                raw_answers = _require(qa, "answers", list, path, qwhere)
                if not raw_answers:
                    raise DatasetFormatError(path, f"{qwhere}.answers", "no answers")
                answers = []
                for xi, ans in enumerate(raw_answers):
                    awhere = f"{qwhere}.answers[{xi}]"
                    atext = _require(ans, "text", str, path, awhere)
                    start = _require(ans, "answer_start", int, path, awhere)
                    answers.append(Answer(atext, start))
                    if validate and text[start:start + len(atext)] != atext:
                        bad_spans.append(qid)
                questions.append(QuestionRecord(qid, question, tuple(answers), cid))
    if bad_spans:
        raise SpanMismatchError(path, dict.fromkeys(bad_spans))
    try:
        return Dataset(contexts, questions, str(obj.get("version", "1.1")))
    except DatasetError as exc:
        raise DatasetError(f"{path}: {exc}") from None


def load_squad(path, validate=True):
    """Load a SQuAD v1.1 (or XQuAD) JSON file.

    Raises :class:`DatasetFormatError` naming the offending JSON path, or
    :class:`SpanMismatchError` listing qids whose answer text is not found
    at ``answer_start``.
    """
    with open(path, encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(path, "$", f"invalid JSON ({exc})") from None
    return parse_squad(obj, path, validate)


def to_squad(dataset, meta=None):
    """SQuAD v1.1 JSON object for ``dataset``; articles and paragraphs keep their order."""
    by_context = {}
    for q in dataset.questions:
        by_context.setdefault(q.context_id, []).append(q)
    articles = []
    current = None
    for cid, ctx in dataset.contexts.items():
        article_key = cid.rsplit("-", 1)[0]
        if current is None or current[0] != article_key:
            current = (article_key, {"title": ctx.article_title, "paragraphs": []})
            articles.append(current[1])
        current[1]["paragraphs"].append({
            "context": ctx.text,
            "qas": [
                {
                    "id": q.qid,
                    "question": q.question,
                    "answers": [{"text": a.text, "answer_start": a.answer_start} for a in q.answers],
                }
                for q in by_context.get(cid, [])
            ],
        })
    obj = {"version": dataset.version, "data": articles}
    if meta:
        obj["meta"] = meta
    return obj


def save_squad(dataset, path, meta=None):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_squad(dataset, meta), f, ensure_ascii=False, indent=1)
        f.write("\n")


# ---------------------------------------------------------------- challenge sets

@dataclass
class ChallengeSet:
    """Clean/noisy question pairs keyed by qid, in base-dataset order."""

    pairs: dict
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.pairs)

    def qids(self):
        return list(self.pairs)

    def clean(self):
        return [p[0] for p in self.pairs.values()]

    def noisy(self):
        return [p[1] for p in self.pairs.values()]

    def noisy_map(self):
        return {qid: p[1] for qid, p in self.pairs.items()}


def pair_challenge(base, noisy_texts, provenance=None):
    """Pair ``noisy_texts`` (qid -> text) with the clean questions of ``base``."""
    unknown = [qid for qid in noisy_texts if qid not in base]
    if unknown:
        raise UnknownQidError(unknown)
    pairs = {q.qid: (q.question, noisy_texts[q.qid]) for q in base.questions if q.qid in noisy_texts}
    return ChallengeSet(pairs, dict(provenance or {}))


def _clean_field(text):
    return text.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def meta_path(path):
    return f"{path}.meta.json"


def save_challenge(challenge, path):
    """Write ``qid<TAB>noisy`` lines plus a ``<path>.meta.json`` header file."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for qid, (_, noisy) in challenge.pairs.items():
            f.write(f"{qid}\t{_clean_field(noisy)}\n")
    with open(meta_path(path), "w", encoding="utf-8") as f:
        json.dump(challenge.provenance, f, ensure_ascii=False, indent=1, sort_keys=True)
        f.write("\n")


def read_tsv_map(path):
    """Read ``key<TAB>value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise DatasetFormatError(path, f"line {lineno}", "expected key<TAB>value")
            key, value = line.split("\t", 1)
            out[key] = value
    return out


def load_challenge(base, path):
    """Load a challenge sidecar against ``base``; the meta file is optional."""
    noisy = read_tsv_map(path)
    provenance = {}
    try:
        with open(meta_path(path), encoding="utf-8") as f:
            provenance = json.load(f)
    except FileNotFoundError:
        provenance = {"interface": "unknown", "generator": "natural"}
    return pair_challenge(base, noisy, provenance)


def load_predictions(path):
    """Prediction file: a flat JSON object mapping qid to answer string."""
    with open(path, encoding="utf-8") as f:
        obj = json.load(f)
    if not isinstance(obj, dict) or not all(isinstance(v, str) for v in obj.values()):
        raise DatasetFormatError(path, "$", "expected an object of qid -> answer string")
    return obj


# ---------------------------------------------------------------- annotation sidecars

@dataclass
class AnnotationSidecar:
    """Per-key token labels (POS tags or NE labels) indexed by tokenizer position.

    Keys are qids for questions and context ids for paragraphs.
    """

    labels: dict

    def get(self, key):
        return self.labels.get(key)

    def __contains__(self, key):
        return key in self.labels


def load_annotations(path, texts=None):
    """Read ``key<TAB>token_index<TAB>label`` lines.

    When ``texts`` (key -> text) is given, token indices are checked against
    the tokenizer output for that text.
    """
    from .textcore import tokenize

    labels = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DatasetFormatError(path, f"line {lineno}", "expected key<TAB>index<TAB>label")
            key, idx, label = parts
            try:
                idx = int(idx)
            except ValueError:
                raise DatasetFormatError(path, f"line {lineno}", f"bad token index {idx!r}") from None
            labels.setdefault(key, {})[idx] = label
    if texts is not None:
        for key, ann in labels.items():
            if key not in texts:
                continue
            n = len(tokenize(texts[key]))
            bad = [i for i in ann if not 0 <= i < n]
            if bad:
                raise DatasetError(f"{path}: token indices {bad} out of range for {key!r}")
    return AnnotationSidecar(labels)


# ---------------------------------------------------------------- augmentation

AUGMENT_SEPARATOR = "#"


def emit_augmented(base_train, policies, ctx=None, jobs=1):
    """Originals plus one noisy copy per record for each policy.

    Copies get qid ``<qid>#<policy name>`` and share the original's answers
    and context. Records an engine failed on are skipped and logged.
    """
    from .batch import noise_dataset
    from .noisegen import NoiseContext, check_policy

    ctx = ctx or NoiseContext()
    for policy in policies:
        check_policy(policy, ctx)
    questions = list(base_train.questions)
    for policy in policies:
        noisy, _, failures = noise_dataset(base_train, [policy], ctx, jobs)
        if failures:
            log.warning("policy %s: %d record(s) skipped", policy.name, len(failures))
        for q in base_train.questions:
            if q.qid in noisy:
                questions.append(QuestionRecord(f"{q.qid}{AUGMENT_SEPARATOR}{policy.name}",
                                                noisy[q.qid], q.answers, q.context_id))
    return base_train.with_questions(questions)
