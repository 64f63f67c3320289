import hashlib
import os
import re
import threading
import time
from dataclasses import dataclass

TRANSLATE = "translate"
TTS = "tts"
ASR = "asr"
SPELLCHECK = "spellcheck"
OPS = (TRANSLATE, TTS, ASR, SPELLCHECK)

_BCP47 = re.compile(r"^[A-Za-z]{2,3}(?:-[A-Za-z0-9]{2,8})*$")


class AdapterError(Exception):
    kind = "adapter"


class AdapterConfigError(AdapterError):
    kind = "config"


class TransportError(AdapterError):
    kind = "transport"


class RateLimitError(AdapterError):
    kind = "rate_limit"


class UnsupportedPairError(AdapterError):
    kind = "unsupported_pair"


class UnscriptedInputError(AdapterError):
    kind = "unscripted_input"


class MissingAudioError(AdapterError):
    kind = "missing_audio"


RETRYABLE = (TransportError, RateLimitError)


def check_lang(code):
    if code is not None and not _BCP47.match(code):
        raise AdapterConfigError(f"not a BCP-47 language code: {code!r}")
    return code


@dataclass(frozen=True)
class EngineRequest:
    op: str
    payload: str
    src_lang: str = None
    tgt_lang: str = None
    qid: str = None

    def __post_init__(self):
        if self.op not in OPS:
            raise AdapterConfigError(f"unknown engine op {self.op!r}")
        check_lang(self.src_lang)
        check_lang(self.tgt_lang)

    def content_hash(self):
        """sha256 of the text payload, or of the audio file bytes for ASR."""
        if self.op == ASR:
            try:
                with open(self.payload, "rb") as f:
                    data = f.read()
            except OSError:
                raise MissingAudioError(f"audio file not found: {self.payload}") from None
        else:
            data = self.payload.encode("utf-8")
        return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class EngineResponse:
    payload: str
    latency: float
    engine_id: str


class Engine:
    """Base class: subclasses implement ``_run(request) -> payload string``."""

    engine_id = "engine"
    ops = OPS
    pairs = None  # optional set of (src, tgt) the engine supports

    def call(self, request):
        if request.op not in self.ops:
            raise AdapterConfigError(f"engine {self.engine_id} does not support {request.op}")
        if request.op == TRANSLATE and self.pairs is not None \
                and (request.src_lang, request.tgt_lang) not in self.pairs:
            raise UnsupportedPairError(
                f"engine {self.engine_id} does not translate {request.src_lang}->{request.tgt_lang}")
        start = time.perf_counter()
        payload = self._run(request)
        if payload is None:
            raise AdapterError(f"engine {self.engine_id} returned no payload")
        return EngineResponse(payload, time.perf_counter() - start, self.engine_id)

    def _run(self, request):
        raise NotImplementedError


class AuditLog:
    """Thread-safe record of every engine call.

    Entries carry no timings, so a log written from scripted engines is
    byte-identical across runs; ``write_tsv`` orders by qid, keeping call
    order within a qid.
    """

    COLUMNS = ("qid", "op", "engine_id", "src_lang", "tgt_lang", "request_hash", "outcome", "detail")

    def __init__(self):
        self._lock = threading.Lock()
        self.entries = []

    def record(self, request, engine_id, outcome, detail=""):
        try:
            digest = request.content_hash()
        except MissingAudioError:
            digest = "-"
        entry = {
            "qid": request.qid or "",
            "op": request.op,
            "engine_id": engine_id,
            "src_lang": request.src_lang or "",
            "tgt_lang": request.tgt_lang or "",
            "request_hash": digest,
            "outcome": outcome,
            "detail": detail,
        }
        with self._lock:
            self.entries.append(entry)

    def sorted_entries(self):
        with self._lock:
            entries = list(self.entries)
        return sorted(entries, key=lambda e: e["qid"])

    def write_tsv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\t".join(self.COLUMNS) + "\n")
            for e in self.sorted_entries():
                f.write("\t".join(str(e[c]).replace("\t", " ") for c in self.COLUMNS) + "\n")


def call_engine(engine, request, audit=None, retries=3, backoff=0.5, sleep=time.sleep):
    """Call ``engine`` with exponential-backoff retries on transport and rate-limit errors."""
    attempt = 0
    while True:
        try:
            response = engine.call(request)
        except RETRYABLE as exc:
            if audit is not None:
                audit.record(request, engine.engine_id, exc.kind, f"attempt {attempt + 1}")
            if attempt >= retries:
                raise
            sleep(backoff * (2 ** attempt))
            attempt += 1
            continue
        except AdapterError as exc:
            if audit is not None:
                audit.record(request, engine.engine_id, exc.kind, str(exc))
            raise
        if audit is not None:
            # the audio file name is content-addressed, so it is stable across runs
            detail = os.path.basename(response.payload) if request.op == TTS else ""
            audit.record(request, engine.engine_id, "ok", detail)
        return response
