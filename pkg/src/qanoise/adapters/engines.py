"""Concrete engines: mock, scripted replay and a config-driven HTTP client."""

import base64
import hashlib
import json
import os
import tempfile
import urllib.error
import urllib.request

from ..textcore import tokenize
from .base import (
    ASR,
    OPS,
    SPELLCHECK,
    TRANSLATE,
    TTS,
    AdapterConfigError,
    AdapterError,
    Engine,
    MissingAudioError,
    RateLimitError,
    TransportError,
    UnscriptedInputError,
    UnsupportedPairError,
)


def _write_audio(workdir, text_or_bytes, suffix):
    data = text_or_bytes.encode("utf-8") if isinstance(text_or_bytes, str) else text_or_bytes
    os.makedirs(workdir, exist_ok=True)
    path = os.path.join(workdir, hashlib.sha256(data).hexdigest()[:20] + suffix)
    with open(path, "wb") as f:
        f.write(data)
    return path


class MockEngine(Engine):
    """Stand-in for every engine kind.

    Text ops return the input. TTS writes the text itself to a pseudo-audio
    file under ``workdir`` and returns its path; ASR reads such a file back.
    ``lowercase`` and ``strip_punct`` shape the ASR transcript the way real
    recognizers tend to.
    """

    def __init__(self, engine_id="mock", lowercase=False, strip_punct=False, workdir=None, pairs=None):
        self.engine_id = engine_id
        self.lowercase = lowercase
        self.strip_punct = strip_punct
        self.workdir = workdir or os.path.join(tempfile.gettempdir(), "qanoise-audio")
        self.pairs = set(map(tuple, pairs)) if pairs else None

    def _run(self, request):
        if request.op == TTS:
            return _write_audio(self.workdir, request.payload, ".txt")
        if request.op == ASR:
            try:
                with open(request.payload, encoding="utf-8") as f:
                    text = f.read()
            except OSError:
                raise MissingAudioError(f"audio file not found: {request.payload}") from None
            if self.strip_punct:
                from ..noisegen.perturb import strip_punctuation
                text = strip_punctuation(text)
            return text.lower() if self.lowercase else text
        return request.payload


def load_script(path):
    """Script file: ``key<TAB>output`` lines; the first row for a key wins."""
    script = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise AdapterConfigError(f"{path}:{lineno}: expected key<TAB>output")
            key, out = line.split("\t", 1)
            script.setdefault(key, out)
    return script


class ScriptedEngine(Engine):
    """Replays recorded outputs.

    Lookup order for a request: ``qid:src-tgt``, ``qid``, ``hash:src-tgt``,
    ``hash``, where ``hash`` is the sha256 of the text payload (or of the
    audio bytes for ASR). The language-qualified keys let one script serve
    both hops of a back-translation. TTS outputs are written as
    pseudo-audio files holding the scripted text.
    """

    def __init__(self, script, engine_id="scripted", ops=OPS, workdir=None):
        self.script = dict(script)
        self.engine_id = engine_id
        self.ops = tuple(ops)
        self.workdir = workdir or os.path.join(tempfile.gettempdir(), "qanoise-audio")

    @classmethod
    def from_file(cls, path, **kwargs):
        return cls(load_script(path), **kwargs)

    def keys_for(self, request):
        pair = f"{request.src_lang}-{request.tgt_lang}" if request.src_lang or request.tgt_lang else None
        keys = []
        if request.qid:
            if pair:
                keys.append(f"{request.qid}:{pair}")
            keys.append(request.qid)
        digest = request.content_hash()
        if pair:
            keys.append(f"{digest}:{pair}")
        keys.append(digest)
        return keys

    def _run(self, request):
        if request.op == ASR and not os.path.exists(request.payload):
            raise MissingAudioError(f"audio file not found: {request.payload}")
        for key in self.keys_for(request):
            if key in self.script:
                out = self.script[key]
                if request.op == TTS:
                    return _write_audio(self.workdir, out, ".txt")
                return out
        raise UnscriptedInputError(
            f"unscripted input for {request.op} (qid={request.qid}, hash={request.content_hash()[:12]})")


def _lookup(obj, path):
    for part in path.split("."):
        if isinstance(obj, list):
            try:
                obj = obj[int(part)]
            except (ValueError, IndexError):
                raise AdapterError(f"response has no element {part!r} on path {path!r}") from None
        elif isinstance(obj, dict) and part in obj:
            obj = obj[part]
        else:
            raise AdapterError(f"response has no field {part!r} on path {path!r}")
    return obj


def _fill(template, values, json_escape):
    out = template
    for key, value in values.items():
        value = "" if value is None else value
        if json_escape:
            value = json.dumps(value)[1:-1]
        out = out.replace("{{" + key + "}}", value)
    return out


class HttpEngine(Engine):
    """Engine whose endpoint and wire format come entirely from config.

    Config keys: ``url``, ``method`` (POST), ``headers`` (values may use
    ``{{credential}}``), ``credential_env`` (environment variable holding
    the secret), ``body_template`` with ``{{text}}``, ``{{src}}``,
    ``{{tgt}}`` and, for ASR, ``{{audio_b64}}`` placeholders,
    ``response_path`` (dotted path to the output; list indices allowed),
    ``timeout`` seconds, ``ops`` and optional ``pairs``. For TTS the
    response field is base64 audio, saved under ``workdir``.
    """

    def __init__(self, config, engine_id="http", workdir=None):
        try:
            self.url = config["url"]
            self.response_path = config["response_path"]
        except KeyError as exc:
            raise AdapterConfigError(f"http engine {engine_id} needs {exc.args[0]!r}") from None
        self.engine_id = engine_id
        self.method = config.get("method", "POST").upper()
        self.headers = dict(config.get("headers", {"Content-Type": "application/json"}))
        self.credential_env = config.get("credential_env")
        self.body_template = config.get("body_template", '{"text": "{{text}}"}')
        self.timeout = float(config.get("timeout", 30))
        self.ops = tuple(config.get("ops", (TRANSLATE, SPELLCHECK)))
        pairs = config.get("pairs")
        self.pairs = {tuple(p) for p in pairs} if pairs else None
        self.audio_suffix = config.get("audio_suffix", ".wav")
        self.workdir = workdir or config.get("workdir") or os.path.join(tempfile.gettempdir(), "qanoise-audio")

    def _credential(self):
        if not self.credential_env:
            return ""
        value = os.environ.get(self.credential_env)
        if value is None:
            raise AdapterConfigError(f"environment variable {self.credential_env} is not set")
        return value

    def _run(self, request):
        values = {"text": request.payload, "src": request.src_lang, "tgt": request.tgt_lang}
        if request.op == ASR:
            try:
                with open(request.payload, "rb") as f:
                    values["audio_b64"] = base64.b64encode(f.read()).decode("ascii")
            except OSError:
                raise MissingAudioError(f"audio file not found: {request.payload}") from None
            values["text"] = ""
        cred = {"credential": self._credential()}
        headers = {k: _fill(v, cred, False) for k, v in self.headers.items()}
        body = _fill(self.body_template, values, True).encode("utf-8")
        req = urllib.request.Request(_fill(self.url, cred, False), data=body, headers=headers, method=self.method)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                raw = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 429:
                raise RateLimitError(f"{self.engine_id}: HTTP 429") from None
            if exc.code >= 500:
                raise TransportError(f"{self.engine_id}: HTTP {exc.code}") from None
            if exc.code in (400, 422) and request.op == TRANSLATE:
                raise UnsupportedPairError(f"{self.engine_id}: HTTP {exc.code} for "
                                           f"{request.src_lang}->{request.tgt_lang}") from None
            raise AdapterError(f"{self.engine_id}: HTTP {exc.code}") from None
        except (urllib.error.URLError, OSError) as exc:
            raise TransportError(f"{self.engine_id}: {exc}") from None
        try:
            obj = json.loads(raw.decode("utf-8"))
        except ValueError:
            raise AdapterError(f"{self.engine_id}: response is not JSON") from None
        out = _lookup(obj, self.response_path)
        if not isinstance(out, str):
            raise AdapterError(f"{self.engine_id}: response field is not a string")
        if request.op == TTS:
            return _write_audio(self.workdir, base64.b64decode(out), self.audio_suffix)
        return out


class WordMapSpellchecker(Engine):
    """Spellcheck engine that rewrites individual words from a fixed map."""

    ops = (SPELLCHECK,)

    def __init__(self, word_map, engine_id="wordmap"):
        self.word_map = {k.casefold(): v for k, v in word_map.items()}
        self.engine_id = engine_id

    def _run(self, request):
        from ..textcore import apply_case_pattern

        text = request.payload
        out, prev = [], 0
        for tok in tokenize(text):
            fix = self.word_map.get(tok.surface.casefold()) if tok.is_word else None
            if fix is None:
                continue
            out.append(text[prev:tok.start])
            out.append(apply_case_pattern(tok.surface, fix))
            prev = tok.end
        out.append(text[prev:])
        return "".join(out)


ENGINE_KINDS = ("mock", "scripted", "http", "wordmap")


def build_engine(name, cfg, base_dir="."):
    kind = cfg.get("kind")
    engine_id = cfg.get("engine_id", name)
    workdir = cfg.get("workdir")
    if workdir and not os.path.isabs(workdir):
        workdir = os.path.join(base_dir, workdir)
    if kind == "mock":
        return MockEngine(engine_id, cfg.get("lowercase", False), cfg.get("strip_punct", False),
                          workdir, cfg.get("pairs"))
    if kind == "scripted":
        if "script" not in cfg:
            raise AdapterConfigError(f"scripted engine {name} needs 'script'")
        path = cfg["script"]
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return ScriptedEngine.from_file(path, engine_id=engine_id, ops=cfg.get("ops", OPS), workdir=workdir)
    if kind == "http":
        return HttpEngine(cfg, engine_id, workdir)
    if kind == "wordmap":
        path = cfg.get("map")
        if path is None:
            raise AdapterConfigError(f"wordmap engine {name} needs 'map'")
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return WordMapSpellchecker(load_script(path), engine_id)
    raise AdapterConfigError(f"engine {name}: unknown kind {kind!r}; expected one of {ENGINE_KINDS}")


def load_engines(path):
    """Read an adapter config (JSON) and build every engine it names.

    Schema::

        {"engines": {"<name>": {"kind": "mock" | "scripted" | "http" | "wordmap", ...}},
         "parallelism": 4}

    Relative paths resolve against the config file's directory.
    """
    with open(path, encoding="utf-8") as f:
        try:
            cfg = json.load(f)
        except ValueError as exc:
            raise AdapterConfigError(f"{path}: invalid JSON ({exc})") from None
    engines = cfg.get("engines")
    if not isinstance(engines, dict):
        raise AdapterConfigError(f"{path}: missing 'engines' object")
    base_dir = os.path.dirname(os.path.abspath(path))
    return {name: build_engine(name, ecfg, base_dir) for name, ecfg in engines.items()}
