import json
import os
import shutil
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from qanoise.adapters import (
    ASR,
    SPELLCHECK,
    TRANSLATE,
    TTS,
    AdapterConfigError,
    AdapterError,
    AuditLog,
    EngineRequest,
    HttpEngine,
    MissingAudioError,
    MockEngine,
    RateLimitError,
    ScriptedEngine,
    TransportError,
    UnscriptedInputError,
    UnsupportedPairError,
    WordMapSpellchecker,
    back_translate,
    build_engine,
    call_engine,
    load_engines,
    spellcheck,
    translate,
    tts_then_asr,
)
from tests.conftest import fixture_path

LAMA = "What has a Lama determined to do?"
PANTHERS = "How many Panthers defense players were selected for the Pro Bowl?"


@pytest.fixture
def replay_dir(tmp_path):
    dst = tmp_path / "replay"
    shutil.copytree(fixture_path("replay"), dst)
    return dst


class TestRequests:
    def test_bcp47(self):
        EngineRequest(TRANSLATE, "x", "en", "de-AT")
        with pytest.raises(AdapterConfigError):
            EngineRequest(TRANSLATE, "x", "english", "de")
        with pytest.raises(AdapterConfigError):
            EngineRequest("paint", "x")

    def test_hash_of_audio_bytes(self, tmp_path):
        a = tmp_path / "a.wav"
        a.write_bytes(b"RIFF")
        assert EngineRequest(ASR, str(a)).content_hash() == EngineRequest(TRANSLATE, "RIFF").content_hash()
        with pytest.raises(MissingAudioError):
            EngineRequest(ASR, str(tmp_path / "nope.wav")).content_hash()


class TestMock:
    def test_identity_translate(self):
        assert translate(LAMA, "en", "de", MockEngine()) == LAMA
        assert back_translate(LAMA, "de", MockEngine()) == LAMA

    def test_tts_asr_lowercased(self, tmp_path):
        eng = MockEngine(lowercase=True, strip_punct=True, workdir=str(tmp_path))
        assert tts_then_asr(LAMA, eng, eng) == "what has a lama determined to do"

    def test_missing_audio(self, tmp_path):
        with pytest.raises(MissingAudioError):
            MockEngine().call(EngineRequest(ASR, str(tmp_path / "none.txt")))

    def test_unsupported_pair(self):
        eng = MockEngine(pairs=[("en", "de"), ("de", "en")])
        assert translate("x", "en", "de", eng) == "x"
        with pytest.raises(UnsupportedPairError):
            back_translate("x", "fr", eng)


class TestScripted:
    def test_hash_key(self):
        h = EngineRequest(TRANSLATE, "hello").content_hash()
        eng = ScriptedEngine({h: "hallo"})
        assert translate("hello", "en", "de", eng) == "hallo"

    def test_unscripted(self):
        with pytest.raises(UnscriptedInputError):
            translate("hello", "en", "de", ScriptedEngine({}))

    def test_scripted_back_translation(self):
        eng = ScriptedEngine.from_file(fixture_path("replay/mt_rows.tsv"))
        audit = AuditLog()
        assert back_translate(LAMA, "de", eng, qid="q1", audit=audit) == "What has a Lama decided to do?"
        assert [(e["src_lang"], e["tgt_lang"], e["outcome"]) for e in audit.entries] == [
            ("en", "de", "ok"), ("de", "en", "ok")]

    def test_scripted_asr(self, tmp_path):
        asr = ScriptedEngine.from_file(fixture_path("replay/asr_rows.tsv"), ops=(ASR,))
        tts = MockEngine(workdir=str(tmp_path))
        out = tts_then_asr(PANTHERS, tts, asr, qid="q4")
        assert out == "how many Santa's defense players selected for the Pro Bowl"

    def test_op_not_supported(self):
        with pytest.raises(AdapterConfigError):
            ScriptedEngine({}, ops=(ASR,)).call(EngineRequest(TRANSLATE, "x", "en", "de"))


class TestRetry:
    class Flaky(MockEngine):
        def __init__(self, failures, exc):
            super().__init__("flaky")
            self.failures = failures
            self.exc = exc
            self.calls = 0

        def _run(self, request):
            self.calls += 1
            if self.calls <= self.failures:
                raise self.exc("boom")
            return request.payload

    def test_backoff_then_success(self):
        sleeps = []
        eng = self.Flaky(2, RateLimitError)
        audit = AuditLog()
        req = EngineRequest(TRANSLATE, "x", "en", "de", "q")
        assert call_engine(eng, req, audit, retries=3, backoff=0.5, sleep=sleeps.append).payload == "x"
        assert sleeps == [0.5, 1.0]
        assert [e["outcome"] for e in audit.entries] == ["rate_limit", "rate_limit", "ok"]

    def test_gives_up(self):
        eng = self.Flaky(10, TransportError)
        with pytest.raises(TransportError):
            call_engine(eng, EngineRequest(SPELLCHECK, "x"), retries=2, sleep=lambda s: None)
        assert eng.calls == 3

    def test_non_retryable_is_immediate(self):
        eng = self.Flaky(1, UnsupportedPairError)
        with pytest.raises(UnsupportedPairError):
            call_engine(eng, EngineRequest(TRANSLATE, "x", "en", "xx"), sleep=lambda s: None)
        assert eng.calls == 1


class TestAudit:
    def test_sorted_and_deterministic(self, tmp_path):
        audit = AuditLog()
        for qid in ("q2", "q1", "q3"):
            call_engine(MockEngine(), EngineRequest(TRANSLATE, qid, "en", "de", qid), audit)
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        audit.write_tsv(a)
        audit.write_tsv(b)
        assert a.read_bytes() == b.read_bytes()
        rows = a.read_text().splitlines()
        assert rows[0].split("\t") == list(AuditLog.COLUMNS)
        assert [r.split("\t")[0] for r in rows[1:]] == ["q1", "q2", "q3"]

    def test_tts_artifact_recorded(self, tmp_path):
        audit = AuditLog()
        eng = MockEngine(workdir=str(tmp_path))
        tts_then_asr("hi", eng, eng, "q", audit)
        tts_row = audit.entries[0]
        assert tts_row["op"] == TTS and tts_row["detail"].endswith(".txt")
        assert os.path.exists(tmp_path / tts_row["detail"])


class TestSpellcheck:
    def test_wordmap(self):
        eng = WordMapSpellchecker({"determied": "determined"})
        assert spellcheck("Determied to do", eng) == "Determined to do"

    def test_identity(self):
        assert spellcheck("as is", MockEngine()) == "as is"


class TestConfig:
    def test_load_engines(self, replay_dir):
        engines = load_engines(str(replay_dir / "engines.json"))
        assert set(engines) == {"mt", "tts", "asr"}
        assert isinstance(engines["mt"], ScriptedEngine)
        assert engines["tts"].workdir == str(replay_dir / "audio")

    def test_bad_kind(self):
        with pytest.raises(AdapterConfigError):
            build_engine("x", {"kind": "telepathy"})
        with pytest.raises(AdapterConfigError):
            build_engine("x", {"kind": "scripted"})
        with pytest.raises(AdapterConfigError):
            build_engine("x", {"kind": "http"})

    def test_bad_json(self, tmp_path):
        p = tmp_path / "e.json"
        p.write_text("{")
        with pytest.raises(AdapterConfigError):
            load_engines(str(p))


class _Handler(BaseHTTPRequestHandler):
    status = {}
    seen = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        _Handler.seen.append((self.path, dict(self.headers), body))
        code = _Handler.status.get(self.path, 200)
        if code != 200:
            self.send_response(code)
            self.end_headers()
            return
        out = {"data": {"translations": [{"translatedText": body["q"][::-1]}]}}
        raw = json.dumps(out).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.end_headers()
        self.wfile.write(raw)

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    srv = HTTPServer(("127.0.0.1", 0), _Handler)
    t = threading.Thread(target=srv.serve_forever, daemon=True)
    t.start()
    _Handler.status = {"/busy": 429, "/down": 503, "/bad": 400}
    _Handler.seen = []
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


class TestHttp:
    def _engine(self, url, path="/t"):
        return HttpEngine({
            "url": url + path,
            "headers": {"Content-Type": "application/json", "Authorization": "Bearer {{credential}}"},
            "credential_env": "QANOISE_TEST_KEY",
            "body_template": '{"q": "{{text}}", "source": "{{src}}", "target": "{{tgt}}"}',
            "response_path": "data.translations.0.translatedText",
            "timeout": 5,
        }, "http-test")

    def test_round_trip(self, server, monkeypatch):
        monkeypatch.setenv("QANOISE_TEST_KEY", "s3cret")
        eng = self._engine(server)
        assert translate('say "hi"', "en", "de", eng) == '"ih" yas'
        path, headers, body = _Handler.seen[0]
        assert headers["Authorization"] == "Bearer s3cret"
        assert body == {"q": 'say "hi"', "source": "en", "target": "de"}

    def test_missing_credential(self, server, monkeypatch):
        monkeypatch.delenv("QANOISE_TEST_KEY", raising=False)
        with pytest.raises(AdapterConfigError):
            translate("x", "en", "de", self._engine(server))

    @pytest.mark.parametrize("path,exc", [("/busy", RateLimitError), ("/down", TransportError),
                                          ("/bad", UnsupportedPairError)])
    def test_error_kinds(self, server, monkeypatch, path, exc):
        monkeypatch.setenv("QANOISE_TEST_KEY", "k")
        with pytest.raises(exc):
            call_engine(self._engine(server, path), EngineRequest(TRANSLATE, "x", "en", "de"),
                        retries=0)

    def test_unreachable(self):
        eng = HttpEngine({"url": "http://127.0.0.1:9/none", "response_path": "x", "timeout": 1})
        with pytest.raises(TransportError):
            call_engine(eng, EngineRequest(TRANSLATE, "x", "en", "de"), retries=0)

    def test_bad_response_path(self, server, monkeypatch):
        monkeypatch.setenv("QANOISE_TEST_KEY", "k")
        eng = self._engine(server)
        eng.response_path = "data.nothing"
        with pytest.raises(AdapterError):
            translate("x", "en", "de", eng)
