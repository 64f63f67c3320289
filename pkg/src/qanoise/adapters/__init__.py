"""Contracts and implementations for translation, TTS, ASR and spellcheck engines."""

from .base import (
    ASR,
    SPELLCHECK,
    TRANSLATE,
    TTS,
    AdapterConfigError,
    AdapterError,
    AuditLog,
    Engine,
    EngineRequest,
    EngineResponse,
    MissingAudioError,
    RateLimitError,
    TransportError,
    UnscriptedInputError,
    UnsupportedPairError,
    call_engine,
)
from .engines import (
    HttpEngine,
    MockEngine,
    ScriptedEngine,
    WordMapSpellchecker,
    build_engine,
    load_engines,
    load_script,
)
from .pipeline import back_translate, spellcheck, translate, tts_then_asr

__all__ = [
    "ASR", "SPELLCHECK", "TRANSLATE", "TTS",
    "AdapterConfigError", "AdapterError", "AuditLog", "Engine", "EngineRequest", "EngineResponse",
    "MissingAudioError", "RateLimitError", "TransportError", "UnscriptedInputError",
    "UnsupportedPairError", "call_engine",
    "HttpEngine", "MockEngine", "ScriptedEngine", "WordMapSpellchecker", "build_engine",
    "load_engines", "load_script",
    "back_translate", "spellcheck", "translate", "tts_then_asr",
]
