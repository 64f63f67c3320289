import logging

from .base import ASR, SPELLCHECK, TRANSLATE, TTS, EngineRequest, call_engine

log = logging.getLogger(__name__)


def translate(text, src_lang, tgt_lang, engine, qid=None, audit=None, retries=3):
    """Engine output for ``text`` translated ``src_lang`` -> ``tgt_lang``, verbatim."""
    req = EngineRequest(TRANSLATE, text, src_lang, tgt_lang, qid)
    return call_engine(engine, req, audit, retries).payload


def back_translate(text, pivot_lang="de", engine=None, src_lang="en", qid=None, audit=None, retries=3):
    """Round trip ``src_lang`` -> ``pivot_lang`` -> ``src_lang``; both hops go to the audit log."""
    pivot = translate(text, src_lang, pivot_lang, engine, qid, audit, retries)
    log.debug("back-translation %s: %r -> %r", qid, text, pivot)
    return translate(pivot, pivot_lang, src_lang, engine, qid, audit, retries)


def tts_then_asr(text, tts, asr, qid=None, audit=None, retries=3):
    """Synthesize ``text`` with ``tts`` and transcribe the audio with ``asr``.

    The audio path produced by TTS is the ASR request payload, so it lands
    in the audit log alongside the transcript's request hash.
    """
    audio = call_engine(tts, EngineRequest(TTS, text, qid=qid), audit, retries).payload
    return call_engine(asr, EngineRequest(ASR, audio, qid=qid), audit, retries).payload


def spellcheck(text, engine, qid=None, audit=None, retries=3):
    return call_engine(engine, EngineRequest(SPELLCHECK, text, qid=qid), audit, retries).payload
