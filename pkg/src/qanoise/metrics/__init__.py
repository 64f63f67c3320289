"""EM/F1 for QA predictions; CER, WER and BLEU for noisy text."""

from dataclasses import dataclass

from .bleu import corpus_bleu, corpus_bleu_details, tokenize_13a
from .errorrate import cer, char_errors, corpus_cer, corpus_wer, wer, word_errors
from .qa import QAScore, QuestionScore, aggregate, exact_match, qa_eval, qa_scores, token_f1


@dataclass(frozen=True)
class NoiseScore:
    cer: float
    wer: float
    bleu: float


def noise_score(hyps, refs, casefold=True, wer_strip_punct=True, cer_strip_punct=False):
    """Corpus CER, WER and BLEU of noisy ``hyps`` against clean ``refs``."""
    return NoiseScore(
        corpus_cer(hyps, refs, casefold, cer_strip_punct),
        corpus_wer(hyps, refs, casefold, wer_strip_punct),
        corpus_bleu(hyps, refs),
    )


__all__ = [
    "NoiseScore", "noise_score",
    "corpus_bleu", "corpus_bleu_details", "tokenize_13a",
    "cer", "char_errors", "corpus_cer", "corpus_wer", "wer", "word_errors",
    "QAScore", "QuestionScore", "aggregate", "exact_match", "qa_eval", "qa_scores", "token_f1",
]
