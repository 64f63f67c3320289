"""Declarative noise policies and their application to one question."""

import hashlib
import json
from dataclasses import dataclass, field

from ..adapters import AdapterConfigError, back_translate, tts_then_asr
from ..textcore import QWERTY
from .keyboard import key_swap_noise
from .misspell import inject_misspellings
from .numerals import spell_out_numerals
from .perturb import drop_words, ne_placeholder, strip_final_qmark, strip_punctuation, targeted_perturb
from .tagger import TaggerProvider

GENERATOR_KINDS = (
    "key_swap", "misspell_lexicon", "strip_punct", "strip_final_qmark",
    "perturb_function_words", "perturb_content_words", "perturb_common_misspelled",
    "drop_function_words", "drop_content_words", "ne_placeholder", "spell_out_numerals",
)
ADAPTER_KINDS = ("back_translate", "tts_asr")
KINDS = GENERATOR_KINDS + ADAPTER_KINDS

STOCHASTIC = frozenset({
    "key_swap", "misspell_lexicon", "perturb_function_words", "perturb_content_words",
    "perturb_common_misspelled", "ne_placeholder",
})
_PROB_PARAMS = ("p",)


class PolicyError(ValueError):
    pass


def derive_seed(seed, qid):
    """Per-record seed from (global seed, qid); independent of batch order."""
    digest = hashlib.blake2b(f"{seed}\x1f{qid}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class NoisePolicy:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = None
    name: str = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PolicyError(f"unknown policy kind {self.kind!r}; expected one of {KINDS}")
        for key in _PROB_PARAMS:
            if key in self.params and not 0.0 <= float(self.params[key]) <= 1.0:
                raise PolicyError(f"{self.kind}: {key} must be in [0, 1], got {self.params[key]}")
        if self.kind in STOCHASTIC and self.seed is None:
            raise PolicyError(f"{self.kind} is stochastic and needs a seed")
        if self.name is None:
            object.__setattr__(self, "name", self.kind)

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, obj):
        unknown = set(obj) - {"name", "kind", "params", "seed"}
        if unknown:
            raise PolicyError(f"unknown policy fields {sorted(unknown)}")
        if "kind" not in obj:
            raise PolicyError("policy needs a 'kind'")
        return cls(obj["kind"], dict(obj.get("params", {})), obj.get("seed"), obj.get("name"))


def load_policies(path):
    """JSON file holding a list of policies, or ``{"policies": [...]}``."""
    with open(path, encoding="utf-8") as f:
        obj = json.load(f)
    if isinstance(obj, dict):
        obj = obj.get("policies")
    if not isinstance(obj, list):
        raise PolicyError(f"{path}: expected a list of policies")
    policies = [NoisePolicy.from_dict(p) for p in obj]
    names = [p.name for p in policies]
    if len(set(names)) != len(names):
        raise PolicyError(f"{path}: policy names must be unique, got {names}")
    return policies


@dataclass
class NoiseContext:
    """Shared resources a policy may need."""

    layout: object = QWERTY
    lexicon: object = None
    taggers: TaggerProvider = field(default_factory=TaggerProvider)
    engines: dict = field(default_factory=dict)
    audit: object = None
    retries: int = 3

    def engine(self, name, kind):
        if name is None:
            raise AdapterConfigError(f"{kind} policy needs an engine name")
        if name not in self.engines:
            raise AdapterConfigError(f"{kind} policy refers to engine {name!r}, which is not configured")
        return self.engines[name]


def check_policy(policy, ctx):
    """Fail early on missing resources instead of once per record."""
    p = policy.params
    if policy.kind == "misspell_lexicon" or policy.kind == "perturb_common_misspelled" \
            or p.get("mechanism") == "misspell":
        if ctx.lexicon is None:
            raise PolicyError(f"{policy.name}: needs a misspelling lexicon")
    if policy.kind == "back_translate":
        ctx.engine(p.get("engine"), policy.kind)
    if policy.kind == "tts_asr":
        ctx.engine(p.get("tts"), policy.kind)
        ctx.engine(p.get("asr"), policy.kind)


def apply_policy(policy, text, qid, ctx):
    """Apply one policy to one question; returns ``(text, flagged)``.

    Adapter errors propagate; callers decide whether to skip the record.
    """
    kind, p = policy.kind, policy.params
    seed = derive_seed(policy.seed, qid) if policy.seed is not None else 0
    tagger = ctx.taggers.for_key(qid)
    if kind == "key_swap":
        return key_swap_noise(text, float(p.get("p", 0.25)), ctx.layout, seed,
                              int(p.get("min_word_len", 1))), False
    if kind == "misspell_lexicon":
        return inject_misspellings(text, ctx.lexicon, float(p.get("p", 1.0)), seed), False
    if kind == "strip_punct":
        return strip_punctuation(text), False
    if kind == "strip_final_qmark":
        return strip_final_qmark(text), False
    if kind.startswith("perturb_"):
        word_class = {"perturb_function_words": "function", "perturb_content_words": "content",
                      "perturb_common_misspelled": "common_misspelled"}[kind]
        default = "misspell" if word_class == "common_misspelled" else "key_swap"
        out = targeted_perturb(text, word_class, p.get("mechanism", default), tagger, seed,
                               ctx.layout, ctx.lexicon)
        return out, False
    if kind == "drop_function_words":
        return drop_words(text, "function", tagger), False
    if kind == "drop_content_words":
        return drop_words(text, "content", tagger), False
    if kind == "ne_placeholder":
        types = frozenset(p.get("types", ("PER", "LOC", "ORG")))
        return tuple(ne_placeholder(text, tagger, seed, types))
    if kind == "spell_out_numerals":
        return tuple(spell_out_numerals(text, bool(p.get("year_rule", True))))
    if kind == "back_translate":
        engine = ctx.engine(p.get("engine"), kind)
        return back_translate(text, p.get("pivot", "de"), engine, p.get("src", "en"), qid,
                              ctx.audit, ctx.retries), False
    if kind == "tts_asr":
        return tts_then_asr(text, ctx.engine(p.get("tts"), kind), ctx.engine(p.get("asr"), kind),
                            qid, ctx.audit, ctx.retries), False
    raise PolicyError(f"unhandled policy kind {kind!r}")


def apply_policies(policies, text, qid, ctx):
    """Compose ``policies`` left to right; flagged if any step flagged."""
    flagged = False
    for policy in policies:
        text, f = apply_policy(policy, text, qid, ctx)
        flagged = flagged or f
    return text, flagged
