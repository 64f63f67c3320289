"""Command-line pipeline: ``qanoise <subcommand> [options]``.

Option values come from, in order of precedence: command-line flags, a JSON
``--config`` file (flat, or with a section per subcommand), built-in
defaults. Credentials only ever come from environment variables named in the
adapter config.
"""

import argparse
import hashlib
import json
import logging
import sys

from . import __version__

log = logging.getLogger("qanoise")

# Keys that never change output bytes and so stay out of the config hash.
_UNHASHED = {"jobs", "config", "verbose", "command", "out", "audit", "edits"}
# Input files are hashed by content, so moving a run to another directory keeps its hash.
_INPUT_FILES = {"base", "gold", "challenge", "predictions", "policies", "engines", "lexicon",
                "annotations", "train", "raw", "g2p", "weights", "labeled", "hyp", "ref"}

DEFAULTS = {
    "noise": {"kind": None, "prob": 0.25, "seed": 0, "param": [], "policies": None, "engines": None,
              "lexicon": None, "annotations": None, "audit": None, "retries": 3, "jobs": 1},
    "eval": {"predictions": None, "challenge": None, "out": None, "casefold": True,
             "wer_strip_punct": True, "cer_strip_punct": False},
    "textmetrics": {"out": None, "casefold": True, "wer_strip_punct": True, "cer_strip_punct": False},
    "repair": {"steps": "context", "mode": "content_word", "threshold": 0.5, "normalize": "max",
               "annotations": None, "engines": None, "spellchecker": None, "edits": None,
               "audit": None, "retries": 3, "jobs": 1},
    "augment": {"kind": None, "prob": 0.25, "seed": 0, "param": [], "policies": None, "engines": None,
                "lexicon": None, "annotations": None, "retries": 3, "jobs": 1},
    "filter-misspellings": {"audit": None, "g2p": None, "weights": None, "pron_threshold": 0.25,
                            "row_only": False, "categories": None},
    "stats": {"out": None, "casefold_diff": False},
    "stratify": {"challenge": None, "out": None},
    "calibrate-filter": {"g2p": None, "weights": None, "row_only": False, "categories": None, "out": None},
}


class CliError(Exception):
    """Bad invocation or configuration; exit status 2."""


# ---------------------------------------------------------------- plumbing

def _load_config(path, command):
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise CliError(f"config {path} must be a JSON object")
    flat = {k: v for k, v in cfg.items() if not isinstance(v, dict) or k not in DEFAULTS}
    flat.update(cfg.get(command, {}))
    return {k.replace("-", "_"): v for k, v in flat.items()}


def resolve(ns):
    """Merge flags over the config file over defaults into one dict."""
    given = {k: v for k, v in vars(ns).items() if k != "func"}
    command = given["command"]
    merged = dict(DEFAULTS.get(command, {}))
    if given.get("config"):
        cfg = _load_config(given["config"], command)
        unknown = set(cfg) - set(merged) - set(given) - _REQUIRED.get(command, set())
        if unknown:
            log.warning("ignoring unknown config keys: %s", ", ".join(sorted(unknown)))
        merged.update({k: v for k, v in cfg.items() if k not in unknown})
    merged.update(given)
    missing = [k for k in _REQUIRED.get(command, ()) if merged.get(k) is None]
    if missing:
        raise CliError(f"{command}: missing required option(s) " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return merged


def _file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def config_hash(opts):
    payload = {}
    for k, v in sorted(opts.items()):
        if k in _UNHASHED:
            continue
        payload[k] = _file_digest(v) if k in _INPUT_FILES and isinstance(v, str) else v
    blob = json.dumps(payload, sort_keys=True, default=str).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def run_meta(opts, seed=None):
    return {"tool": "qanoise", "version": __version__, "command": opts["command"],
            "config_hash": config_hash(opts), "seed": seed}


def header_lines(meta):
    return [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in meta.items()]


def _write_text(path, text, meta):
    lines = "".join(f"# {line}\n" for line in header_lines(meta))
    if path in (None, "-"):
        sys.stdout.write(lines + text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(lines + text)


def _read_lines(path):
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def _policies(opts):
    from .noisegen import NoisePolicy, load_policies

    if opts.get("policies"):
        if opts.get("kind"):
            raise CliError("give either --policies or --kind, not both")
        policies = load_policies(opts["policies"])
        if not policies:
            raise CliError(f"{opts['policies']}: no policies")
        return policies
    if not opts.get("kind"):
        raise CliError("a noise policy is required: --policies FILE or --kind KIND")
    params = {}
    for item in opts.get("param") or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise CliError(f"--param expects key=value, got {item!r}")
        try:
            params[key] = json.loads(value)
        except ValueError:
            params[key] = value
    if opts["kind"] == "key_swap" and "p" not in params:
        params["p"] = opts["prob"]
    return [NoisePolicy(opts["kind"], params, opts["seed"])]


def _noise_context(opts, base=None, audit=None):
    from .adapters import load_engines
    from .dataset import load_annotations
    from .noisegen import NoiseContext, TaggerProvider, load_lexicon

    engines = load_engines(opts["engines"]) if opts.get("engines") else {}
    lexicon = load_lexicon(opts["lexicon"]) if opts.get("lexicon") else None
    sidecar = None
    if opts.get("annotations"):
        texts = None
        if base is not None:
            texts = {q.qid: q.question for q in base.questions}
            texts.update({cid: c.text for cid, c in base.contexts.items()})
        sidecar = load_annotations(opts["annotations"], texts)
    return NoiseContext(lexicon=lexicon, taggers=TaggerProvider(sidecar), engines=engines,
                        audit=audit, retries=int(opts.get("retries", 3)))


# ---------------------------------------------------------------- subcommands

def cmd_noise(opts):
    from .adapters import AuditLog
    from .batch import noise_dataset
    from .dataset import load_squad, pair_challenge, save_challenge
    from .noisegen import check_policy

    base = load_squad(opts["base"])
    policies = _policies(opts)
    audit = AuditLog() if opts.get("audit") else None
    ctx = _noise_context(opts, base, audit)
    for p in policies:
        check_policy(p, ctx)
    noisy, flagged, failures = noise_dataset(base, policies, ctx, int(opts["jobs"]))
    seeds = [p.seed for p in policies]
    meta = run_meta(opts, seeds[0] if len(seeds) == 1 else seeds)
    meta.update({"interface": _interface(policies), "generator": "synthetic",
                 "policies": [p.to_dict() for p in policies], "flagged": flagged,
                 "failures": failures})
    challenge = pair_challenge(base, noisy, meta)
    save_challenge(challenge, opts["out"])
    if audit is not None:
        audit.write_tsv(opts["audit"])
    log.info("wrote %d noisy questions to %s (%d flagged, %d skipped)",
             len(challenge), opts["out"], len(flagged), len(failures))
    return 0


def _interface(policies):
    kinds = {p.kind for p in policies}
    if "tts_asr" in kinds:
        return "asr"
    if "back_translate" in kinds:
        return "mt"
    return "keyboard"


def _noise_report(score):
    return (f"CER\t{score.cer:.2f}\nWER\t{score.wer:.2f}\nBLEU\t{score.bleu:.2f}\n")


def cmd_eval(opts):
    from .dataset import load_challenge, load_predictions, load_squad
    from .metrics import noise_score, qa_eval

    gold = load_squad(opts["gold"])
    if bool(opts.get("predictions")) == bool(opts.get("challenge")):
        raise CliError("eval needs exactly one of --predictions or --challenge")
    if opts.get("predictions"):
        preds = load_predictions(opts["predictions"])
        extra = [qid for qid in preds if qid not in gold]
        if extra:
            log.warning("%d prediction(s) have qids not in the gold set; ignored", len(extra))
        score = qa_eval(preds, gold)
        report = (f"n\t{score.n}\nmissing\t{score.missing}\nunknown\t{len(extra)}\n"
                  f"EM\t{score.em:.2f}\nF1\t{score.f1:.2f}\n")
    else:
        challenge = load_challenge(gold, opts["challenge"])
        if not len(challenge):
            raise CliError(f"{opts['challenge']}: no questions")
        missing = len(gold) - len(challenge)
        if missing:
            log.warning("%d gold question(s) absent from the challenge set", missing)
        score = noise_score(challenge.noisy(), challenge.clean(), opts["casefold"],
                            opts["wer_strip_punct"], opts["cer_strip_punct"])
        report = f"n\t{len(challenge)}\nmissing\t{missing}\n" + _noise_report(score)
    _write_text(opts.get("out"), report, run_meta(opts))
    return 0


def cmd_textmetrics(opts):
    from .metrics import noise_score

    hyps, refs = _read_lines(opts["hyp"]), _read_lines(opts["ref"])
    if len(hyps) != len(refs):
        raise CliError(f"{len(hyps)} hypothesis lines but {len(refs)} reference lines")
    score = noise_score(hyps, refs, opts["casefold"], opts["wer_strip_punct"], opts["cer_strip_punct"])
    _write_text(opts.get("out"), f"n\t{len(hyps)}\n" + _noise_report(score), run_meta(opts))
    return 0


REPAIR_STEPS = ("qmark", "spellcheck", "context")


def cmd_repair(opts):
    from .adapters import AuditLog
    from .batch import map_ordered
    from .dataset import load_challenge, load_squad, pair_challenge, save_challenge
    from .repair import context_repair, restore_final_qmark, spellcheck_repair, write_edits

    base = load_squad(opts["base"])
    challenge = load_challenge(base, opts["challenge"])
    steps = [s.strip() for s in opts["steps"].split(",") if s.strip()]
    bad = [s for s in steps if s not in REPAIR_STEPS]
    if bad or not steps:
        raise CliError(f"--steps takes a comma list of {REPAIR_STEPS}, got {opts['steps']!r}")
    audit = AuditLog() if opts.get("audit") else None
    ctx = _noise_context(opts, base, audit)
    checker = None
    if "spellcheck" in steps:
        if not opts.get("spellchecker"):
            raise CliError("the spellcheck step needs --spellchecker ENGINE and --engines FILE")
        checker = ctx.engine(opts["spellchecker"], "spellcheck")

    def work(qid):
        text = challenge.pairs[qid][1]
        found = []
        for step in steps:
            if step == "qmark":
                text = restore_final_qmark(text)
            elif step == "spellcheck":
                text = spellcheck_repair(text, checker, qid, audit, ctx.retries)
            else:
                q = base[qid]
                text, found = context_repair(
                    text, base.contexts[q.context_id].text, opts["mode"], float(opts["threshold"]),
                    ctx.taggers.for_key(qid), ctx.taggers.for_key(q.context_id), qid, opts["normalize"])
        return text, found

    results = map_ordered(work, challenge.qids(), int(opts["jobs"]))
    repaired, edits = {}, []
    for qid, (text, found) in zip(challenge.qids(), results):
        repaired[qid] = text
        edits.extend(found)
    meta = run_meta(opts, challenge.provenance.get("seed"))
    meta.update({"steps": steps, "source": dict(challenge.provenance), "edits": len(edits)})
    for key in ("interface", "generator"):
        meta[key] = challenge.provenance.get(key, "unknown")
    save_challenge(pair_challenge(base, repaired, meta), opts["out"])
    if opts.get("edits"):
        write_edits(edits, opts["edits"], header_lines(run_meta(opts, meta["seed"])))
    if audit is not None:
        audit.write_tsv(opts["audit"])
    log.info("repaired %d questions with %d edit(s)", len(repaired), len(edits))
    return 0


def cmd_augment(opts):
    from .dataset import emit_augmented, load_squad, save_squad

    base = load_squad(opts["train"])
    policies = _policies(opts)
    ctx = _noise_context(opts, base)
    out = emit_augmented(base, policies, ctx, int(opts["jobs"]))
    meta = run_meta(opts, [p.seed for p in policies])
    meta["policies"] = [p.to_dict() for p in policies]
    save_squad(out, opts["out"], meta)
    log.info("wrote %d questions (%d original) to %s", len(out), len(base), opts["out"])
    return 0


def _filter_config(opts):
    from .misspell_filter import FilterConfig, load_phoneme_weights

    kw = {"row_only": bool(opts["row_only"])}
    if opts.get("weights"):
        kw["phoneme_weights"] = load_phoneme_weights(opts["weights"])
    if opts.get("categories"):
        cats = opts["categories"]
        kw["retained_categories"] = cats.split(",") if isinstance(cats, str) else cats
    if "pron_threshold" in opts:
        kw["pron_threshold"] = float(opts["pron_threshold"])
    return FilterConfig(**kw)


def cmd_filter_misspellings(opts):
    from .misspell_filter import filter_lexicon, load_raw_pairs, write_audit
    from .noisegen import save_lexicon
    from .textcore import load_g2p

    cfg = _filter_config(opts)
    g2p = load_g2p(opts["g2p"]) if opts.get("g2p") else None
    raw = load_raw_pairs(opts["raw"])
    lexicon, audit = filter_lexicon(raw, cfg, g2p)
    save_lexicon(lexicon, opts["out"])
    if opts.get("audit"):
        write_audit(audit, opts["audit"])
    kept = sum(v.retained for v in audit)
    print(f"pairs\t{len(audit)}\nretained\t{kept}\ndiscarded\t{len(audit) - kept}\n"
          f"words\t{len(lexicon)}\nmisspellings\t{lexicon.n_pairs()}")
    return 0


def cmd_stats(opts):
    from .analysis import noise_stats, write_noise_stats
    from .dataset import load_challenge, load_squad

    base = load_squad(opts["base"])
    challenge = load_challenge(base, opts["challenge"])
    if not len(challenge):
        raise CliError(f"{opts['challenge']}: no questions")
    stats = noise_stats(challenge, bool(opts["casefold_diff"]))
    if opts.get("out"):
        write_noise_stats(stats, opts["out"], header_lines(run_meta(opts)))
    print(f"n\t{stats.n}\nword_corruption\t{stats.word_corruption:.2f}\n"
          f"diff_ge1\t{stats.diff_ge1:.2f}\ndiff_ge2\t{stats.diff_ge2:.2f}\n" + _noise_report(stats.score), end="")
    return 0


def _predicate(spec):
    from .analysis import contains_numeral, contains_token, flagged, load_flags

    name, _, arg = spec.partition(":")
    if name == "contains_token" and arg:
        return contains_token(arg)
    if name == "contains_numeral" and not arg:
        return contains_numeral()
    if name == "flags" and arg:
        return flagged(load_flags(arg), f"flags({arg})")
    raise CliError(f"bad predicate {spec!r}; use contains_token:TOKEN, contains_numeral or flags:FILE")


def cmd_stratify(opts):
    from .analysis import stratify, stratum_tsv
    from .dataset import load_challenge, load_predictions, load_squad

    gold = load_squad(opts["gold"])
    predicate = _predicate(opts["predicate"])
    preds = load_predictions(opts["predictions"])
    noisy = load_challenge(gold, opts["challenge"]).noisy_map() if opts.get("challenge") else None
    reports = stratify(gold, preds, predicate, noisy)
    _write_text(opts.get("out"), stratum_tsv(reports), run_meta(opts))
    return 0


def cmd_calibrate_filter(opts):
    from .misspell_filter import calibrate, load_labeled_sample
    from .textcore import load_g2p

    cfg = _filter_config(opts)
    g2p = load_g2p(opts["g2p"]) if opts.get("g2p") else None
    labeled = load_labeled_sample(opts["labeled"])
    best_t, best_a, table = calibrate(labeled, cfg, g2p)
    body = "threshold\tagreement\n" + "".join(f"{t:.4f}\t{a:.2f}\n" for t, a in table)
    body += f"best_threshold\t{best_t:.4f}\nbest_agreement\t{best_a:.2f}\n"
    _write_text(opts.get("out"), body, run_meta(opts))
    return 0


# ---------------------------------------------------------------- parser

_REQUIRED = {
    "noise": {"base", "out"},
    "eval": {"gold"},
    "textmetrics": {"hyp", "ref"},
    "repair": {"base", "challenge", "out"},
    "augment": {"train", "out"},
    "filter-misspellings": {"raw", "out"},
    "stats": {"base", "challenge"},
    "stratify": {"gold", "predictions", "predicate"},
    "calibrate-filter": {"labeled"},
}


def _policy_flags(p):
    p.add_argument("--policies", help="JSON list of noise policies")
    p.add_argument("--kind", help="single policy kind (alternative to --policies)")
    p.add_argument("--prob", type=float, help="per-word corruption probability for --kind (default 0.25)")
    p.add_argument("--seed", type=int, help="seed for --kind (default 0)")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="extra policy parameter (repeatable)")
    p.add_argument("--engines", help="adapter config JSON")
    p.add_argument("--lexicon", help="misspelling lexicon TSV")
    p.add_argument("--annotations", help="token label sidecar TSV")
    p.add_argument("--retries", type=int, help="adapter retries before skipping a record (default 3)")
    p.add_argument("--jobs", type=int, help="worker threads (default 1)")


def _metric_flags(p):
    p.add_argument("--no-casefold", dest="casefold", action="store_false", help="keep case for CER/WER")
    p.add_argument("--wer-keep-punct", dest="wer_strip_punct", action="store_false",
                   help="do not strip punctuation before WER")
    p.add_argument("--cer-strip-punct", dest="cer_strip_punct", action="store_true",
                   help="strip punctuation before CER")


def _filter_flags(p):
    p.add_argument("--g2p", help="pronunciation table TSV (word<TAB>phonemes)")
    p.add_argument("--weights", help="phoneme substitution costs TSV")
    p.add_argument("--row-only", action="store_true", help="KeySwap only for same-row neighbours")
    p.add_argument("--categories", help="comma list of retained error categories")


def build_parser():
    parser = argparse.ArgumentParser(prog="qanoise", description="Interface-noise challenge sets for QA.")
    parser.add_argument("--version", action="version", version=f"qanoise {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file of option values (flags win)")
        p.set_defaults(func=func)
        return p

    p = add("noise", cmd_noise, "build a challenge set from a base dataset")
    p.add_argument("--base", help="SQuAD-format JSON")
    p.add_argument("--out", help="challenge sidecar TSV to write")
    p.add_argument("--audit", help="engine-call audit TSV")
    _policy_flags(p)

    p = add("eval", cmd_eval, "EM/F1 of predictions, or CER/WER/BLEU of a challenge set")
    p.add_argument("--gold", help="SQuAD-format JSON")
    p.add_argument("--predictions", help="JSON qid -> answer")
    p.add_argument("--challenge", help="challenge sidecar TSV")
    p.add_argument("--out", help="report TSV (default stdout)")
    _metric_flags(p)

    p = add("textmetrics", cmd_textmetrics, "CER/WER/BLEU of line-aligned text files")
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--out")
    _metric_flags(p)

    p = add("repair", cmd_repair, "repair noisy questions")
    p.add_argument("--base")
    p.add_argument("--challenge")
    p.add_argument("--out", help="repaired challenge sidecar")
    p.add_argument("--steps", help="comma list of qmark, spellcheck, context (default context)")
    p.add_argument("--mode", choices=("content_word", "named_entity"))
    p.add_argument("--threshold", type=float, help="max normalized distance (default 0.5)")
    p.add_argument("--normalize", choices=("max", "reference"))
    p.add_argument("--annotations")
    p.add_argument("--engines")
    p.add_argument("--spellchecker", help="engine name for the spellcheck step")
    p.add_argument("--edits", help="edits log TSV")
    p.add_argument("--audit")
    p.add_argument("--retries", type=int)
    p.add_argument("--jobs", type=int)

    p = add("augment", cmd_augment, "training set plus noisy copies")
    p.add_argument("--train")
    p.add_argument("--out")
    _policy_flags(p)

    p = add("filter-misspellings", cmd_filter_misspellings, "keep keyboard-typo misspelling pairs")
    p.add_argument("--raw", help="word<TAB>misspelling TSV or misspelling->word list")
    p.add_argument("--out", help="filtered lexicon TSV")
    p.add_argument("--audit", help="per-pair verdict TSV")
    p.add_argument("--pron-threshold", type=float, help="min normalized phoneme distance (default 0.25)")
    _filter_flags(p)

    p = add("stats", cmd_stats, "noise statistics of a challenge set")
    p.add_argument("--base")
    p.add_argument("--challenge")
    p.add_argument("--out", help="per-question TSV")
    p.add_argument("--casefold-diff", action="store_true", help="ignore case in character differences")

    p = add("stratify", cmd_stratify, "scores split by a question predicate")
    p.add_argument("--gold")
    p.add_argument("--predictions")
    p.add_argument("--predicate", help="contains_token:TOKEN | contains_numeral | flags:FILE")
    p.add_argument("--challenge", help="evaluate the predicate on these noisy questions")
    p.add_argument("--out")

    p = add("calibrate-filter", cmd_calibrate_filter, "sweep the pronunciation threshold")
    p.add_argument("--labeled", help="word<TAB>misspelling<TAB>interface|non-interface")
    p.add_argument("--out")
    _filter_flags(p)
    return parser


def main(argv=None):
    from .adapters import AdapterConfigError, AdapterError
    from .dataset import DatasetError
    from .noisegen import PolicyError

    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        opts = resolve(ns)
        return ns.func(opts)
    except (CliError, PolicyError, AdapterConfigError) as exc:
        print(f"qanoise {ns.command}: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, AdapterError, OSError, ValueError, KeyError) as exc:
        print(f"qanoise {ns.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
