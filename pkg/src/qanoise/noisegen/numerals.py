import re

from .perturb import Perturbed

_ONES = (
    "zero one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen"
).split()
_TENS = "_ _ twenty thirty forty fifty sixty seventy eighty ninety".split()
_SCALES = ((10**12, "trillion"), (10**9, "billion"), (10**6, "million"), (1000, "thousand"))

MAX_DIGITS = 15
YEAR_RANGE = (1100, 2099)

_NUMBER = re.compile(r"\d+(?:,\d{3})*(?:\.\d+)?")


def _below_hundred(n):
    if n < 20:
        return _ONES[n]
    tens, ones = divmod(n, 10)
    return _TENS[tens] + ("-" + _ONES[ones] if ones else "")


def _below_thousand(n):
    hundreds, rest = divmod(n, 100)
    parts = []
    if hundreds:
        parts.append(_ONES[hundreds] + " hundred")
    if rest or not hundreds:
        parts.append(_below_hundred(rest))
    return " ".join(parts)


def int_to_words(n):
    """American English cardinal for ``0 <= n < 10**15``, without "and"."""
    if n < 0 or n >= 10**MAX_DIGITS:
        raise ValueError(f"out of range: {n}")
    if n < 1000:
        return _below_thousand(n)
    parts = []
    for scale, name in _SCALES:
        if n >= scale:
            q, n = divmod(n, scale)
            parts.append(f"{_below_thousand(q)} {name}")
    if n:
        parts.append(_below_thousand(n))
    return " ".join(parts)


def year_to_words(n):
    """Read a year in the usual paired way: 1866 -> "eighteen sixty-six"."""
    hi, lo = divmod(n, 100)
    if lo == 0:
        return int_to_words(n) if hi % 10 == 0 else f"{_below_hundred(hi)} hundred"
    if lo < 10:
        if 2000 <= n <= 2009:
            return int_to_words(n)
        return f"{_below_hundred(hi)} oh {_ONES[lo]}"
    return f"{_below_hundred(hi)} {_below_hundred(lo)}"


def _digits(s):
    return " ".join(_ONES[int(d)] for d in s)


def number_to_words(token, year_rule=True):
    """Spell out one numeral string; ``None`` if it has more than 15 digits."""
    whole, _, frac = token.partition(".")
    whole = whole.replace(",", "")
    if len(whole) + len(frac) > MAX_DIGITS:
        return None
    if len(whole) > 1 and whole.startswith("0"):
        words = _digits(whole)
    else:
        n = int(whole)
        plain = "," not in token and not frac and len(whole) == 4
        if year_rule and plain and YEAR_RANGE[0] <= n <= YEAR_RANGE[1]:
            words = year_to_words(n)
        else:
            words = int_to_words(n)
    if frac:
        words += " point " + _digits(frac)
    return words


def spell_out_numerals(text, year_rule=True):
    """Replace every numeral in ``text`` by its English words.

    Comma-grouped thousands and decimal fractions are read as one number.
    Numerals longer than 15 digits stay as digits and set ``flagged``.
    """
    flagged = False

    def repl(m):
        nonlocal flagged
        words = number_to_words(m.group(), year_rule)
        if words is None:
            flagged = True
            return m.group()
        return words

    return Perturbed(_NUMBER.sub(repl, text), flagged)
