from dataclasses import dataclass, field
from importlib import resources

QWERTY_ROWS = ("qwertyuiop", "asdfghjkl", "zxcvbnm")
# Horizontal stagger of each row, in key widths, relative to the top row.
QWERTY_OFFSETS = (0.0, 0.25, 0.75)


@dataclass(frozen=True)
class KeyboardLayout:
    """Key rows with derived neighbour maps.

    ``row_neighbors`` only links keys that sit side by side in one row.
    ``physical_neighbors`` also links keys in adjacent rows whose centres
    are less than one key width apart horizontally, given ``offsets``.
    """

    rows: tuple = QWERTY_ROWS
    offsets: tuple = QWERTY_OFFSETS
    row_neighbors: dict = field(init=False, repr=False, compare=False)
    physical_neighbors: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(self.rows)
        offsets = tuple(self.offsets) if self.offsets else (0.0,) * len(rows)
        if len(offsets) != len(rows):
            raise ValueError("need one offset per row")
        seen = set()
        for row in rows:
            for key in row:
                if key in seen:
                    raise ValueError(f"key {key!r} appears twice in layout")
                seen.add(key)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "offsets", offsets)

        row_nb = {k: set() for k in seen}
        pos = {}
        for r, row in enumerate(rows):
            for i, key in enumerate(row):
                pos[key] = (r, i + offsets[r])
                if i + 1 < len(row):
                    row_nb[key].add(row[i + 1])
                    row_nb[row[i + 1]].add(key)
        phys = {k: set(v) for k, v in row_nb.items()}
        for a, (ra, xa) in pos.items():
            for b, (rb, xb) in pos.items():
                if abs(ra - rb) == 1 and abs(xa - xb) < 1.0:
                    phys[a].add(b)
        object.__setattr__(self, "row_neighbors", {k: frozenset(v) for k, v in row_nb.items()})
        object.__setattr__(self, "physical_neighbors", {k: frozenset(v) for k, v in phys.items()})

    def keys(self):
        return frozenset(self.row_neighbors)

    def row_neighbors_of(self, ch):
        """Sorted row-wise neighbours of ``ch`` (case-insensitive); empty if unknown."""
        return tuple(sorted(self.row_neighbors.get(ch.lower(), ())))

    def adjacent(self, a, b, row_only=False):
        table = self.row_neighbors if row_only else self.physical_neighbors
        return b.lower() in table.get(a.lower(), ())


def load_layout(path=None):
    """Read a layout file: one row per line, ``keys[<TAB>offset]``; ``#`` starts a comment.

    With no path the bundled QWERTY layout is returned.
    """
    if path is None:
        text = resources.files("qanoise.data").joinpath("qwerty.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    rows, offsets = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        rows.append(parts[0].lower())
        offsets.append(float(parts[1]) if len(parts) > 1 else 0.0)
    if not rows:
        raise ValueError(f"layout {path} has no rows")
    return KeyboardLayout(tuple(rows), tuple(offsets))


QWERTY = KeyboardLayout()
