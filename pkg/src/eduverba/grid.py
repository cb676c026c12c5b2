"""Crossword layout assembly from curated keyword-clue pairs.

The assembler runs a backtracking search over loosely interlocked
("educational style") layouts: the first word sits centrally Across and
every later word must cross an existing one at a shared letter. At each
search node every remaining word is branched over, its candidate
placements ordered by score (crossings descending, compactness ascending,
hash tie-break); words that never fit degrade the result into an
``unplaced`` remainder instead of failing it. The best layout found
maximizes placed-word count, then crossing count, then compactness.

On small inputs the search is exhaustive; a deterministic expansion budget
caps the work on larger ones, so identical inputs and seeds always produce
identical layouts.
"""

from __future__ import annotations

import enum
import hashlib
import json
import time
from dataclasses import dataclass, replace
from html import escape
from pathlib import Path
from typing import Sequence

from .errors import NoEntries, NonAlphabetic, WordTooLong


class Direction(enum.Enum):
    ACROSS = "Across"
    DOWN = "Down"

    def delta(self) -> tuple[int, int]:
        return (0, 1) if self is Direction.ACROSS else (1, 0)


@dataclass(frozen=True)
class Placement:
    word: str
    row: int
    col: int
    direction: Direction
    clue: str
    number: int | None = None

    def cells(self) -> list[tuple[int, int]]:
        dr, dc = self.direction.delta()
        return [(self.row + dr * i, self.col + dc * i)
                for i in range(len(self.word))]

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "row": self.row,
            "col": self.col,
            "direction": self.direction.value,
            "clue": self.clue,
            "number": self.number,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Placement":
        return cls(
            word=data["word"], row=data["row"], col=data["col"],
            direction=Direction(data["direction"]), clue=data.get("clue", ""),
            number=data.get("number"),
        )


@dataclass(frozen=True)
class CrosswordLayout:
    rows: int
    cols: int
    placements: tuple[Placement, ...]
    unplaced: tuple[tuple[str, str], ...] = ()

    def cell_letters(self) -> dict[tuple[int, int], str]:
        letters: dict[tuple[int, int], str] = {}
        for placement in self.placements:
            for (cell, letter) in zip(placement.cells(), placement.word):
                letters[cell] = letter
        return letters

    def crossing_count(self) -> int:
        seen: set[tuple[int, int]] = set()
        crossings = 0
        for placement in self.placements:
            for cell in placement.cells():
                if cell in seen:
                    crossings += 1
                seen.add(cell)
        return crossings

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "placements": [p.to_dict() for p in self.placements],
            "unplaced": [list(pair) for pair in self.unplaced],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CrosswordLayout":
        return cls(
            rows=data["rows"], cols=data["cols"],
            placements=tuple(Placement.from_dict(p) for p in data["placements"]),
            unplaced=tuple((k, c) for k, c in data.get("unplaced", [])),
        )


def normalize_answer(keyword: str) -> str:
    """Uppercase grid form of a keyword: spaces removed, letters only."""
    word = keyword.replace(" ", "").upper()
    if not word or not all(ch.isalpha() for ch in word):
        raise NonAlphabetic(keyword)
    return word


@dataclass(frozen=True)
class AssembleConfig:
    max_rows: int = 15
    max_cols: int = 15
    seed: int = 0
    # Deterministic search budget (branch expansions); None exhausts the
    # space, which is only advisable for small inputs.
    max_expansions: int | None = 50_000
    # Optional wall-clock cap; costs determinism across machines, so off by
    # default.
    time_budget: float | None = None
    # Permit incidental adjacent letter runs (relaxed educational style).
    allow_adjacent: bool = False


def _tiebreak(seed: int, word: str, row: int, col: int, direction: Direction) -> int:
    key = f"{seed}:{word}:{row}:{col}:{direction.value}"
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


class _SearchState:
    """Mutable grid state shared along one DFS path."""

    def __init__(self, config: AssembleConfig):
        self.config = config
        self.letters: dict[tuple[int, int], str] = {}
        self.covered: dict[tuple[int, int], set[Direction]] = {}
        self.placed: list[Placement] = []
        self.crossings = 0
        self.min_r = self.min_c = 10 ** 9
        self.max_r = self.max_c = -1

    def area_with(self, cells: Sequence[tuple[int, int]]) -> int:
        min_r = min(self.min_r, min(r for r, _ in cells))
        max_r = max(self.max_r, max(r for r, _ in cells))
        min_c = min(self.min_c, min(c for _, c in cells))
        max_c = max(self.max_c, max(c for _, c in cells))
        return (max_r - min_r + 1) * (max_c - min_c + 1)

    def try_place(self, word: str, row: int, col: int,
                  direction: Direction) -> int | None:
        """Crossing count if the placement is legal here, else None."""
        config = self.config
        dr, dc = direction.delta()
        end_r = row + dr * (len(word) - 1)
        end_c = col + dc * (len(word) - 1)
        if row < 0 or col < 0 or end_r >= config.max_rows or end_c >= config.max_cols:
            return None
        if (row - dr, col - dc) in self.letters:
            return None
        if (end_r + dr, end_c + dc) in self.letters:
            return None
        crossings = 0
        for i, ch in enumerate(word):
            cell = (row + dr * i, col + dc * i)
            existing = self.letters.get(cell)
            if existing is not None:
                if existing != ch or direction in self.covered[cell]:
                    return None
                crossings += 1
            elif not config.allow_adjacent:
                # dc/dr swap gives the two cells beside this one,
                # perpendicular to the word's direction
                if (cell[0] + dc, cell[1] + dr) in self.letters:
                    return None
                if (cell[0] - dc, cell[1] - dr) in self.letters:
                    return None
        if self.placed and crossings == 0:
            return None
        return crossings

    def place(self, placement: Placement, crossings: int) -> tuple:
        saved = (self.min_r, self.min_c, self.max_r, self.max_c, crossings)
        for (cell, letter) in zip(placement.cells(), placement.word):
            if cell not in self.letters:
                self.letters[cell] = letter
                self.covered[cell] = set()
            self.covered[cell].add(placement.direction)
            self.min_r = min(self.min_r, cell[0])
            self.max_r = max(self.max_r, cell[0])
            self.min_c = min(self.min_c, cell[1])
            self.max_c = max(self.max_c, cell[1])
        self.placed.append(placement)
        self.crossings += crossings
        return saved

    def unplace(self, placement: Placement, saved: tuple) -> None:
        self.placed.pop()
        for cell in placement.cells():
            self.covered[cell].discard(placement.direction)
            if not self.covered[cell]:
                del self.covered[cell]
                del self.letters[cell]
        self.min_r, self.min_c, self.max_r, self.max_c, crossings = saved
        self.crossings -= crossings

    def candidates(self, word: str) -> list[tuple[int, int, int, Direction]]:
        """Legal placements for one word, best scored first.

        On an empty grid the single candidate is the central Across
        placement (standing the word up if the board is too narrow);
        afterwards every candidate crosses an existing word.
        """
        config = self.config
        if not self.letters:
            row, col = config.max_rows // 2, (config.max_cols - len(word)) // 2
            if self.try_place(word, row, col, Direction.ACROSS) is not None:
                return [(0, row, col, Direction.ACROSS)]
            row, col = (config.max_rows - len(word)) // 2, config.max_cols // 2
            if self.try_place(word, row, col, Direction.DOWN) is not None:
                return [(0, row, col, Direction.DOWN)]
            return []
        found = []
        seen: set[tuple[int, int, Direction]] = set()
        for (r, c), letter in self.letters.items():
            for direction in (Direction.ACROSS, Direction.DOWN):
                if direction in self.covered[(r, c)]:
                    continue
                dr, dc = direction.delta()
                for i, ch in enumerate(word):
                    if ch != letter:
                        continue
                    row, col = r - dr * i, c - dc * i
                    if (row, col, direction) in seen:
                        continue
                    seen.add((row, col, direction))
                    crossings = self.try_place(word, row, col, direction)
                    if crossings is not None:
                        found.append((crossings, row, col, direction))
        def sort_key(cand):
            crossings, row, col, direction = cand
            dr, dc = direction.delta()
            cells = [(row + dr * i, col + dc * i) for i in range(len(word))]
            return (
                -crossings,
                self.area_with(cells),
                _tiebreak(self.config.seed, word, row, col, direction),
            )
        found.sort(key=sort_key)
        return found


def assemble(
    entries: Sequence[tuple[str, str]],
    config: AssembleConfig | None = None,
) -> CrosswordLayout:
    """Assemble (keyword, clue) pairs into a numbered crossword layout.

    Keywords are normalized to grid words first. Words shorter than three
    letters cannot appear on a grid and land in ``unplaced`` untried, as do
    words the search cannot interlock. A word that cannot fit the board in
    either direction raises WordTooLong.
    """
    config = config or AssembleConfig()
    if not entries:
        raise NoEntries("assemble needs at least one entry")

    normalized: list[tuple[str, str, str]] = []  # (grid word, keyword, clue)
    too_short: list[tuple[str, str]] = []
    for keyword, clue in entries:
        word = normalize_answer(keyword)
        if len(word) > max(config.max_rows, config.max_cols):
            raise WordTooLong(f"{keyword!r} ({len(word)} letters)")
        if len(word) < 3:
            too_short.append((keyword, clue))
        else:
            normalized.append((word, keyword, clue))
    if not normalized:
        raise NoEntries("no entry survives normalization")

    # Longest first, input order on ties; the seed only affects placement
    # tie-breaks, so the word a user lists first wins equal contests.
    order = sorted(range(len(normalized)),
                   key=lambda i: (-len(normalized[i][0]), i))
    words = [normalized[i] for i in order]

    state = _SearchState(config)
    deadline = (time.monotonic() + config.time_budget
                if config.time_budget else None)
    budget = [config.max_expansions if config.max_expansions is not None
              else -1]
    visited: set[frozenset] = set()
    best: dict = {"score": None, "placements": [], "remaining": list(range(len(words)))}

    def snapshot(remaining: tuple[int, ...]) -> None:
        if not state.placed:
            return
        score = (len(state.placed), state.crossings,
                 -(state.max_r - state.min_r + 1) * (state.max_c - state.min_c + 1))
        if best["score"] is None or score > best["score"]:
            best["score"] = score
            best["placements"] = list(state.placed)
            best["remaining"] = list(remaining)

    def out_of_budget() -> bool:
        if budget[0] == 0:
            return True
        return deadline is not None and time.monotonic() > deadline

    def dfs(remaining: tuple[int, ...], grid_key: frozenset) -> None:
        # Branching over every remaining word at every node makes the search
        # order-free: a word may be placed late, once its crossing exists.
        snapshot(remaining)
        if not remaining or out_of_budget():
            return
        if best["score"] is not None:
            if len(state.placed) + len(remaining) < best["score"][0]:
                return
        if grid_key in visited:
            return  # same partial grid reached through another order
        visited.add(grid_key)
        for position, index in enumerate(remaining):
            word, _, clue = words[index]
            rest = remaining[:position] + remaining[position + 1:]
            for crossings, row, col, direction in state.candidates(word):
                if out_of_budget():
                    return
                if budget[0] > 0:
                    budget[0] -= 1
                placement = Placement(word=word, row=row, col=col,
                                      direction=direction, clue=clue)
                saved = state.place(placement, crossings)
                dfs(rest, grid_key | {(index, row, col, direction.value)})
                state.unplace(placement, saved)

    dfs(tuple(range(len(words))), frozenset())

    placements = best["placements"]
    unplaced = list(too_short)
    for index in sorted(best["remaining"]):
        _, keyword, clue = words[index]
        unplaced.append((keyword, clue))

    layout = _trim(placements, unplaced, config)
    return number_cells(layout)[0]


def _trim(
    placements: list[Placement],
    unplaced: list[tuple[str, str]],
    config: AssembleConfig,
) -> CrosswordLayout:
    """Translate to the bounding box and freeze the layout."""
    if not placements:
        return CrosswordLayout(rows=0, cols=0, placements=(),
                               unplaced=tuple(unplaced))
    cells = [cell for p in placements for cell in p.cells()]
    min_r = min(r for r, _ in cells)
    min_c = min(c for _, c in cells)
    max_r = max(r for r, _ in cells)
    max_c = max(c for _, c in cells)
    shifted = tuple(
        replace(p, row=p.row - min_r, col=p.col - min_c) for p in placements)
    return CrosswordLayout(
        rows=max_r - min_r + 1,
        cols=max_c - min_c + 1,
        placements=shifted,
        unplaced=tuple(unplaced),
    )


def number_cells(
    layout: CrosswordLayout,
) -> tuple[CrosswordLayout, list[tuple[int, str]], list[tuple[int, str]]]:
    """Assign standard crossword numbers by row-major scan of start cells.

    Returns the renumbered layout plus (number, clue) lists for the Across
    and Down placements, each sorted ascending.
    """
    starts: dict[tuple[int, int], list[Placement]] = {}
    for placement in layout.placements:
        starts.setdefault((placement.row, placement.col), []).append(placement)
    numbers: dict[tuple[int, int], int] = {}
    counter = 0
    for row in range(layout.rows):
        for col in range(layout.cols):
            if (row, col) in starts:
                counter += 1
                numbers[(row, col)] = counter
    renumbered = tuple(
        replace(p, number=numbers[(p.row, p.col)]) for p in layout.placements)
    result = CrosswordLayout(rows=layout.rows, cols=layout.cols,
                             placements=renumbered, unplaced=layout.unplaced)
    across = sorted(
        (p.number, p.clue) for p in renumbered if p.direction is Direction.ACROSS)
    down = sorted(
        (p.number, p.clue) for p in renumbered if p.direction is Direction.DOWN)
    return result, across, down


def validate_layout(
    layout: CrosswordLayout, allow_adjacent: bool = False
) -> list[str]:
    """Invariant check; returns a list of human-readable problems."""
    problems: list[str] = []
    letters: dict[tuple[int, int], str] = {}
    by_direction: dict[Direction, set[tuple[int, int]]] = {
        Direction.ACROSS: set(), Direction.DOWN: set()}
    for placement in layout.placements:
        word = placement.word
        if len(word) < 3:
            problems.append(f"word too short on grid: {word!r}")
        if not word.isalpha() or word != word.upper():
            problems.append(f"word not normalized: {word!r}")
        for (cell, letter) in zip(placement.cells(), word):
            row, col = cell
            if not (0 <= row < layout.rows and 0 <= col < layout.cols):
                problems.append(f"cell {cell} outside {layout.rows}x{layout.cols}")
            if cell in by_direction[placement.direction]:
                problems.append(
                    f"two {placement.direction.value} words share cell {cell}")
            by_direction[placement.direction].add(cell)
            if cell in letters and letters[cell] != letter:
                problems.append(
                    f"conflicting letters at {cell}: "
                    f"{letters[cell]} vs {letter}")
            letters[cell] = letter
    if not allow_adjacent:
        problems.extend(_run_problems(layout, letters))
    return problems


def _run_problems(
    layout: CrosswordLayout, letters: dict[tuple[int, int], str]
) -> list[str]:
    """Maximal filled runs of length >= 2 must coincide with placements."""
    spans = {
        (p.row, p.col, p.direction, len(p.word)) for p in layout.placements}
    problems = []
    for direction in (Direction.ACROSS, Direction.DOWN):
        dr, dc = direction.delta()
        for cell in letters:
            prev = (cell[0] - dr, cell[1] - dc)
            if prev in letters:
                continue  # not the start of a maximal run
            length = 0
            cursor = cell
            while cursor in letters:
                length += 1
                cursor = (cursor[0] + dr, cursor[1] + dc)
            if length >= 2 and (cell[0], cell[1], direction, length) not in spans:
                problems.append(
                    f"incidental {direction.value} letter run of {length} "
                    f"at {cell}")
    return problems


# --- rendering ----------------------------------------------------------------

BLOCKED = "#"
BLANK = "."


def render(layout: CrosswordLayout, format: str = "text",
           solution: bool = True) -> str:
    """Render to "text", "html", or "printable".

    Text shows one grid line per row: letters (solution) or '.' (blank)
    with '#' for blocked cells. The HTML form embeds the numbered grid and
    the clue lists; "printable" is the HTML form with blank cells.
    """
    if format == "text":
        return _render_text(layout, solution)
    if format == "html":
        return _render_html(layout, solution)
    if format == "printable":
        return _render_html(layout, solution=False)
    raise ValueError(f"unknown render format: {format}")


def _render_text(layout: CrosswordLayout, solution: bool) -> str:
    letters = layout.cell_letters()
    lines = []
    for row in range(layout.rows):
        line = []
        for col in range(layout.cols):
            letter = letters.get((row, col))
            if letter is None:
                line.append(BLOCKED)
            else:
                line.append(letter if solution else BLANK)
        lines.append("".join(line))
    return "\n".join(lines)


def parse_text_grid(text: str) -> dict[tuple[int, int], str]:
    """Inverse of the text solution view, for round-trip checks."""
    letters = {}
    for row, line in enumerate(text.splitlines()):
        for col, ch in enumerate(line):
            if ch not in (BLOCKED, BLANK):
                letters[(row, col)] = ch
    return letters


def _render_html(layout: CrosswordLayout, solution: bool) -> str:
    numbered, across, down = number_cells(layout)
    letters = numbered.cell_letters()
    numbers = {
        (p.row, p.col): p.number for p in numbered.placements}
    rows_html = []
    for row in range(numbered.rows):
        cells_html = []
        for col in range(numbered.cols):
            letter = letters.get((row, col))
            if letter is None:
                cells_html.append('<td class="blocked"></td>')
                continue
            number = numbers.get((row, col))
            sup = f'<sup>{number}</sup>' if number else ""
            shown = escape(letter) if solution else "&nbsp;"
            cells_html.append(f'<td class="cell">{sup}{shown}</td>')
        rows_html.append("<tr>" + "".join(cells_html) + "</tr>")

    def clue_list(title: str, items: list[tuple[int, str]]) -> str:
        lis = "".join(
            f"<li><b>{number}.</b> {escape(clue)}</li>" for number, clue in items)
        return f"<h2>{title}</h2><ol class=\"clues\">{lis}</ol>"

    style = (
        "table{border-collapse:collapse}"
        "td{width:2em;height:2em;text-align:center;font-family:sans-serif;"
        "border:1px solid #444;position:relative}"
        "td.blocked{background:#222}"
        "td.cell sup{position:absolute;top:1px;left:2px;font-size:0.55em}"
        "ol.clues{list-style:none;padding-left:0}"
    )
    return (
        "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
        f"<title>Crossword</title><style>{style}</style></head><body>"
        f"<table>{''.join(rows_html)}</table>"
        f"{clue_list('Across', across)}{clue_list('Down', down)}"
        "</body></html>"
    )


# --- persistence ----------------------------------------------------------------

def save_layout(layout: CrosswordLayout, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(layout.to_dict(), sort_keys=True, ensure_ascii=False,
                   separators=(",", ":")) + "\n",
        encoding="utf-8")


def load_layout(path: str | Path) -> CrosswordLayout:
    return CrosswordLayout.from_dict(
        json.loads(Path(path).read_text(encoding="utf-8")))
