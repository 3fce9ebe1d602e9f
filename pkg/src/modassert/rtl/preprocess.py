"""Verilog preprocessor: `define/`undef, `ifdef conditionals and `include.

Object-like macros only; function-like macros are reported and left in place
(the parser's opaque-span recovery then preserves the construct verbatim).
Unknown directives such as `timescale pass through untouched so that
emission reproduces them.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field


@dataclass
class Diagnostic:
    severity: str          # "warning" | "error"
    file: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.file}:{self.line}:{self.col}: {self.message}"


@dataclass
class PreprocessedFile:
    path: str
    text: str
    # origin (file, line) of each line of `text`, 0-indexed by output line
    origins: list[tuple[str, int]] = field(default_factory=list)

    def origin_of_line(self, ppline: int) -> tuple[str, int]:
        if 1 <= ppline <= len(self.origins):
            return self.origins[ppline - 1]
        return (self.path, ppline)


_DIRECTIVE_RE = re.compile(r"^\s*`(\w+)\s*(.*)$")
_USE_RE = re.compile(r"`([A-Za-z_]\w*)")

_MAX_EXPANSION_DEPTH = 16


def preprocess(path: str, text: str, include_dirs: tuple[str, ...] = (),
               defines: dict[str, str] | None = None,
               diagnostics: list[Diagnostic] | None = None) -> PreprocessedFile:
    """Expand directives in `text`.  `defines` is shared compilation-unit
    state and is mutated as `define/`undef directives are processed."""
    macros = defines if defines is not None else {}
    diags = diagnostics if diagnostics is not None else []
    out_lines: list[str] = []
    origins: list[tuple[str, int]] = []
    _run(path, text, include_dirs, macros, diags, out_lines, origins, depth=0)
    return PreprocessedFile(path, "\n".join(out_lines) + ("\n" if out_lines else ""), origins)


def _run(path: str, text: str, include_dirs: tuple[str, ...],
         macros: dict[str, str], diags: list[Diagnostic],
         out_lines: list[str], origins: list[tuple[str, int]], depth: int) -> None:
    if depth > 8:
        diags.append(Diagnostic("error", path, 1, 1, "include nesting too deep"))
        return
    # conditional stack: entries are (taken_branch_seen, currently_active)
    cond: list[list[bool]] = []

    def active() -> bool:
        return all(c[1] for c in cond)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        m = _DIRECTIVE_RE.match(raw)
        name = m.group(1) if m else None
        rest = m.group(2).strip() if m else ""

        if name == "ifdef" or name == "ifndef":
            defined = rest.split()[0] in macros if rest.split() else False
            take = defined if name == "ifdef" else not defined
            cond.append([take, take and active()])
            continue
        if name == "elsif":
            if not cond:
                diags.append(Diagnostic("error", path, lineno, 1, "`elsif without `ifdef"))
                continue
            seen, _ = cond[-1]
            defined = rest.split()[0] in macros if rest.split() else False
            take = (not seen) and defined
            cond[-1][0] = seen or take
            cond[-1][1] = take and all(c[1] for c in cond[:-1])
            continue
        if name == "else":
            if not cond:
                diags.append(Diagnostic("error", path, lineno, 1, "`else without `ifdef"))
                continue
            seen, _ = cond[-1]
            cond[-1][1] = (not seen) and all(c[1] for c in cond[:-1])
            cond[-1][0] = True
            continue
        if name == "endif":
            if not cond:
                diags.append(Diagnostic("error", path, lineno, 1, "`endif without `ifdef"))
            else:
                cond.pop()
            continue
        if not active():
            continue
        if name == "define":
            dm = re.match(r"(\w+)(\(.*?\))?\s*(.*)$", rest)
            if not dm:
                diags.append(Diagnostic("error", path, lineno, 1, "malformed `define"))
                continue
            if dm.group(2):
                diags.append(Diagnostic("warning", path, lineno, 1,
                                        f"function-like macro `{dm.group(1)} not expanded"))
                continue
            macros[dm.group(1)] = dm.group(3).strip()
            continue
        if name == "undef":
            macros.pop(rest.split()[0], None) if rest.split() else None
            continue
        if name == "include":
            im = re.match(r'"([^"]+)"', rest)
            if not im:
                diags.append(Diagnostic("error", path, lineno, 1, "malformed `include"))
                continue
            inc = _find_include(im.group(1), path, include_dirs)
            if inc is None:
                diags.append(Diagnostic("error", path, lineno, 1,
                                        f"include file not found: {im.group(1)}"))
                continue
            try:
                with open(inc, "r", encoding="utf-8") as fh:
                    inc_text = fh.read()
            except OSError as exc:
                diags.append(Diagnostic("error", path, lineno, 1,
                                        f"cannot read include {inc}: {exc}"))
                continue
            _run(inc, inc_text, include_dirs, macros, diags, out_lines, origins, depth + 1)
            continue

        # ordinary line (or passthrough directive): expand macro uses
        out_lines.append(_expand(raw, macros, path, lineno, diags))
        origins.append((path, lineno))

    if cond:
        diags.append(Diagnostic("error", path, len(text.splitlines()), 1,
                                "unterminated `ifdef"))


def _expand(line: str, macros: dict[str, str], path: str, lineno: int,
            diags: list[Diagnostic]) -> str:
    for _ in range(_MAX_EXPANSION_DEPTH):
        def repl(m: re.Match) -> str:
            name = m.group(1)
            if name in macros:
                return macros[name]
            return m.group(0)
        new = _USE_RE.sub(repl, line)
        if new == line:
            return line
        line = new
    diags.append(Diagnostic("warning", path, lineno, 1, "macro expansion depth exceeded"))
    return line


def _find_include(name: str, including_file: str, include_dirs: tuple[str, ...]) -> str | None:
    cand = [os.path.join(os.path.dirname(including_file) or ".", name)]
    cand += [os.path.join(d, name) for d in include_dirs]
    for c in cand:
        if os.path.isfile(c):
            return c
    return None
