"""Reading and writing systems and sequences.

Text format ``.psts``: first line ``order N``; each following
non-comment line is one block as whitespace-separated labels; ``#``
starts a comment.  JSON mirror: ``{"order": N, "blocks": [[l1,l2,l3],
...]}``.  Sequences: one whitespace-separated line of labels, or a JSON
array.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .core import Sequence, TripleSystem, validate_system
from .errors import InputError


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_system_text(text: str, source: str = "<string>") -> TripleSystem:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_system_json(stripped, source)
    order = None
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if order is None:
            parts = line.split()
            if len(parts) != 2 or parts[0].lower() != "order" or not parts[1].isdigit():
                raise InputError(f"{source}, line {lineno}: expected 'order N', got {raw!r}")
            order = int(parts[1])
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise InputError(
                f"{source}, line {lineno}: a block needs 3 labels, got {len(tokens)}"
            )
        blocks.append(tokens)
    if order is None:
        raise InputError(f"{source}: missing 'order N' header line")
    return validate_system(order, blocks)


def parse_system_json(text: str, source: str = "<string>") -> TripleSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}, line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict) or "order" not in data or "blocks" not in data:
        raise InputError(f"{source}: JSON system needs 'order' and 'blocks' keys")
    if not isinstance(data["order"], int):
        raise InputError(f"{source}: 'order' must be an integer")
    return validate_system(data["order"], data["blocks"])


def load_system(path) -> TripleSystem:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from None
    return parse_system_text(text, source=str(p))


def system_to_psts(system: TripleSystem, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"order {system.n}")
    for blk in system.blocks:
        lines.append(" ".join(system.block_labels(blk)))
    return "\n".join(lines) + "\n"


def system_to_json_obj(system: TripleSystem) -> dict:
    return {
        "order": system.n,
        "blocks": [list(system.block_labels(b)) for b in system.blocks],
    }


def parse_sequence_text(text: str, system: TripleSystem, source: str = "<string>") -> Sequence:
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            tokens = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: invalid JSON sequence ({exc.msg})") from None
        if not isinstance(tokens, list):
            raise InputError(f"{source}: JSON sequence must be an array")
    else:
        tokens = stripped.split()
    return system.sequence_from_labels(tokens)


def load_sequence(path, system: TripleSystem) -> Sequence:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from None
    return parse_sequence_text(text, system, source=str(p))


def sequence_to_text(seq: Sequence | Iterable[int], system: TripleSystem) -> str:
    return " ".join(system.sequence_labels(seq)) + "\n"
