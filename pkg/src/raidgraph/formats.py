"""Text and JSON formats for vertex maps (profiles and derangements).

Text: one ``"v w"`` line per vertex meaning ``f(v) = w``, every vertex
exactly once in ascending order; ``#`` comments and blank lines skipped.
JSON: ``{"map": [w0, w1, ...]}``.
"""

from __future__ import annotations

import json

__all__ = ["MapFormatError", "parse_map_text", "format_map_text", "parse_map_json", "format_map_json", "load_map"]


class MapFormatError(ValueError):
    pass


def parse_map_text(text: str) -> tuple[int, ...]:
    image: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise MapFormatError(f"line {lineno}: expected 'v w', got {raw!r}")
        try:
            v, w = int(fields[0]), int(fields[1])
        except ValueError:
            raise MapFormatError(f"line {lineno}: expected 'v w', got {raw!r}") from None
        if v != len(image):
            raise MapFormatError(f"line {lineno}: expected vertex {len(image)}, got {v}")
        image.append(w)
    if not image:
        raise MapFormatError("empty map")
    for v, w in enumerate(image):
        if not 0 <= w < len(image):
            raise MapFormatError(f"vertex {v} maps to {w}, outside 0..{len(image) - 1}")
    return tuple(image)


def format_map_text(image) -> str:
    return "".join(f"{v} {w}\n" for v, w in enumerate(image))


def parse_map_json(text: str) -> tuple[int, ...]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"invalid JSON: {exc}") from None
    image = doc.get("map") if isinstance(doc, dict) else None
    if not isinstance(image, list) or not image or not all(isinstance(w, int) for w in image):
        raise MapFormatError("JSON map must be an object with a non-empty integer array 'map'")
    if any(not 0 <= w < len(image) for w in image):
        raise MapFormatError("map entry out of range")
    return tuple(image)


def format_map_json(image) -> str:
    return json.dumps({"map": list(image)})


def load_map(text: str) -> tuple[int, ...]:
    """Either format, sniffed by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return parse_map_json(text)
    return parse_map_text(text)
