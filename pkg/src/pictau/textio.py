"""Text blocks: ideals, matrices and key-value manifests."""
from __future__ import annotations

import hashlib

from .errors import ContractViolation
from .exactfield import parse_field
from .groebner import Ideal
from .multipoly import PolyRing

BEGIN_IDEAL = "-----BEGIN IDEAL-----"
END_IDEAL = "-----END IDEAL-----"


class TextFormatError(ContractViolation):
    pass


def format_ideal(I: Ideal, tag: str | None = None) -> str:
    lines = [BEGIN_IDEAL]
    if tag:
        lines.append(f"tag {tag}")
    lines.append(I.ring.header())
    lines += [g.format() for g in I.gens]
    lines.append(END_IDEAL)
    return "\n".join(lines)


def parse_ring_header(line: str) -> PolyRing:
    if not line.startswith("ring ") or " vars " not in line:
        raise TextFormatError(f"bad ring header: {line!r}")
    body = line[len("ring "):]
    fld, names = body.rsplit(" vars ", 1)
    return PolyRing(parse_field(fld), names.split())


def parse_ideals(text: str):
    """All ideal blocks in ``text`` as ``(tag, Ideal)`` pairs."""
    out = []
    lines = [ln.strip() for ln in text.splitlines()]
    i = 0
    while i < len(lines):
        if lines[i] != BEGIN_IDEAL:
            i += 1
            continue
        i += 1
        tag = None
        if i < len(lines) and lines[i].startswith("tag "):
            tag = lines[i][4:].strip()
            i += 1
        if i >= len(lines):
            raise TextFormatError("unterminated ideal block")
        R = parse_ring_header(lines[i])
        i += 1
        gens = []
        while i < len(lines) and lines[i] != END_IDEAL:
            if lines[i]:
                gens.append(R.parse(lines[i]))
            i += 1
        if i >= len(lines):
            raise TextFormatError("unterminated ideal block")
        out.append((tag, Ideal(gens, R)))
        i += 1
    return out


def format_matrix(M, fmt=str) -> str:
    rows = [[fmt(x) for x in row] for row in M]
    if not rows:
        return ""
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_manifest(items: dict) -> str:
    lines = ["-----BEGIN MANIFEST-----"]
    for k in sorted(items):
        lines.append(f"{k} {items[k]}")
    lines.append("-----END MANIFEST-----")
    return "\n".join(lines)


def parse_manifest(text: str) -> dict:
    out = {}
    inside = False
    for ln in text.splitlines():
        if ln == "-----BEGIN MANIFEST-----":
            inside = True
        elif ln == "-----END MANIFEST-----":
            inside = False
        elif inside and ln:
            k, _, v = ln.partition(" ")
            out[k] = v
    return out
