"""Reading dependency-parsed corpora in CoNLL-U format.

Only the columns needed for slot extraction are kept (FORM, LEMMA, UPOS,
HEAD, DEPREL). Multiword-token ranges (``3-4``) and empty nodes (``3.1``)
are dropped: basic HEAD values always point at plain integer IDs, so no
edge is lost.
"""

from __future__ import annotations

import gzip
import io
import logging
import os
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

logger = logging.getLogger(__name__)

N_COLUMNS = 10


class ConlluParseError(ValueError):
    """A malformed line. ``line_no`` is 1-based within the input stream."""

    def __init__(self, message: str, line_no: int, source_id: str | None = None):
        super().__init__(f"line {line_no}: {message}")
        self.message = message
        self.line_no = line_no
        self.source_id = source_id


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    source_id: str | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        """Return the token with 1-based ``index``."""
        return self.tokens[index - 1]


def open_text(path: str | os.PathLike) -> IO[str]:
    """Open a plain or gzip-compressed UTF-8 file for reading."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def _parse_token_line(fields: list[str], line_no: int) -> Token | None:
    if len(fields) != N_COLUMNS:
        raise ConlluParseError(
            f"expected {N_COLUMNS} tab-separated columns, got {len(fields)}", line_no
        )
    tid = fields[0]
    if "-" in tid or "." in tid:
        return None
    try:
        index = int(tid)
    except ValueError:
        raise ConlluParseError(f"non-integer ID {tid!r}", line_no) from None
    try:
        head = int(fields[6])
    except ValueError:
        raise ConlluParseError(f"non-integer HEAD {fields[6]!r}", line_no) from None
    return Token(
        index=index,
        form=fields[1],
        lemma=fields[2],
        upos=fields[3],
        head=head,
        deprel=fields[7],
    )


def _source_id(comment: str) -> str | None:
    body = comment[1:].strip()
    key, sep, value = body.partition("=")
    if sep and key.strip() in ("sent_id", "source_id", "newdoc id"):
        return value.strip()
    return None


def parse_document(
    stream: Iterable[str],
    strict: bool = False,
    errors: list[ConlluParseError] | None = None,
) -> Iterator[Sentence]:
    """Lazily parse CoNLL-U text into :class:`Sentence` objects.

    With ``strict=False`` a sentence containing a malformed line is skipped
    with a warning and the error is appended to ``errors`` (if given).
    With ``strict=True`` the first :class:`ConlluParseError` propagates.
    """
    tokens: list[Token] = []
    source_id = None
    error: ConlluParseError | None = None
    in_block = False

    def finish():
        if error is not None:
            if errors is not None:
                errors.append(error)
            logger.warning("skipping malformed sentence: %s", error)
            return None
        return Sentence(tuple(tokens), source_id)

    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if in_block:
                sent = finish()
                if sent is not None:
                    yield sent
            tokens, source_id, error, in_block = [], None, None, False
            continue
        in_block = True
        if error is not None:
            continue
        if line.startswith("#"):
            sid = _source_id(line)
            if sid is not None:
                source_id = sid
            continue
        try:
            tok = _parse_token_line(line.split("\t"), line_no)
        except ConlluParseError as exc:
            exc.source_id = source_id
            if strict:
                raise
            error = exc
            continue
        if tok is not None:
            tokens.append(tok)
    if in_block:
        sent = finish()
        if sent is not None:
            yield sent


def read_corpus(
    path: str | os.PathLike,
    strict: bool = False,
    errors: list[ConlluParseError] | None = None,
) -> Iterator[Sentence]:
    with open_text(path) as fh:
        yield from parse_document(fh, strict=strict, errors=errors)


def validate_sentence(s: Sentence) -> list[str]:
    """Return structural violations of ``s``; an empty list means ok."""
    violations = []
    n = len(s.tokens)
    for pos, tok in enumerate(s.tokens, start=1):
        where = f"token {tok.index}"
        if tok.index != pos:
            violations.append(f"{where}: index out of sequence (expected {pos})")
        if tok.head == tok.index:
            violations.append(f"{where}: self-loop")
        elif tok.head < 0 or tok.head > n:
            violations.append(f"{where}: head out of range ({tok.head})")
        if not tok.lemma or tok.lemma == "_":
            violations.append(f"{where}: empty lemma")
        if not tok.deprel or tok.deprel == "_":
            violations.append(f"{where}: empty deprel")
    return violations


def format_sentence(s: Sentence) -> str:
    """Serialize the retained columns back to a CoNLL-U block."""
    lines = []
    if s.source_id is not None:
        lines.append(f"# sent_id = {s.source_id}")
    for t in s.tokens:
        cols = [str(t.index), t.form, t.lemma, t.upos, "_", "_", str(t.head), t.deprel, "_", "_"]
        lines.append("\t".join(cols))
    return "\n".join(lines) + "\n"
