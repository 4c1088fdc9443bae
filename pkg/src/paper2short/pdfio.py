"""Minimal PDF reader: object scan, page tree walk, text extraction.

Covers the common case of classic-xref PDFs with FlateDecode (or plain)
content streams, which is what our fixtures and most digitally born
papers use. No OCR, no xref streams, no object streams.
"""
from __future__ import annotations

import base64
import re
import zlib
from dataclasses import dataclass, field

from .errors import EncryptedPdf, NotAPdf, RenderFailure

_OBJ_RE = re.compile(rb"(\d+)\s+(\d+)\s+obj\b", re.S)
_TRAILER_RE = re.compile(rb"trailer\b")
_WS = b"\x00\t\n\x0c\r "
_DELIM = b"()<>[]{}/%"


class Ref(tuple):
    """Indirect object reference (num, gen)."""

    __slots__ = ()

    def __new__(cls, num, gen):
        return super().__new__(cls, (num, gen))


class Name(str):
    """PDF name object (/Foo)."""


@dataclass
class StreamObj:
    dict: dict
    raw: bytes

    def data(self) -> bytes:
        filt = self.dict.get("Filter")
        if filt is None:
            return self.raw
        filters = filt if isinstance(filt, list) else [filt]
        data = self.raw
        for f in filters:
            if f == "FlateDecode":
                try:
                    data = zlib.decompress(data)
                except zlib.error as exc:
                    raise RenderFailure(f"corrupt stream: {exc}") from exc
            elif f == "ASCII85Decode":
                try:
                    data = base64.a85decode(data.strip(), adobe=True,
                                            ignorechars=b" \t\r\n")
                except ValueError as exc:
                    raise RenderFailure(f"corrupt stream: {exc}") from exc
            else:
                raise RenderFailure(f"unsupported stream filter: {f}")
        return data


class _Lexer:
    def __init__(self, buf: bytes, pos: int = 0):
        self.buf = buf
        self.pos = pos

    def _skip_ws(self):
        buf, n = self.buf, len(self.buf)
        while self.pos < n:
            c = buf[self.pos]
            if c in _WS:
                self.pos += 1
            elif c == 0x25:  # '%' comment
                while self.pos < n and buf[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def parse(self):
        self._skip_ws()
        buf, n = self.buf, len(self.buf)
        if self.pos >= n:
            raise ValueError("unexpected end of data")
        c = buf[self.pos]
        if buf.startswith(b"<<", self.pos):
            return self._parse_dict()
        if c == ord("<"):
            return self._parse_hex_string()
        if c == ord("("):
            return self._parse_literal_string()
        if c == ord("["):
            return self._parse_array()
        if c == ord("/"):
            return self._parse_name()
        if buf.startswith(b"true", self.pos):
            self.pos += 4
            return True
        if buf.startswith(b"false", self.pos):
            self.pos += 5
            return False
        if buf.startswith(b"null", self.pos):
            self.pos += 4
            return None
        return self._parse_number_or_ref()

    def _parse_dict(self):
        self.pos += 2
        out = {}
        while True:
            self._skip_ws()
            if self.buf.startswith(b">>", self.pos):
                self.pos += 2
                return out
            key = self.parse()
            val = self.parse()
            if isinstance(key, Name):
                out[str(key)] = val

    def _parse_array(self):
        self.pos += 1
        out = []
        while True:
            self._skip_ws()
            if self.buf[self.pos] == ord("]"):
                self.pos += 1
                return out
            out.append(self.parse())

    def _parse_name(self):
        self.pos += 1
        start = self.pos
        buf, n = self.buf, len(self.buf)
        while self.pos < n and buf[self.pos] not in _WS and buf[self.pos] not in _DELIM:
            self.pos += 1
        raw = buf[start:self.pos]
        # #xx hex escapes inside names
        raw = re.sub(rb"#([0-9A-Fa-f]{2})", lambda m: bytes([int(m.group(1), 16)]), raw)
        return Name(raw.decode("latin-1"))

    def _parse_literal_string(self):
        self.pos += 1
        buf, n = self.buf, len(self.buf)
        depth = 1
        out = bytearray()
        while self.pos < n:
            c = buf[self.pos]
            if c == 0x5C:  # backslash
                self.pos += 1
                e = buf[self.pos]
                esc = {ord("n"): 10, ord("r"): 13, ord("t"): 9, ord("b"): 8,
                       ord("f"): 12, ord("("): 40, ord(")"): 41, ord("\\"): 92}
                if e in esc:
                    out.append(esc[e])
                    self.pos += 1
                elif ord("0") <= e <= ord("7"):
                    oct_digits = bytearray()
                    while len(oct_digits) < 3 and ord("0") <= buf[self.pos] <= ord("7"):
                        oct_digits.append(buf[self.pos])
                        self.pos += 1
                    out.append(int(oct_digits, 8) & 0xFF)
                elif e in b"\r\n":  # line continuation
                    self.pos += 1
                    if e == 0x0D and buf[self.pos] == 0x0A:
                        self.pos += 1
                else:
                    out.append(e)
                    self.pos += 1
            elif c == ord("("):
                depth += 1
                out.append(c)
                self.pos += 1
            elif c == ord(")"):
                depth -= 1
                self.pos += 1
                if depth == 0:
                    return decode_pdf_string(bytes(out))
                out.append(c)
            else:
                out.append(c)
                self.pos += 1
        raise ValueError("unterminated string")

    def _parse_hex_string(self):
        end = self.buf.index(b">", self.pos)
        hexed = re.sub(rb"[^0-9A-Fa-f]", b"", self.buf[self.pos + 1:end])
        self.pos = end + 1
        if len(hexed) % 2:
            hexed += b"0"
        return decode_pdf_string(bytes.fromhex(hexed.decode("ascii")))

    def _parse_number_or_ref(self):
        m = re.match(rb"[+-]?\d*\.?\d+", self.buf[self.pos:])
        if not m:
            raise ValueError(f"bad token at {self.pos}")
        tok = m.group(0)
        self.pos += len(tok)
        if b"." in tok:
            return float(tok)
        num = int(tok)
        # lookahead for "<gen> R"
        save = self.pos
        self._skip_ws()
        m2 = re.match(rb"(\d+)\s+R\b", self.buf[self.pos:])
        if num >= 0 and m2:
            self.pos += m2.end()
            return Ref(num, int(m2.group(1)))
        self.pos = save
        return num


def decode_pdf_string(raw: bytes) -> str:
    if raw.startswith(b"\xfe\xff"):
        return raw[2:].decode("utf-16-be", errors="replace")
    return raw.decode("latin-1", errors="replace")


class PdfDocument:
    """Parsed PDF with resolved object access and page listing."""

    def __init__(self, blob: bytes):
        if not blob.lstrip()[:5].startswith(b"%PDF-"):
            raise NotAPdf("missing %PDF header")
        self.blob = blob
        self.objects: dict[int, object] = {}
        self._scan_objects()
        self.trailer = self._scan_trailer()
        if "Encrypt" in self.trailer:
            raise EncryptedPdf("document has an /Encrypt dictionary")
        self.pages = self._collect_pages()

    # -- object table --

    def _scan_objects(self):
        for m in _OBJ_RE.finditer(self.blob):
            num = int(m.group(1))
            lex = _Lexer(self.blob, m.end())
            try:
                value = lex.parse()
            except (ValueError, IndexError):
                continue
            lex._skip_ws()
            if isinstance(value, dict) and self.blob.startswith(b"stream", lex.pos):
                start = lex.pos + len(b"stream")
                if self.blob.startswith(b"\r\n", start):
                    start += 2
                elif self.blob.startswith(b"\n", start):
                    start += 1
                length = value.get("Length")
                if isinstance(length, Ref):
                    length = None  # resolved below once the table is built
                if isinstance(length, int):
                    end = start + length
                    if not re.match(rb"\s*endstream", self.blob[end:end + 20]):
                        length = None
                if length is None:
                    end = self.blob.find(b"endstream", start)
                    if end < 0:
                        continue
                    raw = self.blob[start:end].rstrip(b"\r\n")
                else:
                    raw = self.blob[start:start + length]
                value = StreamObj(value, raw)
            self.objects[num] = value

    def _scan_trailer(self) -> dict:
        trailer: dict = {}
        for m in _TRAILER_RE.finditer(self.blob):
            lex = _Lexer(self.blob, m.end())
            try:
                t = lex.parse()
            except (ValueError, IndexError):
                continue
            if isinstance(t, dict):
                trailer.update(t)
        if not trailer:
            # some writers only have a cross-reference stream; fall back to
            # any catalog object found during the scan
            for num, obj in self.objects.items():
                if isinstance(obj, dict) and obj.get("Type") == "Catalog":
                    trailer["Root"] = Ref(num, 0)
                    break
        return trailer

    def resolve(self, value):
        seen = set()
        while isinstance(value, Ref):
            if value in seen:
                return None
            seen.add(value)
            value = self.objects.get(value[0])
        return value

    # -- pages --

    def _collect_pages(self) -> list[dict]:
        root = self.resolve(self.trailer.get("Root"))
        pages: list[dict] = []
        if isinstance(root, dict):
            tree = self.resolve(root.get("Pages"))
            if isinstance(tree, dict):
                self._walk_pages(tree, pages, set())
        if not pages:  # damaged tree: fall back to scan order
            for num in sorted(self.objects):
                obj = self.objects[num]
                if isinstance(obj, dict) and obj.get("Type") == "Page":
                    pages.append(obj)
        return pages

    def _walk_pages(self, node: dict, out: list, seen: set):
        nid = id(node)
        if nid in seen:
            return
        seen.add(nid)
        if node.get("Type") == "Page":
            out.append(node)
            return
        for kid in node.get("Kids", []) or []:
            resolved = self.resolve(kid)
            if isinstance(resolved, dict):
                resolved.setdefault("_Parent", node)
                self._walk_pages(resolved, out, seen)

    def page_media_box(self, page: dict) -> tuple[float, float, float, float]:
        node: dict | None = page
        while node is not None:
            box = self.resolve(node.get("MediaBox"))
            if isinstance(box, list) and len(box) == 4:
                vals = [float(self.resolve(v)) for v in box]
                return tuple(vals)  # type: ignore[return-value]
            node = node.get("_Parent") or self.resolve(node.get("Parent"))
        return (0.0, 0.0, 612.0, 792.0)  # US letter default

    def page_content(self, page: dict) -> bytes:
        contents = self.resolve(page.get("Contents"))
        streams = contents if isinstance(contents, list) else [contents]
        chunks = []
        for s in streams:
            s = self.resolve(s)
            if isinstance(s, StreamObj):
                chunks.append(s.data())
        return b"\n".join(chunks)

    def page_text(self, page: dict) -> str:
        return extract_text_from_content(self.page_content(page))

    def text(self) -> str:
        parts = []
        for page in self.pages:
            try:
                parts.append(self.page_text(page))
            except RenderFailure:
                parts.append("")
        return "\n\n".join(parts).strip()

    def info(self) -> dict:
        info = self.resolve(self.trailer.get("Info"))
        out = {}
        if isinstance(info, dict):
            for key in ("Title", "Author", "Subject"):
                val = self.resolve(info.get(key))
                if isinstance(val, str) and val.strip():
                    out[key.lower()] = val.strip()
        return out


_TEXT_OPS = {b"Tj", b"'", b'"', b"TJ"}
_LINE_OPS = {b"Td", b"TD", b"T*", b"Tm"}


def extract_text_from_content(content: bytes) -> str:
    """Run the text-showing operators of one content stream.

    Line-positioning operators become newlines; everything else is
    ignored. Good enough to recover reading order for single-column
    fixtures and typical LaTeX output.
    """
    lex = _Lexer(content)
    stack: list = []
    lines: list[str] = []
    cur: list[str] = []

    def flush():
        if cur:
            lines.append("".join(cur))
            cur.clear()

    n = len(content)
    while True:
        lex._skip_ws()
        if lex.pos >= n:
            break
        c = content[lex.pos]
        if c == ord("(") or c == ord("<") or c == ord("[") or c == ord("/") or \
                c == ord("+") or c == ord("-") or c == ord(".") or (ord("0") <= c <= ord("9")):
            try:
                stack.append(lex.parse())
            except (ValueError, IndexError):
                lex.pos += 1
            continue
        m = re.match(rb"[A-Za-z'\"*]+", content[lex.pos:])
        if not m:
            lex.pos += 1
            continue
        op = m.group(0)
        lex.pos += len(op)
        if op in _TEXT_OPS:
            if op == b"TJ" and stack and isinstance(stack[-1], list):
                for item in stack[-1]:
                    if isinstance(item, str):
                        cur.append(item)
            elif stack and isinstance(stack[-1], str):
                if op in (b"'", b'"'):
                    flush()
                cur.append(stack[-1])
        elif op in _LINE_OPS or op == b"BT" or op == b"ET":
            flush()
        stack.clear()
    flush()
    return "\n".join(line for line in lines if line.strip())
