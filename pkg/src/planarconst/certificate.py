"""Canonical text encoding of certificates.

A certificate is a JSON document::

    {"schema": ..., "config": {...}, "claims": {...}, "nodes": [...], "digest": "sha256:..."}

Rationals are written as ``"numerator/denominator"`` strings and intervals as
two-element lists.  ``nodes`` is a flat list; nodes refer to earlier nodes by
index, so the list is a topologically ordered evidence tree.  The digest is
taken over the compact sorted encoding of everything except itself.  It guards
transport only: validity comes from replaying the nodes.

This module is shared with the checker and must not import any enclosure
construction code.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificateError
from .exact import RatInterval, render_rational

SCHEMA = "planarconst-certificate/1"


def enc_q(q) -> str:
    return render_rational(Fraction(q))


def dec_q(text, path: str = "") -> Fraction:
    if not isinstance(text, str):
        raise CertificateError(path, f"expected a rational string, got {type(text).__name__}")
    num, sep, den = text.partition("/")
    try:
        if not sep or not den.isdigit() or int(den) == 0:
            raise ValueError
        q = Fraction(int(num), int(den))
    except ValueError:
        raise CertificateError(path, f"malformed rational {text!r}") from None
    # only the canonical spelling is accepted, so every value has one encoding
    if enc_q(q) != text:
        raise CertificateError(path, f"non-canonical rational {text!r}")
    return q


def enc_iv(x: RatInterval) -> list:
    return [enc_q(x.lo), enc_q(x.hi)]


def dec_iv(obj, path: str = "") -> RatInterval:
    if not isinstance(obj, list) or len(obj) != 2:
        raise CertificateError(path, "expected an interval [lo, hi]")
    lo, hi = dec_q(obj[0], path), dec_q(obj[1], path)
    if lo > hi:
        raise CertificateError(path, "interval endpoints out of order")
    return RatInterval(lo, hi)


@dataclass
class BoundCertificate:
    config: dict
    claims: dict
    nodes: list = field(default_factory=list)
    schema: str = SCHEMA

    def body(self) -> dict:
        return {"schema": self.schema, "config": self.config, "claims": self.claims, "nodes": self.nodes}


def canonical(obj) -> str:
    """File layout: sorted keys, one-space indent, ASCII only."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True)


def digest_of(body: dict) -> str:
    # hashed over the compact form of the same sorted document
    compact = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return "sha256:" + hashlib.sha256(compact.encode("ascii")).hexdigest()


def serialize(cert: BoundCertificate) -> bytes:
    body = cert.body()
    doc = dict(body)
    doc["digest"] = digest_of(body)
    return (canonical(doc) + "\n").encode("ascii")


def parse_document(data: bytes | str) -> dict:
    """Decode the JSON document without checking the digest."""
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise CertificateError("$", f"not ASCII text: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CertificateError("$", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise CertificateError("$", "top level must be an object")
    missing = {"schema", "config", "claims", "nodes", "digest"} - doc.keys()
    if missing:
        raise CertificateError("$", f"missing fields {sorted(missing)}")
    return doc


def deserialize(data: bytes | str, check_digest: bool = True) -> BoundCertificate:
    doc = parse_document(data)
    body = {k: doc[k] for k in ("schema", "config", "claims", "nodes")}
    if check_digest and doc["digest"] != digest_of(body):
        raise CertificateError("$.digest", "digest does not match the content")
    if doc["schema"] != SCHEMA:
        raise CertificateError("$.schema", f"unsupported schema {doc['schema']!r}")
    if not isinstance(doc["nodes"], list) or not isinstance(doc["claims"], dict):
        raise CertificateError("$", "nodes must be a list and claims an object")
    return BoundCertificate(doc["config"], doc["claims"], doc["nodes"], doc["schema"])


def redigest(doc: dict) -> dict:
    """Return a copy of ``doc`` with its digest recomputed (used to test replay)."""
    body = {k: doc[k] for k in ("schema", "config", "claims", "nodes")}
    out = dict(doc)
    out["digest"] = digest_of(body)
    return out


def dump_document(doc: dict) -> bytes:
    return (canonical(doc) + "\n").encode("ascii")
