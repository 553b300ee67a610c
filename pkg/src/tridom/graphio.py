"""Codecs: planar_code (binary), rotation text, and certificate files."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    BadHeader,
    DigestMismatch,
    EmbeddingError,
    ParseError,
    TruncatedStream,
    ValidationFailed,
    VertexCountTooLarge,
)
from .pipeline import IdomCertificate, VerifyReport, verify
from .planar import PlaneGraph, Triangulation, build_from_rotation

PLANAR_CODE_HEADER = b">>planar_code<<"
CERT_FORMAT = "tridom-certificate/1"


# -- planar_code ---------------------------------------------------------

def read_planar_code(data: bytes) -> list[Triangulation]:
    """Decode a planar_code stream (with or without header).

    Each graph is a byte n followed, for vertices 1..n, by the 1-based
    neighbor list in rotation order terminated by 0.  The n > 255 extension
    (leading 0 byte) is not supported.
    """
    pos = 0
    if data.startswith(b">>"):
        if not data.startswith(PLANAR_CODE_HEADER):
            raise BadHeader(f"unrecognised header {data[:20]!r}")
        pos = len(PLANAR_CODE_HEADER)
    graphs = []
    while pos < len(data):
        n = data[pos]
        pos += 1
        if n == 0:
            raise TruncatedStream(f"zero vertex count at byte {pos - 1} "
                                  "(multi-byte planar_code is not supported)")
        rot: dict[int, list[int]] = {}
        for v in range(n):
            nbrs = []
            while True:
                if pos >= len(data):
                    raise TruncatedStream(f"stream ends inside vertex {v + 1} of a {n}-vertex graph")
                b = data[pos]
                pos += 1
                if b == 0:
                    break
                if b > n:
                    raise ValidationFailed(f"neighbor {b} out of range for n={n}")
                nbrs.append(b - 1)
            rot[v] = nbrs
        simple = all(len(set(ns)) == len(ns) for ns in rot.values())
        try:
            graphs.append(build_from_rotation(rot, simple=simple))
        except EmbeddingError as exc:
            raise ValidationFailed(f"graph {len(graphs) + 1}: {exc}") from exc
    return graphs


def write_planar_code(graphs: Iterable[PlaneGraph], header: bool = True) -> bytes:
    out = bytearray(PLANAR_CODE_HEADER if header else b"")
    for g in graphs:
        if g.n > 255:
            raise VertexCountTooLarge(f"planar_code supports n <= 255, got {g.n}")
        index = {v: i + 1 for i, v in enumerate(g.vertices())}
        out.append(g.n)
        for v in g.vertices():
            out.extend(index[w] for w in _canonical_rotation(g, v))
            out.append(0)
    return bytes(out)


# -- rotation text -------------------------------------------------------

def _canonical_rotation(g: PlaneGraph, v: int) -> list[int]:
    rot = g.rotation(v)
    k = len(rot)
    return min(rot[i:] + rot[:i] for i in range(k) if rot[i] == min(rot))


def write_rotation_text(g: PlaneGraph) -> str:
    """Canonical text form: vertices by label, rotations from their smallest
    neighbor."""
    lines = [f"{g.n} {g.m} {'simple' if g.simple else 'multi'}"]
    for v in g.vertices():
        lines.append(f"{v}: " + " ".join(map(str, _canonical_rotation(g, v))))
    return "\n".join(lines) + "\n"


def read_rotation_text(text: str) -> Triangulation:
    rows = [(i + 1, line.strip()) for i, line in enumerate(text.splitlines())]
    rows = [(i, line) for i, line in rows if line and not line.startswith("#")]
    if not rows:
        raise ParseError("empty input", 1)
    lineno, first = rows[0]
    head = first.split()
    if len(head) != 3 or head[2] not in ("simple", "multi"):
        raise ParseError("expected header 'n m simple|multi'", lineno)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("vertex and edge counts must be integers", lineno) from None
    simple = head[2] == "simple"
    rot: dict[int, list[int]] = {}
    where: dict[int, int] = {}
    for lineno, line in rows[1:]:
        label, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("expected 'label: neighbor neighbor ...'", lineno)
        try:
            v = int(label)
            nbrs = [int(x) for x in rest.split()]
        except ValueError:
            raise ParseError("labels must be integers", lineno) from None
        if v in rot:
            raise ParseError(f"vertex {v} listed twice", lineno)
        rot[v], where[v] = nbrs, lineno
    if len(rot) != n:
        raise ParseError(f"header announces {n} vertices, found {len(rot)}", rows[0][0])
    if sum(len(ns) for ns in rot.values()) != 2 * m:
        raise ParseError(f"header announces {m} edges, rotations list "
                         f"{sum(len(ns) for ns in rot.values())} edge ends", rows[0][0])
    for v, nbrs in rot.items():
        for w in set(nbrs):
            if w not in rot:
                raise ParseError(f"vertex {v} lists unknown vertex {w}", where[v])
            if rot[w].count(v) != nbrs.count(w):
                raise ParseError(f"vertex {v} lists {w} but {w} does not list {v} back "
                                 "the same number of times", where[v])
    try:
        return build_from_rotation(rot, simple=simple)
    except EmbeddingError as exc:
        raise ValidationFailed(str(exc)) from exc


def graph_digest(g: PlaneGraph) -> str:
    return hashlib.sha256(write_rotation_text(g).encode()).hexdigest()


# -- certificates --------------------------------------------------------

@dataclass
class CertificateFile:
    graph_hash: str
    n: int
    claimed_bound: int
    D: list[int]
    trace: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @classmethod
    def from_certificate(cls, cert: IdomCertificate, g: PlaneGraph) -> "CertificateFile":
        return cls(graph_digest(g), cert.n, cert.bound, list(cert.D), cert.trace, cert.stats)


def write_certificate(cert: CertificateFile | IdomCertificate, g: PlaneGraph | None = None) -> str:
    if isinstance(cert, IdomCertificate):
        if g is None:
            raise ValueError("the graph is needed to digest a fresh certificate")
        cert = CertificateFile.from_certificate(cert, g)
    doc = {
        "format": CERT_FORMAT,
        "graph_hash": cert.graph_hash,
        "n": cert.n,
        "claimed_bound": cert.claimed_bound,
        "D": sorted(cert.D),
        "trace": cert.trace,
        "stats": cert.stats,
    }
    return json.dumps(doc, indent=1) + "\n"


def read_certificate(text: str) -> CertificateFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or doc.get("format") != CERT_FORMAT:
        raise ParseError(f"not a {CERT_FORMAT} document")
    try:
        return CertificateFile(str(doc["graph_hash"]), int(doc["n"]), int(doc["claimed_bound"]),
                               [int(v) for v in doc["D"]], list(doc.get("trace", [])),
                               dict(doc.get("stats", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate field: {exc}") from None


def verify_certificate(g: PlaneGraph, cert: CertificateFile) -> VerifyReport:
    """Re-check a loaded certificate against ``g`` from scratch."""
    digest = graph_digest(g)
    if digest != cert.graph_hash:
        raise DigestMismatch(f"certificate is for graph {cert.graph_hash[:12]}, "
                             f"input digests to {digest[:12]}")
    report = verify(g, cert.D)
    if not report or cert.claimed_bound != g.n // 3 or cert.n != g.n:
        raise ValidationFailed(f"certificate does not verify: independent={report.independent} "
                               f"dominating={report.dominating} size={report.size} "
                               f"bound={report.bound}")
    return report


# -- file helpers --------------------------------------------------------

def load_graphs(path: str | Path) -> list[Triangulation]:
    path = Path(path)
    if path.suffix == ".plc":
        return read_planar_code(path.read_bytes())
    return [read_rotation_text(path.read_text())]


def save_graphs(path: str | Path, graphs: list[PlaneGraph]) -> None:
    path = Path(path)
    if path.suffix == ".plc":
        path.write_bytes(write_planar_code(graphs))
    elif path.suffix == ".rot":
        if len(graphs) != 1:
            raise ValueError("rotation text holds exactly one graph")
        path.write_text(write_rotation_text(graphs[0]))
    else:
        raise ValueError(f"unknown graph file extension {path.suffix!r} (use .plc or .rot)")
