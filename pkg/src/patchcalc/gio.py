"""graph6 ASCII encoding, per the published format."""

from __future__ import annotations

from .graphs import Graph


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative n")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    raise ValueError("graph too large for this graph6 writer")


def to_graph6(g: Graph) -> str:
    out = bytearray(_encode_n(g.n))
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if (u, v) in g.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    for i in range(0, len(bits), 6):
        word = 0
        for b in bits[i : i + 6]:
            word = (word << 1) | b
        out.append(word + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> Graph:
    data = text.strip().encode("ascii")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise ValueError("empty graph6 string")
    if data[0] == 126:
        if len(data) < 4 or data[1] == 126:
            raise ValueError("unsupported graph6 size header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    if n < 0:
        raise ValueError("bad graph6 header")
    bits = []
    for byte in body:
        if not 63 <= byte <= 126:
            raise ValueError(f"bad graph6 byte {byte}")
        word = byte - 63
        bits.extend((word >> shift) & 1 for shift in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need or any(bits[need:]):
        raise ValueError("graph6 payload has wrong length")
    edges = set()
    k = 0
    for v in range(1, n):
        for u in range(v):
            if bits[k]:
                edges.add((u, v))
            k += 1
    return Graph(n, frozenset(edges))
