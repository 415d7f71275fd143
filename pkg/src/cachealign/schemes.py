"""Linear caching schemes: construction, composition, and serialization.

A scheme fixes a granularity n (parts per file), places linear
combinations of the 2n file bits into the transmitter and receiver
caches, and for each demand selects the four messages as linear maps of
the transmitter cache bits.  Column convention throughout: columns
0..n-1 are file A's parts, columns n..2n-1 are file B's parts.

Schemes are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, NamedTuple

import numpy as np

from .gf2 import BitMatrix, vstack
from .netchannel import FILES, Demand

__all__ = [
    "DeliveryQuad",
    "LinearScheme",
    "SchemeFormatError",
    "CORNER_NAMES",
    "corner_scheme",
    "file_selector",
    "memory_share",
    "read_scheme",
    "scheme_for_memory",
    "write_scheme",
]

CORNER_NAMES = ("M0", "M13", "M45", "M2")

_MESSAGE_TAGS = ("V1", "V2", "V3", "V4")


class DeliveryQuad(NamedTuple):
    """Per-demand delivery maps; d1,d2 act on cache 1's bits, d3,d4 on cache 2's."""

    d1: BitMatrix
    d2: BitMatrix
    d3: BitMatrix
    d4: BitMatrix


@dataclass(frozen=True)
class LinearScheme:
    """A complete caching strategy with exact-rational metrics.

    memory*n and load*n must be integers: they are the receiver cache row
    count and the per-message row count respectively.
    """

    n: int
    memory: Fraction
    load: Fraction
    z1: BitMatrix
    z2: BitMatrix
    u1: BitMatrix
    u2: BitMatrix
    delivery: Mapping[Demand, DeliveryQuad] = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "memory", Fraction(self.memory))
        object.__setattr__(self, "load", Fraction(self.load))
        object.__setattr__(self, "delivery", dict(self.delivery))
        if self.n <= 0:
            raise ValueError(f"granularity must be positive, got {self.n}")
        if not 0 <= self.memory <= 2:
            raise ValueError(f"memory {self.memory} out of range [0, 2]")
        if self.load < 0:
            raise ValueError(f"load {self.load} must be nonnegative")
        if (self.memory * self.n).denominator != 1:
            raise ValueError(f"memory*n = {self.memory * self.n} is not an integer")
        if (self.load * self.n).denominator != 1:
            raise ValueError(f"load*n = {self.load * self.n} is not an integer")
        width = 2 * self.n
        for name, mat in (("z1", self.z1), ("z2", self.z2)):
            if mat.shape != (self.cache_rows, width):
                raise ValueError(
                    f"{name} must be {self.cache_rows}x{width}, got {mat.shape}"
                )
        for name, mat in (("u1", self.u1), ("u2", self.u2)):
            if mat.cols != width or mat.rows > self.n:
                raise ValueError(
                    f"{name} must have at most {self.n} rows and {width} columns, "
                    f"got {mat.shape}"
                )
        if set(self.delivery) != set(Demand):
            raise ValueError("delivery must cover exactly the four demands")
        for d, quad in self.delivery.items():
            for tag, mat, src in (
                ("d1", quad.d1, self.u1),
                ("d2", quad.d2, self.u1),
                ("d3", quad.d3, self.u2),
                ("d4", quad.d4, self.u2),
            ):
                if mat.shape != (self.message_rows, src.rows):
                    raise ValueError(
                        f"delivery {tag} for {d} must be "
                        f"{self.message_rows}x{src.rows}, got {mat.shape}"
                    )

    @property
    def cache_rows(self) -> int:
        """Rows of each receiver cache placement: memory * n."""
        return int(self.memory * self.n)

    @property
    def message_rows(self) -> int:
        """Rows of each delivered message: load * n."""
        return int(self.load * self.n)

    @property
    def rho(self) -> Fraction:
        """Sum network load over the four messages."""
        return 4 * self.load


def file_selector(n: int, file_id: str) -> BitMatrix:
    """n x 2n matrix picking out one file's parts from the stacked file bits."""
    if file_id not in FILES:
        raise ValueError(f"unknown file id {file_id!r}")
    out = np.zeros((n, 2 * n), dtype=np.uint8)
    offset = 0 if file_id == "A" else n
    out[np.arange(n), offset + np.arange(n)] = 1
    return BitMatrix(out)


def _xor_row(n: int, *terms: str) -> np.ndarray:
    # A term like "B3" is part 3 of file B (1-based).
    row = np.zeros(2 * n, dtype=np.uint8)
    for term in terms:
        offset = 0 if term[0] == "A" else n
        row[offset + int(term[1:]) - 1] ^= 1
    return row


def _mat(n: int, rows: list[tuple[str, ...]]) -> BitMatrix:
    return BitMatrix(np.array([_xor_row(n, *terms) for terms in rows], dtype=np.uint8))


def _unit_row(width: int, index: int) -> BitMatrix:
    row = np.zeros((1, width), dtype=np.uint8)
    row[0, index] = 1
    return BitMatrix(row)


def _pick_delivery(rows_u1: int, rows_u2: int, picks: tuple[int, int, int, int]) -> DeliveryQuad:
    # Each message equals exactly one transmitter cache row.
    i1, i2, i3, i4 = picks
    return DeliveryQuad(
        _unit_row(rows_u1, i1),
        _unit_row(rows_u1, i2),
        _unit_row(rows_u2, i3),
        _unit_row(rows_u2, i4),
    )


def _corner_m0() -> LinearScheme:
    # Split files in halves; cache 1 holds the first halves, cache 2 the
    # second.  Each demand is served by sending the four demanded halves.
    n = 2
    u1 = _mat(n, [("A1",), ("B1",)])
    u2 = _mat(n, [("A2",), ("B2",)])
    idx = {"A": 0, "B": 1}
    delivery = {
        d: _pick_delivery(2, 2, (idx[d.w1], idx[d.w2], idx[d.w1], idx[d.w2]))
        for d in Demand
    }
    return LinearScheme(
        n=n,
        memory=Fraction(0),
        load=Fraction(1, 2),
        z1=BitMatrix.zeros(0, 2 * n),
        z2=BitMatrix.zeros(0, 2 * n),
        u1=u1,
        u2=u2,
        delivery=delivery,
    )


def _corner_m13() -> LinearScheme:
    n = 3
    z1 = _mat(n, [("A1", "B1")])
    z2 = _mat(n, [("A2", "B2")])
    u1 = _mat(n, [("A3",), ("B1", "B3"), ("B2", "B3")])
    u2 = _mat(n, [("B3",), ("A1", "A3"), ("A2", "A3")])
    picks = {
        Demand.AA: (0, 0, 1, 2),
        Demand.AB: (0, 1, 2, 0),
        Demand.BA: (2, 0, 0, 1),
        Demand.BB: (1, 2, 0, 0),
    }
    delivery = {d: _pick_delivery(3, 3, p) for d, p in picks.items()}
    return LinearScheme(
        n=n,
        memory=Fraction(1, 3),
        load=Fraction(1, 3),
        z1=z1,
        z2=z2,
        u1=u1,
        u2=u2,
        delivery=delivery,
    )


def _corner_m45() -> LinearScheme:
    n = 5
    z1 = _mat(n, [("A1",), ("A2",), ("B1",), ("B2",)])
    z2 = _mat(n, [("A3",), ("A4",), ("B3",), ("B4",)])
    # Cache 1 row i>0 is B5 XOR S_i, cache 2 row i>0 is A5 XOR T_i, with
    # the S/T pair combinations placed whether or not a demand uses them.
    u1 = _mat(
        n,
        [
            ("A5",),
            ("B5", "B2", "A4"),
            ("B5", "A1", "B3"),
            ("B5", "B1", "B3"),
            ("B5", "B2", "B4"),
        ],
    )
    u2 = _mat(
        n,
        [
            ("B5",),
            ("A5", "A1", "A3"),
            ("A5", "A2", "A4"),
            ("A5", "B1", "A3"),
            ("A5", "A2", "B4"),
        ],
    )
    picks = {
        Demand.AA: (0, 0, 1, 2),
        Demand.AB: (0, 1, 3, 0),
        Demand.BA: (2, 0, 0, 4),
        Demand.BB: (3, 4, 0, 0),
    }
    delivery = {d: _pick_delivery(5, 5, p) for d, p in picks.items()}
    return LinearScheme(
        n=n,
        memory=Fraction(4, 5),
        load=Fraction(1, 5),
        z1=z1,
        z2=z2,
        u1=u1,
        u2=u2,
        delivery=delivery,
    )


def _corner_m2() -> LinearScheme:
    # Both files fit in each receiver cache; nothing is ever transmitted.
    n = 1
    empty = BitMatrix.zeros(0, 2 * n)
    nothing = BitMatrix.zeros(0, 0)
    delivery = {d: DeliveryQuad(nothing, nothing, nothing, nothing) for d in Demand}
    return LinearScheme(
        n=n,
        memory=Fraction(2),
        load=Fraction(0),
        z1=BitMatrix.identity(2),
        z2=BitMatrix.identity(2),
        u1=empty,
        u2=empty,
        delivery=delivery,
    )


_CORNER_BUILDERS = {
    "M0": _corner_m0,
    "M13": _corner_m13,
    "M45": _corner_m45,
    "M2": _corner_m2,
}


def corner_scheme(name: str) -> LinearScheme:
    """One of the four built-in schemes at memory 0, 1/3, 4/5, or 2."""
    try:
        return _CORNER_BUILDERS[name]()
    except KeyError:
        raise ValueError(
            f"unknown corner scheme {name!r}: expected one of {', '.join(CORNER_NAMES)}"
        ) from None


def _embed(x: BitMatrix, n_sub: int, scale: int, n_total: int, part_offset: int) -> BitMatrix:
    """Expand a sub-scheme matrix so each file part covers *scale* bits.

    The sub-scheme's parts land on the combined file's parts
    [part_offset, part_offset + n_sub*scale) for both files.
    """
    if scale == 0:
        return BitMatrix.zeros(0, 2 * n_total)
    expanded = np.kron(x.data, np.eye(scale, dtype=np.uint8))
    out = np.zeros((x.rows * scale, 2 * n_total), dtype=np.uint8)
    width = n_sub * scale
    out[:, part_offset : part_offset + width] = expanded[:, :width]
    out[:, n_total + part_offset : n_total + part_offset + width] = expanded[:, width:]
    return BitMatrix(out)


def _share_delivery(a: BitMatrix, b: BitMatrix, k1: int, k2: int) -> BitMatrix:
    top = np.kron(a.data, np.eye(k1, dtype=np.uint8))
    bot = np.kron(b.data, np.eye(k2, dtype=np.uint8))
    out = np.zeros(
        (top.shape[0] + bot.shape[0], top.shape[1] + bot.shape[1]), dtype=np.uint8
    )
    out[: top.shape[0], : top.shape[1]] = top
    out[top.shape[0] :, top.shape[1] :] = bot
    return BitMatrix(out)


def memory_share(s1: LinearScheme, s2: LinearScheme, lam: Fraction) -> LinearScheme:
    """Convex combination of two schemes by splitting the files.

    A lam-fraction of every file is served by a scaled copy of s1 on the
    low-index parts and the rest by a scaled copy of s2, on disjoint bit
    ranges.  Metrics combine exactly: memory = lam*M1 + (1-lam)*M2 and
    load = lam*c1 + (1-lam)*c2.
    """
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f"sharing coefficient {lam} out of range [0, 1]")
    if lam == 1:
        return s1
    if lam == 0:
        return s2
    p, q = lam.numerator, lam.denominator
    # Smallest granularity aligning both sub-schemes to whole parts.
    t = lcm(s1.n // gcd(p, s1.n), s2.n // gcd(q - p, s2.n))
    n = q * t
    k1 = p * t // s1.n
    k2 = (q - p) * t // s2.n
    offset = p * t

    def stack(m1: BitMatrix, m2: BitMatrix) -> BitMatrix:
        return vstack([_embed(m1, s1.n, k1, n, 0), _embed(m2, s2.n, k2, n, offset)])

    delivery = {}
    for d in Demand:
        q1, q2 = s1.delivery[d], s2.delivery[d]
        delivery[d] = DeliveryQuad(
            *(_share_delivery(a, b, k1, k2) for a, b in zip(q1, q2))
        )
    return LinearScheme(
        n=n,
        memory=lam * s1.memory + (1 - lam) * s2.memory,
        load=lam * s1.load + (1 - lam) * s2.load,
        z1=stack(s1.z1, s2.z1),
        z2=stack(s1.z2, s2.z2),
        u1=stack(s1.u1, s2.u1),
        u2=stack(s1.u2, s2.u2),
        delivery=delivery,
    )


def scheme_for_memory(m: Fraction) -> LinearScheme:
    """Scheme achieving the optimal load at the given memory in [0, 2].

    Locates the segment of the optimal trade-off containing m and
    memory-shares the two bracketing built-in schemes.
    """
    m = Fraction(m)
    if not 0 <= m <= 2:
        raise ValueError(f"M out of range [0, 2]: {m}")
    corners = [corner_scheme(name) for name in CORNER_NAMES]
    for s in corners:
        if s.memory == m:
            return s
    for lo, hi in zip(corners, corners[1:]):
        if lo.memory < m < hi.memory:
            lam = (hi.memory - m) / (hi.memory - lo.memory)
            return memory_share(lo, hi, lam)
    raise AssertionError("unreachable: corner memories cover [0, 2]")


class SchemeFormatError(ValueError):
    """Scheme file violates the line-oriented format."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _frac_text(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def write_scheme(s: LinearScheme) -> str:
    """Serialize to the scheme file format (round-trips with read_scheme)."""
    lines = [f"n {s.n}", f"M {_frac_text(s.memory)}", f"c {_frac_text(s.load)}"]
    for tag, mat in (("Z1", s.z1), ("Z2", s.z2), ("U1", s.u1), ("U2", s.u2)):
        lines.append(f"{tag} {mat.rows}")
        lines.extend(mat.row_texts())
    for d in Demand:
        for vtag, mat in zip(_MESSAGE_TAGS, s.delivery[d]):
            lines.append(f"D {d} {vtag} {mat.rows}")
            lines.extend(mat.row_texts())
    return "\n".join(lines) + "\n"


_ROW_RE = re.compile(r"^[01]+$")
_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_fraction(text: str) -> Fraction:
    """Parse 'p/q' or a bare integer; floating-point forms are rejected."""
    if not _FRACTION_RE.match(text):
        raise ValueError(f"expected a rational like 'p/q' or an integer, got {text!r}")
    return Fraction(text)


class _LineReader:
    def __init__(self, text: str):
        self._lines = []
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self._lines.append((no, stripped))
        self._pos = 0
        self.last_no = 0

    def next(self, what: str) -> tuple[int, str]:
        if self._pos >= len(self._lines):
            raise SchemeFormatError(self.last_no + 1, f"unexpected end of file: expected {what}")
        no, line = self._lines[self._pos]
        self._pos += 1
        self.last_no = no
        return no, line

    def at_end(self) -> bool:
        return self._pos >= len(self._lines)

    def peek_no(self) -> int:
        return self._lines[self._pos][0] if self._pos < len(self._lines) else self.last_no


def _read_matrix(reader: _LineReader, count: int, width: int) -> BitMatrix:
    rows = np.zeros((count, width), dtype=np.uint8)
    for i in range(count):
        no, line = reader.next("a matrix row")
        if not _ROW_RE.match(line) or len(line) != width:
            raise SchemeFormatError(
                no, f"expected a row of exactly {width} characters over 0/1, got {line!r}"
            )
        rows[i] = [int(ch) for ch in line]
    return BitMatrix(rows)


def read_scheme(text: str) -> LinearScheme:
    """Parse a scheme file; raises SchemeFormatError with a line number."""
    reader = _LineReader(text)

    def header(tag: str) -> tuple[int, str]:
        no, line = reader.next(f"header '{tag} ...'")
        parts = line.split()
        if len(parts) != 2 or parts[0] != tag:
            raise SchemeFormatError(no, f"expected header '{tag} <value>', got {line!r}")
        return no, parts[1]

    no, raw = header("n")
    try:
        n = int(raw)
    except ValueError:
        raise SchemeFormatError(no, f"granularity must be an integer, got {raw!r}") from None
    if n <= 0:
        raise SchemeFormatError(no, f"granularity must be positive, got {n}")

    def rational(tag: str) -> Fraction:
        no, raw = header(tag)
        try:
            value = parse_fraction(raw)
        except ValueError as exc:
            raise SchemeFormatError(no, str(exc)) from None
        if (value * n).denominator != 1:
            raise SchemeFormatError(no, f"{tag}*n = {value * n} is not an integer")
        return value

    memory = rational("M")
    load = rational("c")
    cache_rows = int(memory * n)
    message_rows = int(load * n)
    width = 2 * n

    def count_from(no: int, raw: str, tag: str) -> int:
        try:
            return int(raw)
        except ValueError:
            raise SchemeFormatError(
                no, f"{tag} row count must be an integer, got {raw!r}"
            ) from None

    def cache_block(tag: str, expected_rows: int | None, max_rows: int | None) -> BitMatrix:
        no, raw = header(tag)
        count = count_from(no, raw, tag)
        if expected_rows is not None and count != expected_rows:
            raise SchemeFormatError(no, f"{tag} must declare {expected_rows} rows, got {count}")
        if max_rows is not None and not 0 <= count <= max_rows:
            raise SchemeFormatError(no, f"{tag} must declare at most {max_rows} rows, got {count}")
        return _read_matrix(reader, count, width)

    def delivery_block(demand: Demand, vtag: str, row_width: int) -> BitMatrix:
        expected = f"D {demand} {vtag}"
        no, line = reader.next(f"header '{expected} <rows>'")
        parts = line.split()
        if len(parts) != 4 or parts[:3] != ["D", str(demand), vtag]:
            raise SchemeFormatError(no, f"expected header '{expected} <rows>', got {line!r}")
        count = count_from(no, parts[3], expected)
        if count != message_rows:
            raise SchemeFormatError(no, f"{expected} must declare {message_rows} rows, got {count}")
        return _read_matrix(reader, count, row_width)

    z1 = cache_block("Z1", cache_rows, None)
    z2 = cache_block("Z2", cache_rows, None)
    u1 = cache_block("U1", None, n)
    u2 = cache_block("U2", None, n)

    delivery = {}
    for d in Demand:
        mats = [
            delivery_block(d, vtag, src.rows)
            for vtag, src in zip(_MESSAGE_TAGS, (u1, u1, u2, u2))
        ]
        delivery[d] = DeliveryQuad(*mats)
    if not reader.at_end():
        raise SchemeFormatError(reader.peek_no(), "unexpected content after the last block")
    return LinearScheme(
        n=n, memory=memory, load=load, z1=z1, z2=z2, u1=u1, u2=u2, delivery=delivery
    )
