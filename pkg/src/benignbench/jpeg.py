"""Self-contained baseline JPEG codec used by the transcoding operator.

Encodes 8-bit RGB to a baseline sequential JFIF stream (8-bit samples,
4:2:0 chroma subsampling, Huffman entropy coding) and decodes it back.
Quantization tables are the classic reference tables scaled by the
ubiquitous quality-factor convention:

    scale = 5000 // q        (q < 50)
    scale = 200 - 2 * q      (q >= 50)
    entry = clamp((base * scale + 50) // 100, 1, 255)

so quality 50 emits the reference tables unmodified. Huffman tables
are generated per image from symbol statistics (two-pass encoding);
the decoder reads whatever tables the stream declares.

Implementing the codec here keeps the quantization path inspectable
and the harness free of codec-library version drift; only this module
knows about the wire format.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import JpegError

# Reference luminance/chrominance quantization tables (natural order).
QUANT_LUMA_BASE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)

QUANT_CHROMA_BASE = np.array(
    [
        [17, 18, 24, 47, 99, 99, 99, 99],
        [18, 21, 26, 66, 99, 99, 99, 99],
        [24, 26, 56, 99, 99, 99, 99, 99],
        [47, 66, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
    ],
    dtype=np.int64,
)

# Position (row-major) of the t-th coefficient in zigzag scan order.
ZIGZAG = np.array(
    [
        0, 1, 8, 16, 9, 2, 3, 10,
        17, 24, 32, 25, 18, 11, 4, 5,
        12, 19, 26, 33, 40, 48, 41, 34,
        27, 20, 13, 6, 7, 14, 21, 28,
        35, 42, 49, 56, 57, 50, 43, 36,
        29, 22, 15, 23, 30, 37, 44, 51,
        58, 59, 52, 45, 38, 31, 39, 46,
        53, 60, 61, 54, 47, 55, 62, 63,
    ],
    dtype=np.int64,
)

# Orthonormal 8x8 DCT-II matrix; M @ block @ M.T is the forward DCT
# with exactly the scaling the format expects.
def _dct_matrix() -> np.ndarray:
    u = np.arange(8).reshape(-1, 1)
    x = np.arange(8).reshape(1, -1)
    m = np.cos((2 * x + 1) * u * np.pi / 16.0) * 0.5
    m[0, :] = np.sqrt(1.0 / 8.0)
    return m


_DCT = _dct_matrix()

_MARKER_SOI = 0xD8
_MARKER_EOI = 0xD9
_MARKER_SOS = 0xDA
_MARKER_DQT = 0xDB
_MARKER_DHT = 0xC4
_MARKER_SOF0 = 0xC0
_MARKER_DRI = 0xDD


def quality_scale(quality: int) -> int:
    """Quality factor (1..100) to percent scaling of the base tables."""
    if not isinstance(quality, (int, np.integer)) or isinstance(quality, bool):
        raise ValueError(f"quality must be an integer, got {quality!r}")
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in [1, 100], got {quality}")
    if quality < 50:
        return 5000 // int(quality)
    return 200 - 2 * int(quality)


def quant_tables(quality: int) -> tuple[np.ndarray, np.ndarray]:
    """Scaled (luma, chroma) quantization tables, natural order."""
    scale = quality_scale(quality)
    tables = []
    for base in (QUANT_LUMA_BASE, QUANT_CHROMA_BASE):
        scaled = (base * scale + 50) // 100
        tables.append(np.clip(scaled, 1, 255).astype(np.int64))
    return tables[0], tables[1]


# ---------------------------------------------------------------------------
# plane helpers
# ---------------------------------------------------------------------------

def _pad_to(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    h, w = plane.shape
    return np.pad(plane, ((0, height - h), (0, width - w)), mode="edge")


def _to_blocks(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    return (
        plane.reshape(h // 8, 8, w // 8, 8)
        .transpose(0, 2, 1, 3)
        .reshape(h // 8, w // 8, 8, 8)
    )


def _from_blocks(blocks: np.ndarray) -> np.ndarray:
    by, bx = blocks.shape[:2]
    return blocks.transpose(0, 2, 1, 3).reshape(by * 8, bx * 8)


def _forward_dct_quantize(plane: np.ndarray, qtable: np.ndarray) -> np.ndarray:
    blocks = _to_blocks(plane) - 128.0
    coeffs = _DCT @ blocks @ _DCT.T
    return np.rint(coeffs / qtable).astype(np.int32)


def _dequantize_idct(blocks: np.ndarray, qtable: np.ndarray) -> np.ndarray:
    coeffs = blocks.astype(np.float64) * qtable
    pixels = _DCT.T @ coeffs @ _DCT + 128.0
    return _from_blocks(pixels)


def _rgb_to_ycbcr(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b
    return y, np.clip(cb, 0.0, 255.0), np.clip(cr, 0.0, 255.0)


def _ycbcr_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    cb = cb - 128.0
    cr = cr - 128.0
    r = y + 1.402 * cr
    g = y - 0.344136286 * cb - 0.714136286 * cr
    b = y + 1.772 * cb
    rgb = np.stack([r, g, b], axis=-1)
    return np.rint(np.clip(rgb, 0.0, 255.0)).astype(np.uint8)


def _subsample_420(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    padded = _pad_to(plane, h + h % 2, w + w % 2)
    ph, pw = padded.shape
    return padded.reshape(ph // 2, 2, pw // 2, 2).mean(axis=(1, 3))


# ---------------------------------------------------------------------------
# Huffman coding
# ---------------------------------------------------------------------------

def _optimal_huffman(freq: np.ndarray) -> tuple[list[int], list[int]]:
    """Derive (bits, values) from symbol frequencies.

    Classic optimal-table construction: pair-merge to get code sizes,
    fold lengths above 16 back down, and reserve one max-length code
    point (via a phantom 257th symbol) so no real code is all ones.
    """
    freq = freq.astype(np.int64).copy()
    freq = np.append(freq, 1)  # phantom symbol 256
    codesize = [0] * 257
    others = [-1] * 257

    while True:
        nonzero = [i for i in range(257) if freq[i] > 0]
        if len(nonzero) <= 1:
            break
        # smallest frequency, then largest symbol value
        c1 = max((i for i in nonzero), key=lambda i: (-freq[i], i))
        c2 = max((i for i in nonzero if i != c1), key=lambda i: (-freq[i], i))
        freq[c1] += freq[c2]
        freq[c2] = 0
        codesize[c1] += 1
        while others[c1] >= 0:
            c1 = others[c1]
            codesize[c1] += 1
        others[c1] = c2
        codesize[c2] += 1
        while others[c2] >= 0:
            c2 = others[c2]
            codesize[c2] += 1

    max_len = max(codesize)
    bits = [0] * (max_len + 1)
    for size in codesize:
        if size:
            bits[size] += 1

    # length-limit to 16 bits
    for length in range(max_len, 16, -1):
        while bits[length] > 0:
            shorter = length - 2
            while bits[shorter] == 0:
                shorter -= 1
            bits[length] -= 2
            bits[length - 1] += 1
            bits[shorter + 1] += 2
            bits[shorter] -= 1
    bits = bits[: 17] + [0] * max(0, 17 - len(bits))
    length = 16
    while bits[length] == 0:
        length -= 1
    bits[length] -= 1  # drop the phantom's code point

    # symbol order follows the pre-limit code sizes (which may exceed 16);
    # the adjusted bits redistribute them into legal lengths
    values = []
    for length in range(1, max_len + 1):
        for symbol in range(256):
            if codesize[symbol] == length:
                values.append(symbol)
    return bits[1:17], values


def _assign_codes(bits: list[int], values: list[int]) -> dict[int, tuple[int, int]]:
    """Canonical code assignment: symbol -> (code, length)."""
    table = {}
    code = 0
    idx = 0
    for length in range(1, 17):
        for _ in range(bits[length - 1]):
            table[values[idx]] = (code, length)
            code += 1
            idx += 1
        code <<= 1
    return table


class _BitWriter:
    def __init__(self):
        self.out = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, length: int) -> None:
        if length == 0:
            return
        self._acc = (self._acc << length) | (value & ((1 << length) - 1))
        self._nbits += length
        while self._nbits >= 8:
            self._nbits -= 8
            byte = (self._acc >> self._nbits) & 0xFF
            self.out.append(byte)
            if byte == 0xFF:
                self.out.append(0x00)  # byte stuffing
        self._acc &= (1 << self._nbits) - 1

    def flush(self) -> None:
        if self._nbits:
            pad = 8 - self._nbits
            self.write((1 << pad) - 1, pad)


def _magnitude(value: int) -> tuple[int, int]:
    """(size category, appended bits) for a DC diff or AC coefficient."""
    if value == 0:
        return 0, 0
    size = int(abs(value)).bit_length()
    bits = value if value >= 0 else value + (1 << size) - 1
    return size, bits


def _tokenize_block(zz: np.ndarray, pred: int, tokens: list, dc_id: int, ac_id: int) -> int:
    """Append (table, symbol, bits, nbits) tokens for one block."""
    dc = int(zz[0])
    size, bits = _magnitude(dc - pred)
    tokens.append((dc_id, size, bits, size))
    run = 0
    last_nonzero = 0
    nonzero = np.nonzero(zz[1:])[0]
    if nonzero.size:
        last_nonzero = int(nonzero[-1]) + 1
    for k in range(1, last_nonzero + 1):
        coeff = int(zz[k])
        if coeff == 0:
            run += 1
            continue
        while run > 15:
            tokens.append((ac_id, 0xF0, 0, 0))  # ZRL: sixteen zeros
            run -= 16
        size, bits = _magnitude(coeff)
        tokens.append((ac_id, (run << 4) | size, bits, size))
        run = 0
    if last_nonzero < 63:
        tokens.append((ac_id, 0x00, 0, 0))  # EOB
    return dc


# ---------------------------------------------------------------------------
# encoder
# ---------------------------------------------------------------------------

def encode(rgb: np.ndarray, quality: int) -> bytes:
    """Encode an (H, W, 3) uint8 RGB array to a baseline JFIF stream."""
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.dtype != np.uint8:
        raise JpegError(f"encoder expects (H, W, 3) uint8, got {rgb.shape} {rgb.dtype}")
    height, width = rgb.shape[:2]
    if height < 1 or width < 1 or height > 65535 or width > 65535:
        raise JpegError(f"unsupported image dimensions {height}x{width}")
    qluma, qchroma = quant_tables(quality)

    y, cb, cr = _rgb_to_ycbcr(rgb)
    mcus_y = (height + 15) // 16
    mcus_x = (width + 15) // 16
    yq = _forward_dct_quantize(_pad_to(y, mcus_y * 16, mcus_x * 16), qluma)
    cbq = _forward_dct_quantize(
        _pad_to(_subsample_420(cb), mcus_y * 8, mcus_x * 8), qchroma
    )
    crq = _forward_dct_quantize(
        _pad_to(_subsample_420(cr), mcus_y * 8, mcus_x * 8), qchroma
    )

    # token pass; table ids: 0 DC luma, 1 AC luma, 2 DC chroma, 3 AC chroma
    tokens: list[tuple[int, int, int, int]] = []
    preds = [0, 0, 0]
    zz_y = yq.reshape(yq.shape[0], yq.shape[1], 64)[:, :, ZIGZAG]
    zz_cb = cbq.reshape(mcus_y, mcus_x, 64)[:, :, ZIGZAG]
    zz_cr = crq.reshape(mcus_y, mcus_x, 64)[:, :, ZIGZAG]
    for my in range(mcus_y):
        for mx in range(mcus_x):
            for dy in (0, 1):
                for dx in (0, 1):
                    preds[0] = _tokenize_block(
                        zz_y[2 * my + dy, 2 * mx + dx], preds[0], tokens, 0, 1
                    )
            preds[1] = _tokenize_block(zz_cb[my, mx], preds[1], tokens, 2, 3)
            preds[2] = _tokenize_block(zz_cr[my, mx], preds[2], tokens, 2, 3)

    freqs = np.zeros((4, 256), dtype=np.int64)
    for table, symbol, _, _ in tokens:
        freqs[table, symbol] += 1
    specs = [_optimal_huffman(freqs[i]) for i in range(4)]
    codes = [_assign_codes(*spec) for spec in specs]

    writer = _BitWriter()
    for table, symbol, bits, nbits in tokens:
        code, length = codes[table][symbol]
        writer.write(code, length)
        writer.write(bits, nbits)
    writer.flush()

    out = bytearray()
    out += b"\xff\xd8"  # SOI
    out += b"\xff\xe0" + struct.pack(">H", 16) + b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00"
    for tq, table in ((0, qluma), (1, qchroma)):
        out += b"\xff\xdb" + struct.pack(">HB", 67, tq)
        out += bytes(int(v) for v in table.reshape(64)[ZIGZAG])
    out += b"\xff\xc0" + struct.pack(">HBHHB", 17, 8, height, width, 3)
    out += bytes((1, 0x22, 0)) + bytes((2, 0x11, 1)) + bytes((3, 0x11, 1))
    for (tc, th), spec in zip(((0, 0), (1, 0), (0, 1), (1, 1)), specs):
        bits, values = spec
        out += b"\xff\xc4" + struct.pack(">HB", 19 + len(values), (tc << 4) | th)
        out += bytes(bits) + bytes(values)
    out += b"\xff\xda" + struct.pack(">HB", 12, 3)
    out += bytes((1, 0x00)) + bytes((2, 0x11)) + bytes((3, 0x11))
    out += bytes((0, 63, 0))
    out += writer.out
    out += b"\xff\xd9"  # EOI
    return bytes(out)


# ---------------------------------------------------------------------------
# decoder
# ---------------------------------------------------------------------------

class _BitReader:
    """MSB-first reader over entropy-coded segments split at RST markers."""

    def __init__(self, segments: list[bytes]):
        self.segments = segments
        self.seg = 0
        self.pos = 0
        self.bit = 0

    def restart(self) -> None:
        if self.seg + 1 >= len(self.segments):
            raise JpegError("missing restart segment in scan data")
        self.seg += 1
        self.pos = 0
        self.bit = 0

    def read_bit(self) -> int:
        data = self.segments[self.seg]
        if self.pos >= len(data):
            raise JpegError("truncated entropy-coded data")
        value = (data[self.pos] >> (7 - self.bit)) & 1
        self.bit += 1
        if self.bit == 8:
            self.bit = 0
            self.pos += 1
        return value

    def read_bits(self, n: int) -> int:
        value = 0
        for _ in range(n):
            value = (value << 1) | self.read_bit()
        return value


def _decode_symbol(reader: _BitReader, table: dict[tuple[int, int], int]) -> int:
    code = 0
    for length in range(1, 17):
        code = (code << 1) | reader.read_bit()
        symbol = table.get((length, code))
        if symbol is not None:
            return symbol
    raise JpegError("invalid Huffman code in scan data")


def _extend(value: int, size: int) -> int:
    if size == 0:
        return 0
    if value < (1 << (size - 1)):
        return value - (1 << size) + 1
    return value


def _split_scan(data: bytes, pos: int) -> tuple[list[bytes], int]:
    """Collect entropy bytes (destuffed) up to the next real marker."""
    segments = []
    current = bytearray()
    n = len(data)
    while pos < n:
        byte = data[pos]
        if byte != 0xFF:
            current.append(byte)
            pos += 1
            continue
        if pos + 1 >= n:
            raise JpegError("truncated stream inside scan")
        nxt = data[pos + 1]
        if nxt == 0x00:
            current.append(0xFF)
            pos += 2
        elif 0xD0 <= nxt <= 0xD7:  # RSTn
            segments.append(bytes(current))
            current = bytearray()
            pos += 2
        else:
            break
    segments.append(bytes(current))
    return segments, pos


class _Component:
    def __init__(self, cid, h, v, tq):
        self.cid = cid
        self.h = h
        self.v = v
        self.tq = tq
        self.dc_table = 0
        self.ac_table = 0


def _parse_segments(data: bytes):
    """Walk markers up to (and including) SOS; return parsed state."""
    if len(data) < 4 or data[0] != 0xFF or data[1] != _MARKER_SOI:
        raise JpegError("not a JPEG stream (missing SOI)")
    qtables: dict[int, np.ndarray] = {}
    htables: dict[tuple[int, int], dict] = {}
    frame = None
    restart_interval = 0
    pos = 2
    while True:
        if pos + 4 > len(data):
            raise JpegError("truncated stream (no SOS)")
        if data[pos] != 0xFF:
            raise JpegError(f"expected marker at offset {pos}")
        marker = data[pos + 1]
        if marker == _MARKER_EOI:
            raise JpegError("stream has no scan data")
        length = struct.unpack(">H", data[pos + 2 : pos + 4])[0]
        body = data[pos + 4 : pos + 2 + length]
        if len(body) != length - 2:
            raise JpegError("truncated marker segment")
        pos += 2 + length

        if marker == _MARKER_DQT:
            i = 0
            while i < len(body):
                precision = body[i] >> 4
                tq = body[i] & 0x0F
                i += 1
                if precision == 0:
                    raw = np.frombuffer(body[i : i + 64], dtype=np.uint8).astype(np.int64)
                    i += 64
                elif precision == 1:
                    raw = np.frombuffer(body[i : i + 128], dtype=">u2").astype(np.int64)
                    i += 128
                else:
                    raise JpegError(f"bad DQT precision {precision}")
                if raw.size != 64:
                    raise JpegError("truncated DQT segment")
                table = np.empty(64, dtype=np.int64)
                table[ZIGZAG] = raw
                qtables[tq] = table.reshape(8, 8)
        elif marker == _MARKER_DHT:
            i = 0
            while i < len(body):
                tc = body[i] >> 4
                th = body[i] & 0x0F
                counts = list(body[i + 1 : i + 17])
                total = sum(counts)
                values = list(body[i + 17 : i + 17 + total])
                if len(values) != total:
                    raise JpegError("truncated DHT segment")
                i += 17 + total
                decode = {}
                code = 0
                vi = 0
                for bit_length in range(1, 17):
                    for _ in range(counts[bit_length - 1]):
                        decode[(bit_length, code)] = values[vi]
                        code += 1
                        vi += 1
                    code <<= 1
                htables[(tc, th)] = decode
        elif marker == _MARKER_SOF0:
            precision = body[0]
            if precision != 8:
                raise JpegError(f"unsupported sample precision {precision}")
            height, width = struct.unpack(">HH", body[1:5])
            ncomp = body[5]
            comps = []
            for c in range(ncomp):
                cid, hv, tq = body[6 + 3 * c : 9 + 3 * c]
                comps.append(_Component(cid, hv >> 4, hv & 0x0F, tq))
            frame = (height, width, comps)
        elif 0xC1 <= marker <= 0xCF and marker not in (_MARKER_DHT, 0xC8):
            raise JpegError(f"unsupported SOF marker 0xFF{marker:02X} (baseline only)")
        elif marker == _MARKER_DRI:
            restart_interval = struct.unpack(">H", body[:2])[0]
        elif marker == _MARKER_SOS:
            if frame is None:
                raise JpegError("SOS before SOF")
            ncomp = body[0]
            comps = {c.cid: c for c in frame[2]}
            scan = []
            for c in range(ncomp):
                cid, tables = body[1 + 2 * c : 3 + 2 * c]
                if cid not in comps:
                    raise JpegError(f"scan references unknown component {cid}")
                comp = comps[cid]
                comp.dc_table = tables >> 4
                comp.ac_table = tables & 0x0F
                scan.append(comp)
            return frame, scan, qtables, htables, restart_interval, pos
        # APPn / COM / anything else: skipped


def read_quant_tables(data: bytes) -> dict[int, np.ndarray]:
    """Quantization tables declared in a stream (id -> 8x8, natural order)."""
    _, _, qtables, _, _, _ = _parse_segments(data)
    return qtables


def decode(data: bytes) -> np.ndarray:
    """Decode a baseline JPEG stream to an (H, W, 3) uint8 RGB array."""
    frame, scan, qtables, htables, restart_interval, pos = _parse_segments(data)
    height, width, comps = frame
    if len(scan) not in (1, 3):
        raise JpegError(f"unsupported component count {len(scan)}")
    segments, _ = _split_scan(data, pos)
    reader = _BitReader(segments)

    hmax = max(c.h for c in comps)
    vmax = max(c.v for c in comps)
    mcus_x = (width + 8 * hmax - 1) // (8 * hmax)
    mcus_y = (height + 8 * vmax - 1) // (8 * vmax)

    grids = {}
    for comp in comps:
        grids[comp.cid] = np.zeros((mcus_y * comp.v, mcus_x * comp.h, 8, 8), dtype=np.int32)

    preds = {comp.cid: 0 for comp in comps}
    mcu_count = 0
    for my in range(mcus_y):
        for mx in range(mcus_x):
            if restart_interval and mcu_count and mcu_count % restart_interval == 0:
                reader.restart()
                preds = {comp.cid: 0 for comp in comps}
            mcu_count += 1
            for comp in scan:
                dc_tab = htables.get((0, comp.dc_table))
                ac_tab = htables.get((1, comp.ac_table))
                if dc_tab is None or ac_tab is None:
                    raise JpegError("scan uses an undeclared Huffman table")
                for dy in range(comp.v):
                    for dx in range(comp.h):
                        zz = np.zeros(64, dtype=np.int32)
                        size = _decode_symbol(reader, dc_tab)
                        diff = _extend(reader.read_bits(size), size)
                        preds[comp.cid] += diff
                        zz[0] = preds[comp.cid]
                        k = 1
                        while k < 64:
                            symbol = _decode_symbol(reader, ac_tab)
                            run = symbol >> 4
                            size = symbol & 0x0F
                            if size == 0:
                                if run == 15:
                                    k += 16
                                    continue
                                break  # EOB
                            k += run
                            if k > 63:
                                raise JpegError("AC coefficient index overflow")
                            zz[k] = _extend(reader.read_bits(size), size)
                            k += 1
                        block = np.zeros(64, dtype=np.int32)
                        block[ZIGZAG] = zz
                        grids[comp.cid][my * comp.v + dy, mx * comp.h + dx] = (
                            block.reshape(8, 8)
                        )

    planes = {}
    for comp in comps:
        if comp.tq not in qtables:
            raise JpegError(f"component {comp.cid} uses undeclared quant table {comp.tq}")
        plane = _dequantize_idct(grids[comp.cid], qtables[comp.tq])
        comp_h = -(-height * comp.v // vmax)
        comp_w = -(-width * comp.h // hmax)
        plane = plane[:comp_h, :comp_w]
        if comp.v != vmax:
            plane = np.repeat(plane, vmax // comp.v, axis=0)
        if comp.h != hmax:
            plane = np.repeat(plane, hmax // comp.h, axis=1)
        planes[comp.cid] = np.clip(plane[:height, :width], 0.0, 255.0)

    if len(scan) == 1:
        gray = np.rint(planes[comps[0].cid]).astype(np.uint8)
        return np.stack([gray] * 3, axis=-1)
    ids = [c.cid for c in comps]
    return _ycbcr_to_rgb(planes[ids[0]], planes[ids[1]], planes[ids[2]])


def transcode(img: np.ndarray, quality: int) -> np.ndarray:
    """Round-trip a float [0, 1] frame through the codec at ``quality``."""
    from . import image as _image

    rgb = _image.to_uint8(img)
    decoded = decode(encode(rgb, quality))
    return _image.from_uint8(decoded)
