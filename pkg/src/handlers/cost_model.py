"""Closed-form cost model: instruction counts, bits on the wire and seconds per scheme."""

import csv
import enum
import io
import logging
import math
from decimal import ROUND_DOWN, Decimal
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

from ..models.schemas import CostParams, CostReport
from ..models.transcript import SchemeId
from ..utils.errors import DomainError, ParameterError

logger = logging.getLogger(__name__)

Number = Union[int, float]

CSV_COLUMNS = ("scheme", "server_ops", "client_ops", "server_s", "client_s", "server_bits", "client_bits")


class CostScheme(str, enum.Enum):
    NAIVE_PULL = SchemeId.NAIVE_PULL.value
    NAIVE_PUSH = SchemeId.NAIVE_PUSH.value
    DIFFIE_HELLMAN = SchemeId.DIFFIE_HELLMAN.value
    BLIND_RSA = SchemeId.BLIND_RSA.value
    PAILLIER_POLYNOMIAL = SchemeId.PAILLIER_POLYNOMIAL.value
    YAO_SCS = "yao-scs"


TABLE_SCHEMES = (
    CostScheme.NAIVE_PULL,
    CostScheme.NAIVE_PUSH,
    CostScheme.DIFFIE_HELLMAN,
    CostScheme.BLIND_RSA,
    CostScheme.PAILLIER_POLYNOMIAL,
)


class PrimitiveKind(str, enum.Enum):
    HASH = "hash"
    ADD = "add"
    MULTIPLY = "multiply"
    DIVIDE = "divide"
    MOD_EXP = "mod-exp"
    HORNER = "horner"
    VIETE = "viete"
    PAILLIER_ENCRYPT = "paillier-encrypt"
    PAILLIER_DECRYPT = "paillier-decrypt"
    PAILLIER_ADD = "paillier-add"


def _log2(x: Number) -> Number:
    """log base 2, exact for powers of two."""
    if x <= 0:
        raise ParameterError(f"log of non-positive value {x}")
    if isinstance(x, int) and x & (x - 1) == 0:
        return x.bit_length() - 1
    return math.log2(x)


def _size(sizes: Dict[str, Number], name: str) -> Number:
    if name not in sizes:
        raise ParameterError(f"missing size {name!r}")
    value = sizes[name]
    if value <= 0:
        raise ParameterError(f"size {name!r} must be positive, got {value}")
    return value


def primitive_cost(kind: Union[PrimitiveKind, str], **sizes: Number) -> Number:
    """Instruction count of one primitive, big-O constants taken as 1."""
    try:
        kind = PrimitiveKind(kind)
    except ValueError as e:
        raise DomainError(f"unknown primitive {kind!r}") from e

    if kind is PrimitiveKind.HASH:
        return (_size(sizes, "alpha") + _size(sizes, "beta")) * _size(sizes, "tau")
    alpha = _size(sizes, "alpha")
    if kind is PrimitiveKind.ADD:
        return alpha
    if kind is PrimitiveKind.MULTIPLY:
        return alpha ** 2
    if kind is PrimitiveKind.DIVIDE:
        return alpha * _log2(alpha) ** 2
    if kind is PrimitiveKind.MOD_EXP:
        return alpha ** 2 * _size(sizes, "k")
    if kind is PrimitiveKind.HORNER:
        return _size(sizes, "gamma") * alpha * (alpha + 1)
    if kind is PrimitiveKind.VIETE:
        return _size(sizes, "gamma") ** 2 * (alpha ** 2 + alpha)
    if kind is PrimitiveKind.PAILLIER_ENCRYPT:
        return 2 * alpha ** 2 * (alpha + 2 * _size(sizes, "beta") + 8)
    if kind is PrimitiveKind.PAILLIER_DECRYPT:
        return 4 * alpha * (16 * alpha ** 2 + 4 * alpha + _log2(4 * alpha) ** 2)
    return 16 * alpha ** 2


def primitive_seconds(count: Number, hz: float) -> float:
    if hz <= 0:
        raise ParameterError(f"clock rate must be positive, got {hz}")
    return count / hz


def hash_bulk_seconds(count: int, alpha: int = 2 ** 9, beta: int = 2 ** 8, tau: int = 2 ** 8, hz: float = 1e11) -> float:
    """Time to hash `count` trail points on one machine."""
    return primitive_seconds(count * primitive_cost(PrimitiveKind.HASH, alpha=alpha, beta=beta, tau=tau), hz)


def _ops(scheme: CostScheme, p: CostParams):
    m, n, a, b, t = p.m, p.n, p.alpha, p.beta, p.tau
    if scheme is CostScheme.NAIVE_PULL:
        return m * (a + b) * t, n * (a + b) * t + m * n, 1, m * b
    if scheme is CostScheme.NAIVE_PUSH:
        return m * (a + b) * t + m * n, n * (a + b) * t, p.intersection_size * b, n * b
    if scheme is CostScheme.DIFFIE_HELLMAN:
        return t * (m * a ** 2 + n * t ** 2), t * (n * a ** 2 + m * t ** 2) + m * n, (m + n) * t, n * t
    if scheme is CostScheme.BLIND_RSA:
        server = t * (m * a ** 2 + 4 * n * t ** 2)
        client = n * (a ** 2 * t + 2 * a * t + 2 * t * _log2(2 * t) ** 2 + m)
        return server, client, 2 * t * (m + n), 2 * n * t
    if scheme is CostScheme.PAILLIER_POLYNOMIAL:
        server = m * (n * (4 * t * a + 16 * t ** 2) + 4 * a * t + 16 * t ** 2 + 2 * t ** 2 * (t + (2 * a + 8)))
        client = (
            n ** 2 * (a ** 2 + a)
            + n * (2 * t ** 2 * (t + 2 * a + 8))
            + m * (4 * t * (16 * t ** 2 + 4 * t + _log2(4 * t) ** 2))
            + m * n
        )
        return server, client, 4 * m * t, 4 * n * t
    # Yao sort-compare-shuffle; the same totals are reported for both parties
    sigma, kappa = p.sigma, p.kappa
    ops = 12 * m * sigma * _log2(m) + 3 * m * sigma
    bits = 6 * m * kappa * sigma * _log2(m) + 2 * m * kappa * sigma
    return ops, ops, bits, bits


def scheme_cost(scheme: Union[CostScheme, SchemeId, str], p: CostParams) -> CostReport:
    try:
        scheme = CostScheme(getattr(scheme, "value", scheme))
    except ValueError as e:
        raise DomainError(f"unknown scheme {scheme!r}") from e
    server_ops, client_ops, server_bits, client_bits = _ops(scheme, p)
    return CostReport(
        scheme=scheme.value,
        server_ops=server_ops,
        client_ops=client_ops,
        server_bits=int(server_bits),
        client_bits=int(client_bits),
        server_seconds=primitive_seconds(server_ops, p.server_hz),
        client_seconds=primitive_seconds(client_ops, p.client_hz),
    )


# Set sizes of the two evaluated scenarios
PRESETS: Dict[str, Dict[str, int]] = {
    "india": {"m": 2 ** 30, "n": 2 ** 10},
    "sparse": {"m": 2 ** 20, "n": 2 ** 10},
}

# Sizes each scheme is evaluated with in both scenarios
SCHEME_PRESETS: Dict[CostScheme, Dict[str, int]] = {
    CostScheme.NAIVE_PULL: {"alpha": 2 ** 9, "beta": 2 ** 8, "tau": 2 ** 8},
    CostScheme.NAIVE_PUSH: {"alpha": 2 ** 9, "beta": 2 ** 8, "tau": 2 ** 8},
    CostScheme.DIFFIE_HELLMAN: {"alpha": 2 ** 8, "tau": 2 ** 12},
    CostScheme.BLIND_RSA: {"alpha": 2 ** 8, "beta": 2 ** 24, "tau": 2 ** 12},
    CostScheme.PAILLIER_POLYNOMIAL: {"alpha": 2 ** 8, "tau": 2 ** 12},
    CostScheme.YAO_SCS: {},
}


def preset_params(preset: str, scheme: Union[CostScheme, str], **overrides: Number) -> CostParams:
    """CostParams for one scheme under a named scenario; explicit overrides win."""
    if preset not in PRESETS:
        raise DomainError(f"unknown preset {preset!r}; choose from {', '.join(sorted(PRESETS))}")
    values: Dict[str, Number] = {**PRESETS[preset], **SCHEME_PRESETS[CostScheme(scheme)]}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return CostParams(**values)


def format_seconds(value: float) -> str:
    """Four significant figures, or five in scientific notation from 1e4 up, truncated toward zero."""
    if not math.isfinite(value) or value == 0:
        return f"{value:.4g}"
    scientific = abs(value) >= 1e4
    exact = Decimal(repr(value))
    quantum = Decimal(1).scaleb(exact.adjusted() - (4 if scientific else 3))
    truncated = float(exact.quantize(quantum, rounding=ROUND_DOWN))
    return f"{truncated:.4e}" if scientific else f"{truncated:.4g}"


def format_bits(value: int) -> str:
    if value == 1:
        return "O(1)"
    if value > 0 and value & (value - 1) == 0:
        return f"2^{value.bit_length() - 1}"
    return f"~2^{round(math.log2(value))}"


def format_ops(value: Number) -> str:
    return str(value) if isinstance(value, int) else f"{value:.6g}"


class RenderedScenario(NamedTuple):
    rows: List[CostReport]
    table: str
    csv: str


def scenario_reports(
    params: Union[CostParams, str],
    schemes: Optional[Sequence[Union[CostScheme, str]]] = None,
    **overrides: Number,
) -> List[CostReport]:
    """One report per scheme; `params` is either fixed CostParams or a preset name."""
    schemes = [CostScheme(getattr(s, "value", s)) for s in (schemes or TABLE_SCHEMES)]
    if isinstance(params, str):
        return [scheme_cost(s, preset_params(params, s, **overrides)) for s in schemes]
    if overrides:
        params = params.model_copy(update={k: v for k, v in overrides.items() if v is not None})
    return [scheme_cost(s, params) for s in schemes]


def render_scenario(
    params: Union[CostParams, str],
    schemes: Optional[Sequence[Union[CostScheme, str]]] = None,
    **overrides: Number,
) -> RenderedScenario:
    """Aligned text table and CSV for the given scenario."""
    rows = scenario_reports(params, schemes, **overrides)

    headers = ("scheme", "server_s", "client_s", "server_bits", "client_bits")
    cells = [
        (
            r.scheme,
            format_seconds(r.server_seconds),
            format_seconds(r.client_seconds),
            format_bits(r.server_bits),
            format_bits(r.client_bits),
        )
        for r in rows
    ]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)
    table = "\n".join(lines) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow((
            r.scheme,
            format_ops(r.server_ops),
            format_ops(r.client_ops),
            format_seconds(r.server_seconds),
            format_seconds(r.client_seconds),
            r.server_bits,
            r.client_bits,
        ))
    return RenderedScenario(rows=rows, table=table, csv=buffer.getvalue())
