"""JSON forms for circulants, spectra, functions, and reports.

Complex numbers serialize as two-element [re, im] arrays everywhere.  A
circulant is {"d": int, "row": [[re, im], ...]}; a function is
{"kind": "poly"|"rational"|"exppoly", "d": int, "P": [circulant, ...]} with
"Q" (rational) or "G" (exppoly) as required, coefficient lists leading-first.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .characterize import ChannelEstimate, DegreeReport, DivisorReport, ZeroBoundReport
from .core import Circulant
from .functions import (
    CircFunction,
    CircPoly,
    ExpPolyFunction,
    PolyFunction,
    RationalFunction,
)
from .solver import SolutionSet


class SchemaError(ValueError):
    """Malformed input document; ``field`` names the offending location."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def pair_to_complex(value: Any, field: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise SchemaError(field, f"expected a [re, im] number pair, got {value!r}")
    return complex(value[0], value[1])


def circulant_to_obj(x: Circulant) -> dict:
    return {"d": x.d, "row": [complex_to_pair(z) for z in x.row]}


def circulant_from_obj(obj: Any, field: str = "circulant") -> Circulant:
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object with 'd' and 'row'")
    if "d" not in obj:
        raise SchemaError(f"{field}.d", "missing")
    if "row" not in obj:
        raise SchemaError(f"{field}.row", "missing")
    d = obj["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise SchemaError(f"{field}.d", f"expected an integer >= 2, got {d!r}")
    row = obj["row"]
    if not isinstance(row, list) or len(row) != d:
        raise SchemaError(f"{field}.row", f"expected a list of {d} entries")
    entries = [pair_to_complex(v, f"{field}.row[{i}]") for i, v in enumerate(row)]
    return Circulant(entries)


def spectrum_to_obj(values: np.ndarray) -> dict:
    return {"d": int(values.size), "values": [complex_to_pair(z) for z in values]}


def _poly_from_obj(obj: Any, d: int, field: str) -> CircPoly:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(field, "expected a nonempty list of circulant coefficients")
    coeffs = []
    for i, c in enumerate(obj):
        circ = circulant_from_obj(c, f"{field}[{i}]")
        if circ.d != d:
            raise SchemaError(f"{field}[{i}].d", f"expected order {d}, got {circ.d}")
        coeffs.append(circ)
    return CircPoly(coeffs)


def poly_to_obj(p: CircPoly) -> list:
    return [circulant_to_obj(c) for c in p.coeffs]


def function_to_obj(f: CircFunction) -> dict:
    if isinstance(f, PolyFunction):
        return {"kind": "poly", "d": f.d, "P": poly_to_obj(f.poly)}
    if isinstance(f, RationalFunction):
        return {
            "kind": "rational",
            "d": f.d,
            "P": poly_to_obj(f.numerator),
            "Q": poly_to_obj(f.denominator),
        }
    if isinstance(f, ExpPolyFunction):
        return {
            "kind": "exppoly",
            "d": f.d,
            "P": poly_to_obj(f.poly),
            "G": poly_to_obj(f.exponent),
        }
    raise TypeError(f"unsupported function: {f!r}")


def function_from_obj(obj: Any, field: str = "function") -> CircFunction:
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object")
    kind = obj.get("kind")
    if kind not in ("poly", "rational", "exppoly"):
        raise SchemaError(f"{field}.kind", f"expected 'poly', 'rational' or 'exppoly', got {kind!r}")
    d = obj.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise SchemaError(f"{field}.d", f"expected an integer >= 2, got {d!r}")
    if "P" not in obj:
        raise SchemaError(f"{field}.P", "missing")
    p = _poly_from_obj(obj["P"], d, f"{field}.P")
    if kind == "poly":
        return PolyFunction(p)
    if kind == "rational":
        if "Q" not in obj:
            raise SchemaError(f"{field}.Q", "missing")
        q = _poly_from_obj(obj["Q"], d, f"{field}.Q")
        try:
            return RationalFunction(p, q)
        except ValueError as exc:
            raise SchemaError(f"{field}.Q", str(exc)) from exc
    if "G" not in obj:
        raise SchemaError(f"{field}.G", "missing")
    g = _poly_from_obj(obj["G"], d, f"{field}.G")
    return ExpPolyFunction(p, g)


def solution_set_to_obj(s: SolutionSet) -> dict:
    channels = []
    for r in s.channel_reports:
        channels.append(
            {
                "channel": r.channel,
                "kind": r.kind,
                "effective_degree": r.effective_degree,
                "roots": [complex_to_pair(z) for z in r.roots],
                "multiplicities": list(r.multiplicities),
            }
        )
    return {
        "status": s.status.value,
        "roots": [circulant_to_obj(r) for r in s.roots],
        "residuals": [float(r) for r in s.residuals],
        "free_channels": list(s.free_channels),
        "channels": channels,
    }


def _channel_estimates_to_obj(channels: tuple[ChannelEstimate, ...]) -> list:
    out = []
    for c in channels:
        out.append(
            {
                "channel": c.channel,
                "flag": c.flag,
                "k": c.k,
                "final_estimate": complex_to_pair(c.refined[-1]) if c.refined else None,
                "final_error": c.final_error,
                "estimates": [complex_to_pair(v) for v in c.estimates],
            }
        )
    return out


def divisor_report_to_obj(r: DivisorReport) -> dict:
    return {
        "status": r.status,
        "k": r.k,
        "expected_k": r.expected_k,
        "matches_expected": r.matches_expected,
        "numerator_degree": r.numerator_degree,
        "denominator_degree": r.denominator_degree,
        "bounds_ok": r.bounds_ok,
        "retries_used": r.retries_used,
        "scales": list(r.scales),
        "channels": _channel_estimates_to_obj(r.channels),
    }


def degree_report_to_obj(r: DegreeReport) -> dict:
    return {
        "is_polynomial": r.is_polynomial,
        "degree": r.degree,
        "retries_used": r.retries_used,
        "channels": _channel_estimates_to_obj(r.channels),
    }


def zero_bound_report_to_obj(r: ZeroBoundReport) -> dict:
    return {
        "matched": r.matched,
        "n": r.n,
        "bound": r.bound,
        "degree_check": r.degree_check,
        "retries_used": r.retries_used,
        "channels": _channel_estimates_to_obj(r.channels),
    }
