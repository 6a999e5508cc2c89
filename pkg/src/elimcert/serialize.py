"""JSON documents for certificates, dimension reports and Perron relations.

Polynomials and field elements are stored as strings in the text grammar,
so every document is exact and round-trips through :mod:`elimcert.parsing`.
"""
from __future__ import annotations

import json
from typing import Any

from .coords import CoordinateChange, _trim
from .engine import Certificate, Verdict, verify_certificate
from .errors import ParseError
from .field import CoefficientField
from .ideal import DimensionReport
from .parsing import parse_field, parse_poly
from .perron import PerronRelation

SCHEMA_VERSION = 1


def field_name(field: CoefficientField) -> str:
    return "q" if field.modulus is None else f"fp:{field.modulus}"


def _matrix_doc(change: CoordinateChange | None):
    if change is None:
        return None
    return {"matrix": change.entry_strings("matrix"), "inverse": change.entry_strings("inverse"),
            "parameterized": change.parameterized}


def _matrix_from_doc(doc, field: CoefficientField) -> CoordinateChange | None:
    if doc is None:
        return None

    def entries(rows):
        out = []
        for row in rows:
            cells = []
            for text in row:
                p = parse_poly(text, 0, field, param=True)
                top = p.t_degree() if p else -1
                coeffs = [field.zero] * (top + 1)
                for m, c in p.terms_dict.items():
                    coeffs[m[-1]] = c
                cells.append(_trim(coeffs))
            out.append(tuple(cells))
        return tuple(out)

    return CoordinateChange(entries(doc["matrix"]), entries(doc["inverse"]), field,
                            bool(doc.get("parameterized", False)))


def verdict_doc(verdict: Verdict) -> list[dict]:
    return [{"name": it.name, "passed": it.passed, "detail": it.detail} for it in verdict.items]


def certificate_to_dict(cert: Certificate, verdict: Verdict | None = None, *,
                        timings: bool = False) -> dict[str, Any]:
    """Plain-data form of a certificate.

    ``timingsMs`` is ``null`` unless ``timings`` is set, which keeps repeated
    runs with one seed byte-identical.
    """
    verdict = verdict or verify_certificate(cert)
    fld = cert.field
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "certificate",
        "field": field_name(fld),
        "n": cert.n,
        "s": cert.s,
        "q": cert.q,
        "generators": [str(g) for g in cert.generators],
        "degrees": cert.degrees,
        "bound": cert.bound,
        "degPhi": cert.phi.degree() if cert.phi else None,
        "maxProductDegree": cert.max_product_degree,
        "phi": str(cert.phi),
        "cofactors": [str(g) for g in cert.cofactors],
        "seed": cert.seed,
        "mode": cert.mode,
        "verified": verdict.ok,
        "items": verdict_doc(verdict),
        "coordinateChange": _matrix_doc(cert.coordinate_change),
        "alpha": None if cert.alpha is None else [[fld.to_str(a) for a in row] for row in cert.alpha],
        "permutation": cert.permutation,
        "deformation": cert.deformation,
        "attempts": cert.attempts,
        "basisSizes": cert.basis_sizes,
        "timingsMs": cert.timings_ms if timings else None,
    }


def certificate_from_dict(doc: dict) -> Certificate:
    """Rebuild a :class:`Certificate`; raises :class:`ParseError` on malformed input."""
    try:
        if doc.get("schemaVersion") != SCHEMA_VERSION:
            raise ParseError(f"unsupported schemaVersion {doc.get('schemaVersion')!r}")
        if doc.get("kind", "certificate") != "certificate":
            raise ParseError(f"expected a certificate document, got {doc.get('kind')!r}")
        fld = parse_field(doc["field"])
        n = int(doc["n"])
        gens = [parse_poly(g, n, fld) for g in doc["generators"]]
        phi = parse_poly(doc["phi"], n, fld)
        cof = [parse_poly(c, n, fld) for c in doc["cofactors"]]
        alpha = doc.get("alpha")
        if alpha is not None:
            alpha = [[fld(a) for a in row] for row in alpha]
        return Certificate(
            phi, cof, int(doc["bound"]), int(doc["q"]), gens, int(doc.get("seed", 0)),
            doc.get("mode", "generic"), _matrix_from_doc(doc.get("coordinateChange"), fld),
            alpha, doc.get("permutation"), doc.get("deformation"),
            dict(doc.get("timingsMs") or {}), dict(doc.get("basisSizes") or {}),
            int(doc.get("attempts", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed certificate: {exc!r}") from None


def dimension_to_dict(rep: DimensionReport, n: int) -> dict[str, Any]:
    return {"schemaVersion": SCHEMA_VERSION, "kind": "dimension", "n": n, **rep.as_dict()}


def perron_to_dict(rel: PerronRelation) -> dict[str, Any]:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "perron",
        "field": field_name(rel.W.field),
        "n": len(rel.Q) - 1,
        "Q": [str(q) for q in rel.Q],
        "W": rel.render(),
        "weights": list(rel.weights),
        "weightedDegree": rel.weighted_degree,
        "bound": rel.bound,
        "verified": rel.check(),
    }


def dumps(doc: dict) -> str:
    """Canonical JSON text (sorted keys, fixed indentation)."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def loads_certificate(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("certificate JSON must be an object")
    return certificate_from_dict(doc)
