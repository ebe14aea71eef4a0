"""File formats for decompositions, certificates, and reports.

All formats are JSON with exact integer payloads and a versioned format
tag.  Exports are byte-deterministic for identical inputs: keys are sorted,
separators fixed, and anything timing-related lives outside the canonical
body.  Four formats exist:

    hamdec/1          a decomposition, as a recipe tree or explicit table
    hamdec-zeroset/1  zero-set compilers (selector tables plus offsets)
    hamdec-rank/1     rank-coordinate certificates per modulus and color
    hamdec-report/1   verification reports

Explicit decomposition tables store one direction per arc at index
color * m^d + vertex_index, with the package-wide little-endian vertex
indexing.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .core import CHUNK, Params, decode_grid
from .errors import ResourceLimit, SchemaError
from .rootflat import (
    Decomposition,
    PrefixLabelRule,
    Schedule,
    TableRule,
    TranslationRule,
    ZeroSetSelectorRule,
)

__all__ = [
    "canonical_json",
    "export_decomposition",
    "import_decomposition",
    "export_zero_set",
    "import_zero_set",
    "export_rank",
    "import_rank",
    "export_report",
    "schedule_recipe",
    "schedule_from_doc",
]

FORMAT_DECOMPOSITION = "hamdec/1"
FORMAT_ZEROSET = "hamdec-zeroset/1"
FORMAT_RANK = "hamdec-rank/1"
FORMAT_REPORT = "hamdec-report/1"


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _write(doc: dict, path: str | None) -> dict:
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(doc))
    return doc


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return doc


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}")
    return value


def detect_format(doc: dict) -> str:
    tag = doc.get("format")
    if tag not in (FORMAT_DECOMPOSITION, FORMAT_ZEROSET, FORMAT_RANK, FORMAT_REPORT):
        raise SchemaError(f"unknown or missing format tag {tag!r}")
    return tag


# --- decompositions ----------------------------------------------------------


def export_decomposition(
    dec: Decomposition,
    path: str | None = None,
    kind: str = "recipe",
    budget: int = 200_000_000,
) -> dict:
    """Serialize a decomposition as its recipe or as an explicit table."""
    params = dec.params
    doc: dict[str, Any] = {
        "format": FORMAT_DECOMPOSITION,
        "d": params.d,
        "m": params.m,
        "kind": kind,
    }
    if kind == "recipe":
        doc["recipe"] = dec.recipe
        return _write(doc, path)
    if kind != "explicit":
        raise SchemaError(f"unknown export kind {kind!r}")
    n = params.n_vertices
    if n * params.d > budget:
        raise ResourceLimit(f"explicit table needs {n * params.d} entries")
    table: list[int] = []
    for color in range(params.d):
        for lo in range(0, n, CHUNK):
            idx = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
            coords = decode_grid(idx, params.d, params.m)
            table.extend(int(v) for v in dec.directions(coords, color))
    doc["directions"] = table
    return _write(doc, path)


def import_decomposition(path_or_doc) -> Decomposition | dict:
    """Load a decomposition file.

    Explicit tables come back as ready decompositions; recipe files return
    the recipe dict for the synthesis layer to rebuild.
    """
    doc = _load(path_or_doc) if isinstance(path_or_doc, str) else path_or_doc
    if detect_format(doc) != FORMAT_DECOMPOSITION:
        raise SchemaError("not a decomposition file")
    d = _require(doc, "d", int, "decomposition")
    m = _require(doc, "m", int, "decomposition")
    kind = _require(doc, "kind", str, "decomposition")
    if kind == "recipe":
        return _require(doc, "recipe", dict, "decomposition")
    if kind != "explicit":
        raise SchemaError(f"decomposition.kind: unknown value {kind!r}")
    table = _require(doc, "directions", list, "decomposition")
    params = Params(d, m)
    n = params.n_vertices
    if len(table) != d * n:
        raise SchemaError(f"decomposition.directions: expected {d * n} entries")
    arr = np.asarray(table, dtype=np.int64).reshape(d, n)
    if np.any((arr < 0) | (arr >= d)):
        raise SchemaError("decomposition.directions: direction out of range")

    def batch(coords: np.ndarray, color: int) -> np.ndarray:
        idx = np.zeros(coords.shape[0], dtype=np.int64)
        for j in range(d - 1, -1, -1):
            idx = idx * m + coords[:, j]
        return arr[color, idx]

    return Decomposition(params, batch, {"kind": "explicit", "d": d, "m": m})


# --- schedules as generic certificates ---------------------------------------


def _rule_doc(rule) -> dict:
    if isinstance(rule, TranslationRule):
        return {"rule": "translation", "dirs": list(rule.dir_of_color)}
    if isinstance(rule, ZeroSetSelectorRule):
        return {
            "rule": "zeroset",
            "theta": list(rule.theta),
            "equivariant": rule.equivariant,
        }
    if isinstance(rule, PrefixLabelRule):
        return {
            "rule": "labels",
            "assignment": list(rule.assignment),
            "threshold": rule.threshold,
        }
    if isinstance(rule, TableRule):
        return {"rule": "table", "table": rule.table.tolist()}
    raise SchemaError(f"unknown rule type {type(rule).__name__}")


def schedule_recipe(s: Schedule) -> dict:
    return {
        "kind": "schedule",
        "d": s.params.d,
        "m": s.params.m,
        "layers": [_rule_doc(rule) for rule in s.layers],
    }


def schedule_from_doc(doc: dict) -> Schedule:
    d = _require(doc, "d", int, "schedule")
    m = _require(doc, "m", int, "schedule")
    layers = []
    for t, rule_doc in enumerate(_require(doc, "layers", list, "schedule")):
        kind = rule_doc.get("rule")
        where = f"schedule.layers[{t}]"
        if kind == "translation":
            layers.append(TranslationRule(tuple(_require(rule_doc, "dirs", list, where))))
        elif kind == "zeroset":
            layers.append(
                ZeroSetSelectorRule(
                    tuple(_require(rule_doc, "theta", list, where)),
                    bool(rule_doc.get("equivariant", True)),
                )
            )
        elif kind == "labels":
            layers.append(
                PrefixLabelRule(
                    tuple(_require(rule_doc, "assignment", list, where)),
                    _require(rule_doc, "threshold", int, where),
                )
            )
        elif kind == "table":
            layers.append(
                TableRule(np.asarray(_require(rule_doc, "table", list, where), dtype=np.int64))
            )
        else:
            raise SchemaError(f"{where}: unknown rule {kind!r}")
    return Schedule(Params(d, m), tuple(layers))


# --- zero-set compilers -------------------------------------------------------


def export_zero_set(compilers, path: str | None = None) -> dict:
    """Serialize compilers keyed by modulus, selector as (mask, value) pairs."""
    certs = {}
    for comp in compilers:
        certs[str(comp.m)] = {
            "m": comp.m,
            "constant_offsets": list(comp.alpha),
            "selector": [[mask, comp.theta[mask]] for mask in range(len(comp.theta))],
        }
    doc = {"format": FORMAT_ZEROSET, "certificates": certs}
    return _write(doc, path)


def import_zero_set(path_or_doc, m: int):
    """Load one modulus' zero-set compiler from a certificate file."""
    from .d7boundary import ZeroSetCompiler

    doc = _load(path_or_doc) if isinstance(path_or_doc, str) else path_or_doc
    if detect_format(doc) != FORMAT_ZEROSET:
        raise SchemaError("not a zero-set certificate file")
    certs = _require(doc, "certificates", dict, "zeroset")
    entry = certs.get(str(m))
    if entry is None:
        raise SchemaError(f"zeroset.certificates: no entry for modulus {m}")
    where = f"zeroset.certificates.{m}"
    stated = _require(entry, "m", int, where)
    if stated != m:
        raise SchemaError(f"{where}.m: states {stated}")
    offsets = _require(entry, "constant_offsets", list, where)
    selector = _require(entry, "selector", list, where)
    theta = [-1] * 128
    for pair in selector:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"{where}.selector: entries must be [mask, value] pairs")
        mask, value = pair
        if not 0 <= mask < 128:
            raise SchemaError(f"{where}.selector: mask {mask} out of range")
        theta[mask] = value
    if any(v < 0 for v in theta):
        raise SchemaError(f"{where}.selector: not all 128 masks are covered")
    return ZeroSetCompiler(m, tuple(theta), tuple(offsets))


# --- rank certificates ---------------------------------------------------------


def export_rank(cert, path: str | None = None) -> dict:
    doc = {
        "format": FORMAT_RANK,
        "certificates": {
            str(cert.m): {
                "m": cert.m,
                "ranks": [list(r) for r in cert.ranks],
            }
        },
    }
    return _write(doc, path)


def import_rank(path_or_doc, m: int):
    from .d7boundary import RankCertificate

    doc = _load(path_or_doc) if isinstance(path_or_doc, str) else path_or_doc
    if detect_format(doc) != FORMAT_RANK:
        raise SchemaError("not a rank certificate file")
    certs = _require(doc, "certificates", dict, "rank")
    entry = certs.get(str(m))
    if entry is None:
        raise SchemaError(f"rank.certificates: no entry for modulus {m}")
    ranks = _require(entry, "ranks", list, f"rank.certificates.{m}")
    return RankCertificate(m, tuple(tuple(int(v) for v in row) for row in ranks))


# --- reports --------------------------------------------------------------------


def export_report(report, path: str | None = None) -> dict:
    """Serialize a verification report; timings sit outside the canonical body."""
    canonical = {
        "d": report.params.d,
        "m": report.params.m,
        "mode": report.mode,
        "pass": report.passed,
        "downgraded": report.downgraded,
        "arc_partition": report.arc_partition_ok,
        "cycles": [
            {
                "color": color,
                "length": length,
                "target": report.params.n_vertices,
                "single": length == report.params.n_vertices,
            }
            for color, length in sorted(report.cycle_lengths.items())
        ],
        "checks": [
            {"name": name, "pass": ok, "detail": detail}
            for name, ok, detail in report.checks
        ],
    }
    doc = {
        "format": FORMAT_REPORT,
        "canonical": canonical,
        "timings": {k: round(v, 6) for k, v in report.timings.items()},
    }
    return _write(doc, path)
