"""Machine-readable reports: JSON records with epistemic tags, CSV
profiles, and witness encode/decode for independent re-verification.

Report JSON is deterministic: keys sorted, no timestamps, points stored
as coordinate lists.  Schema summary in the README.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from . import __version__
from .criteria import (ComponentDecomposition, EndsReport, NoWitnessAtScale,
                       PairFamilyWitness, SeparationProfile, SplitWitness,
                       TowerWitness, TrendReport, EPISTEMIC_CERTIFICATE,
                       EPISTEMIC_NO_WITNESS, EPISTEMIC_PROFILE)
from .higson import HigsonFunction, VariationReport
from .spaces import Point, UsageError, Window

CERTIFICATE = "CERTIFICATE"
NO_WITNESS_AT_SCALE = "NO_WITNESS_AT_SCALE"
PROFILE = "PROFILE"

_NOTES = {
    CERTIFICATE: EPISTEMIC_CERTIFICATE,
    NO_WITNESS_AT_SCALE: EPISTEMIC_NO_WITNESS,
    PROFILE: EPISTEMIC_PROFILE,
}


def point_to_json(p: Point) -> list:
    return list(p)


def point_from_json(obj) -> Point:
    return tuple(obj)


def frac_to_json(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def make_report(command: str, w: Window, parameters: dict, tag: str,
                results: dict, witness: dict | None = None) -> dict:
    report = {
        "tool": "coarsekit",
        "version": __version__,
        "command": command,
        "space": w.fingerprint(),
        "parameters": parameters,
        "epistemics": {"tag": tag, "note": _NOTES[tag]},
        "results": results,
    }
    if witness is not None:
        report["witness"] = witness
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# witness encoding

def encode_tower_witness(wit: TowerWitness) -> dict:
    return {
        "type": "tower",
        "levels": wit.levels,
        "bounds": [list(b) for b in wit.bounds],
        "towers": [[point_to_json(p) for p in tower] for tower in wit.towers],
    }


def decode_tower_witness(obj: dict) -> TowerWitness:
    return TowerWitness(
        levels=int(obj["levels"]),
        bounds=tuple((int(lo), int(hi)) for lo, hi in obj["bounds"]),
        towers=tuple(tuple(point_from_json(p) for p in tower) for tower in obj["towers"]))


def encode_pair_family(wit: PairFamilyWitness) -> dict:
    return {
        "type": "pair_family",
        "scales": list(wit.scales),
        "bound": wit.bound,
        "families": {str(r): [[point_to_json(x), point_to_json(y)] for x, y in fam]
                     for r, fam in wit.families.items()},
    }


def decode_pair_family(obj: dict) -> PairFamilyWitness:
    return PairFamilyWitness(
        scales=tuple(int(r) for r in obj["scales"]),
        bound=int(obj["bound"]),
        families={int(r): tuple((point_from_json(x), point_from_json(y)) for x, y in fam)
                  for r, fam in obj["families"].items()})


def encode_split_witness(wit: SplitWitness) -> dict:
    return {
        "type": "split",
        "r": wit.r,
        "rho": wit.rho,
        "touch_margin": wit.touch_margin,
        "side_a": [point_to_json(p) for p in wit.side_a],
        "side_b": [point_to_json(p) for p in wit.side_b],
    }


def decode_split_witness(obj: dict) -> SplitWitness:
    return SplitWitness(
        r=int(obj["r"]), rho=int(obj["rho"]), touch_margin=int(obj["touch_margin"]),
        side_a=tuple(point_from_json(p) for p in obj["side_a"]),
        side_b=tuple(point_from_json(p) for p in obj["side_b"]))


def decode_witness(obj: dict):
    kind = obj.get("type")
    if kind == "tower":
        return decode_tower_witness(obj)
    if kind == "pair_family":
        return decode_pair_family(obj)
    if kind == "split":
        return decode_split_witness(obj)
    raise UsageError(f"unknown witness type {kind!r}")


def encode_no_witness(res: NoWitnessAtScale) -> dict:
    return {"kind": res.kind, "params": res.params, "exhausted": res.exhausted,
            "nodes": res.nodes, "detail": res.detail}


# ---------------------------------------------------------------------------
# profile encoding

def encode_separation_profile(w: Window, prof: SeparationProfile) -> dict:
    return {
        "r": prof.r,
        "values": {w.label(p): v for p, v in sorted(
            prof.values.items(), key=lambda kv: w.index(kv[0]))},
        "exceeds_window_marker": "null values exceeded the search cap",
    }


def encode_trend(trend: TrendReport) -> dict:
    return {"r": trend.r, "annuli": [list(a) for a in trend.annuli],
            "minima": list(trend.minima), "flag": trend.flag, "cap": trend.cap}


def encode_components(w: Window, dec: ComponentDecomposition) -> dict:
    return {
        "r": dec.r,
        "component_count": len(dec.components),
        "diameters": list(dec.diameters),
        "touching": list(dec.touching),
        "interior_max_diameter": dec.interior_max_diameter(),
        "flag": dec.flag,
    }


def encode_ends(w: Window, rep: EndsReport) -> dict:
    return {
        "r": rep.r, "rho": rep.rho, "touch_margin": rep.touch_margin,
        "count": rep.count,
        "component_sizes": [len(c) for c in rep.components],
        "touching": list(rep.touching),
    }


def encode_higson(w: Window, h: HigsonFunction) -> dict:
    return {
        "kind": h.kind,
        "groups": {str(n): [point_to_json(p) for p in pts] for n, pts in h.groups.items()},
        "selected_size": len(h.selected),
        "selected_values_one": all(h.values[p] == 1 for p in h.selected),
        "zero_set_values_zero": all(h.values[p] == 0 for p in h.zero_set),
    }


def encode_variation(w: Window, rep: VariationReport) -> dict:
    return {
        "eps": frac_to_json(rep.eps),
        "r": rep.r,
        "violation_count": len(rep.violations),
        "violations": [[w.label(x), w.label(y), frac_to_json(d)]
                       for x, y, d in rep.violations],
        "enclosing_radius": rep.enclosing_radius,
    }


def profile_csv(w: Window, profiles: list[SeparationProfile]) -> str:
    """CSV with header row ``r,point,value``; rows in (r, point id) order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "point", "value"])
    for prof in profiles:
        for p in sorted(prof.values, key=w.index):
            v = prof.values[p]
            writer.writerow([prof.r, w.label(p), "" if v is None else v])
    return buf.getvalue()
