"""Reference documents regenerated by ``gmzi-fabric regen-golden``."""

from __future__ import annotations

import itertools
import json
from pathlib import Path

from .phases import compile_phi, enumerate_valid, xor_mask_report
from .planner import build_scheme, preset, resource_report
from .scheduler import schedule_merge, schedule_pairing


def enumerate_rows(n: int) -> list[dict]:
    """Valid configurations grouped by permutation (ascending image tuple), + sign before -."""
    rows = []
    for phi in enumerate_valid(n):
        sp = compile_phi(phi)
        rows.append((sp.perm, sp.sign_exponent, {"phi": str(phi), "sigma": sp.cycle_string(), "sign": sp.sign_symbol()}))
    return [r for _, _, r in sorted(rows, key=lambda t: (t[0], t[1]))]


def table1() -> dict:
    return {"n": 4, "rows": enumerate_rows(4)}


def table3() -> dict:
    scheme = preset("equalized-5")
    out = []
    for a, b in itertools.combinations("ABCDE", 2):
        sch = schedule_pairing(scheme, [(a, b)])
        rows = []
        for m in (a, b):
            s = sch.setting(f"G{m}")
            rows.append({"module": m, "phi": str(s.phi), "sigma": s.perm.cycle_string(), "sign_exponent": s.perm.sign_exponent})
        out.append({"pair": a + b, "rows": rows})
    return {"scheme": scheme.name, "pairs": out}


def table4() -> dict:
    scheme = preset("merge-5")
    rows = []
    for stab in ("X", "Z"):
        sch = schedule_merge(scheme, [("A", "B")], stab)
        for m in ("A", "B"):
            s = sch.setting(f"G{m}")
            rows.append(
                {"module": m, "stabilizer": stab, "phi": str(s.phi), "sigma": s.perm.cycle_string(), "sign_exponent": s.perm.sign_exponent}
            )
    return {"scheme": scheme.name, "rows": rows}


def resources() -> dict:
    schemes = {
        "spanke_direct monolithic 4x4": build_scheme("spanke_direct", 4, 4, monolithic=True),
        "spanke_direct split 4x4": build_scheme("spanke_direct", 4, 4, monolithic=False),
        "spanke_probabilistic monolithic 4x4": build_scheme("spanke_probabilistic", 4, 4),
        "gmzi_direct 4x4": build_scheme("gmzi_direct", 4, 4),
        "gmzi_equalized 5x4": preset("equalized-5"),
        "gmzi_merge 5": preset("merge-5"),
        "gmzi_mixed_graph 8": build_scheme("gmzi_mixed_graph", 8),
    }
    return {name: resource_report(s).as_dict() for name, s in schemes.items()}


def xor_reports(ns=(4, 8, 16, 32)) -> dict:
    return {str(n): xor_mask_report(n).as_dict() for n in ns}


BUILDERS = {
    "table1.json": table1,
    "table3.json": table3,
    "table4.json": table4,
    "resources.json": resources,
    "xor_mask_report.json": xor_reports,
}


def render(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def regenerate(directory: Path, check: bool = False) -> list[str]:
    """Write every golden file, or with ``check`` list the ones that would change."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    drift = []
    for name, build in BUILDERS.items():
        text = render(build())
        path = directory / name
        if check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                drift.append(name)
        else:
            path.write_text(text, encoding="utf-8")
    return drift
