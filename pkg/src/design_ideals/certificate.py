"""Gamma certificates: assembly, JSON form and independent re-checking."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from .catalog import PARENT, TABLE, TABLE_FAMILY, construct, family_generators, from_recipe
from .config import check_binomial
from .designs import Design, strength
from .exactla import incidence_matrix, rank
from .gamma import (
    LinearizationCertificate,
    ZeroSetFailure,
    best_bounds,
    gamma1,
    gamma2_lower_linearization,
    a_priori_bounds,
    zero_set_check,
)

CERT_VERSION = 1
# non-block k-sets tried for a linearization certificate when no dropped block is recorded
LINEARIZATION_SCAN_MAX = 5000


@dataclass
class GammaCertificate:
    data: dict

    @property
    def gamma1(self) -> int | None:
        return self.data["gamma1"]["value"]

    @property
    def gamma2(self) -> int | None:
        return self.data["gamma2"]["value"]

    @property
    def gamma2_interval(self) -> tuple[int, int]:
        g2 = self.data["gamma2"]
        return g2["lower"]["value"], g2["upper"]["value"]

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> "GammaCertificate":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))


def _design_block(design: Design) -> dict:
    out = {"v": design.v, "k": design.k, "b": design.b, "hash": design.digest(), "name": design.name}
    if "construction" in design.meta:
        out["construction"] = design.meta["construction"]
    if design.meta.get("dropped_block") is not None:
        out["dropped_block"] = list(design.meta["dropped_block"])
    return out


def _linearization(design: Design, s: int) -> LinearizationCertificate | None:
    if design.meta.get("dropped_block") is not None:
        cert = gamma2_lower_linearization(design, s, [design.meta["dropped_block"]])
        if cert is not None:
            return cert
    if comb(design.v, design.k) <= LINEARIZATION_SCAN_MAX:
        return gamma2_lower_linearization(design, s)
    return None


def certify(design: Design, family: str = "auto", t: int | None = None,
            parent: dict | None = None, threads: int | None = None,
            seed: int = 0) -> GammaCertificate:
    """Run strength, bounds, gamma_1 and both gamma_2 bounds; raise ZeroSetFailure on a bad family."""
    params = strength(design)
    bounds = a_priori_bounds(design, params, parent)
    g1 = gamma1(design, params)

    G = family_generators(design, family, t)
    report = zero_set_check(design, G, threads)
    if not report.exact:
        raise ZeroSetFailure(report)
    upper, upper_source = G.max_degree, "generators"
    _, bound_upper = best_bounds(bounds, "gamma2")
    if bound_upper is not None and bound_upper < upper:
        upper, upper_source = bound_upper, "bound"

    g1_low = g1.value if g1.value is not None else g1.lower
    lower, lower_source, lin = g1_low, "gamma1", None
    if lower < upper:
        lin = _linearization(design, upper - 1)
        if lin is not None:
            lower, lower_source = upper, "linearization"

    upper_block = {
        "value": upper,
        "source": upper_source,
        "family": G.family,
        "max_degree": G.max_degree,
        "generators": len(G.polys),
        "zero_set": {"scanned": report.scanned, "verdict": report.verdict,
                     "wall_time": round(report.wall_time, 3)},
    }
    if G.family == "derived":
        upper_block["derived_from"] = G.notes
    lower_block = {"value": lower, "source": lower_source}
    if lin is not None:
        lower_block["certificate"] = lin.to_dict()
    data = {
        "version": CERT_VERSION,
        "seed": seed,
        "design": _design_block(design),
        "strength": {"t": params.t, "lambda": params.lam},
        "gamma1": {
            "value": g1.value, "lower": g1.lower, "upper": g1.upper,
            "evidence": [ev.to_dict() for ev in g1.evidence],
        },
        "gamma2": {"value": lower if lower == upper else None,
                   "lower": lower_block, "upper": upper_block},
        "bounds": [b.to_dict() for b in bounds],
    }
    if parent:
        data["parent"] = dict(parent)
    return GammaCertificate(data)


# -- re-checking -----------------------------------------------------------------------------

@dataclass
class CheckResult:
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def fail(self, path: str, message: str) -> None:
        self.errors.append((path, message))

    def expect(self, path: str, got, want) -> None:
        if got != want:
            self.fail(path, f"claims {got!r}, recomputed {want!r}")


def design_of(cert: GammaCertificate, design: Design | None = None) -> Design:
    if design is not None:
        return design
    recipe = cert.data["design"].get("construction")
    if recipe is None:
        raise ValueError("certificate has no construction recipe; pass the design file")
    return from_recipe(recipe)


def check_certificate(cert: GammaCertificate, design: Design | None = None,
                      threads: int | None = None) -> CheckResult:
    """Recompute every claim of ``cert`` from scratch."""
    res = CheckResult()
    data = cert.data
    try:
        design = design_of(cert, design)
    except (ValueError, KeyError) as exc:
        res.fail("design.construction", str(exc))
        return res
    d = data.get("design", {})
    for key, want in (("v", design.v), ("k", design.k), ("b", design.b), ("hash", design.digest())):
        res.expect(f"design.{key}", d.get(key), want)
    if not res.valid:
        return res
    if d.get("dropped_block") is not None and design.meta.get("dropped_block") is None:
        design = Design(design.v, design.k, design.blocks, design.name,
                        {**design.meta, "dropped_block": tuple(d["dropped_block"])})

    params = strength(design)
    res.expect("strength.t", data["strength"]["t"], params.t)
    res.expect("strength.lambda", data["strength"]["lambda"], params.lam)

    # gamma_1 evidence
    g1 = data["gamma1"]
    first_deficient = None
    for n, ev in enumerate(g1["evidence"]):
        path = f"gamma1.evidence[{n}]"
        s = ev["s"]
        res.expect(f"{path}.s", s, n + 1)
        res.expect(f"{path}.binom", ev["binom"], comb(design.v, s))
        if ev["rank"] is None:
            res.expect(f"{path}.rank_at_most", ev.get("rank_at_most"), design.b)
            deficient = design.b < comb(design.v, s)
            if not deficient:
                res.fail(path, "rank left uncomputed although C(v,s) <= b")
        else:
            r = rank(incidence_matrix(design, s))
            res.expect(f"{path}.rank", ev["rank"], r)
            deficient = r < comb(design.v, s)
        if deficient and first_deficient is None:
            first_deficient = s
            if n != len(g1["evidence"]) - 1:
                res.fail(path, "scan continues past the first deficient degree")
    res.expect("gamma1.value", g1["value"], first_deficient)
    if first_deficient is None:
        limit = min(design.k, design.v - design.k)
        res.expect("gamma1.evidence", len(g1["evidence"]), limit)

    # bounds
    bounds = a_priori_bounds(design, params, data.get("parent"))
    res.expect("bounds", data["bounds"], [b.to_dict() for b in bounds])

    # gamma_2 lower
    low = data["gamma2"]["lower"]
    if low["source"] == "linearization":
        try:
            lin = LinearizationCertificate.from_dict(low["certificate"])
        except (KeyError, ValueError, TypeError) as exc:
            res.fail("gamma2.lower.certificate", f"unreadable: {exc}")
        else:
            if not lin.verify(design):
                res.fail("gamma2.lower.certificate", "linear combination does not reproduce delta^s(C)")
            res.expect("gamma2.lower.value", low["value"], lin.s + 1)
    elif low["source"] == "gamma1":
        want = g1["value"] if g1["value"] is not None else g1["lower"]
        res.expect("gamma2.lower.value", low["value"], want)
    else:
        res.fail("gamma2.lower.source", f"unknown source {low['source']!r}")

    # gamma_2 upper
    up = data["gamma2"]["upper"]
    try:
        G = family_generators(design, up["family"])
    except (ValueError, KeyError) as exc:
        res.fail("gamma2.upper.family", str(exc))
    else:
        check_binomial(design.v, design.k, "certificate check")
        report = zero_set_check(design, G, threads)
        res.expect("gamma2.upper.zero_set.verdict", up["zero_set"]["verdict"], report.verdict)
        res.expect("gamma2.upper.zero_set.scanned", up["zero_set"]["scanned"], report.scanned)
        res.expect("gamma2.upper.max_degree", up["max_degree"], G.max_degree)
        res.expect("gamma2.upper.generators", up["generators"], len(G.polys))
        _, bu = best_bounds(bounds, "gamma2")
        want = G.max_degree if report.exact else None
        if want is not None and bu is not None:
            want = min(want, bu)
        res.expect("gamma2.upper.value", up["value"], want)

    # consistency
    lo, hi = low["value"], up["value"]
    if hi is not None and lo is not None:
        if lo > hi:
            res.fail("gamma2", f"lower bound {lo} exceeds upper bound {hi}")
        res.expect("gamma2.value", data["gamma2"]["value"], lo if lo == hi else None)
        if hi > design.k:
            res.fail("gamma2.upper.value", "exceeds k")
    return res


# -- the Witt table ----------------------------------------------------------------------------

@dataclass
class TableRow:
    name: str
    params: str
    expected: tuple[int, int]
    got: tuple[int | None, int | None]
    certificate: GammaCertificate

    @property
    def ok(self) -> bool:
        return self.got == self.expected


def table_row(name: str, threads: int | None = None,
              known: dict[str, GammaCertificate] | None = None) -> TableRow:
    rows = {r[0]: r for r in TABLE}
    if name not in rows:
        raise KeyError(f"unknown table row {name!r}; choose from {', '.join(rows)}")
    _, label, g1, g2 = rows[name]
    known = {} if known is None else known
    parent = None
    link = PARENT.get(name)
    if link is not None:
        pname = link[0]
        if pname not in known:
            known[pname] = certify(construct(pname), TABLE_FAMILY[pname], threads=threads)
        pc = known[pname]
        parent = {"name": pname, "gamma1": pc.gamma1, "gamma2": pc.gamma2}
    cert = certify(construct(name), TABLE_FAMILY[name], parent=parent, threads=threads)
    known[name] = cert
    return TableRow(name, label, (g1, g2), (cert.gamma1, cert.gamma2), cert)


def reproduce_table(rows: list[str] | None = None, threads: int | None = None) -> list[TableRow]:
    names = [r[0] for r in TABLE] if not rows else rows
    known: dict[str, GammaCertificate] = {}
    return [table_row(n, threads, known) for n in names]


__all__ = [
    "CheckResult", "GammaCertificate", "TableRow", "certify", "check_certificate", "design_of",
    "reproduce_table", "table_row",
]
