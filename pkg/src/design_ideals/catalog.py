"""Named designs and the choice of a generator family for a design."""

from __future__ import annotations

from functools import lru_cache

from .bits import points_of
from .designs import (
    Design,
    DesignError,
    affine_design,
    complete_design,
    fano,
    is_symmetric,
    projective_design,
    strength,
)
from .families import (
    derived_generators,
    gY_generators,
    m12_orbit_generators,
    octagon_generators,
    partial_design_generators,
    projective_generators,
    steiner_generators,
    symbibd_generators,
    witt22_generators,
    witt23_generators,
    witt24_generators,
)
from .geometry import SUPPORTED_Q
from .poly import GeneratorSet
from .sts import PartialTripleSystem, Trade, build_2v32, default_trade, sts
from .witt import witt10, witt11, witt12, witt22, witt23, witt24

WITT = {
    "witt24": witt24, "witt23": witt23, "witt22": witt22,
    "witt12": witt12, "witt11": witt11, "witt10": witt10,
}

# derived chains: design -> (parent, point)
PARENT = {
    "witt23": ("witt24", 0), "witt22": ("witt23", 0),
    "witt11": ("witt12", 0), "witt10": None,
}

# the gamma table for the Witt designs and their derived designs, in table order
TABLE = (
    ("witt24", "5-(24,8,1)", 3, 3),
    ("witt23", "4-(23,7,1)", 3, 3),
    ("witt22", "3-(22,6,1)", 2, 2),
    ("pg21", "2-(21,5,1)", 2, 2),
    ("witt12", "5-(12,6,1)", 3, 3),
    ("witt11", "4-(11,5,1)", 3, 3),
    ("witt10", "3-(10,4,1)", 2, 2),
    ("sts9", "2-(9,3,1)", 2, 2),
)

TABLE_FAMILY = {
    "witt24": "witt24", "witt23": "witt23", "witt22": "witt22", "pg21": "projective",
    "witt12": "m12orbit", "witt11": "derived", "witt10": "octagon", "sts9": "steiner",
}

CONSTRUCTORS = ("witt24", "witt23", "witt22", "witt12", "witt11", "witt10", "fano", "pg", "ag",
                "sts", "complete", "2v32", "pg21", "sts9")

FAMILY_CHOICES = ("auto", "gY", "steiner", "partial", "symbibd", "projective", "witt24", "witt23",
                  "witt22", "m12orbit", "octagon", "derived")


def construct(name: str, *, d: int = 2, e: int = 1, q: int = 2, n: int = 2, v: int | None = None,
              k: int | None = None, trade: Trade | None = None, drop=None, seed: int = 0) -> Design:
    """Build a named design; records the recipe in ``meta['construction']``."""
    if name in WITT:
        design = WITT[name]()
        recipe = {"family": name}
    elif name == "fano":
        design, recipe = fano(), {"family": "fano"}
    elif name == "pg":
        design, recipe = projective_design(d, e, q), {"family": "pg", "d": d, "e": e, "q": q}
    elif name == "pg21":
        design, recipe = projective_design(2, 1, 4).with_name("pg21"), {"family": "pg21"}
    elif name == "ag":
        design, recipe = affine_design(n, q), {"family": "ag", "n": n, "q": q}
    elif name == "sts":
        if v is None:
            raise DesignError("sts needs v")
        design, recipe = sts(v), {"family": "sts", "v": v}
    elif name == "sts9":
        design, recipe = sts(9), {"family": "sts9"}
    elif name == "complete":
        if v is None or k is None:
            raise DesignError("complete needs v and k")
        design, recipe = complete_design(v, k), {"family": "complete", "v": v, "k": k}
    elif name == "2v32":
        if trade is None:
            trade = default_trade()
        if drop is None:
            drop = (3, 4, 5)
        v = 15 if v is None else v
        design = build_2v32(trade, drop, v, seed)
        recipe = {
            "family": "2v32", "v": v, "seed": seed, "drop": list(design.meta["dropped_block"]),
            "trade": {"T1": [list(points_of(t)) for t in trade.T1.triples],
                      "T2": [list(points_of(t)) for t in trade.T2.triples]},
        }
    else:
        raise DesignError(f"unknown design family {name!r}; choose from {', '.join(CONSTRUCTORS)}")
    return Design(design.v, design.k, design.blocks, design.name,
                  {**design.meta, "construction": recipe})


def from_recipe(recipe: dict) -> Design:
    params = {key: val for key, val in recipe.items() if key != "family"}
    if recipe["family"] == "2v32":
        tr = params.pop("trade")
        v = params["v"]
        params["trade"] = Trade(PartialTripleSystem.of(tr["T1"], v), PartialTripleSystem.of(tr["T2"], v))
    return construct(recipe["family"], **params)


@lru_cache(maxsize=None)
def _witt_digests() -> dict[str, str]:
    return {WITT[name]().digest(): name for name in WITT}


def identify_witt(design: Design) -> str | None:
    """Name of the built-in Witt design with the same blocks, if any."""
    if design.v > 24:
        return None
    return _witt_digests().get(design.digest())


def _find_projective(design: Design) -> tuple[int, int, int] | None:
    recipe = design.meta.get("construction", {})
    if recipe.get("family") == "pg":
        return recipe["d"], recipe["e"], recipe["q"]
    if recipe.get("family") == "pg21":
        return 2, 1, 4
    for q in SUPPORTED_Q:
        for dim in range(2, 8):
            v = (q ** (dim + 1) - 1) // (q - 1)
            if v > design.v:
                break
            if v != design.v:
                continue
            for e in range(1, dim):
                if (q ** (e + 1) - 1) // (q - 1) == design.k and \
                        projective_design(dim, e, q).digest() == design.digest():
                    return dim, e, q
    return None


def auto_family(design: Design) -> str:
    """Witt designs get their own family; then symmetric 2-designs, Steiner systems, g_Y."""
    witt = identify_witt(design)
    if witt is not None:
        return TABLE_FAMILY[witt]
    params = strength(design)
    if params.t >= 2 and is_symmetric(design) and design.k < design.v - 1:
        return "symbibd"
    if params.t >= 2 and params.lam == 1:
        return "steiner"
    return "gY"


def family_generators(design: Design, family: str, t: int | None = None) -> GeneratorSet:
    """Generator set of the given family for ``design`` (family 'auto' resolves first)."""
    if family == "auto":
        family = auto_family(design)
    if family == "gY":
        return gY_generators(design)
    if family in ("steiner", "partial"):
        if t is None:
            t = strength(design).t
        if family == "steiner":
            return steiner_generators(design, t)
        return partial_design_generators(design, t)
    if family == "symbibd":
        return symbibd_generators(design)
    if family == "projective":
        found = _find_projective(design)
        if found is None:
            raise DesignError("design is not a built-in PG(d,q) subspace design")
        G = projective_generators(*found)
        return GeneratorSet(G.v, G.k, G.polys, G.family, design.name, G.notes)
    witt = identify_witt(design)
    needs = {"witt24": "witt24", "witt23": "witt23", "witt22": "witt22",
             "m12orbit": "witt12", "octagon": "witt10", "derived": None}
    if family not in needs:
        raise DesignError(f"unknown generator family {family!r}")
    if family == "derived":
        parent = PARENT.get(witt or "")
        if parent is None:
            raise DesignError("derived generators are only available for witt23, witt22 and witt11")
        pname, point = parent
        return derived_generators(family_generators(WITT[pname](), TABLE_FAMILY[pname]), point, design)
    if witt != needs[family]:
        raise DesignError(f"family {family} needs the built-in {needs[family]} design")
    builders = {"witt24": witt24_generators, "witt23": witt23_generators,
                "witt22": witt22_generators, "m12orbit": m12_orbit_generators,
                "octagon": octagon_generators}
    return builders[family](design)


__all__ = [
    "CONSTRUCTORS", "FAMILY_CHOICES", "PARENT", "TABLE", "TABLE_FAMILY", "WITT", "auto_family",
    "construct", "family_generators", "from_recipe", "identify_witt",
]
