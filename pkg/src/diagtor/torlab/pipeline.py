"""Tor reports, induced maps to the group quotient, and theorem verdicts."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from ..algebra import AlgebraFamily, AlgebraId, algebra_id
from ..covers import cover_for, verify_cover
from ..errors import BudgetExceeded, DiagtorError, PreconditionError
from ..exactla.homology import HomologyGroup, homology_induced_map
from ..exactla.rings import CoefficientRing
from ..exactla.sparse import SparseMatrix
from ..mv import build_mv, check_acyclic, simplex_decomposition_check
from .augideal import augmentation_ideal
from .bar import DEFAULT_BAR_BUDGET, quotient_image, reduced_bar, tensor_power_map
from .groups import group_homology_cyclic, group_homology_symmetric
from .resolution import (
    DEFAULT_RESOLUTION_BUDGET,
    ComparisonMap,
    FreeResolution,
    cyclic_periodic_resolution,
)

BAR = "bar"
RESOLUTION = "minimal_resolution"
METHOD_ALIASES = {"bar": BAR, "minres": RESOLUTION, "resolution": RESOLUTION, "minimal_resolution": RESOLUTION, "auto": "auto"}

# integral SNF in pure Python stays quick below this many bar columns
INTEGRAL_BAR_LIMIT = 40_000
# induced maps through the bar complex materialize d_{q+1}; keep it moderate
BAR_MAP_LIMIT = 500_000
# commuting squares are rechecked when the bar degree is at most this large
CHECK_LIMIT = 200_000

THEOREMS = ("partition", "jones", "jones-sroka", "main")


def _aid(algebra) -> AlgebraId:
    if isinstance(algebra, AlgebraId):
        return algebra
    if isinstance(algebra, tuple):
        return algebra_id(*algebra)
    raise PreconditionError(f"cannot read an algebra from {algebra!r}")


def _group_dict(g: HomologyGroup, ring: CoefficientRing, q: int) -> dict:
    return {"q": q, "free_rank": g.free_rank, "torsion": list(g.torsion), "text": g.render(ring)}


def resolve_method(method: str, aid: AlgebraId, ring: CoefficientRing, q_max: int, for_map: bool = False) -> str:
    try:
        m = METHOD_ALIASES[method]
    except KeyError:
        raise PreconditionError(f"unknown method {method!r}") from None
    if m != "auto":
        return m
    if ring.kind == "Zmod":
        return BAR
    cols = augmentation_ideal(aid).dim ** (q_max + 1)
    limit = INTEGRAL_BAR_LIMIT if ring.kind == "Z" else (BAR_MAP_LIMIT if for_map else DEFAULT_BAR_BUDGET)
    return BAR if cols <= limit else RESOLUTION


@dataclass
class TorReport:
    algebra: AlgebraId
    ring: CoefficientRing
    method: str
    groups: list[HomologyGroup]
    seconds: float = field(default=0.0, compare=False)

    @property
    def q_max(self) -> int:
        return len(self.groups) - 1

    def to_dict(self) -> dict:
        return {
            "algebra": str(self.algebra),
            "ring": self.ring.spec,
            "delta": str(self.ring.delta),
            "method": self.method,
            "groups": [_group_dict(g, self.ring, q) for q, g in enumerate(self.groups)],
        }


def tor(algebra, ring: CoefficientRing, q_max: int, method: str = "auto", budget: int | None = None) -> TorReport:
    """``Tor_q^A(1, 1)`` for q <= q_max."""
    aid = _aid(algebra)
    m = resolve_method(method, aid, ring, q_max)
    t0 = time.perf_counter()
    if m == BAR:
        groups = reduced_bar(aid, ring, q_max, DEFAULT_BAR_BUDGET if budget is None else budget).homology_all()
    elif aid.family is AlgebraFamily.CYCLIC_GROUP:
        groups = group_homology_cyclic(aid.n, ring, q_max)
    else:
        res = FreeResolution(aid, ring, budget=DEFAULT_RESOLUTION_BUDGET if budget is None else budget)
        groups = res.tor(q_max)
    return TorReport(aid, ring, m, groups, time.perf_counter() - t0)


def group_oracle(aid: AlgebraId, ring: CoefficientRing, q_max: int) -> list[HomologyGroup]:
    g = aid.quotient if not aid.family.is_group else aid
    if g is None:
        raise PreconditionError(f"{aid} has no group quotient")
    if g.family is AlgebraFamily.CYCLIC_GROUP:
        return group_homology_cyclic(g.n, ring, q_max)
    return group_homology_symmetric(g.n, ring, q_max, budget=None)


# -- claims ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    theorem: str | None
    iso_upto: Fraction | None = None
    surj_at: Fraction | None = None
    all_iso: bool = False

    def expected(self, q: int) -> str | None:
        if self.theorem is None:
            return None
        if self.all_iso:
            return "isomorphism"
        if self.iso_upto is not None and q <= self.iso_upto:
            return "isomorphism"
        if self.surj_at is not None and q == self.surj_at:
            return "surjection"
        return None

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "iso_upto": None if self.iso_upto is None else (floor(self.iso_upto)),
            "surjection_at": None if self.surj_at is None or self.surj_at.denominator != 1 else int(self.surj_at),
            "all_degrees": self.all_iso,
        }


def jones_sroka_applies(n: int, ring: CoefficientRing) -> bool:
    return n % 2 == 1 or ring.is_unit(ring.delta)


def claim_for(theorem: str | None, aid: AlgebraId, ring: CoefficientRing, height: int | None = None) -> Claim:
    n = aid.n
    if theorem is None:
        if aid.family is AlgebraFamily.PARTITION:
            theorem = "partition"
        elif aid.family is AlgebraFamily.JONES_ANNULAR:
            theorem = "jones-sroka" if jones_sroka_applies(n, ring) else "jones"
        else:
            return Claim(None)
    if theorem == "partition":
        return Claim(theorem, Fraction(n - 3), Fraction(n - 2))
    if theorem == "jones":
        return Claim(theorem, Fraction(n, 2) - 3, Fraction(n, 2) - 2)
    if theorem == "jones-sroka":
        return Claim(theorem, all_iso=True)
    if theorem == "main":
        if height is None:
            raise PreconditionError("the cover theorem needs a height")
        return Claim(theorem, Fraction(height - 2), Fraction(height - 1))
    raise PreconditionError(f"unknown theorem {theorem!r}")


# -- induced maps ----------------------------------------------------------------------


@dataclass
class DegreeReport:
    q: int
    source: HomologyGroup
    target: HomologyGroup
    matrix: SparseMatrix
    classification: str
    expected: str | None

    @property
    def gated(self) -> bool:
        return self.expected is not None

    @property
    def ok(self) -> bool | None:
        if self.expected is None:
            return None
        if self.expected == "isomorphism":
            return self.classification == "isomorphism"
        return self.classification in ("isomorphism", "surjective_not_injective")


@dataclass
class InducedMapReport:
    source: AlgebraId
    target: AlgebraId
    ring: CoefficientRing
    method: str
    claim: Claim
    degrees: list[DegreeReport]

    @property
    def verdict(self) -> bool:
        return all(d.ok is not False for d in self.degrees)

    def to_dict(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "ring": self.ring.spec,
            "delta": str(self.ring.delta),
            "method": self.method,
            "claim": self.claim.to_dict(),
            "degrees": [
                {
                    "q": d.q,
                    "source": _group_dict(d.source, self.ring, d.q),
                    "target": _group_dict(d.target, self.ring, d.q),
                    "matrix": {
                        "shape": list(d.matrix.shape),
                        "entries": [[i, j, str(v)] for i, j, v in sorted(d.matrix.entries())],
                    },
                    "classification": d.classification,
                    "expected": d.expected,
                    "gated": d.gated,
                    "ok": d.ok,
                }
                for d in self.degrees
            ],
            "verdict": "pass" if self.verdict else "fail",
        }


def _bar_maps(aid: AlgebraId, ring: CoefficientRing, q_max: int, budget):
    target = aid.quotient
    A = reduced_bar(aid, ring, q_max, budget)
    B = reduced_bar(target, ring, q_max, budget)
    image = quotient_image(aid)
    m, mt = A.m, B.m
    out = []
    for q in range(q_max + 1):
        maps = (
            tensor_power_map(image, m, mt, q - 1) if q > 0 else None,
            tensor_power_map(image, m, mt, q),
            tensor_power_map(image, m, mt, q + 1),
        )
        check = A.rank(q + 1) <= CHECK_LIMIT
        out.append(homology_induced_map((A.d(q), A.d(q + 1)), (B.d(q), B.d(q + 1)), maps, ring, check=check))
    return out


def _resolution_maps(aid: AlgebraId, ring: CoefficientRing, q_max: int, budget):
    target = aid.quotient
    F = FreeResolution(aid, ring, budget=DEFAULT_RESOLUTION_BUDGET if budget is None else budget)
    if target.family is AlgebraFamily.CYCLIC_GROUP:
        G = cyclic_periodic_resolution(target.n, ring, q_max + 1)
    else:
        G = FreeResolution(target, ring, budget=None)
    C = ComparisonMap(F, G).extend_to(q_max + 1)
    out = []
    for q in range(q_max + 1):
        maps = (C.tensored(q - 1) if q > 0 else None, C.tensored(q), C.tensored(q + 1))
        src = (F.tensored(q), F.tensored(q + 1))
        tgt = (G.tensored(q), G.tensored(q + 1))
        out.append(homology_induced_map(src, tgt, maps, ring, check=src[1].ncols <= CHECK_LIMIT))
    return out


def induced_tor_map(
    algebra,
    ring: CoefficientRing,
    q_max: int,
    method: str = "auto",
    budget: int | None = None,
    theorem: str | None = None,
    height: int | None = None,
) -> InducedMapReport:
    """Map ``Tor^A(1,1) -> Tor^{RG}(1,1)`` induced by the quotient onto the group algebra."""
    aid = _aid(algebra)
    target = aid.quotient
    if target is None:
        raise PreconditionError(f"{aid} has no group-algebra quotient")
    m = resolve_method(method, aid, ring, q_max, for_map=True)
    if m == BAR:
        maps = _bar_maps(aid, ring, q_max, DEFAULT_BAR_BUDGET if budget is None else budget)
    else:
        if not (ring.is_field or ring.kind == "Z"):
            raise PreconditionError(f"resolutions need a field or Z, got {ring.spec}")
        maps = _resolution_maps(aid, ring, q_max, budget)
    claim = claim_for(theorem, aid, ring, height)
    degrees = [DegreeReport(q, im.source, im.target, im.matrix, im.classification, claim.expected(q)) for q, im in enumerate(maps)]
    return InducedMapReport(aid, target, ring, m, claim, degrees)


# -- verdicts --------------------------------------------------------------------------


def _check(name: str, ok: bool | None, data) -> dict:
    status = "pass" if ok else ("skipped" if ok is None else "fail")
    return {"name": name, "status": status, "data": data}


def _cover_check(family, n, ring, height):
    cover = cover_for(family, n, height)
    rep = verify_cover(cover, ring)
    counts: dict = {}
    for e in rep["subsets"]:
        counts[e["status"]] = counts.get(e["status"], 0) + 1
    bad = [e["subset"] for e in rep["subsets"] if e["status"] not in ("zero", "idempotent")]
    data = {
        "algebra": rep["algebra"],
        "width": rep["width"],
        "height": rep["height"],
        "cover_identity": rep["cover_identity"],
        "status_counts": counts,
        "failing_subsets": bad,
    }
    return cover, _check("cover_and_idempotents", rep["pass"], data)


def _mv_check(cover):
    c = build_mv(cover)
    acyc = check_acyclic(c)
    simplex = simplex_decomposition_check(c)
    data = {"ranks": {str(p): c.rank(p) for p in c.degrees}, "square_zero": acyc["square_zero"], "acyclic": acyc["acyclic"], "simplex_decomposition": simplex}
    return _check("mayer_vietoris", acyc["square_zero"] and acyc["acyclic"] and simplex, data)


def verify_theorem(
    theorem: str,
    n: int,
    ring: CoefficientRing,
    q_max: int | None = None,
    method: str = "auto",
    budget: int | None = None,
    family: str | None = None,
    height: int | None = None,
) -> dict:
    """Run every check behind a theorem at one parameter point; failures become verdict entries."""
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    fam = family or ("partition" if theorem == "partition" else "jones")
    params = {"n": n, "ring": ring.spec, "delta": str(ring.delta), "q_max": q_max, "method": method, "family": fam, "height": height}
    checks: list[dict] = []
    aid = algebra_id(fam, n)

    if theorem == "jones-sroka":
        ok = jones_sroka_applies(n, ring)
        checks.append(_check("hypothesis", ok, {"n_odd": n % 2 == 1, "delta_unit": ring.is_unit(ring.delta)}))

    cover = None
    try:
        cover, chk = _cover_check(fam, n, ring, height)
        checks.append(chk)
        checks.append(_mv_check(cover))
    except (DiagtorError, ValueError) as exc:
        checks.append(_check("cover_and_idempotents", False, {"error": str(exc)}))

    if q_max is not None and not (theorem == "jones-sroka" and not jones_sroka_applies(n, ring)):
        h = cover.height if (theorem == "main" and cover is not None) else height
        try:
            rep = induced_tor_map(aid, ring, q_max, method, budget, theorem=theorem, height=h)
            oracle = group_oracle(aid, ring, q_max)
            oracle_ok = all(d.target == g for d, g in zip(rep.degrees, oracle))
            checks.append(
                _check(
                    "tor_groups",
                    oracle_ok,
                    {
                        "method": rep.method,
                        "source": [_group_dict(d.source, ring, d.q) for d in rep.degrees],
                        "target": [_group_dict(d.target, ring, d.q) for d in rep.degrees],
                        "target_matches_group_oracle": oracle_ok,
                    },
                )
            )
            if rep.claim.all_iso:
                same = all(d.source == d.target for d in rep.degrees)
                checks.append(_check("tor_equals_group_homology", same, {"degrees": [d.q for d in rep.degrees]}))
            checks.append(
                _check(
                    "induced_map",
                    rep.verdict,
                    {
                        "claim": rep.claim.to_dict(),
                        "degrees": [
                            {"q": d.q, "classification": d.classification, "expected": d.expected, "gated": d.gated, "ok": d.ok}
                            for d in rep.degrees
                        ],
                    },
                )
            )
        except BudgetExceeded as exc:
            checks.append(_check("induced_map", False, {"budget_exceeded": str(exc), "required": exc.required, "budget": exc.budget}))
    overall = all(c["status"] != "fail" for c in checks)
    return {"theorem": theorem, "parameters": params, "checks": checks, "overall": "pass" if overall else "fail"}
