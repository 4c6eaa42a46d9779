# services/report_service.py
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from solvqi.algebra.liealg import LieAlgebra, abelian, direct_sum
from solvqi.algebra.reduction import cone_dimension
from solvqi.config.settings import EngineConfig, engine_config
from solvqi.exceptions import SolvQIError
from solvqi.services.catalog_service import CatalogService, format_params, rho1_image, same_image
from solvqi.services.qi_engine import AlgebraProfile, QIEngine, VerdictKind, verdict_summary
from solvqi.structure import families
from solvqi.structure.catalog import FactorSpec, ImageSpec
from solvqi.structure.decomposable import FAMILIES, TABLE1_ROWS, Table1Row, g5_19_image, rows_for

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
NOT_TRANSCRIBED = "no accepted entry in the extended catalog"

G4_9_ZERO_ROW = Table1Row(
    "g4_9^0 (four dimensional analogue)", "g4_9", "R x g3_3",
    lambda params: ImageSpec(1, (FactorSpec("g3_3"),)), 2, "unknown",
)


@dataclass(frozen=True)
class Table1Item:
    row: Table1Row
    params: Optional[Dict[str, Fraction]] = None
    algebra: Optional[LieAlgebra] = None
    through_rho0: bool = False


@dataclass(frozen=True)
class Member:
    family: str
    label: str
    algebra: LieAlgebra
    image: Optional[ImageSpec] = None


class ReportService:
    """Batch reproduction reports; entries are computed concurrently and merged in table order"""

    def __init__(self, catalog_service: CatalogService, config: EngineConfig = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or engine_config()
        self.catalog_service = catalog_service
        self.engine = QIEngine(self.config, catalog_service.entries())
        self.executor = ThreadPoolExecutor(max_workers=self.config.reports.max_workers)

    def close(self):
        if self.executor:
            self.executor.shutdown(wait=True)
            self.logger.debug("Report thread pool shutdown complete")

    async def _fan_out(self, func: Callable[[Any], Dict[str, Any]], items: Sequence[Any]) -> List[Dict[str, Any]]:
        loop = asyncio.get_running_loop()
        tasks = [loop.run_in_executor(self.executor, func, item) for item in items]
        return list(await asyncio.gather(*tasks))

    def _run(self, func: Callable[[Any], Dict[str, Any]], items: Sequence[Any]) -> List[Dict[str, Any]]:
        return asyncio.run(self._fan_out(func, items))

    # -----------------------------------------------------------------------
    # Table 1
    # -----------------------------------------------------------------------

    def _table1_items(self) -> List[Table1Item]:
        items = [Table1Item(G4_9_ZERO_ROW, {"beta": Fraction(0)}, families.g4_9(0))]
        extended = self.catalog_service.extended
        for row in TABLE1_ROWS:
            if row.entry == "g5_19":
                for beta in self.config.reports.g5_19_betas:
                    if row.admits({"beta": beta}):
                        items.append(Table1Item(row, {"beta": beta}, families.g5_19(beta)))
                continue
            item = extended.accepted_item(row.entry)
            if item is None:
                items.append(Table1Item(row))
            else:
                items.append(Table1Item(row, dict(item.entry.values), item.model, item.through_rho0))
        return items

    def _table1_row(self, item: Table1Item) -> Dict[str, Any]:
        row = item.row
        result: Dict[str, Any] = {
            "row": row.label,
            "entry": row.entry,
            "params": format_params(item.params) if item.params else None,
            "expected_image": row.image_text,
            "expected_conedim": row.conedim,
            "dehn": row.dehn,
        }
        if item.algebra is None:
            result.update({"status": SKIPPED, "reason": NOT_TRANSCRIBED})
            return result
        try:
            expected = row.expected(item.params)
            result["expected_image"] = expected.describe()
            if not row.admits(item.params):
                result.update({"status": FAIL, "reason": f"parameters {result['params']} are outside the row"})
                return result
            image, unmatched = rho1_image(item.algebra, self.engine.entries)
            conedim = cone_dimension(item.algebra)
        except KeyError as e:
            result.update({"status": FAIL, "reason": f"missing parameter {e.args[0]}"})
            return result
        except SolvQIError as e:
            result.update({"status": FAIL, "reason": str(e)})
            return result
        image_ok = not unmatched and same_image(image, expected)
        result.update({
            "image": image.describe(),
            "conedim": conedim,
            "through_rho0": item.through_rho0,
            "status": PASS if image_ok and conedim == row.conedim else FAIL,
        })
        return result

    def table1_report(self) -> Dict[str, Any]:
        items = self._table1_items()
        self.logger.info(f"Reproducing {len(items)} table rows with {self.config.reports.max_workers} workers")
        rows = self._run(self._table1_row, items)
        return {"rows": rows, "summary": _summary(rows)}

    # -----------------------------------------------------------------------
    # Families
    # -----------------------------------------------------------------------

    def _members(self) -> List[Member]:
        members = [
            Member("G2_4_5", f"g5_19^{{1,{beta}}}", families.g5_19(beta), g5_19_image(beta))
            for beta in self.config.reports.family_g5_19_betas
            if beta > 0
        ]
        for item in self.catalog_service.extended.loaded:
            entry = item.entry
            if not item.accepted or entry.family not in FAMILIES:
                continue
            rows = rows_for(entry.name)
            image = rows[0].expected(dict(entry.values)) if rows else entry.image
            members.append(Member(entry.family, entry.name, item.model, image))
        return members

    def _profile(self, member: Member) -> AlgebraProfile:
        return self.engine.profile(member.algebra.relabel(name=member.label))

    def _pair(self, item) -> Dict[str, Any]:
        (a, pa), (b, pb), expected, reason = item
        verdict = self.engine.compare_profiles(pa, pb)
        row = {"left": a.label, "right": b.label, "expected": expected, "reason": reason}
        row.update(verdict_summary(verdict))
        row["status"] = PASS if expected is None or verdict.kind.value == expected else FAIL
        return row

    def family_report(self) -> Dict[str, Any]:
        members = self._members()
        profiles = self._run(self._profile, members)
        profiled = list(zip(members, profiles))
        pairs = []
        for (a, pa), (b, pb) in combinations(profiled, 2):
            expected, reason = _family_expectation(a, b)
            pairs.append(((a, pa), (b, pb), expected, reason))

        # R x g4_9^beta against the G2_4_9 members, beta != 1
        extra_members = [
            Member("R x g4_9", f"R x g4_9^{beta}", direct_sum(abelian(1), families.g4_9(beta)))
            for beta in self.config.reports.family_g5_19_betas
            if 0 < beta < 1
        ]
        extra_profiles = self._run(self._profile, extra_members)
        for extra in zip(extra_members, extra_profiles):
            for member in profiled:
                if member[0].family == "G2_4_9":
                    pairs.append((extra, member, VerdictKind.NOT_QUASIISOMETRIC.value,
                                  "strong pointed sphere factor against a rank one Iwasawa factor"))

        rows = self._run(self._pair, pairs)
        present = sorted({m.family for m in members})
        return {
            "families": {f: [m.label for m in members if m.family == f] for f in FAMILIES},
            "skipped": [{"family": f, "reason": NOT_TRANSCRIBED} for f in FAMILIES if f not in present],
            "pairs": rows,
            "summary": _summary(rows),
        }


def _family_expectation(a: Member, b: Member) -> Tuple[Optional[str], str]:
    if a.family != b.family:
        return VerdictKind.NOT_QUASIISOMETRIC.value, "distinct families"
    if a.image is not None and b.image is not None:
        if same_image(a.image, b.image):
            return VerdictKind.OLOG_EQUIVALENT.value, "isomorphic rho1 images"
        return VerdictKind.NOT_QUASIISOMETRIC.value, "distinct rho1 images within the family"
    return None, "no expectation"


def _summary(rows: List[Dict[str, Any]]) -> Dict[str, int]:
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for row in rows:
        counts[row["status"]] += 1
    return counts
