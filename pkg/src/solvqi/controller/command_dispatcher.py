# controller/command_dispatcher.py
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from solvqi.algebra.exactlin import Vector
from solvqi.algebra.geometry import (
    NotHeintze,
    conformal_dimension,
    detect_diagonal_heintze,
    identify_rank_one_iwasawa,
    strong_pointed_sphere,
)
from solvqi.algebra.liealg import (
    LieAlgebra,
    center,
    derived_series,
    format_combination,
    is_nilpotent,
    is_solvable,
    lower_central_series,
    validate,
)
from solvqi.algebra.reduction import (
    ReductionResult,
    cone_dimension,
    exponential_radical,
    rho1,
    rho_infinity,
    trigshadow,
)
from solvqi.config.settings import EngineConfig, engine_config
from solvqi.exceptions import (
    AlgebraSyntaxError,
    DocumentError,
    InputError,
    InvariantViolationError,
    SolvQIError,
    UnsupportedInstanceError,
)
from solvqi.language.document import AlgebraDocument, document_from_algebra, print_document
from solvqi.language.parser import parse_file
from solvqi.schemas.report import Report
from solvqi.services.catalog_service import CatalogService, rho1_image
from solvqi.services.qi_engine import QIEngine, annotation_text, verdict_summary
from solvqi.services.report_service import ReportService
from solvqi.structure.catalog import catalog, match
from solvqi.structure.splitting import split_factors

ARITY = {
    "print": 1,
    "validate": 1,
    "series": 1,
    "exprad": 1,
    "conedim": 1,
    "rho1": 1,
    "rhoinf": 1,
    "rho0": 1,
    "heintze": 1,
    "cdim": 1,
    "split": 1,
    "match": 1,
    "compare": 2,
    "table1": 0,
    "families": 0,
    "catalog": 0,
}


def _combination(v: Vector, labels: Sequence[str]) -> str:
    return format_combination(dict(enumerate(v)), labels)


def _spectrum(pairs) -> List[List[Any]]:
    return [[str(lam), m] for lam, m in pairs]


class CommandDispatcher:
    """Turns a command and its file arguments into a Report"""

    def __init__(self, extended_dir: Optional[str] = None, config: EngineConfig = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or engine_config()
        self.catalog_service = CatalogService(extended_dir)
        self.handlers: Dict[str, Callable[..., Dict[str, Any]]] = {
            name: getattr(self, f"_{name}") for name in ARITY
        }

    def run(self, command: str, args: Sequence[str]) -> Report:
        report = Report(command=command, inputs=list(args))
        try:
            if command not in self.handlers:
                raise InputError(f"unknown command {command!r}; expecting one of {', '.join(ARITY)}")
            if len(args) != ARITY[command]:
                raise InputError(f"{command} takes {ARITY[command]} file argument(s), got {len(args)}")
            report.results = self.handlers[command](report, *args)
        except SolvQIError as e:
            self.logger.error(f"{command} failed: {e}")
            report.exit_code = e.exit_code
            error: Dict[str, Any] = {"type": type(e).__name__, "message": str(e)}
            if isinstance(e, AlgebraSyntaxError):
                d = e.diagnostic
                error["diagnostic"] = {
                    "source": e.source,
                    "line": d.line,
                    "column": d.column,
                    "message": d.message,
                    "expected": list(d.expected),
                    "hint": d.hint,
                }
            report.results = {"error": error}
        except Exception as e:
            self.logger.error(f"{command} failed unexpectedly: {str(e)}", exc_info=True)
            report.exit_code = InvariantViolationError.exit_code
            report.results = {"error": {"type": type(e).__name__, "message": str(e)}}
        return report

    # -----------------------------------------------------------------------
    # helpers
    # -----------------------------------------------------------------------

    def _document(self, path: str) -> AlgebraDocument:
        return parse_file(path)

    def _algebra(self, path: str) -> LieAlgebra:
        g = self._document(path).to_algebra()
        jacobi = validate(g)
        if not jacobi.ok:
            raise DocumentError(f"{path}: {jacobi.describe()}")
        return g

    def _entries(self):
        return self.catalog_service.entries()

    def _reduction_results(self, reduction: ReductionResult) -> Dict[str, Any]:
        output = reduction.output
        image, unmatched = rho1_image(reduction.input, self._entries()) if reduction.kind == "rho1" else (None, 0)
        results: Dict[str, Any] = {
            "algebra": reduction.input.name,
            "exprad_dim": reduction.exprad.dim,
            "quotient_rank": reduction.quotient_rank,
            "output": {"name": output.name, "dim": output.dim, "brackets": output.describe()},
            "document": print_document(document_from_algebra(output)).splitlines(),
        }
        if image is not None:
            results["image"] = image.describe()
            results["image_complete"] = unmatched == 0
        results["construction_log"] = list(reduction.construction_log)
        return results

    # -----------------------------------------------------------------------
    # commands
    # -----------------------------------------------------------------------

    def _print(self, report: Report, path: str) -> Dict[str, Any]:
        return {"text": print_document(self._document(path)).splitlines()}

    def _validate(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._document(path).to_algebra()
        jacobi = validate(g)
        if not jacobi.ok:
            report.exit_code = InputError.exit_code
        return {
            "algebra": g.name,
            "dim": g.dim,
            "valid": jacobi.ok,
            "violation": None if jacobi.ok else {
                "triple": [g.labels[i] for i in jacobi.triple],
                "residual": _combination(jacobi.residual, g.labels),
                "message": jacobi.describe(),
            },
        }

    def _series(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        return {
            "algebra": g.name,
            "lower_central": lower_central_series(g).dims,
            "derived": derived_series(g).dims,
            "center_dim": center(g).dim,
            "nilpotent": is_nilpotent(g),
            "solvable": is_solvable(g),
        }

    def _exprad(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        radical = exponential_radical(g)
        return {"algebra": g.name, "dim": radical.dim, "basis": [_combination(v, g.labels) for v in radical.vectors]}

    def _conedim(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        return {"algebra": g.name, "cone_dim": cone_dimension(g)}

    def _rho1(self, report: Report, path: str) -> Dict[str, Any]:
        return self._reduction_results(rho1(self._algebra(path)))

    def _rhoinf(self, report: Report, path: str) -> Dict[str, Any]:
        return self._reduction_results(rho_infinity(self._algebra(path)))

    def _rho0(self, report: Report, path: str) -> Dict[str, Any]:
        shadow = trigshadow(self._algebra(path))
        output = shadow.output
        return {
            "algebra": shadow.input.name,
            "modified": shadow.modified,
            "cartan_dim": shadow.cartan.dim if shadow.cartan is not None else None,
            "output": {"name": output.name, "dim": output.dim, "brackets": output.describe()},
            "document": print_document(document_from_algebra(output)).splitlines(),
            "construction_log": list(shadow.construction_log),
        }

    def _heintze(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        detected = detect_diagonal_heintze(g)
        if isinstance(detected, NotHeintze):
            return {"algebra": g.name, "heintze": False, "reason": detected.reason}
        spsp = strong_pointed_sphere(detected)
        report.cite(spsp.rule, spsp.citation)
        return {
            "algebra": g.name,
            "heintze": True,
            "nilradical_kind": detected.nilradical_kind,
            "generator": _combination(detected.generator, g.labels),
            "spectrum": _spectrum(detected.spectrum),
            "normalized_spectrum": _spectrum(detected.normalized_spectrum),
            "cdim": str(conformal_dimension(detected)),
            "iwasawa": identify_rank_one_iwasawa(detected).describe(),
            "spsp": {"value": spsp.value.value, "rule": spsp.rule},
        }

    def _cdim(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        detected = detect_diagonal_heintze(g)
        if isinstance(detected, NotHeintze):
            raise UnsupportedInstanceError(f"{g.name} is not a diagonal Heintze algebra: {detected.reason}")
        return {"algebra": g.name, "cdim": str(conformal_dimension(detected))}

    def _split(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        split = split_factors(g)
        factors = []
        for factor in split.factors:
            found = match(factor, self._entries())
            factors.append({
                "dim": factor.dim,
                "labels": list(factor.labels),
                "brackets": factor.describe(),
                "match": found.name if found else None,
                "params": {k: str(v) for k, v in found.params} if found else {},
            })
        return {
            "algebra": g.name,
            "euclidean_dim": split.euclidean_dim,
            "complete": split.complete,
            "factors": factors,
            "change_of_basis": split.change_of_basis.to_strings(),
        }

    def _match(self, report: Report, path: str) -> Dict[str, Any]:
        g = self._algebra(path)
        found = match(g, self._entries())
        if found is None:
            return {"algebra": g.name, "match": None}
        return {
            "algebra": g.name,
            "match": found.name,
            "params": {k: str(v) for k, v in found.params},
            "basis": found.basis.to_strings(),
        }

    def _compare(self, report: Report, left: str, right: str) -> Dict[str, Any]:
        a, b = self._algebra(left), self._algebra(right)
        engine = QIEngine(self.config, self._entries())
        verdict = engine.compare(a, b)
        for application in verdict.certificate:
            report.cite(application.rule_id, application.citation)
        for annotation in verdict.annotations:
            report.cite(*annotation_text(annotation))
        results = {"left": a.name, "right": b.name}
        results.update(verdict_summary(verdict))
        return results

    def _table1(self, report: Report) -> Dict[str, Any]:
        service = ReportService(self.catalog_service, self.config)
        try:
            return service.table1_report()
        finally:
            service.close()

    def _families(self, report: Report) -> Dict[str, Any]:
        service = ReportService(self.catalog_service, self.config)
        try:
            results = service.family_report()
        finally:
            service.close()
        for row in results["pairs"]:
            for application in row["certificate"]:
                report.cite(application["rule"], application["citation"])
        return results

    def _catalog(self, report: Report) -> Dict[str, Any]:
        builtin = [
            {
                "name": entry.name,
                "dim": entry.dim,
                "params": [{"name": p.name, "constraint": p.constraint} for p in entry.params],
                "conedim": entry.conedim,
            }
            for entry in catalog()
        ]
        extended = []
        for item in self.catalog_service.extended.loaded:
            entry = item.entry
            extended.append({
                "name": item.name,
                "accepted": item.accepted,
                "reason": item.reason,
                "source": entry.source if entry else None,
                "family": entry.family if entry else None,
                "dehn": entry.dehn_type if entry else None,
                "conedim": entry.conedim if entry else None,
                "image": entry.image.describe() if entry and entry.image else None,
                "provenance": entry.provenance if entry else None,
                "param_range": entry.param_range if entry else None,
                "range_external": entry.range_external if entry else False,
                "through_rho0": item.through_rho0,
            })
        return {"builtin": builtin, "extended": extended, "directory": self.catalog_service.extended.directory}


def render_text(report: Report) -> str:
    """Indented plain text form of a report"""
    lines: List[str] = []

    def emit(value: Any, indent: int, key: Optional[str] = None):
        pad = "  " * indent
        prefix = f"{pad}{key}: " if key is not None else f"{pad}- "
        if isinstance(value, dict):
            lines.append(prefix.rstrip())
            for k, v in value.items():
                emit(v, indent + 1, k)
        elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
            lines.append(prefix.rstrip())
            for v in value:
                emit(v, indent + 1)
        elif isinstance(value, list):
            lines.append(prefix + ", ".join(str(v) for v in value))
        else:
            lines.append(prefix + ("-" if value is None else str(value)))

    for key, value in report.results.items():
        emit(value, 0, key)
    for citation in report.citations:
        lines.append(f"[{citation.rule}] {citation.text}")
    return "\n".join(lines) + "\n"
