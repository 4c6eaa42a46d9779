# services/catalog_service.py
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from solvqi.algebra.liealg import LieAlgebra, triangularize, validate
from solvqi.algebra.reduction import cone_dimension, rho1, trigshadow
from solvqi.config.settings import EXTENDED_CATALOG_DIR
from solvqi.exceptions import ConfigError, SolvQIError
from solvqi.language.parser import parse_file
from solvqi.structure.catalog import CatalogEntry, FactorSpec, ImageSpec, catalog, extended_entry, match
from solvqi.structure.decomposable import rows_for
from solvqi.structure.splitting import split_factors

logger = logging.getLogger(__name__)


def rho1_image(g: LieAlgebra, entries: Optional[Sequence[CatalogEntry]] = None) -> Tuple[ImageSpec, int]:
    """Recognized shape of rho1(g) and the number of factors the catalog could not name"""
    split = split_factors(rho1(g).output)
    factors = []
    unmatched = 0
    for factor in split.factors:
        found = match(factor, entries)
        if found is None:
            unmatched += 1
            factors.append(FactorSpec(f"?dim{factor.dim}"))
        else:
            factors.append(FactorSpec(found.name, found.params))
    factors.sort(key=lambda f: (f.name, tuple(str(v) for _, v in f.params)))
    return ImageSpec(split.euclidean_dim, tuple(factors)), unmatched


def same_image(a: ImageSpec, b: ImageSpec) -> bool:
    def key(image: ImageSpec):
        return image.euclidean, sorted((f.name, tuple((k, Fraction(v)) for k, v in f.params)) for f in image.factors)

    return key(a) == key(b)


def comparison_model(g: LieAlgebra) -> LieAlgebra:
    """g itself when completely solvable, else its rho0 modification"""
    if triangularize(g).success:
        return g
    return trigshadow(g).output


def table_problems(entry: CatalogEntry, image: ImageSpec, unmatched: int, conedim: int) -> List[str]:
    """Disagreements between a computed image and the table rows naming the entry"""
    problems = []
    params = dict(entry.values)
    for row in rows_for(entry.name):
        try:
            admitted = row.admits(params)
            expected = row.expected(params)
        except KeyError as e:
            problems.append(f"{row.label} needs parameter {e.args[0]}")
            continue
        if not admitted:
            problems.append(f"parameters {format_params(params)} are outside {row.label}")
        if unmatched or not same_image(image, expected):
            problems.append(f"rho1 image is {image.describe()}, table lists {expected.describe()} for {row.label}")
        if conedim != row.conedim:
            problems.append(f"cone dimension is {conedim}, table lists {row.conedim} for {row.label}")
        if entry.family != row.family:
            problems.append(f"family is {entry.family}, table lists {row.family} for {row.label}")
        if entry.dehn_type != row.dehn:
            problems.append(f"dehn type is {entry.dehn_type}, table lists {row.dehn} for {row.label}")
    return problems


def format_params(params: Dict[str, Fraction]) -> str:
    return ",".join(f"{k}={v}" for k, v in params.items())


@dataclass(frozen=True)
class LoadedEntry:
    path: str
    name: str
    accepted: bool
    reason: str
    entry: Optional[CatalogEntry] = None
    computed_image: Optional[ImageSpec] = None
    computed_conedim: Optional[int] = None
    model: Optional[LieAlgebra] = None

    @property
    def through_rho0(self) -> bool:
        """rho1 was computed on the rho0 modification rather than on the transcribed table"""
        return self.model is not None and self.entry is not None and self.model != self.entry.build()


@dataclass(frozen=True)
class ExtendedCatalog:
    directory: str
    loaded: Tuple[LoadedEntry, ...]

    @property
    def entries(self) -> List[CatalogEntry]:
        return [item.entry for item in self.loaded if item.accepted]

    @property
    def rejected(self) -> List[LoadedEntry]:
        return [item for item in self.loaded if not item.accepted]

    def find(self, name: str) -> Optional[CatalogEntry]:
        return next((e for e in self.entries if e.name == name), None)

    def accepted_item(self, name: str) -> Optional[LoadedEntry]:
        return next((item for item in self.loaded if item.accepted and item.name == name), None)


class CatalogService:
    """Builds the catalog in use: built in families plus gated extended entries"""

    def __init__(self, directory: Optional[str] = None):
        self.logger = logging.getLogger(__name__)
        self.directory = directory or EXTENDED_CATALOG_DIR
        self._extended: Optional[ExtendedCatalog] = None

    @property
    def extended(self) -> ExtendedCatalog:
        if self._extended is None:
            self._extended = self.load()
        return self._extended

    def entries(self) -> List[CatalogEntry]:
        return list(catalog()) + self.extended.entries

    def load(self) -> ExtendedCatalog:
        folder = Path(self.directory)
        if not folder.is_dir():
            raise ConfigError(f"extended catalog directory {folder} does not exist")
        loaded = [self._load_one(path) for path in sorted(folder.glob("*.lie"))]
        accepted = sum(1 for item in loaded if item.accepted)
        self.logger.info(f"Loaded {accepted}/{len(loaded)} extended catalog entries from {folder}")
        for item in loaded:
            if not item.accepted:
                self.logger.warning(f"Rejected extended entry {item.name}: {item.reason}")
        return ExtendedCatalog(str(folder), tuple(loaded))

    def _load_one(self, path: Path) -> LoadedEntry:
        try:
            document = parse_file(path)
            algebra = document.to_algebra()
        except SolvQIError as e:
            return LoadedEntry(str(path), path.stem, False, f"unreadable: {e}")
        report = validate(algebra)
        if not report.ok:
            return LoadedEntry(str(path), document.name, False, f"Jacobi identity fails: {report.describe()}")
        meta: Dict[str, Tuple[str, ...]] = dict(document.meta)
        try:
            entry = extended_entry(document.name, algebra, meta)
            model = comparison_model(algebra)
            image, unmatched = rho1_image(model)
            conedim = cone_dimension(model)
        except SolvQIError as e:
            return LoadedEntry(str(path), document.name, False, f"rho1 image not computable: {e}")
        if model is not algebra:
            self.logger.debug(f"{document.name}: rho1 computed on the rho0 modification")
        problems = []
        if entry.image is None:
            problems.append("no 'meta image' line")
        elif unmatched or not same_image(image, entry.image):
            problems.append(f"rho1 image is {image.describe()}, expected {entry.image.describe()}")
        if entry.conedim is not None and entry.conedim != conedim:
            problems.append(f"cone dimension is {conedim}, expected {entry.conedim}")
        problems.extend(table_problems(entry, image, unmatched, conedim))
        accepted = not problems
        reason = "; ".join(problems) if problems else "validated"
        return LoadedEntry(str(path), document.name, accepted, reason, entry, image, conedim, model)
