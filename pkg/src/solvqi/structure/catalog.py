"""
The catalog of named low dimensional solvable Lie algebras.

Built in entries carry a generator and a certified recognizer. Extended
entries are read from `.lie` documents and only match on identical structure
constants; their `meta` lines carry the reference data they are checked against.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from solvqi.algebra.exactlin import to_rational
from solvqi.algebra.liealg import LieAlgebra, triangularize
from solvqi.exceptions import CatalogLookupError, DocumentError
from solvqi.structure import families
from solvqi.structure import recognizers as rec
from solvqi.structure.recognizers import Recognition, Recognizer

logger = logging.getLogger(__name__)

DEHN_TYPES = ("quadratic", "cubic", "exponential", "unknown")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    constraint: str


@dataclass(frozen=True)
class FactorSpec:
    name: str
    params: Tuple[Tuple[str, Fraction], ...] = ()

    def key(self) -> Tuple[str, Tuple[Tuple[str, Fraction], ...]]:
        return self.name, self.params

    def describe(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}^{{{','.join(str(v) for _, v in self.params)}}}"


@dataclass(frozen=True)
class ImageSpec:
    """Expected rho1 image: R^euclidean x factors"""
    euclidean: int
    factors: Tuple[FactorSpec, ...]

    def describe(self) -> str:
        parts = [f"R^{self.euclidean}"] if self.euclidean > 1 else (["R"] if self.euclidean == 1 else [])
        parts.extend(f.describe() for f in self.factors)
        return " x ".join(parts) if parts else "0"

    def to_tokens(self) -> Tuple[str, ...]:
        tokens = [f"euclidean={self.euclidean}"]
        for f in self.factors:
            tokens.append(f.name)
            tokens.extend(f"{k}={v}" for k, v in f.params)
        return tuple(tokens)

    @classmethod
    def from_tokens(cls, tokens: Sequence[str]) -> "ImageSpec":
        euclidean = 0
        factors: List[Tuple[str, List[Tuple[str, Fraction]]]] = []
        for token in tokens:
            key, sep, value = token.partition("=")
            if not sep:
                factors.append((token, []))
                continue
            try:
                number = Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise DocumentError(f"image token {token!r} has no rational value") from e
            if key == "euclidean":
                euclidean = int(number)
            elif not factors:
                raise DocumentError(f"image parameter {token!r} precedes any factor name")
            else:
                factors[-1][1].append((key, number))
        return cls(euclidean, tuple(FactorSpec(name, tuple(params)) for name, params in factors))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    params: Tuple[ParamSpec, ...]
    generator: Callable[..., LieAlgebra]
    recognizer: Recognizer
    conedim: Optional[int] = None
    dehn_type: str = "unknown"
    source: str = "builtin"
    family: Optional[str] = None
    image: Optional[ImageSpec] = None
    provenance: Optional[str] = None
    samples: Tuple[Tuple[Tuple[str, Fraction], ...], ...] = field(default=((),))
    values: Tuple[Tuple[str, Fraction], ...] = ()
    param_range: Optional[str] = None
    range_external: bool = False

    @property
    def extended(self) -> bool:
        return self.source != "builtin"

    def build(self, params: Optional[Dict[str, object]] = None) -> LieAlgebra:
        params = dict(params or {})
        expected = [p.name for p in self.params]
        if sorted(params) != sorted(expected):
            raise CatalogLookupError(f"{self.name} takes parameters {expected}, got {sorted(params)}")
        return self.generator(**{k: to_rational(params[k]) for k in expected})

    def sample_algebras(self) -> List[Tuple[Dict[str, Fraction], LieAlgebra]]:
        return [(dict(sample), self.build(dict(sample))) for sample in self.samples]


def _samples(name: str, *values: Sequence[object]) -> Tuple[Tuple[Tuple[str, Fraction], ...], ...]:
    names = name.split(",")
    return tuple(tuple(zip(names, (to_rational(v) for v in row))) for row in values)


@lru_cache(maxsize=1)
def catalog() -> Tuple[CatalogEntry, ...]:
    """Built in families with their admissible ranges"""
    half, third = Fraction(1, 2), Fraction(1, 3)
    return (
        CatalogEntry("a2", 2, (), families.a2, rec.recognize_a2, conedim=1),
        CatalogEntry("heis", 3, (), families.heis, rec.recognize_heis, conedim=3),
        CatalogEntry("g3_3", 3, (), families.g3_3, rec.recognize_g3_3, conedim=1),
        CatalogEntry(
            "g3_5", 3, (ParamSpec("alpha", "-1 <= alpha < 1, alpha != 0"),), families.g3_5, rec.recognize_g3_5,
            conedim=1, samples=_samples("alpha", (-1,), (-half,), (third,), (half,), (Fraction(2, 3),)),
        ),
        CatalogEntry(
            "g4_5", 4,
            (ParamSpec("alpha", "-1 <= alpha <= beta <= 1, alpha != 0"), ParamSpec("beta", "beta != 0")),
            families.g4_5, rec.recognize_g4_5, conedim=1,
            samples=_samples("alpha,beta", (1, 1), (half, 1), (third, half), (-1, half), (-half, 1)),
        ),
        CatalogEntry("g4_8", 4, (), families.g4_8, rec.recognize_g4_8, conedim=1),
        CatalogEntry(
            "g4_9", 4, (ParamSpec("beta", "-1 < beta <= 1"),), families.g4_9, rec.recognize_g4_9,
            conedim=None, samples=_samples("beta", (1,), (half,), (third,), (0,), (-half,)),
        ),
        CatalogEntry(
            "g5_19", 5, (ParamSpec("beta", "beta != 0, first parameter fixed to 1"),), families.g5_19,
            rec.recognize_g5_19, conedim=2, source="builtin",
            samples=_samples("beta", (third,), (half,), (Fraction(2, 3),), (1,), (2,), (-half,)),
        ),
    )


def lookup(name: str, entries: Optional[Iterable[CatalogEntry]] = None) -> CatalogEntry:
    for entry in entries if entries is not None else catalog():
        if entry.name == name:
            return entry
    raise CatalogLookupError(f"no catalog entry named {name!r}")


def build(name: str, params: Optional[Dict[str, object]] = None,
          entries: Optional[Iterable[CatalogEntry]] = None) -> LieAlgebra:
    return lookup(name, entries).build(params)


def match(g: LieAlgebra, entries: Optional[Iterable[CatalogEntry]] = None) -> Optional[Recognition]:
    """First certified recognition among the entries, or None"""
    candidates = [e for e in (entries if entries is not None else catalog()) if e.dim == g.dim]
    if not candidates:
        return None
    if not triangularize(g).success:
        logger.debug(f"{g.name}: not completely solvable, no catalog match")
        return None
    for entry in candidates:
        found = entry.recognizer(g)
        if found is not None:
            logger.debug(f"{g.name}: matched {found.name} {[(k, str(v)) for k, v in found.params]}")
            return found
    return None


def extended_entry(name: str, reference: LieAlgebra, meta: Dict[str, Tuple[str, ...]]) -> CatalogEntry:
    """Catalog entry for a transcribed algebra without a parametric generator"""
    conedim = meta.get("conedim")
    dehn = (meta.get("dehn") or ("unknown",))[0]
    if dehn not in DEHN_TYPES:
        raise DocumentError(f"{name}: dehn type {dehn!r} is not one of {', '.join(DEHN_TYPES)}")
    try:
        params = tuple((k, Fraction(v)) for k, _, v in (t.partition("=") for t in meta.get("params", ())))
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(f"{name}: parameter values must be rationals: {' '.join(meta['params'])}") from e
    image = ImageSpec.from_tokens(meta["image"]) if "image" in meta else None
    declared_range = meta.get("range", ())
    external = bool(declared_range) and declared_range[-1] == "external"
    if external:
        declared_range = declared_range[:-1]
    return CatalogEntry(
        name=name,
        dim=reference.dim,
        params=(),
        generator=lambda: reference,
        recognizer=rec.identical_constants(name, reference, dict(params)),
        conedim=int(conedim[0]) if conedim else None,
        dehn_type=dehn,
        source=(meta.get("source") or ("extended",))[0],
        family=(meta.get("family") or (None,))[0],
        image=image,
        provenance=" ".join(meta["provenance"]) if "provenance" in meta else None,
        values=params,
        param_range=" ".join(declared_range) or None,
        range_external=external,
    )
