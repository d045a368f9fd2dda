"""The shipped identity corpus and its manifest."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import List, Optional, Tuple

from ..dsl.ast import BaileyDoc, IdentityDoc
from ..dsl.parser import parse

FILES = (
    "classical.qs",
    "family_1_2_4.qs",
    "family_1_2_3.qs",
    "family_1_3_1.qs",
    "family_1_4_1.qs",
    "family_1_4_4.qs",
    "family_2_2_2.qs",
    "family_2_2_3.qs",
    "family_2_2_4.qs",
)

# (d, e, k) -> (number of identities, stated modulus)
FAMILY_SIZES = {
    (1, 2, 4): (5, 11),
    (1, 2, 3): (4, 9),
    (1, 3, 1): (3, 7),
    (1, 4, 1): (4, 9),
    (1, 4, 4): (7, 15),
    (2, 2, 2): (4, 18),
    (2, 2, 3): (5, 11),
    (2, 2, 4): (6, 13),
}


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    name: str
    family: Optional[Tuple[int, int, int, int]]
    modulus: Optional[int]
    bivariate: bool


def corpus_text(file: str) -> str:
    return resources.files(__name__).joinpath(file).read_text(encoding="utf-8")


def corpus_path(file: str) -> str:
    return str(resources.files(__name__).joinpath(file))


def load(file: str):
    """All documents (identities and Bailey closed forms) of one corpus file."""
    return parse(corpus_text(file))


def identities() -> List[IdentityDoc]:
    return [d for f in FILES for d in load(f) if isinstance(d, IdentityDoc)]


def bailey_forms() -> List[BaileyDoc]:
    return [d for f in FILES for d in load(f) if isinstance(d, BaileyDoc)]


def bailey_form(d: int, e: int, k: int) -> Optional[BaileyDoc]:
    for doc in bailey_forms():
        p = doc.params
        if (p.d, p.e, p.k) == (d, e, k):
            return doc
    return None


def manifest() -> List[ManifestEntry]:
    out = []
    for f in FILES:
        for doc in load(f):
            if not isinstance(doc, IdentityDoc):
                continue
            fam = None
            if doc.params is not None:
                p = doc.params
                fam = (p.d, p.e, p.k, doc.member)
            out.append(ManifestEntry(f, doc.name, fam, doc.modulus, doc.bivariate))
    return out
