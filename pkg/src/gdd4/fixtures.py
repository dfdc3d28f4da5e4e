"""Registry of the shipped designs.

Thirteen are base-block systems (``data/fixtures/<name>.bbs``) and one is an
incidence table (``data/fixtures/2255.inc``). Names spell the type, e.g.
``21455`` is 2^14 5^5 and ``58141201`` is 5^8 14^1 20^1.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .design import Design
from .development import BaseBlockSystem, blocks_from_incidence, develop, loads_incidence, loads_system
from .grouptype import GroupType, parse_type

FIXTURE_TYPES: dict[str, str] = {
    "2255": "2^2 5^5",
    "21455": "2^14 5^5",
    "2459": "2^4 5^9",
    "21854": "2^18 5^4",
    "2858": "2^8 5^8",
    "21755": "2^17 5^5",
    "21158": "2^11 5^8",
    "22055": "2^20 5^5",
    "21458": "2^14 5^8",
    "22655": "2^26 5^5",
    "21659": "2^16 5^9",
    "26513": "2^6 5^13",
    "21959": "2^19 5^9",
    "58141201": "5^8 14^1 20^1",
}
FIXTURE_NAMES: tuple[str, ...] = tuple(FIXTURE_TYPES)


class UnknownFixture(KeyError):
    pass


def _read(filename: str) -> str:
    return resources.files("gdd4").joinpath("data", "fixtures", filename).read_text(encoding="utf-8")


def fixture_type(name: str) -> GroupType:
    if name not in FIXTURE_TYPES:
        raise UnknownFixture(name)
    return parse_type(FIXTURE_TYPES[name])


@lru_cache(maxsize=1)
def _by_type() -> dict[GroupType, str]:
    return {parse_type(text): name for name, text in FIXTURE_TYPES.items()}


def fixture_for_type(gt: GroupType) -> str | None:
    return _by_type().get(gt)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_TYPES:
        raise UnknownFixture(name)
    return _read(f"{name}.inc" if name == "2255" else f"{name}.bbs")


@lru_cache(maxsize=None)
def load_system_fixture(name: str) -> BaseBlockSystem:
    if name == "2255" or name not in FIXTURE_TYPES:
        raise UnknownFixture(f"{name} is not a base-block fixture")
    return loads_system(fixture_text(name))


@lru_cache(maxsize=None)
def build_fixture(name: str) -> Design:
    """Expand a fixture into a Design without verifying it."""
    if name not in FIXTURE_TYPES:
        raise UnknownFixture(name)
    if name == "2255":
        _, groups, table = loads_incidence(fixture_text(name))
        blocks = blocks_from_incidence(table)
        # the table numbers points from 1
        return Design.create(
            sum(len(g) for g in groups),
            [[p - 1 for p in g] for g in groups],
            [[p - 1 for p in b] for b in blocks],
            provenance="shipped-table",
            labels=[str(p) for p in range(1, sum(len(g) for g in groups) + 1)],
        )
    return develop(load_system_fixture(name), provenance="shipped-table")


def load_fixture(name: str) -> Design:
    """Expanded and verified design; raises if the data is corrupt."""
    from .verifier import FixtureVerificationError, verify

    design = build_fixture(name)
    report = verify(design)
    if not report.passed:
        raise FixtureVerificationError(name, report)
    return design
