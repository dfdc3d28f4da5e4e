"""On-disk catalog of verified designs: one canonical file per design plus an index.

Layout::

    <root>/index.json          list of entries, rewritten atomically
    <root>/designs/<digest>.gdd canonical design files
    <root>/.lock               advisory lock taken by writers

Digests are SHA-256 over the canonical serialization.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import tempfile
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from .design import Design, dumps, loads
from .grouptype import GroupType, as_type, format_type, parse_type
from .verifier import VerificationReport, verify

ENV_VAR = "GDD4_CATALOG"
INDEX = "index.json"


class CatalogError(RuntimeError):
    pass


class RegistrationRejected(CatalogError):
    def __init__(self, report: VerificationReport):
        super().__init__(f"design fails verification:\n{report.render()}")
        self.report = report


@dataclass(frozen=True)
class CatalogEntry:
    type: str
    digest: str
    path: str  # relative to the catalog root
    provenance: str
    verified_at: str
    certificate: str | None = None  # digest of the certificate for fill-in designs

    @property
    def group_type(self) -> GroupType:
        return parse_type(self.type)

    def to_dict(self) -> dict:
        return asdict(self)


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def default_root() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_DATA_HOME") or Path.home() / ".local" / "share"
    return Path(base) / "gdd4" / "catalog"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


class Catalog:
    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else default_root()

    # -- index ----------------------------------------------------------------

    def _read_index(self) -> list[CatalogEntry]:
        path = self.root / INDEX
        if not path.exists():
            return []
        try:
            raw = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise CatalogError(f"corrupt catalog index {path}: {exc}") from None
        return [CatalogEntry(**e) for e in raw]

    def _write_index(self, entries: list[CatalogEntry]) -> None:
        entries = sorted(entries, key=lambda e: (e.type, e.digest))
        data = json.dumps([e.to_dict() for e in entries], indent=1, sort_keys=True) + "\n"
        _atomic_write(self.root / INDEX, data.encode("utf-8"))

    @contextmanager
    def _locked(self):
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / ".lock", "a+") as fh:
            fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh.fileno(), fcntl.LOCK_UN)

    # -- operations -----------------------------------------------------------

    def entries(self) -> list[CatalogEntry]:
        return sorted(self._read_index(), key=lambda e: (e.type, e.digest))

    def register(self, design: Design, provenance: str | None = None,
                 certificate: str | None = None) -> CatalogEntry:
        """Verify ``design`` and store it; registering the same design twice is a no-op."""
        if provenance is not None and provenance != design.provenance:
            design = design.with_provenance(provenance)
        report = verify(design)
        if not report.passed:
            raise RegistrationRejected(report)
        design.check_structure()
        text = dumps(design)
        digest = digest_text(text)
        rel = f"designs/{digest}.gdd"
        with self._locked():
            entries = self._read_index()
            for e in entries:
                if e.digest == digest:
                    return e
            _atomic_write(self.root / rel, text.encode("utf-8"))
            entry = CatalogEntry(
                type=format_type(design.group_type),
                digest=digest,
                path=rel,
                provenance=design.provenance,
                verified_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
                certificate=certificate,
            )
            self._write_index(entries + [entry])
        return entry

    def lookup(self, gt: GroupType | str) -> list[CatalogEntry]:
        key = format_type(as_type(gt))
        return sorted((e for e in self._read_index() if e.type == key), key=lambda e: e.digest)

    def find(self, digest_prefix: str) -> CatalogEntry:
        hits = [e for e in self._read_index() if e.digest.startswith(digest_prefix)]
        if len(hits) != 1:
            raise CatalogError(f"{len(hits)} entries match digest prefix {digest_prefix!r}")
        return hits[0]

    def load(self, entry: CatalogEntry) -> Design:
        text = (self.root / entry.path).read_text("utf-8")
        if digest_text(text) != entry.digest:
            raise CatalogError(f"catalog file {entry.path} does not match its digest")
        return loads(text)

    def first(self, gt: GroupType | str) -> Design | None:
        hits = self.lookup(gt)
        return self.load(hits[0]) if hits else None


def catalog_register(design: Design, provenance: str | None = None, *,
                     root: str | Path | None = None) -> CatalogEntry:
    return Catalog(root).register(design, provenance)


def catalog_lookup(gt: GroupType | str, *, root: str | Path | None = None) -> list[CatalogEntry]:
    return Catalog(root).lookup(gt)
