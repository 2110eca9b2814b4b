"""Versioned on-disk cache for class sets, with integrity hashes.

Cache files are content-addressed by (p, g) and the format version; the
payload carries a sha256 over its canonical JSON body, so corruption or
hand edits are detected on load rather than silently propagated.
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path

from .hermitian import (
    HermitianForm,
    PolarizedClass,
    PolarizedClassSet,
    QuatMatrix,
    class_set,
)
from .ideals import RightIdeal
from .quat import order_for_prime

FORMAT_VERSION = 2

__all__ = [
    "CacheIntegrityError",
    "default_cache_dir",
    "cache_path",
    "save_class_set",
    "load_class_set",
    "get_class_set",
]


class CacheIntegrityError(RuntimeError):
    """A cache file failed its checksum or structural validation."""


def default_cache_dir() -> Path:
    env = os.environ.get("CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "superspecial"


def cache_path(cache_dir: Path | str, p: int, g: int) -> Path:
    return Path(cache_dir) / f"classes_p{p}_g{g}_v{FORMAT_VERSION}.json"


def _fstr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _body_for(cs: PolarizedClassSet) -> dict:
    classes = []
    for c in cs.classes:
        entry = {
            "e": c.e,
            "gram": [list(row) for row in c.gram],
        }
        if c.form is not None:
            entry["hermitian"] = c.form.to_coord_lists()
        if c.ideal is not None:
            entry["ideal_basis"] = c.ideal.to_rows()
        classes.append(entry)
    return {
        "version": FORMAT_VERSION,
        "p": cs.p,
        "g": cs.g,
        "h": cs.h,
        "discovery_ell": cs.discovery_ell,
        "classes": classes,
    }


def _digest(body: dict) -> str:
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save_class_set(cs: PolarizedClassSet, cache_dir: Path | str) -> Path:
    path = cache_path(cache_dir, cs.p, cs.g)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = _body_for(cs)
    payload = dict(body)
    payload["sha256"] = _digest(body)
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return path


def load_class_set(path: Path | str) -> PolarizedClassSet:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheIntegrityError(f"unreadable cache file {path}: {exc}") from exc
    stored = payload.pop("sha256", None)
    if stored is None or _digest(payload) != stored:
        raise CacheIntegrityError(f"checksum mismatch in cache file {path}")
    if payload.get("version") != FORMAT_VERSION:
        raise CacheIntegrityError(f"cache format version mismatch in {path}")
    p, g = payload["p"], payload["g"]
    order = order_for_prime(p)
    classes = []
    for entry in payload["classes"]:
        gram = tuple(tuple(int(v) for v in row) for row in entry["gram"])
        form = None
        ideal = None
        if "hermitian" in entry:
            rows = [
                [
                    order.algebra.quaternion(*[Fraction(c) for c in quat])
                    for quat in row
                ]
                for row in entry["hermitian"]
            ]
            form = HermitianForm(order, QuatMatrix(rows))
            if form.haupt_norm() != 1:
                raise CacheIntegrityError("cached form does not have norm one")
            if form.doubled_gram() != gram:
                raise CacheIntegrityError("cached Gram disagrees with its form")
        if "ideal_basis" in entry:
            ideal = RightIdeal.from_rows(order, entry["ideal_basis"])
        classes.append(
            PolarizedClass(e=int(entry["e"]), gram=gram, form=form, ideal=ideal)
        )
    cs = PolarizedClassSet(
        p=p, g=g, classes=tuple(classes),
        discovery_ell=int(payload["discovery_ell"]),
    )
    if cs.h != payload["h"]:
        raise CacheIntegrityError("cached class count is inconsistent")
    return cs


def get_class_set(p: int, g: int, cache_dir: Path | str | None = None,
                  write: bool = True) -> PolarizedClassSet:
    """Load the class set from cache or compute and store it."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = cache_path(cache_dir, p, g)
    if path.exists():
        return load_class_set(path)
    cs = class_set(p, g)
    if write:
        save_class_set(cs, cache_dir)
    return cs
