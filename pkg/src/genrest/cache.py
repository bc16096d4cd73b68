"""Versioned JSON cache of enumerated groups, keyed by (family, q).

The cache directory comes from an explicit argument or the GENREST_CACHE
environment variable; without either, nothing touches the disk.  Each file
embeds a sha256 of its payload, and a mismatch (or any parse error) causes a
silent rebuild.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

import numpy as np

FORMAT = "genrest-group"
VERSION = 1

log = logging.getLogger(__name__)

_override: list = []


def cache_dir() -> Path | None:
    if _override:
        return _override[-1]
    env = os.environ.get("GENREST_CACHE")
    return Path(env) if env else None


def set_cache_dir(path):
    """Force a cache directory for this process (None disables caching)."""
    _override.clear()
    _override.append(Path(path) if path is not None else None)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(payload) -> str:
    return hashlib.sha256(dumps(payload).encode()).hexdigest()


def group_path(directory: Path, family: str, q: int) -> Path:
    return Path(directory) / f"{family.lower()}-q{q}.json"


def group_payload(G) -> dict:
    sd = G.subgroup_data
    return {
        "format": FORMAT,
        "version": VERSION,
        "family": G.family,
        "q": G.q,
        "n": G.n,
        "modulus": list(G.field.modulus),
        "generators": G.keys[G.generators].tolist(),
        "elements": G.keys.tolist(),
        "class_of": G.class_of.tolist(),
        "subgroups": {"B": sd.B.tolist(), "T": sd.T.tolist(),
                      "U": sd.U.tolist(), "Z": sd.Z.tolist()},
    }


def save_group(G, directory) -> Path:
    payload = group_payload(G)
    doc = {"sha256": _digest(payload), "payload": payload}
    path = group_path(directory, G.family, G.q)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dumps(doc))
    tmp.replace(path)
    return path


def load_payload(path: Path, family: str, q: int) -> dict | None:
    try:
        doc = json.loads(path.read_text())
        payload = doc["payload"]
    except (OSError, ValueError, KeyError, TypeError):
        return None
    if doc.get("sha256") != _digest(payload):
        log.warning("cache file %s failed its content hash; rebuilding", path)
        return None
    if (payload.get("format"), payload.get("version"), payload.get("family"),
            payload.get("q")) != (FORMAT, VERSION, family, q):
        return None
    return payload


def load_or_build(family: str, F, bound: int):
    from .groups import EnumeratedGroup, build_group_uncached

    directory = cache_dir()
    if directory is not None:
        path = group_path(directory, family, F.q)
        payload = load_payload(path, family, F.q) if path.exists() else None
        if payload is not None and list(F.modulus) == payload["modulus"]:
            keys = np.asarray(payload["elements"], dtype=np.int64)
            G = EnumeratedGroup(family, F, keys,
                                generators=_locate_keys(keys, payload["generators"]))
            G._class_override = payload["class_of"]
            return G
    G = build_group_uncached(family, F, bound)
    if directory is not None:
        save_group(G, directory)
    return G


def _locate_keys(keys, gen_keys):
    return np.searchsorted(keys, np.asarray(gen_keys, dtype=np.int64))
