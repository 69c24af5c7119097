"""Disk cache for subgroup-lattice payloads, keyed by group content hash.

Layout: <dir>/<hash>.json holding the subgroup member lists and conjugacy
classes. Loads re-validate the stored prime and order; any mismatch or
corruption falls back to recomputation.
"""

from __future__ import annotations

import json
import os


def cache_path(cache_dir, G) -> str:
    return os.path.join(str(cache_dir), G.content_hash() + ".json")


def load_payload(cache_dir, G):
    path = cache_path(cache_dir, G)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("p") != G.prime or data.get("order") != G.order:
        return None
    subs = data.get("subgroups")
    classes = data.get("classes")
    if not isinstance(subs, list) or not isinstance(classes, list):
        return None
    try:
        subs = [tuple(int(x) for x in m) for m in subs]
        classes = [tuple(int(x) for x in c) for c in classes]
    except (TypeError, ValueError):
        return None
    if not subs or subs[0] != (0,):
        return None
    table = G.table
    for mem in subs:
        arr = set(mem)
        if any(int(table[a, b]) not in arr for a in mem for b in mem):
            return None
    if sorted(i for c in classes for i in c) != list(range(len(subs))):
        return None
    return {"subgroups": subs, "classes": classes}


def save_payload(cache_dir, G, ana) -> None:
    os.makedirs(str(cache_dir), exist_ok=True)
    data = {
        "p": G.prime,
        "order": G.order,
        "hash": G.content_hash(),
        "subgroups": [list(m) for m in ana.subgroup_members],
        "classes": [list(c) for c in ana.classes],
    }
    path = cache_path(cache_dir, G)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def resolve_cache_dir(explicit=None):
    if explicit:
        return str(explicit)
    env = os.environ.get("BFK_CACHE_DIR")
    return env or None
