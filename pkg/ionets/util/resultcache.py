# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Cache for saturation results.

This module contains a simple cache that records arbitrary objects for
tuples of key components, e.g. a net, a counting set, a direction and a
saturation cap. The cache is intended for pre*/post* results, which recur
when the deciders and the protocol checker evaluate nested formulas.

The cache key is computed from the ``repr`` of the components, so that
structurally equal immutable inputs map to the same entry.
"""

import hashlib
import logging

_log = logging.getLogger(__name__)


class ResultCache:

    __INSTANCE = None

    @classmethod
    def get(cls):
        if not cls.__INSTANCE:
            cls.__INSTANCE = ResultCache()
        return cls.__INSTANCE

    def __init__(self):
        self._cache = {}
        self.hits = 0
        self.misses = 0

    @staticmethod
    def _make_cache_key(*components):
        """Make a key from the given components.

        Note:
            Components of type `str` and `bytes` are used as they are, all
            other components via their ``repr``. Strings are encoded in
            "utf-8" format.
        """
        m = hashlib.md5()
        for component in components:
            if not isinstance(component, (str, bytes)):
                component = repr(component)
            if isinstance(component, str):
                component = component.encode("utf-8")
            m.update(component)
            m.update(b"\x00")
        return m.hexdigest()

    def get_or_insert_entry(self, *components, entry=None):
        """Retrieves (entry == None) or inserts (entry != None) an entry for the given components.

        Note:
            Returns the entry also in the insertion case.

        Raises:
            `KeyError`: If argument ``entry`` is ``None`` and there is no entry for the key.
        """
        key = self._make_cache_key(*components)
        if entry is None:
            try:
                result = self._cache[key]
            except KeyError:
                self.misses += 1
                raise
            self.hits += 1
            return result
        self._cache[key] = entry
        return entry

    def delete_entry(self, *components):
        del self._cache[self._make_cache_key(*components)]

    def clear(self):
        self._cache.clear()
        self.hits = 0
        self.misses = 0


_cache = ResultCache.get()._cache
make_cache_key = ResultCache.get()._make_cache_key
get_or_insert_entry = ResultCache.get().get_or_insert_entry
delete_entry = ResultCache.get().delete_entry
clear = ResultCache.get().clear


def stats():
    instance = ResultCache.get()
    return {"entries": len(instance._cache), "hits": instance.hits, "misses": instance.misses}
