# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Filesystem cache for saturation results.

Entries are counting-set documents (JSON text) named after the md5 key of
`ionets.util.resultcache`.
"""

import os
import tempfile
import shutil
import logging
from pathlib import Path

from ionets import ionetsconfig as _ionetsconfig

_log = logging.getLogger(__name__)


def get_cache_dir() -> str:
    """Returns the cache directory."""
    return os.path.join(tempfile.gettempdir(), "ionets", f"uid_{os.getuid()}")


def get_cached_file_path(key: str, prefix: str, ext: str = "json") -> str:
    """Returns a (to be) cached file's name given a cache key."""
    return os.path.join(get_cache_dir(), f"{prefix}_{key}.{ext}")


def read_cached_file(key: str, prefix: str, ext: str = "json") -> str:
    """Loads a cached file or throws FileNotFoundError if file doesn't exist."""
    with open(get_cached_file_path(key, prefix, ext), "r", encoding="utf-8") as infile:
        return infile.read()


def write_cached_file(content: str, key: str, prefix: str, ext: str = "json"):
    """Stores a file in the cache.

    Note:
        We write to a process-specific temporary file first and then
        move it into place with `os.replace`, which is atomic on POSIX,
        so that concurrent ionets processes never observe partial files.
    """
    dest = get_cached_file_path(key, prefix, ext)
    tmp_dest = f"{dest}-{os.getpid()}"
    with open(tmp_dest, "w", encoding="utf-8") as outfile:
        outfile.write(content)
    os.replace(tmp_dest, dest)


def init_cache():
    cache_dir = get_cache_dir()
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    _log.info(f"created/reuse ionets cache directory '{cache_dir}'")


def clear_cache():
    cache_dir = get_cache_dir()
    _log.info(f"clear ionets cache directory '{cache_dir}'")
    shutil.rmtree(cache_dir, ignore_errors=True)


# note: must come before init_cache()
if _ionetsconfig.CLEAR_FS_CACHE:
    clear_cache()

if _ionetsconfig.USE_FS_CACHE:
    init_cache()
