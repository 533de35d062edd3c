#!/usr/bin/env -S python3 -m pytest -v -s
# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

__author__ = "The ionets developers"

import os

import pytest

from ionets import ionetsconfig
from ionets.countingsets import Cube, CountingSet, OMEGA
from ionets.net import IONet
from ionets.transformers import post_star
from ionets.util import fscache, resultcache


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(fscache, "get_cache_dir", lambda: str(tmp_path / "cache"))
    fscache.init_cache()
    return tmp_path / "cache"


def test_00_write_then_read(cache_dir):
    fscache.write_cached_file('{"cubes": []}\n', "abc", prefix="post")
    assert os.path.exists(fscache.get_cached_file_path("abc", "post"))
    assert fscache.read_cached_file("abc", prefix="post") == '{"cubes": []}\n'
    # no temporary files are left behind
    assert sorted(os.listdir(cache_dir)) == ["post_abc.json"]


def test_01_missing_file(cache_dir):
    with pytest.raises(FileNotFoundError):
        fscache.read_cached_file("missing", prefix="pre")


def test_02_clear(cache_dir):
    fscache.write_cached_file("x", "k", prefix="pre")
    fscache.clear_cache()
    assert not os.path.exists(cache_dir)


def test_03_saturation_reuses_file(cache_dir, monkeypatch):
    monkeypatch.setattr(ionetsconfig, "USE_FS_CACHE", True)
    monkeypatch.setattr(ionetsconfig, "USE_RESULT_CACHE", False)
    net = IONet.build(["a", "b"], [("t", "a", "b", "b")])
    s = CountingSet(2, (Cube((2, 1), (2, 1)),))
    first = post_star(net, s)
    assert len(os.listdir(cache_dir)) == 1
    second = post_star(net, s)
    for m in [(2, 1), (1, 2), (0, 3)]:
        assert first.member(m) and second.member(m)
    assert not second.member((3, 0))
    resultcache.clear()
