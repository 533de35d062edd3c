# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Documents and command line of ionets."""
