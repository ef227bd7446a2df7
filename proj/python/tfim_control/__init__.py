# Copyright 2026 The tfim-control Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Pulse control of a random-coupling transverse Ising ring."""

from ._core import (
    ConfigError,
    Problem,
    __version__,
    config_text,
    degeneracy_report,
    draw_couplings,
    run_campaign,
    spectrum,
)

__all__ = [
    "ConfigError",
    "Problem",
    "__version__",
    "config_text",
    "degeneracy_report",
    "draw_couplings",
    "run_campaign",
    "spectrum",
]
