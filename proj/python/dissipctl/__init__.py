# Copyright 2026 The dissipctl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Lyapunov-based dissipative stability checks for open quantum systems.

Matrices are complex numpy arrays. Reports come back as plain dicts.
"""

from ._core import (
    BudgetError,
    DissipctlError,
    InfeasibleError,
    PreconditionError,
    certify,
    check_ds,
    check_es,
    check_factorizable,
    dissipation,
    evolve,
    generator,
    list_models,
    model,
    scale,
    synthesize_pinv,
    synthesize_projection,
)

__all__ = [
    "BudgetError",
    "DissipctlError",
    "InfeasibleError",
    "PreconditionError",
    "certify",
    "check_ds",
    "check_es",
    "check_factorizable",
    "dissipation",
    "evolve",
    "generator",
    "list_models",
    "model",
    "scale",
    "synthesize_pinv",
    "synthesize_projection",
]
