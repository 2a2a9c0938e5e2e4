# Copyright 2026 The vsagg Authors
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

"""Dual-server verifiable secure aggregation."""

from ._core import (
    VsaggError,
    add,
    bench,
    decode,
    encode,
    expand,
    find_prime_above,
    forgery_calibration,
    gen_tag,
    is_prime,
    mul,
    plaintext_oracle,
    run_simulation,
    to_signed,
    verify,
)

__all__ = [
    "VsaggError",
    "add",
    "bench",
    "decode",
    "encode",
    "expand",
    "find_prime_above",
    "forgery_calibration",
    "gen_tag",
    "is_prime",
    "mul",
    "plaintext_oracle",
    "run_simulation",
    "to_signed",
    "verify",
]
