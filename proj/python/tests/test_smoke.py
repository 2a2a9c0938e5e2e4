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

import pytest

import vsagg

P60 = 1152921504606847009


def test_field_ops():
    assert vsagg.find_prime_above(1 << 60) == P60
    assert vsagg.is_prime(P60)
    assert not vsagg.is_prime(P60 - 2)
    a, b = (1 << 60) + 5, (1 << 60) + 7
    assert vsagg.mul(a, b, P60) == a * b % P60
    assert vsagg.mul(P60 - 1, P60 - 2, P60) == 2
    assert vsagg.add(P60 - 1, 5, P60) == 4
    assert vsagg.to_signed(96, 97) == -1
    with pytest.raises(vsagg.VsaggError):
        vsagg.add(97, 1, 97)


def test_expand_matches_reference():
    key = bytes(range(16))
    assert vsagg.expand(key, 7, 6, P60) == [
        910047980897232047, 98827989271063195, 558159233404278344,
        1137294855475654106, 431462053523281184, 476321538175107612,
    ]
    assert vsagg.expand(key, 7, 3, 17) == vsagg.expand(key, 7, 12, 17)[:3]


def test_codec_round_trip():
    enc = vsagg.encode([0.5, -0.5], 10.0, 97, x_min=-4.0, x_max=4.0)
    assert enc == [5, 92]
    assert vsagg.decode(enc, 10.0, 97, 1, x_min=-4.0, x_max=4.0) == [0.5, -0.5]


def test_tag_and_verify():
    assert vsagg.gen_tag([1, 2, 3], [4, 5, 6], 97, 97) == 32
    assert vsagg.verify([1, 2, 3], 32, [4, 5, 6], 97, 97)
    assert not vsagg.verify([1, 2, 4], 32, [4, 5, 6], 97, 97)


def test_oracle():
    assert vsagg.plaintext_oracle([[1.0, 1.0], [3.0, 3.0]]) == [2.0, 2.0]
    assert vsagg.plaintext_oracle([[1.0], [3.0]], weights=[1.0, 3.0]) == [2.5]


def test_run_simulation_detects_tamper():
    honest = vsagg.run_simulation({"users": 3, "dim": 4, "rounds": 2, "seed": 5})
    assert honest["summary"]["honest_failures"] == 0
    assert all(r["verified_users"] == 3 for r in honest["rounds"])
    attacked = vsagg.run_simulation(
        {"users": 3, "dim": 4, "rounds": 2, "adversary": "cs:tamper_aggregate:2"})
    assert attacked["rounds"][1]["detected"]
    assert attacked["summary"]["undetected_attacks"] == 0
    with pytest.raises(KeyError):
        vsagg.run_simulation({"usres": 3})


def test_calibration():
    result = vsagg.forgery_calibration(11, 20000, seed=2)
    assert result["tamper_within_band"]
    assert result["below_bound"]
