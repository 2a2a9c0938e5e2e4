/*
 * Copyright 2026 The vsagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vsagg/codec.h"
#include "vsagg/errors.h"
#include "vsagg/field.h"
#include "vsagg/harness.h"
#include "vsagg/params.h"
#include "vsagg/prf.h"
#include "vsagg/tags.h"

namespace py = pybind11;

namespace {

vsagg::KeyMaterial KeyFromBytes(const py::bytes& b) {
  std::string s = b;
  return vsagg::KeyMaterial::FromBytes(
      std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

vsagg::FieldVector ToVector(const std::vector<uint64_t>& v, uint64_t modulus) {
  return vsagg::FieldVector(v, vsagg::FieldModulus::Create(modulus));
}

std::vector<uint64_t> FromVector(const vsagg::FieldVector& v) {
  return {v.values().begin(), v.values().end()};
}

vsagg::RunConfig ConfigFromDict(const py::dict& d) {
  vsagg::RunConfig c;
  for (auto item : d) {
    std::string k = py::cast<std::string>(item.first);
    py::handle v = item.second;
    if (k == "users") c.users = py::cast<uint32_t>(v);
    else if (k == "dim") c.dim = py::cast<size_t>(v);
    else if (k == "rounds") c.rounds = py::cast<uint64_t>(v);
    else if (k == "dropout") c.dropout = py::cast<double>(v);
    else if (k == "seed") c.seed = py::cast<uint64_t>(v);
    else if (k == "prime_bits") c.prime_bits = py::cast<int>(v);
    else if (k == "delta_exp") c.delta_exp = py::cast<int>(v);
    else if (k == "mode") c.mode = vsagg::ParseTransportMode(py::cast<std::string>(v));
    else if (k == "adversary") c.adversary = vsagg::AdversarySpec::Parse(py::cast<std::string>(v));
    else if (k == "weights") c.weights = py::cast<std::vector<double>>(v);
    else if (k == "shuffle_seed") c.shuffle_seed = py::cast<uint64_t>(v);
    else throw py::key_error("unknown config key: " + k);
  }
  return c;
}

py::object Loads(const std::string& json) {
  return py::module_::import("json").attr("loads")(json);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dual-server verifiable secure aggregation";

  static py::exception<vsagg::Error> error(m, "VsaggError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vsagg::Error& e) {
      std::string msg = std::string(vsagg::ErrorCodeName(e.code())) + ": " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  m.def("is_prime", &vsagg::IsPrime, py::arg("n"));
  m.def("find_prime_above", [](uint64_t bound) { return vsagg::FindPrimeAbove(bound).value(); },
        py::arg("bound"));
  m.def("add", [](uint64_t a, uint64_t b, uint64_t r) {
    auto R = vsagg::FieldModulus::Create(r);
    return vsagg::Add(vsagg::MakeElement(a, R), vsagg::MakeElement(b, R), R).residue;
  });
  m.def("mul", [](uint64_t a, uint64_t b, uint64_t r) {
    auto R = vsagg::FieldModulus::Create(r);
    return vsagg::Mul(vsagg::MakeElement(a, R), vsagg::MakeElement(b, R), R).residue;
  });
  m.def("to_signed", [](uint64_t a, uint64_t r) {
    auto R = vsagg::FieldModulus::Create(r);
    return vsagg::ToSigned(vsagg::MakeElement(a, R), R);
  });
  m.def("expand",
        [](const py::bytes& key, uint64_t round, size_t length, uint64_t r) {
          return FromVector(
              vsagg::Expand(KeyFromBytes(key), round, length, vsagg::FieldModulus::Create(r)));
        },
        py::arg("key"), py::arg("round"), py::arg("length"), py::arg("modulus"));
  m.def("encode",
        [](const std::vector<double>& x, double delta, uint64_t r, uint64_t n_max, double lo,
           double hi) {
          auto codec = vsagg::CodecParams::Create(delta, vsagg::FieldModulus::Create(r), n_max,
                                                  lo, hi);
          return FromVector(vsagg::Encode(x, codec));
        },
        py::arg("values"), py::arg("delta"), py::arg("modulus"), py::arg("n_max") = 1,
        py::arg("x_min") = -10.0, py::arg("x_max") = 10.0);
  m.def("decode",
        [](const std::vector<uint64_t>& v, double delta, uint64_t r, uint64_t m_count,
           double lo, double hi) {
          auto codec = vsagg::CodecParams::Create(delta, vsagg::FieldModulus::Create(r),
                                                  std::max<uint64_t>(m_count, 1), lo, hi);
          return vsagg::Decode(ToVector(v, r), codec, m_count);
        },
        py::arg("values"), py::arg("delta"), py::arg("modulus"), py::arg("m"),
        py::arg("x_min") = -10.0, py::arg("x_max") = 10.0);
  m.def("gen_tag",
        [](const std::vector<uint64_t>& w, const std::vector<uint64_t>& k, uint64_t r_w,
           uint64_t r_b) {
          vsagg::VerificationKeyVector kv{ToVector(k, r_b), 0};
          return vsagg::GenTag(ToVector(w, r_w), kv, vsagg::FieldModulus::Create(r_w),
                               vsagg::FieldModulus::Create(r_b))
              .value.residue;
        },
        py::arg("w"), py::arg("key"), py::arg("r_w"), py::arg("r_b"));
  m.def("verify",
        [](const std::vector<uint64_t>& w, uint64_t b, const std::vector<uint64_t>& k,
           uint64_t r_w, uint64_t r_b) {
          auto Rb = vsagg::FieldModulus::Create(r_b);
          vsagg::VerificationKeyVector kv{ToVector(k, r_b), 0};
          return vsagg::Verify(ToVector(w, r_w), vsagg::TagScalar{vsagg::MakeElement(b, Rb)}, kv,
                               vsagg::FieldModulus::Create(r_w), Rb);
        },
        py::arg("w"), py::arg("tag"), py::arg("key"), py::arg("r_w"), py::arg("r_b"));
  m.def("plaintext_oracle",
        [](const std::vector<std::vector<double>>& updates, int delta_exp,
           const std::vector<double>& weights) {
          if (updates.empty()) throw vsagg::Error(vsagg::ErrorCode::kEmptyInput, "no updates");
          auto params = vsagg::MakeProtocolParams(updates.front().size(), updates.size(), 60,
                                                  delta_exp, !weights.empty());
          return vsagg::PlaintextOracle(updates, params.codec, weights);
        },
        py::arg("updates"), py::arg("delta_exp") = 40, py::arg("weights") = std::vector<double>{});
  m.def("run_simulation",
        [](const py::dict& config) {
          vsagg::MetricsReport report;
          {
            vsagg::RunConfig c = ConfigFromDict(config);
            py::gil_scoped_release release;
            report = vsagg::RunSimulation(c);
          }
          return Loads(report.ToJson(true));
        },
        py::arg("config"));
  m.def("forgery_calibration",
        [](uint64_t tag_modulus, uint64_t trials, uint64_t seed) {
          vsagg::CalibrationResult r;
          {
            py::gil_scoped_release release;
            r = vsagg::ForgeryCalibration(tag_modulus, trials, seed);
          }
          return Loads(r.ToJson());
        },
        py::arg("tag_modulus"), py::arg("trials"), py::arg("seed") = 1);
  m.def("bench",
        [](uint32_t users, size_t dim, int reps, uint64_t seed) {
          vsagg::BenchConfig c;
          c.users = users;
          c.dim = dim;
          c.reps = reps;
          c.seed = seed;
          vsagg::BenchResult r;
          {
            py::gil_scoped_release release;
            r = vsagg::Bench(c);
          }
          return Loads(r.ToJson());
        },
        py::arg("users") = 10, py::arg("dim") = 20000, py::arg("reps") = 10, py::arg("seed") = 1);
}
