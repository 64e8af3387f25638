// Copyright 2026 The Featinv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string>

#include "featinv/types.hpp"
#include "kernels/tables.hpp"

namespace featinv::kernels {
namespace {

bool cpu_has_avx2() {
#ifdef FEATINV_BUILD_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_backend() {
  if (const char* env = std::getenv("FEATINV_KERNELS")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::kScalar;
    if (choice == "avx2") {
      if (!backend_available(Backend::kAvx2)) {
        throw Error("FEATINV_KERNELS=avx2 but AVX2 is not available");
      }
      return Backend::kAvx2;
    }
    throw Error("unknown FEATINV_KERNELS value: " + choice);
  }
  return backend_available(Backend::kAvx2) ? Backend::kAvx2
                                           : Backend::kScalar;
}

}  // namespace

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return scalar_table();
    case Backend::kAvx2:
#ifdef FEATINV_BUILD_AVX2
      if (cpu_has_avx2()) return avx2_table();
#endif
      throw Error("AVX2 kernel backend is not available on this machine");
  }
  throw Error("unknown kernel backend");
}

Backend active_backend() {
  static const Backend backend = resolve_backend();
  return backend;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_backend());
  return t;
}

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace featinv::kernels
