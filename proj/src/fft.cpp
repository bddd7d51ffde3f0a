// SPDX-License-Identifier: Apache-2.0
//
// uavnr: 5G NR uplink image-offloading link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "uavnr/errors.hpp"

namespace uavnr::detail {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, bool inverse) {
    std::lock_guard lock(mu_);
    auto& plan = plans_[{n, inverse}];
    if (!plan) {
      // Planning needs scratch arrays; execution uses the new-array interface.
      auto* a = fftw_alloc_complex(static_cast<std::size_t>(n));
      auto* b = fftw_alloc_complex(static_cast<std::size_t>(n));
      plan = fftw_plan_dft_1d(n, a, b, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_free(a);
      fftw_free(b);
    }
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft(std::span<const Cplx> in, std::span<Cplx> out, bool inverse) {
  if (in.size() != out.size() || in.empty()) throw SizeError("DFT size mismatch");
  const int n = static_cast<int>(in.size());
  if (in.data() == out.data()) {
    const CVec copy(in.begin(), in.end());
    dft(copy, out, inverse);
    return;
  }
  fftw_plan plan = cache().get(n, inverse);
  // fftw_execute_dft does not write to its input for out-of-place c2c plans.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<Cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace uavnr::detail
