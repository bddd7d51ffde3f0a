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

#pragma once

#include <span>

#include "uavnr/types.hpp"

namespace uavnr::detail {

/// Unitary DFT of size n (n == in.size() == out.size()), forward or inverse.
/// Thread safe; plans are created once per (size, direction).
void dft(std::span<const Cplx> in, std::span<Cplx> out, bool inverse);

}  // namespace uavnr::detail
