// auscult/frontend/reference.hpp
//
// Copyright 2026 the auscult authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/relevance.hpp"

namespace auscult::reference {

// Serial textbook implementations of the hot kernels.  They are kept for
// testing (the OpenMP kernels must match them bit for bit, since parallel
// loops only distribute disjoint outputs) and for the benchmark tool.

FilterbankActs filterbank_forward(const Matrix& frames, const GaussKernelBank& bank);

FilterbankGrads filterbank_backward(const Matrix& upstream, const Matrix& frames,
                                    const GaussKernelBank& bank,
                                    const FilterbankActs& acts);

RelevanceActs relevance_forward(const Matrix& x, const RelevanceNet& net);

RelevanceGrads relevance_backward(const Matrix& upstream, const Matrix& x,
                                  const RelevanceNet& net, const RelevanceActs& acts);

}  // namespace auscult::reference
