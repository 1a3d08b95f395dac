// auscult/trainer/schedule.cpp
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

#include "auscult/trainer/schedule.hpp"

#include <cmath>
#include <sstream>

#include "auscult/error.hpp"

namespace auscult {

namespace {

void validate(const LrSchedule& sched) {
  if (!(sched.lr0 > 0.0)) throw InvalidParameterError("lr0 must be positive");
  if (!(sched.factor > 0.0 && sched.factor < 1.0)) {
    throw InvalidParameterError("lr factor must lie in (0,1)");
  }
  if (sched.step_epochs < 1) throw InvalidParameterError("step_epochs must be >= 1");
  if (sched.total_epochs < 1) throw InvalidParameterError("total_epochs must be >= 1");
}

}  // namespace

double lr_at(int epoch, const LrSchedule& sched) {
  validate(sched);
  if (epoch < 0 || epoch >= sched.total_epochs) {
    throw InvalidParameterError("epoch " + std::to_string(epoch) +
                                " outside schedule range [0, " +
                                std::to_string(sched.total_epochs) + ")");
  }
  return sched.lr0 * std::pow(sched.factor, static_cast<double>(epoch / sched.step_epochs));
}

std::string lr_schedule_note(const LrSchedule& sched) {
  validate(sched);
  // Steps needed for factor^n <= 1/10, then converted back to epochs.
  const double steps = std::ceil(std::log(0.1) / std::log(sched.factor));
  const double tenth_epoch = steps * sched.step_epochs;
  std::ostringstream os;
  os << "lr starts at " << sched.lr0 << ", x" << sched.factor << " every "
     << sched.step_epochs << " epoch(s); reaches lr0/10 near epoch "
     << static_cast<long long>(tenth_epoch)
     << " (stepping every epoch instead would reach it near epoch "
     << static_cast<long long>(steps) << ")";
  return os.str();
}

}  // namespace auscult
