// auscult/trainer/schedule.hpp
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

#include <string>

namespace auscult {

// Step-annealed learning rate: lr0 * factor^floor(epoch / step_epochs).
// Exponential decay that moves in stair steps.
struct LrSchedule {
  double lr0 = 0.001;
  double factor = 0.9085;
  int step_epochs = 2;
  int total_epochs = 48;
};

// Throws InvalidParameterError when epoch is outside [0, total_epochs) or the
// schedule itself is malformed (lr0 <= 0, factor outside (0,1), bad steps).
double lr_at(int epoch, const LrSchedule& sched);

// One-line description of where the rate crosses lr0/10.  The stated recipe
// (x0.9085 every 2 epochs) reaches 1/10 around epoch 48; stepping every epoch
// reaches it around epoch 24.  Both stepping modes are supported; this note
// surfaces the tension so run logs carry it.
std::string lr_schedule_note(const LrSchedule& sched);

}  // namespace auscult
