// auscult/pipeline/cli.hpp
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

namespace auscult {

// Entry point behind the `auscult` binary, separated so tests can drive it.
// Subcommands: synth, features, train, predict, fuse, eval-auc, dump-centers.
// Returns 0 on success, 1 on usage errors (bad flags, unknown subcommand),
// 2 on data or config errors (any auscult::Error).
int cli_main(int argc, const char* const* argv);

}  // namespace auscult
