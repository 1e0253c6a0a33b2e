// Copyright 2026 The pyratext authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PYRATEXT_CLI_H_
#define PYRATEXT_CLI_H_

#include <string>
#include <vector>

namespace ptx {

// Runs one subcommand (`pyramid | featurize | synth | train | eval |
// recognize`); args excludes the program name. Returns 0 on success, 1 on
// usage errors, 2 on data/IO errors.
int dispatch(const std::vector<std::string>& args);

}  // namespace ptx

#endif  // PYRATEXT_CLI_H_
