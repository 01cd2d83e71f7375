// Copyright 2026 The pwreg Authors.
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


// CPLEX LP text for the programs of this library. Numbers use 17 significant
// digits so a reader recovers every coefficient exactly; output depends only
// on the program, so identical programs give identical bytes.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwreg/program.hpp"

namespace pwreg {

/// Variables without a name get x<index>, rows r<index>. Every variable is
/// listed in Bounds ("free", "= v" when fixed, or "lo <= x <= hi").
std::string FormatLp(const QuadraticProgram& qp, const std::vector<int>& binaries = {});
std::string FormatLp(const MixedIntegerProgram& mip);

/// Throws kIo when the file cannot be written.
void WriteLpFile(const std::filesystem::path& path, const std::string& text);

}  // namespace pwreg
