// SPDX-License-Identifier: Apache-2.0
//
// passim: simulation and position optimization for pinching-antenna systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <ostream>

namespace passim {

// Quick oracle-equivalence suite behind `passim selftest`: rank-1 kernels vs
// direct inversion, closed-form SINRs vs general substitution, element-wise
// objectives vs full-pipeline rebuilds, constraint checks. Prints one line
// per check; returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace passim
