// Copyright 2026 The dpsbm Authors.
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

#ifndef DPSBM_DPSBM_H_
#define DPSBM_DPSBM_H_

#include "dpsbm/accounting.h"   // IWYU pragma: export
#include "dpsbm/bounds.h"       // IWYU pragma: export
#include "dpsbm/experiment.h"   // IWYU pragma: export
#include "dpsbm/graph.h"        // IWYU pragma: export
#include "dpsbm/matrix.h"       // IWYU pragma: export
#include "dpsbm/mechanisms.h"   // IWYU pragma: export
#include "dpsbm/random.h"       // IWYU pragma: export
#include "dpsbm/spectral.h"     // IWYU pragma: export

#endif  // DPSBM_DPSBM_H_
