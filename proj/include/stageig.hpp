// Copyright 2026 The stageig Authors
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

#include "stageig/error.hpp"
#include "stageig/types.hpp"
#include "stageig/multigraph.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/operators.hpp"
#include "stageig/balance.hpp"
#include "stageig/linalg.hpp"
#include "stageig/spectral.hpp"
#include "stageig/oracle.hpp"
#include "stageig/lattice.hpp"
#include "stageig/evolution.hpp"
