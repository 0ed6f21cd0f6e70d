// Copyright 2026 The gcnlab Authors.
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

#include "gcnlab/analysis.hpp"
#include "gcnlab/gcn.hpp"
#include "gcnlab/graphon.hpp"
#include "gcnlab/hypotest.hpp"
#include "gcnlab/io.hpp"
#include "gcnlab/parallel.hpp"
#include "gcnlab/rng.hpp"
#include "gcnlab/sampling.hpp"
