// Copyright 2026 The dualjet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header: the whole library.

#include "dualjet/errors.hpp"
#include "dualjet/chart.hpp"
#include "dualjet/expr.hpp"
#include "dualjet/parser.hpp"
#include "dualjet/tape.hpp"
#include "dualjet/dtensor.hpp"
#include "dualjet/metric.hpp"
#include "dualjet/sampling.hpp"
#include "dualjet/hamilton_space.hpp"
#include "dualjet/cartan.hpp"
#include "dualjet/torsion_curvature.hpp"
#include "dualjet/verifier.hpp"
#include "dualjet/config.hpp"
#include "dualjet/report.hpp"
#include "dualjet/cli.hpp"
