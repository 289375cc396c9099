// Copyright 2026 The sbm Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


#pragma once

#include "sbm/bench.hpp"
#include "sbm/cost_model.hpp"
#include "sbm/encoders.hpp"
#include "sbm/engine.hpp"
#include "sbm/error.hpp"
#include "sbm/instances.hpp"
#include "sbm/io.hpp"
#include "sbm/ising_model.hpp"
#include "sbm/metrics.hpp"
#include "sbm/numerics.hpp"
#include "sbm/oracles.hpp"
#include "sbm/rng.hpp"
#include "sbm/solver_config.hpp"
