// Copyright 2026 The dpmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "dpmf/accountant.hpp"
#include "dpmf/error.hpp"
#include "dpmf/experiment.hpp"
#include "dpmf/gradients.hpp"
#include "dpmf/mechanism.hpp"
#include "dpmf/model.hpp"
#include "dpmf/model_io.hpp"
#include "dpmf/random.hpp"
#include "dpmf/ratings.hpp"
#include "dpmf/ratings_io.hpp"
#include "dpmf/svg.hpp"
#include "dpmf/synth.hpp"
#include "dpmf/trainer.hpp"
