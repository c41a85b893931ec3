/*
 * Copyright 2026 The hbr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "hbr/boundary.hpp"
#include "hbr/chi2_tails.hpp"
#include "hbr/error.hpp"
#include "hbr/lr_tests.hpp"
#include "hbr/model.hpp"
#include "hbr/montecarlo.hpp"
#include "hbr/normal.hpp"
#include "hbr/rng.hpp"
