/*
 * Copyright 2026 The famglm authors
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

#include "famglm/core.hpp"
#include "famglm/csv.hpp"
#include "famglm/dataset.hpp"
#include "famglm/factor.hpp"
#include "famglm/glm.hpp"
#include "famglm/ingest.hpp"
#include "famglm/linalg.hpp"
#include "famglm/metrics.hpp"
#include "famglm/model_io.hpp"
#include "famglm/pipeline.hpp"
#include "famglm/rng.hpp"
#include "famglm/simulate.hpp"
