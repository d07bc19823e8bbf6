/*
 * Copyright 2026 The dgsum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGSUM_DGSUM_HPP_
#define DGSUM_DGSUM_HPP_

#include "dgsum/bounds.hpp"
#include "dgsum/enumerate.hpp"
#include "dgsum/errors.hpp"
#include "dgsum/experiment_config.hpp"
#include "dgsum/experiments.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/quality.hpp"
#include "dgsum/sampler.hpp"
#include "dgsum/tvd.hpp"

#endif  // DGSUM_DGSUM_HPP_
