/*
 * Copyright 2026 The lsqcond Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSQCOND_LSQCOND_HPP_
#define LSQCOND_LSQCOND_HPP_

#include "lsqcond/conditioning.hpp"
#include "lsqcond/config.hpp"
#include "lsqcond/errors.hpp"
#include "lsqcond/generators.hpp"
#include "lsqcond/io.hpp"
#include "lsqcond/jacobian.hpp"
#include "lsqcond/lsq_core.hpp"
#include "lsqcond/prior_bounds.hpp"

#endif  // LSQCOND_LSQCOND_HPP_
