/*
 * Copyright 2026 The mpspe Authors
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


#ifndef MPSPE_MPSPE_HPP
#define MPSPE_MPSPE_HPP

#include "mpspe/error.hpp"
#include "mpspe/ext_rat.hpp"
#include "mpspe/game.hpp"
#include "mpspe/play.hpp"
#include "mpspe/graph.hpp"
#include "mpspe/linprog.hpp"
#include "mpspe/families.hpp"
#include "mpspe/deviation_graph.hpp"
#include "mpspe/negotiation.hpp"
#include "mpspe/witness.hpp"
#include "mpspe/reductions.hpp"
#include "mpspe/io.hpp"

#endif
