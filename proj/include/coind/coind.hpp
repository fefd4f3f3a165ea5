// Copyright 2026 The coind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "coind/coinduction.hpp"
#include "coind/dsl.hpp"
#include "coind/escalation.hpp"
#include "coind/finite_solver.hpp"
#include "coind/gallery.hpp"
#include "coind/game.hpp"
#include "coind/graph.hpp"
#include "coind/rational.hpp"
#include "coind/truncation.hpp"
