// Copyright 2026 The qmm Authors
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

#ifndef QMM_QMM_HPP
#define QMM_QMM_HPP

#include "qmm/constraints.hpp"
#include "qmm/densop.hpp"
#include "qmm/error.hpp"
#include "qmm/fixtures.hpp"
#include "qmm/lattice.hpp"
#include "qmm/merge.hpp"
#include "qmm/report.hpp"
#include "qmm/snake.hpp"
#include "qmm/verify.hpp"

#endif
