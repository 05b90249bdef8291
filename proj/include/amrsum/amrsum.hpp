// Copyright 2026 The amrsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "amrsum/amr_graph.hpp"
#include "amrsum/config.hpp"
#include "amrsum/corpus.hpp"
#include "amrsum/extract.hpp"
#include "amrsum/generate.hpp"
#include "amrsum/parallel.hpp"
#include "amrsum/penman.hpp"
#include "amrsum/pipeline.hpp"
#include "amrsum/porter_stemmer.hpp"
#include "amrsum/published_targets.hpp"
#include "amrsum/rouge.hpp"
#include "amrsum/select.hpp"
#include "amrsum/subprocess.hpp"
