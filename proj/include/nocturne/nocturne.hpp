/*
 * Copyright (C) 2026 The Nocturne Project Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "nocturne/analysis.hpp"
#include "nocturne/compositor.hpp"
#include "nocturne/error.hpp"
#include "nocturne/image.hpp"
#include "nocturne/metrics.hpp"
#include "nocturne/png_io.hpp"
#include "nocturne/scene_io.hpp"
#include "nocturne/transform.hpp"
