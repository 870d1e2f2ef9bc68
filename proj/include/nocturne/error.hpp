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

#include <stdexcept>
#include <string>

namespace nocturne {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Pixel coordinates outside the owning buffer.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Unreadable, malformed, or otherwise unusable input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration values (threshold ordering, sample counts, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace nocturne
