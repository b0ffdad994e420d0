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

#ifndef MPSPE_ERROR_HPP
#define MPSPE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mpspe {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: unknown names, bad rationals, broken plays, etc.
class InputError : public Error
{
public:
    using Error::Error;
};

/// A walk or cycle that does not follow the edges of the game.
class MalformedPlay : public InputError
{
public:
    using InputError::InputError;
};

/// Arithmetic that has no meaning on extended rationals (e.g. +inf + -inf).
class ArithmeticError : public Error
{
public:
    using Error::Error;
};

/// An enumeration exceeded one of the configured guardrails.
class CapExceeded : public Error
{
public:
    using Error::Error;
};

/// A linear system whose region is unbounded where a bounded one is needed.
class UnboundedRegion : public Error
{
public:
    using Error::Error;
};

} // namespace mpspe

#endif
