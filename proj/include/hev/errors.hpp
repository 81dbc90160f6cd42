/*
 * Copyright (C) 2026 The hev-seqopt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hev
{

enum class ErrorKind
{
  DegenerateShockwave,
  OutOfDomain,
  InfeasibleProfile,
  OutOfMapDomain,
  InfeasibleInstance,
  InconsistentSchedule,
  Usage,
  Io,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Raised by the power-split optimizer when no admissible control exists.
class InfeasibleInstance : public Error
{
public:
  InfeasibleInstance(std::size_t step, const std::string& what)
    : Error(ErrorKind::InfeasibleInstance, what), step_(step)
  {
  }

  std::size_t blocked_step() const noexcept { return step_; }

private:
  std::size_t step_;
};

}  // namespace hev
