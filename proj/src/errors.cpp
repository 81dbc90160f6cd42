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
#include "hev/errors.hpp"

namespace hev
{

const char* to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::DegenerateShockwave: return "DegenerateShockwave";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::InfeasibleProfile: return "InfeasibleProfile";
    case ErrorKind::OutOfMapDomain: return "OutOfMapDomain";
    case ErrorKind::InfeasibleInstance: return "InfeasibleInstance";
    case ErrorKind::InconsistentSchedule: return "InconsistentSchedule";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace hev
