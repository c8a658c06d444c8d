// Copyright (c) 2026 ocrkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace ocrkit {

// Thread-safe sink for non-fatal warnings raised while a pipeline runs.
class Diagnostics {
 public:
  void Warn(std::string message) {
    std::lock_guard lock(mu_);
    warnings_.push_back(std::move(message));
  }
  // Drops messages that were already reported through WarnOnce.
  void WarnOnce(const std::string &message) {
    std::lock_guard lock(mu_);
    if (seen_.insert(message).second) warnings_.push_back(message);
  }
  std::vector<std::string> warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
  }
  void Clear() {
    std::lock_guard lock(mu_);
    warnings_.clear();
    seen_.clear();
  }

 private:
  mutable std::mutex mu_;
  std::vector<std::string> warnings_;
  std::set<std::string> seen_;
};

}  // namespace ocrkit
