// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <stdexcept>

namespace sharing {

/// Thrown by poll_deadline once the deadline of the active scope has passed.
struct DeadlineExceeded : std::runtime_error {
  DeadlineExceeded() : std::runtime_error("analysis deadline exceeded") {}
};

/// Installs a deadline for the current thread; scopes nest and the previous
/// deadline is restored on exit.
class DeadlineScope {
 public:
  explicit DeadlineScope(std::chrono::steady_clock::time_point deadline);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::chrono::steady_clock::time_point previous_;
};

/// Cheap check for long loops: reads the clock only every few thousand calls.
void poll_deadline();
/// Reads the clock now.
void check_deadline();

}  // namespace sharing
