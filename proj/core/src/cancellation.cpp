// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/cancellation.hpp"

namespace sharing {
namespace {

using Clock = std::chrono::steady_clock;

thread_local Clock::time_point current_deadline = Clock::time_point::max();
thread_local unsigned poll_counter = 0;

}  // namespace

DeadlineScope::DeadlineScope(Clock::time_point deadline) : previous_{current_deadline} {
  current_deadline = deadline;
}

DeadlineScope::~DeadlineScope() { current_deadline = previous_; }

void check_deadline() {
  if (current_deadline != Clock::time_point::max() && Clock::now() > current_deadline) throw DeadlineExceeded{};
}

void poll_deadline() {
  if (current_deadline == Clock::time_point::max()) return;
  if ((++poll_counter & 0xfffu) == 0) check_deadline();
}

}  // namespace sharing
