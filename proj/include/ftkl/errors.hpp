// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ftkl {

// Error taxonomy shared by all modules.  The CLI maps these onto process
// exit codes, so every throw site picks the kind deliberately:
//   usage         -> malformed parameters, bad config, shape mismatches (exit 2)
//   domain        -> input outside the mathematical domain of the operation (exit 2)
//   accuracy      -> a requested tolerance could not be certified (exit 3)
//   certification -> an internal invariant check failed (exit 1)
enum class errkind { usage, domain, accuracy, certification };

class error : public std::runtime_error {
public:
  errkind kind;
  error(errkind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail_usage(const std::string &msg) {
  throw error(errkind::usage, msg);
}
[[noreturn]] inline void fail_domain(const std::string &msg) {
  throw error(errkind::domain, msg);
}
[[noreturn]] inline void fail_accuracy(const std::string &msg) {
  throw error(errkind::accuracy, msg);
}
[[noreturn]] inline void fail_certification(const std::string &msg) {
  throw error(errkind::certification, msg);
}

} // namespace ftkl
