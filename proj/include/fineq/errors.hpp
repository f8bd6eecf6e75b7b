#pragma once

#include <stdexcept>
#include <string>

namespace fineq {

struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct resolution_error : std::runtime_error {
  explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct integration_error : std::runtime_error {
  explicit integration_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct flow_error : std::runtime_error {
  explicit flow_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct not_a_loop_error : std::runtime_error {
  explicit not_a_loop_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct insufficient_data_error : std::runtime_error {
  explicit insufficient_data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fineq
