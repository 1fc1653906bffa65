#pragma once

#include <stdexcept>
#include <string>

namespace circsplit {

enum class Errc {
  empty_generators,
  self_inverse_generator,
  disconnected_graph,
  generator_not_in_graph,
  quadrature_nonconvergence,
  infeasible,
  restart_cap_exceeded,
  invalid_thresholds,
  invalid_spec,
  angle_not_near_zero,
  enumeration_cap_exceeded,
  overflow,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace circsplit
