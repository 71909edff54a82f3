#pragma once

#include <stdexcept>
#include <string>

namespace ccr {

// Violated input precondition (kernel outside radical, f not in p-space, ...).
struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Constraint subspace with nonvanishing restricted form.
struct FirstClassViolation : PreconditionViolation {
  int i, j;
  double value;
  FirstClassViolation(const std::string& msg, int i_, int j_, double v)
      : PreconditionViolation(msg), i(i_), j(j_), value(v) {}
};

struct StageAdmissibility : PreconditionViolation {
  int stage;
  StageAdmissibility(const std::string& msg, int k)
      : PreconditionViolation(msg), stage(k) {}
};

struct UnsupportedAction : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedScenario : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ccr
